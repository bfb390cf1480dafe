#include "pkem/config.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <fstream>
#include <iterator>

#include "pkem/errors.hpp"

namespace pkem::config {
namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

template <class T>
T field(const Json& j, const char* key) {
  if (!j.contains(key)) throw MalformedError(std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw MalformedError(std::string("bad value for \"") + key + "\"");
  }
}

template <class T>
std::optional<T> optional_field(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return field<T>(j, key);
}

cpp_rational parse_rational(const std::string& s) {
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return cpp_rational(cpp_int(s));
    const cpp_int den(s.substr(slash + 1));
    if (den == 0) throw MalformedError("zero denominator in \"" + s + "\"");
    return cpp_rational(cpp_int(s.substr(0, slash)), den);
  } catch (const std::runtime_error&) {
    throw MalformedError("bad rational \"" + s + "\"");
  }
}

}  // namespace

SourceSpec source_from_json(const Json& j) {
  if (!j.is_object()) throw MalformedError("source must be an object");
  if (j.contains("bsc")) {
    const Json& b = j.at("bsc");
    return SourceSpec::bsc(field<double>(b, "p"), field<double>(b, "q"), field<unsigned>(b, "n"));
  }
  const auto alphabet = field<std::array<unsigned, 3>>(j, "alphabet");
  const auto n = field<unsigned>(j, "n");
  for (unsigned a : alphabet)
    if (a < 1 || a > 256) throw MalformedError("alphabet sizes must be in 1..256");
  const size_t cells = size_t{alphabet[0]} * alphabet[1] * alphabet[2];
  std::vector<double> table(cells, 0.0);
  std::vector<cpp_rational> exact(cells, 0);
  bool all_strings = true;
  if (!j.contains("pxyz") || !j.at("pxyz").is_array()) throw MalformedError("missing pxyz table");
  for (const auto& e : j.at("pxyz")) {
    if (!e.is_array() || e.size() != 4) throw MalformedError("pxyz entries are [x, y, z, prob]");
    unsigned c[3];
    for (int k = 0; k < 3; ++k) {
      if (!e[k].is_number_unsigned()) throw MalformedError("pxyz symbols must be nonnegative integers");
      c[k] = e[k].get<unsigned>();
      if (c[k] >= alphabet[k]) throw MalformedError("pxyz symbol outside its alphabet");
    }
    const size_t idx = (size_t{c[0]} * alphabet[1] + c[1]) * alphabet[2] + c[2];
    if (e[3].is_string()) {
      exact[idx] += parse_rational(e[3].get<std::string>());
      table[idx] = exact[idx].convert_to<double>();
    } else if (e[3].is_number()) {
      all_strings = false;
      table[idx] += e[3].get<double>();
    } else {
      throw MalformedError("pxyz probability must be a number or an \"a/b\" string");
    }
  }
  std::optional<ExactTable> ex;
  if (all_strings) {
    cpp_rational total = 0;
    cpp_int den = 1;
    for (const auto& r : exact) {
      if (r < 0) throw MalformedError("negative probability");
      total += r;
      den = boost::multiprecision::lcm(den, boost::multiprecision::denominator(r));
    }
    if (total != 1) throw MalformedError("exact probabilities do not sum to 1");
    if (den <= (cpp_int(1) << 62)) {
      ExactTable t;
      t.denominator = den.convert_to<uint64_t>();
      for (const auto& r : exact)
        t.weights.push_back((boost::multiprecision::numerator(r) * (den / boost::multiprecision::denominator(r)))
                                .convert_to<uint64_t>());
      ex = std::move(t);
    }
  }
  try {
    return SourceSpec(alphabet, n, std::move(table), std::move(ex));
  } catch (const InvalidArgument& e) {
    throw MalformedError(e.what());
  }
}

Json source_to_json(const SourceSpec& s) {
  if (s.bsc_origin()) return Json{{"bsc", {{"p", s.bsc_origin()->p}, {"q", s.bsc_origin()->q}, {"n", s.n()}}}};
  Json table = Json::array();
  for (unsigned x = 0; x < s.ax(); ++x)
    for (unsigned y = 0; y < s.ay(); ++y)
      for (unsigned z = 0; z < s.az(); ++z) {
        const size_t idx = s.index(x, y, z);
        if (s.table()[idx] == 0) continue;
        if (s.exact())
          table.push_back({x, y, z, std::to_string(s.exact()->weights[idx]) + "/" + std::to_string(s.exact()->denominator)});
        else
          table.push_back({x, y, z, s.table()[idx]});
      }
  return Json{{"alphabet", s.alphabet()}, {"n", s.n()}, {"pxyz", table}};
}

IkemParams params_from_json(const Json& j) {
  Mode mode;
  try {
    mode = mode_from_string(field<std::string>(j, "mode"));
  } catch (const InvalidArgument& e) {
    throw MalformedError(e.what());
  }
  IkemParams p(mode, source_from_json(field<Json>(j, "source")));
  p.t = field<unsigned>(j, "t");
  p.ell = field<unsigned>(j, "ell");
  p.nu = field<double>(j, "nu");
  p.w = optional_field<unsigned>(j, "w").value_or(0);
  p.r = optional_field<unsigned>(j, "r").value_or(0);
  p.epsilon = optional_field<double>(j, "epsilon").value_or(0);
  p.sigma = optional_field<double>(j, "sigma").value_or(0);
  p.delta = optional_field<double>(j, "delta").value_or(0);
  p.q_e = optional_field<unsigned>(j, "q_e").value_or(0);
  p.q_d = optional_field<unsigned>(j, "q_d").value_or(0);
  p.recon_cap = optional_field<uint64_t>(j, "recon_cap").value_or(kDefaultReconCap);
  try {
    p.validate();
  } catch (const InvalidArgument& e) {
    throw MalformedError(e.what());
  }
  return p;
}

Json params_to_json(const IkemParams& p) {
  return Json{{"mode", to_string(p.mode)},
              {"source", source_to_json(p.source)},
              {"n", p.n()},
              {"t", p.t},
              {"ell", p.ell},
              {"nu", p.nu},
              {"w", p.w},
              {"r", p.r},
              {"epsilon", p.epsilon},
              {"sigma", p.sigma},
              {"delta", p.delta},
              {"q_e", p.q_e},
              {"q_d", p.q_d},
              {"recon_cap", p.recon_cap}};
}

DeriveRequest request_from_json(const Json& j) {
  DeriveRequest r;
  r.epsilon = optional_field<double>(j, "epsilon").value_or(0);
  r.sigma = optional_field<double>(j, "sigma").value_or(r.sigma);
  r.delta = optional_field<double>(j, "delta").value_or(r.delta);
  r.q_e = optional_field<unsigned>(j, "q_e").value_or(0);
  r.q_d = optional_field<unsigned>(j, "q_d").value_or(0);
  r.t = optional_field<unsigned>(j, "t");
  r.nu = optional_field<double>(j, "nu");
  r.w = optional_field<unsigned>(j, "w");
  r.ell = optional_field<unsigned>(j, "ell");
  if (r.epsilon < 0 || r.epsilon >= 1) throw InvalidArgument("epsilon must lie in (0,1)");
  if (r.epsilon == 0 && !r.nu) throw InvalidArgument("give epsilon in (0,1) or an explicit nu");
  if (!(r.sigma > 0 && r.sigma <= 1) || !(r.delta > 0 && r.delta <= 1))
    throw InvalidArgument("sigma and delta must lie in (0,1]");
  return r;
}

IkemParams resolve_params(const Json& j, const std::string& mode) {
  if (j.contains("t") && j.contains("ell") && j.contains("nu") && j.contains("source")) {
    IkemParams p = params_from_json(j);
    if (!mode.empty() && mode_from_string(mode) != p.mode) throw InvalidArgument("--mode disagrees with the parameter file");
    return p;
  }
  const Mode m = mode_from_string(mode.empty() ? field<std::string>(j, "mode") : mode);
  return derive_params(m, source_from_json(field<Json>(j, "source")), request_from_json(j)).params;
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MalformedError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw MalformedError(path.string() + ": " + e.what());
  }
}

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MalformedError("cannot open " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), {});
}

void write_file(const std::filesystem::path& path, std::span<const uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw MalformedError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw MalformedError("write failed for " + path.string());
}

SymbolString read_symbols(const std::filesystem::path& path, unsigned n, unsigned alphabet) {
  Bytes b = read_file(path);
  if (b.size() != n) throw MalformedError(path.string() + ": expected " + std::to_string(n) + " symbols");
  for (uint8_t s : b)
    if (s >= alphabet) throw MalformedError(path.string() + ": symbol outside the alphabet");
  return b;
}

}  // namespace pkem::config
