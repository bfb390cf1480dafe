#include <boost/algorithm/hex.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "pkem/adversaries.hpp"
#include "pkem/combiner.hpp"
#include "pkem/config.hpp"
#include "pkem/dem.hpp"
#include "pkem/errors.hpp"
#include "pkem/games.hpp"
#include "pkem/hybrid.hpp"
#include "pkem/ikem.hpp"
#include "pkem/params.hpp"

namespace fs = std::filesystem;
using namespace pkem;
using config::Json;

namespace {

enum Exit { kOk = 0, kUsage = 1, kInfeasible = 2, kBottom = 3, kBound = 4 };

struct Common {
  std::string config, seed, mode, out, instance, in;
  size_t trials = 0;
};

Rng make_rng(const std::string& seed) { return seed.empty() ? Rng::from_os() : Rng::from_hex(seed); }

Bytes seed_bytes(const std::string& seed) {
  Bytes raw;
  if (seed.empty()) {
    Rng os = Rng::from_os();
    raw.resize(32);
    os.fill(raw);
    return raw;
  }
  try {
    boost::algorithm::unhex(seed.begin(), seed.end(), std::back_inserter(raw));
  } catch (const std::exception&) {
    throw MalformedError("seed must be an even-length hex string");
  }
  return raw;
}

// --config, or params.json inside --instance.
IkemParams load_params(const Common& c) {
  if (!c.config.empty()) return config::resolve_params(config::read_json(c.config), c.mode);
  if (!c.instance.empty()) return config::resolve_params(config::read_json(fs::path(c.instance) / "params.json"), c.mode);
  throw InvalidArgument("--config or --instance is required");
}

std::optional<BitString> load_public_seed(const Ikem& ikem, const fs::path& dir) {
  if (ikem.params().mode != Mode::cea) return std::nullopt;
  return BitString::from_bytes(config::read_file(dir / "s.bin"), ikem.params().s_bits());
}

void write_out(const std::string& path, std::span<const uint8_t> bytes) {
  if (path.empty() || path == "-") {
    std::cout << boost::algorithm::hex_lower(std::string(bytes.begin(), bytes.end())) << "\n";
  } else {
    config::write_file(path, bytes);
  }
}

void print_json(const Json& j, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream f(out, std::ios::trunc);
    if (!f) throw MalformedError("cannot write " + out);
    f << j.dump(2) << "\n";
  }
}

int cmd_params(const Common& c) {
  if (c.config.empty()) throw InvalidArgument("--config is required");
  const Json doc = config::read_json(c.config);
  if (doc.contains("t") && doc.contains("ell") && doc.contains("nu") && doc.contains("source")) {
    const IkemParams p = config::resolve_params(doc, c.mode);
    if (p.ell < 1) throw InfeasibleError("key length below one bit");
    print_json(config::params_to_json(p), c.out);
    return kOk;
  }
  const Mode mode = mode_from_string(c.mode.empty() ? doc.at("mode").get<std::string>() : c.mode);
  const Derivation d = derive_params(mode, config::source_from_json(doc.at("source")), config::request_from_json(doc));
  Json report = config::params_to_json(d.params);
  report["h_xy"] = d.h_xy;
  report["h_min"] = d.h_min;
  report["ell_secrecy"] = d.ell_secrecy;
  if (std::isfinite(d.ell_integrity)) report["ell_integrity"] = d.ell_integrity;
  if (d.mass) {
    report["log2_mass_x"] = d.mass->log2_mass_x;
    report["log2_mass_y"] = d.mass->log2_mass_y;
  }
  print_json(report, c.out);
  return kOk;
}

int cmd_sample(const Common& c) {
  if (c.out.empty()) throw InvalidArgument("--out DIR is required");
  const Ikem ikem(load_params(c));
  Rng rng = make_rng(c.seed);
  const IkemInstance inst = ikem.gen(rng);
  const fs::path dir(c.out);
  fs::create_directories(dir);
  print_json(config::params_to_json(ikem.params()), (dir / "params.json").string());
  config::write_file(dir / "x.bin", inst.sample.x);
  config::write_file(dir / "y.bin", inst.sample.y);
  config::write_file(dir / "z.bin", inst.sample.z);
  if (inst.public_seed) config::write_file(dir / "s.bin", inst.public_seed->to_bytes());
  return kOk;
}

int cmd_encap(const Common& c) {
  if (c.instance.empty() || c.out.empty()) throw InvalidArgument("--instance and --out are required");
  const Ikem ikem(load_params(c));
  const auto& src = ikem.params().source;
  const SymbolString x = config::read_symbols(fs::path(c.instance) / "x.bin", src.n(), src.ax());
  Rng rng = make_rng(c.seed);
  const Encapsulation e = ikem.encap(x, rng, load_public_seed(ikem, c.instance));
  const fs::path dir(c.out);
  fs::create_directories(dir);
  config::write_file(dir / "key.bin", e.key.to_bytes());
  config::write_file(dir / "ct.bin", ikem.encode(e.ct));
  return kOk;
}

int cmd_decap(const Common& c) {
  if (c.instance.empty() || c.in.empty()) throw InvalidArgument("--instance and --in are required");
  const Ikem ikem(load_params(c));
  const auto& src = ikem.params().source;
  const SymbolString y = config::read_symbols(fs::path(c.instance) / "y.bin", src.n(), src.ay());
  const IkemCiphertext ct = ikem.decode(config::read_file(c.in));
  const auto key = ikem.decap(y, ct, load_public_seed(ikem, c.instance));
  if (!key) {
    std::cerr << "decapsulation rejected\n";
    return kBottom;
  }
  write_out(c.out, key->to_bytes());
  return kOk;
}

DemKind dem_for(Mode m) { return m == Mode::cca ? DemKind::otcca : DemKind::ot; }

int cmd_he_encrypt(const Common& c) {
  if (c.instance.empty() || c.in.empty() || c.out.empty()) throw InvalidArgument("--instance, --in and --out are required");
  const Ikem ikem(load_params(c));
  const auto dem = make_dem(dem_for(ikem.params().mode));
  const HybridScheme he(ikem, *dem);
  const auto& src = ikem.params().source;
  const SymbolString x = config::read_symbols(fs::path(c.instance) / "x.bin", src.n(), src.ax());
  Rng rng = make_rng(c.seed);
  const Bytes msg = config::read_file(c.in);
  config::write_file(c.out, he.encode(he.encrypt(x, msg, rng, load_public_seed(ikem, c.instance))));
  return kOk;
}

int cmd_he_decrypt(const Common& c) {
  if (c.instance.empty() || c.in.empty() || c.out.empty()) throw InvalidArgument("--instance, --in and --out are required");
  const Ikem ikem(load_params(c));
  const auto dem = make_dem(dem_for(ikem.params().mode));
  const HybridScheme he(ikem, *dem);
  const auto& src = ikem.params().source;
  const SymbolString y = config::read_symbols(fs::path(c.instance) / "y.bin", src.n(), src.ay());
  const HybridCiphertext env = he.decode(config::read_file(c.in));
  const auto msg = he.decrypt(y, env, load_public_seed(ikem, c.instance));
  if (!msg) {
    std::cerr << "decryption rejected\n";
    return kBottom;
  }
  config::write_file(c.out, *msg);
  return kOk;
}

struct CombineOpts {
  std::string action, core = "xor", kem_pk, kem_sk;
  bool broken = false;
};

int cmd_combine(const Common& c, const CombineOpts& o) {
  if (o.action == "keygen") {
    if (c.out.empty()) throw InvalidArgument("--out DIR is required");
    const comb::TestDoubleKem kem(256, o.broken);
    Rng rng = make_rng(c.seed);
    const comb::KeyPair kp = kem.gen(rng);
    fs::create_directories(c.out);
    config::write_file(fs::path(c.out) / "kem_pk.bin", kp.pk);
    config::write_file(fs::path(c.out) / "kem_sk.bin", kp.sk);
    return kOk;
  }
  const Ikem ikem(load_params(c));
  const comb::Core core = comb::core_from_string(o.core);
  const comb::TestDoubleKem kem(core == comb::Core::ptx ? 256 : ikem.params().ell, o.broken);
  const comb::CombinedKem ck(ikem, kem, core);
  const auto& src = ikem.params().source;
  const auto public_seed = load_public_seed(ikem, c.instance);
  if (o.action == "enc") {
    if (c.instance.empty() || c.out.empty() || o.kem_pk.empty())
      throw InvalidArgument("--instance, --kem-pk and --out are required");
    const SymbolString x = config::read_symbols(fs::path(c.instance) / "x.bin", src.n(), src.ax());
    Rng rng = make_rng(c.seed);
    const auto e = ck.enc(x, config::read_file(o.kem_pk), rng, public_seed);
    fs::create_directories(c.out);
    config::write_file(fs::path(c.out) / "key.bin", e.key.to_bytes());
    config::write_file(fs::path(c.out) / "ct.bin", e.ct.encode());
    return kOk;
  }
  if (o.action == "dec") {
    if (c.instance.empty() || c.in.empty() || o.kem_sk.empty())
      throw InvalidArgument("--instance, --kem-sk and --in are required");
    const SymbolString y = config::read_symbols(fs::path(c.instance) / "y.bin", src.n(), src.ay());
    const auto ct = comb::CombinedCiphertext::decode(config::read_file(c.in));
    const auto key = ck.dec(y, config::read_file(o.kem_sk), ct, public_seed);
    if (!key) {
      std::cerr << "decapsulation rejected\n";
      return kBottom;
    }
    write_out(c.out, key->to_bytes());
    return kOk;
  }
  throw InvalidArgument("combine action must be keygen, enc or dec");
}

// ---- game runner ----

double default_pkind_bound(const Ikem& ikem, unsigned q_e, unsigned q_d) {
  const IkemParams& p = ikem.params();
  const SourceSpec& src = p.source;
  double b = key_distance_bound(p.mode == Mode::cea ? Mode::cea : Mode::cca, p.n(), avg_min_entropy(src), q_e, p.t, p.ell);
  if (p.mode == Mode::cca && q_d > 0) {
    const GuessingMass g = guessing_mass_auto(src, p.nu);
    b += 2.0 * q_d * std::exp2(log2_delta_integrity(p.x_bits(), p.ell, p.t, p.r, q_d, g));
  }
  return std::min(1.0, b);
}

double default_kint_bound(const Ikem& ikem, unsigned q_d) {
  const IkemParams& p = ikem.params();
  const GuessingMass g = guessing_mass_auto(p.source, p.nu);
  return std::min(1.0, std::exp2(log2_delta_integrity(p.x_bits(), p.ell, p.t, p.r, std::max(1u, q_d), g)));
}

template <class T>
T opt(const Json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

games::AdvantageReport run_one(const Json& g, const Json& doc, const games::GameConfig& base, const std::string& mode) {
  games::GameConfig cfg = base;
  cfg.trials = opt<size_t>(g, "trials", cfg.trials);
  cfg.q_e = opt<unsigned>(g, "q_e", 0);
  cfg.q_d = opt<unsigned>(g, "q_d", 0);
  const std::string game = g.at("game").get<std::string>();
  const std::string adv_name = opt<std::string>(g, "adversary", "random");
  std::optional<double> bound;
  if (g.contains("bound")) bound = g.at("bound").get<double>();

  auto instance = [&]() {
    const Json& inst = g.contains("instance") ? g.at("instance") : doc.at("instance");
    return Ikem(config::resolve_params(inst, mode));
  };

  if (game == "pkind") {
    const Ikem ikem = instance();
    cfg.atk = games::atk_from_string(opt<std::string>(g, "atk", "cea"));
    cfg.leak_real_key = adv_name == "leak";
    std::unique_ptr<games::PkindAdversary> adv;
    if (adv_name == "random") adv = std::make_unique<games::RandomGuessPkind>();
    else if (adv_name == "leak") adv = std::make_unique<games::LeakPkind>();
    else if (adv_name == "bayes")
      adv = std::make_unique<games::BayesPkind>(std::make_shared<games::SmallWorld>(ikem), cfg.q_e,
                                                cfg.atk == games::Atk::cca && cfg.q_d > 0);
    else throw InvalidArgument("unknown pkind adversary \"" + adv_name + "\"");
    return games::run_pkind(ikem, cfg, *adv, bound.value_or(default_pkind_bound(ikem, cfg.q_e, cfg.q_d)));
  }
  if (game == "kint") {
    const Ikem ikem = instance();
    cfg.q_e = 1;
    std::unique_ptr<games::KintAdversary> adv;
    if (adv_name == "random") adv = std::make_unique<games::RandomKint>();
    else if (adv_name == "replay") adv = std::make_unique<games::ReplayKint>();
    else if (adv_name == "forger") adv = std::make_unique<games::ForgerKint>(std::make_shared<games::SmallWorld>(ikem));
    else throw InvalidArgument("unknown kint adversary \"" + adv_name + "\"");
    return games::run_kint(ikem, cfg, *adv, bound.value_or(default_kint_bound(ikem, cfg.q_d)));
  }
  if (game == "dem") {
    const DemKind kind = dem_kind_from_string(opt<std::string>(g, "dem", "ot"));
    const DemKind atk = dem_kind_from_string(opt<std::string>(g, "atk", to_string(kind)));
    std::unique_ptr<Dem> dem;
    if (opt<bool>(g, "identity_stub", false)) dem = std::make_unique<games::IdentityDem>(kind);
    else dem = make_dem(kind);
    std::unique_ptr<games::DemAdversary> adv;
    if (adv_name == "random") adv = std::make_unique<games::RandomGuessDem>();
    else if (adv_name == "plaintext") adv = std::make_unique<games::PlaintextMatchDem>();
    else if (adv_name == "tamper") adv = std::make_unique<games::TamperDem>();
    else throw InvalidArgument("unknown dem adversary \"" + adv_name + "\"");
    return games::run_dem_ind(*dem, atk, cfg, *adv, bound.value_or(0.0));
  }
  if (game == "pri") {
    const std::string prf = opt<std::string>(g, "prf", "it");
    const unsigned q = opt<unsigned>(g, "q", 1);
    std::unique_ptr<games::PrfFamily> f;
    const unsigned m = opt<unsigned>(g, "m", 64), degree = opt<unsigned>(g, "degree", 2);
    if (prf == "it") f = std::make_unique<games::ItPrfFamily>(comb::ItPrf(m, degree, opt<unsigned>(g, "out_bits", m)));
    else if (prf == "comp") f = std::make_unique<games::CompPrfFamily>(comb::CompPrf(opt<unsigned>(g, "out_bits", 256)));
    else throw InvalidArgument("prf must be it or comp");
    std::unique_ptr<games::PriAdversary> adv;
    if (adv_name == "random") adv = std::make_unique<games::RandomGuessPri>(q);
    else if (adv_name == "interpolation") adv = std::make_unique<games::InterpolationPri>(m, degree);
    else throw InvalidArgument("unknown pri adversary \"" + adv_name + "\"");
    return games::run_pri(*f, q, cfg, *adv, bound.value_or(0.0));
  }
  if (game == "he") {
    const Ikem ikem = instance();
    const auto dem = make_dem(dem_for(ikem.params().mode));
    const HybridScheme he(ikem, *dem);
    const std::string atk_s = opt<std::string>(g, "atk", "cpa");
    const games::HeAtk atk = atk_s == "cca" ? games::HeAtk::cca : games::HeAtk::cpa;
    if (atk_s != "cca" && atk_s != "cpa") throw InvalidArgument("he atk must be cpa or cca");
    std::unique_ptr<games::HeAdversary> adv;
    if (adv_name == "random") adv = std::make_unique<games::RandomGuessHe>();
    else if (adv_name == "tamper") adv = std::make_unique<games::TamperHe>();
    else throw InvalidArgument("unknown he adversary \"" + adv_name + "\"");
    return games::run_he_ind(he, atk, cfg, *adv, bound.value_or(std::min(1.0, 2 * default_pkind_bound(ikem, cfg.q_e, cfg.q_d))));
  }
  throw InvalidArgument("unknown game \"" + game + "\"");
}

int cmd_game(const Common& c) {
  if (c.config.empty()) throw InvalidArgument("--config is required");
  const Json doc = config::read_json(c.config);
  if (!doc.contains("games") || !doc.at("games").is_array()) throw MalformedError("game config needs a \"games\" array");
  const Bytes master = seed_bytes(c.seed.empty() ? opt<std::string>(doc, "seed", "") : c.seed);
  std::ostringstream lines;
  bool exceeded = false;
  for (size_t i = 0; i < doc.at("games").size(); ++i) {
    games::GameConfig base;
    base.trials = c.trials ? c.trials : opt<size_t>(doc, "trials", 1000);
    base.seed = master;
    for (int s = 3; s >= 0; --s) base.seed.push_back(static_cast<uint8_t>(i >> (8 * s)));
    Json g = doc.at("games")[i];
    if (c.trials) g["trials"] = c.trials;
    const auto r = run_one(g, doc, base, c.mode);
    lines << r.to_json() << "\n";
    exceeded = exceeded || r.exceeds_bound();
  }
  if (c.out.empty() || c.out == "-") {
    std::cout << lines.str();
  } else {
    std::ofstream f(c.out, std::ios::trunc);
    if (!f) throw MalformedError("cannot write " + c.out);
    f << lines.str();
  }
  return exceeded ? kBound : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Key encapsulation in the preprocessing model"};
  app.require_subcommand(1);
  Common c;
  CombineOpts co;
  auto common = [&](CLI::App* s) {
    s->add_option("--config", c.config, "JSON source/parameter document");
    s->add_option("--seed", c.seed, "hex seed for reproducible randomness");
    s->add_option("--mode", c.mode, "cea, cca or baseline");
    s->add_option("--out", c.out, "output path");
  };
  auto* params = app.add_subcommand("params", "derive and print parameters");
  common(params);
  auto* sample = app.add_subcommand("sample", "draw an instance (x, y, z[, s]) into --out DIR");
  common(sample);
  auto* encap = app.add_subcommand("encap", "encapsulate with x from --instance DIR");
  common(encap);
  encap->add_option("--instance", c.instance, "instance directory");
  auto* decap = app.add_subcommand("decap", "decapsulate --in with y from --instance DIR");
  common(decap);
  decap->add_option("--instance", c.instance, "instance directory");
  decap->add_option("--in", c.in, "ciphertext file");
  auto* he_enc = app.add_subcommand("he-encrypt", "hybrid-encrypt a file");
  common(he_enc);
  he_enc->add_option("--instance", c.instance, "instance directory");
  he_enc->add_option("--in", c.in, "plaintext file");
  auto* he_dec = app.add_subcommand("he-decrypt", "hybrid-decrypt an envelope");
  common(he_dec);
  he_dec->add_option("--instance", c.instance, "instance directory");
  he_dec->add_option("--in", c.in, "envelope file");
  auto* combine = app.add_subcommand("combine", "combine the iKEM with a public-key KEM");
  common(combine);
  combine->add_option("action", co.action, "keygen, enc or dec")->required();
  combine->add_option("--instance", c.instance, "instance directory");
  combine->add_option("--in", c.in, "combined ciphertext file");
  combine->add_option("--core", co.core, "xor or ptx");
  combine->add_option("--kem-pk", co.kem_pk, "public-key KEM public key");
  combine->add_option("--kem-sk", co.kem_sk, "public-key KEM secret key");
  combine->add_flag("--broken", co.broken, "use the broken test-double KEM");
  auto* game = app.add_subcommand("game", "run security games, one JSON line per report");
  common(game);
  game->add_option("--trials", c.trials, "trials per arm, overriding the config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (params->parsed()) return cmd_params(c);
    if (sample->parsed()) return cmd_sample(c);
    if (encap->parsed()) return cmd_encap(c);
    if (decap->parsed()) return cmd_decap(c);
    if (he_enc->parsed()) return cmd_he_encrypt(c);
    if (he_dec->parsed()) return cmd_he_decrypt(c);
    if (combine->parsed()) return cmd_combine(c, co);
    if (game->parsed()) return cmd_game(c);
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
