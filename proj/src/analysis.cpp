#include "pkem/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "parallel.hpp"
#include "pkem/errors.hpp"
#include "pkem/gf2.hpp"
#include "pkem/params.hpp"

namespace pkem::analysis {
namespace {

bool par(Exec e) { return e == Exec::parallel; }

std::vector<uint64_t> hash_table(uint64_t nx, uint64_t ns, const IntHash& h, Exec exec) {
  std::vector<uint64_t> table(nx * ns);
  detail::for_each_index(nx, par(exec), [&](size_t x) {
    for (uint64_t s = 0; s < ns; ++s) table[x * ns + s] = h(x, s);
  });
  return table;
}

std::vector<SymbolString> all_strings(unsigned alphabet, unsigned n) {
  std::vector<SymbolString> out;
  SymbolString s(n, 0);
  while (true) {
    out.push_back(s);
    unsigned i = n;
    while (i > 0 && ++s[i - 1] == alphabet) s[--i] = 0;
    if (i == 0) break;
  }
  return out;
}

uint64_t bits_u64(const BitString& b) { return b.empty() ? 0 : b.to_u64(); }

}  // namespace

CollisionStats max_collision(unsigned x_bits, unsigned seed_bits, const IntHash& h, Exec exec) {
  if (x_bits > 16 || seed_bits > 24 || x_bits + seed_bits > 28) throw InfeasibleError("collision table too large");
  const uint64_t nx = uint64_t{1} << x_bits, ns = uint64_t{1} << seed_bits;
  const auto table = hash_table(nx, ns, h, exec);
  // per_x[x] covers the pairs (x, x') with x' > x
  std::vector<CollisionStats> per_x(nx);
  detail::for_each_index(nx, par(exec), [&](size_t x) {
    CollisionStats& best = per_x[x];
    best = {0, ns, x, x};
    for (uint64_t x2 = x + 1; x2 < nx; ++x2) {
      uint64_t c = 0;
      for (uint64_t s = 0; s < ns; ++s) c += table[x * ns + s] == table[x2 * ns + s];
      if (best.worst_x2 == x || c > best.max_collisions) best = {c, ns, x, x2};
    }
  });
  CollisionStats out{0, ns, 0, 0};
  for (const auto& c : per_x)
    if (c.worst_x2 != c.worst_x && (out.worst_x2 == out.worst_x || c.max_collisions > out.max_collisions)) out = c;
  return out;
}

IntHash cca_int_hash(const uhash::CcaHash& h, unsigned x_bits, unsigned w) {
  return [&h, x_bits, w](uint64_t x, uint64_t seed) {
    const BitString xb = BitString::from_u64(x, x_bits);
    const BitString sp = BitString::from_u64(seed >> x_bits, w);
    const BitString s = BitString::from_u64(seed & ((uint64_t{1} << x_bits) - 1), x_bits);
    return h(xb, sp, s).to_u64();
  };
}

uint64_t count_solutions(const uhash::CcaHash& h, const SolutionQuery& q, Part part) {
  const unsigned n = h.x_bits();
  if (q.s_prime.size() != h.w() || q.s_prime_f.size() != h.w() || q.s.size() != n || q.s_f.size() != n ||
      q.v.size() != h.t() || q.v_f.size() != h.t())
    throw InvalidArgument("seed or target width mismatch");
  const bool same_seeds = q.s_prime == q.s_prime_f && q.s == q.s_f;
  if (part == Part::i) {
    if (same_seeds) throw InvalidArgument("part i needs distinct seed tuples");
  } else {
    if (!q.e || q.e->size() != n) throw InvalidArgument("part ii needs an offset of x width");
    if (q.e->is_zero()) throw InvalidArgument("part ii needs a nonzero offset");
    if (same_seeds && q.v == q.v_f) throw InvalidArgument("part ii needs distinct (tag, seed) tuples");
  }
  const auto a = h.prepare(q.s_prime, q.s);
  const auto b = h.prepare(q.s_prime_f, q.s_f);
  uint64_t count = 0;
  for (uint64_t xi = 0; xi < (uint64_t{1} << n); ++xi) {
    const BitString x = BitString::from_u64(xi, n);
    const BitString shifted = part == Part::i ? x : x ^ *q.e;
    count += h.eval(shifted, a) == q.v && h.eval(x, b) == q.v_f;
  }
  return count;
}

SolutionMaxima solution_maxima(unsigned x_bits, unsigned t, unsigned w, Exec exec) {
  if (x_bits + w + x_bits > 20) throw InfeasibleError("solution table too large");
  const uhash::CcaHash h(x_bits, t, w);
  const uint64_t nx = uint64_t{1} << x_bits, ns = uint64_t{1} << (w + x_bits), nv = uint64_t{1} << t;
  const auto table = hash_table(nx, ns, cca_int_hash(h, x_bits, w), exec);

  std::vector<SolutionMaxima> per_a(ns);
  detail::for_each_index(ns, par(exec), [&](size_t a) {
    SolutionMaxima& m = per_a[a];
    std::vector<uint32_t> hist(nv * nv);
    for (uint64_t b = 0; b < ns; ++b) {
      if (b != a) {
        std::fill(hist.begin(), hist.end(), 0);
        for (uint64_t x = 0; x < nx; ++x) ++hist[table[x * ns + a] * nv + table[x * ns + b]];
        m.max_i = std::max<uint64_t>(m.max_i, *std::max_element(hist.begin(), hist.end()));
        m.tuples_i += nv * nv;
      }
      for (uint64_t e = 1; e < nx; ++e) {
        std::fill(hist.begin(), hist.end(), 0);
        for (uint64_t x = 0; x < nx; ++x) ++hist[table[(x ^ e) * ns + a] * nv + table[x * ns + b]];
        for (uint64_t v = 0; v < nv; ++v)
          for (uint64_t vf = 0; vf < nv; ++vf) {
            if (a == b && v == vf) continue;
            m.max_ii = std::max<uint64_t>(m.max_ii, hist[v * nv + vf]);
            ++m.tuples_ii;
          }
      }
    }
  });
  SolutionMaxima out;
  for (const auto& m : per_a) {
    out.max_i = std::max(out.max_i, m.max_i);
    out.max_ii = std::max(out.max_ii, m.max_ii);
    out.tuples_i += m.tuples_i;
    out.tuples_ii += m.tuples_ii;
  }
  return out;
}

namespace {

// Per-symbol integer weights of P(x, z) and P(z)-max, over the exact table's
// denominator.
struct XzWeights {
  uint64_t denominator;
  std::vector<uint64_t> w;  // ax * az
  uint64_t guess;           // sum_z max_x w(x, z)
};

XzWeights xz_weights(const SourceSpec& src) {
  if (!src.exact()) throw InvalidArgument("exact distance needs an exact source table");
  const ExactTable& ex = *src.exact();
  XzWeights out{ex.denominator, std::vector<uint64_t>(size_t{src.ax()} * src.az(), 0), 0};
  for (unsigned x = 0; x < src.ax(); ++x)
    for (unsigned y = 0; y < src.ay(); ++y)
      for (unsigned z = 0; z < src.az(); ++z) out.w[size_t{x} * src.az() + z] += ex.weights[src.index(x, y, z)];
  for (unsigned z = 0; z < src.az(); ++z) {
    uint64_t m = 0;
    for (unsigned x = 0; x < src.ax(); ++x) m = std::max(m, out.w[size_t{x} * src.az() + z]);
    out.guess += m;
  }
  return out;
}

unsigned bound_exponent(const IkemParams& p, unsigned q_e) {
  return p.mode == Mode::cca ? (q_e + 1) * (p.t + p.ell) : (q_e + 1) * p.ell + p.t;
}

// (2 delta)^2 <= 2^a (guess / D)^n
bool within(const Rational& delta, unsigned a, const XzWeights& xw, unsigned n) {
  using boost::multiprecision::cpp_int;
  const Rational lhs = 4 * delta * delta;
  cpp_int num = cpp_int(1) << a, den = 1;
  for (unsigned i = 0; i < n; ++i) {
    num *= xw.guess;
    den *= xw.denominator;
  }
  return lhs <= Rational(num, den);
}

}  // namespace

ExactDistance exact_distance(const Ikem& ikem, unsigned q_e, Exec exec, uint64_t max_work) {
  const IkemParams& p = ikem.params();
  const SourceSpec& src = p.source;
  const unsigned n = src.n();
  if (p.ell > 32 || p.t > 32) throw InvalidArgument("exact distance needs ell, t <= 32");
  if ((q_e + 1) * (p.ell + p.t) > 128) throw InvalidArgument("view too wide for exact distance");
  const XzWeights xw = xz_weights(src);

  const auto xs = all_strings(src.ax(), n);
  const auto zs = all_strings(src.az(), n);
  const size_t nx = xs.size(), nz = zs.size();
  const unsigned sp_bits = p.s_prime_bits(), s_bits = p.s_bits();
  if (sp_bits > 20 || s_bits > 20) throw InfeasibleError("seed space too large");
  const uint64_t nsp = uint64_t{1} << sp_bits, nss = uint64_t{1} << s_bits;
  const bool shared_s = p.mode == Mode::cea;
  // seeds per encapsulation index and number of seed tuples
  const uint64_t per_enc = shared_s ? nsp : nsp * nss;
  double tuples_d = std::pow(static_cast<double>(per_enc), q_e + 1) * (shared_s ? static_cast<double>(nss) : 1.0);
  if (tuples_d * static_cast<double>(nx) * static_cast<double>(nz) > static_cast<double>(max_work))
    throw InfeasibleError("exact distance enumeration too large");
  const auto tuples = static_cast<uint64_t>(tuples_d);

  std::vector<BitString> xbits;
  for (const auto& x : xs) xbits.push_back(src.x_to_bits(x));
  std::vector<uint64_t> wxz(nx * nz);
  for (size_t xi = 0; xi < nx; ++xi)
    for (size_t zi = 0; zi < nz; ++zi) {
      uint64_t w = 1;
      for (unsigned i = 0; i < n; ++i) w *= xw.w[size_t{xs[xi][i]} * src.az() + zs[zi][i]];
      wxz[xi * nz + zi] = w;
    }
  // K[x][s'], V[x][s' * nss + s] (cea tags ignore s')
  std::vector<uint64_t> K(nx * nsp), V(nx * (shared_s ? nss : nsp * nss));
  detail::for_each_index(nx, par(exec), [&](size_t xi) {
    for (uint64_t sp = 0; sp < nsp; ++sp) {
      const BitString spb = BitString::from_u64(sp, sp_bits);
      K[xi * nsp + sp] = bits_u64(ikem.key_of(xbits[xi], spb));
      if (shared_s) continue;
      for (uint64_t s = 0; s < nss; ++s)
        V[(xi * nsp + sp) * nss + s] = bits_u64(ikem.tag_of(xbits[xi], spb, BitString::from_u64(s, s_bits)));
    }
    if (shared_s)
      for (uint64_t s = 0; s < nss; ++s)
        V[xi * nss + s] = bits_u64(ikem.tag_of(xbits[xi], BitString(sp_bits), BitString::from_u64(s, s_bits)));
  });

  const int64_t scale = int64_t{1} << p.ell;
  std::vector<unsigned __int128> partial(tuples);
  detail::for_each_index(tuples, par(exec), [&](size_t tuple) {
    // decode the tuple: encapsulation 0 is the challenge
    uint64_t rest = tuple;
    uint64_t shared = 0;
    if (shared_s) {
      shared = rest % nss;
      rest /= nss;
    }
    std::vector<uint64_t> sp(q_e + 1), s(q_e + 1, shared);
    for (unsigned j = 0; j <= q_e; ++j) {
      const uint64_t d = rest % per_enc;
      rest /= per_enc;
      sp[j] = shared_s ? d : d / nss;
      if (!shared_s) s[j] = d % nss;
    }
    struct Row {
      std::array<uint64_t, 2> sig;
      uint64_t k0;
      size_t xi;
    };
    std::vector<Row> rows(nx);
    for (size_t xi = 0; xi < nx; ++xi) {
      std::array<uint64_t, 2> sig{0, 0};
      unsigned pos = 0;
      auto push = [&](uint64_t value, unsigned width) {
        for (unsigned b = 0; b < width; ++b, ++pos)
          if ((value >> b) & 1) sig[pos / 64] |= uint64_t{1} << (pos % 64);
      };
      for (unsigned j = 0; j <= q_e; ++j) {
        const uint64_t v = shared_s ? V[xi * nss + s[j]] : V[(xi * nsp + sp[j]) * nss + s[j]];
        push(v, p.t);
        if (j > 0) push(K[xi * nsp + sp[j]], p.ell);
      }
      rows[xi] = {sig, K[xi * nsp + sp[0]], xi};
    }
    std::sort(rows.begin(), rows.end(),
              [](const Row& a, const Row& b) { return std::tie(a.sig, a.k0) < std::tie(b.sig, b.k0); });
    unsigned __int128 total = 0;
    for (size_t zi = 0; zi < nz; ++zi) {
      size_t g = 0;
      while (g < nx) {
        size_t end = g;
        int64_t view = 0;
        while (end < nx && rows[end].sig == rows[g].sig) view += static_cast<int64_t>(wxz[rows[end++].xi * nz + zi]);
        if (view != 0) {
          int64_t keys_present = 0;
          for (size_t i = g; i < end;) {
            int64_t wk = 0;
            size_t j = i;
            while (j < end && rows[j].k0 == rows[i].k0) wk += static_cast<int64_t>(wxz[rows[j++].xi * nz + zi]);
            const int64_t diff = scale * wk - view;
            total += static_cast<unsigned __int128>(diff < 0 ? -diff : diff);
            ++keys_present;
            i = j;
          }
          total += static_cast<unsigned __int128>(scale - keys_present) * static_cast<unsigned __int128>(view);
        }
        g = end;
      }
    }
    partial[tuple] = total;
  });
  unsigned __int128 total = 0;
  for (auto v : partial) total += v;

  using boost::multiprecision::cpp_int;
  auto to_cpp = [](unsigned __int128 v) {
    cpp_int r = static_cast<uint64_t>(v >> 64);
    r <<= 64;
    r += static_cast<uint64_t>(v);
    return r;
  };
  cpp_int den = cpp_int(2) * scale * tuples;
  for (unsigned i = 0; i < n; ++i) den *= xw.denominator;
  ExactDistance out;
  out.delta = Rational(to_cpp(total), den);
  out.value = out.delta.convert_to<double>();
  const double h_min = avg_min_entropy(src);
  out.bound = key_distance_bound(p.mode == Mode::cea ? Mode::cea : Mode::cca, n, h_min, q_e, p.t, p.ell);
  out.within_bound = within(out.delta, bound_exponent(p, q_e), xw, n);
  return out;
}

Rational exact_distance_reference(const Ikem& ikem, unsigned q_e) {
  const IkemParams& p = ikem.params();
  const SourceSpec& src = p.source;
  if (!src.exact()) throw InvalidArgument("exact distance needs an exact source table");
  const ExactTable& ex = *src.exact();
  const auto xs = all_strings(src.ax(), src.n());
  const auto zs = all_strings(src.az(), src.n());
  const unsigned sp_bits = p.s_prime_bits(), s_bits = p.s_bits();
  const uint64_t nsp = uint64_t{1} << sp_bits, nss = uint64_t{1} << s_bits;
  const bool shared_s = p.mode == Mode::cea;

  auto pxz = [&](const SymbolString& x, const SymbolString& z) {
    Rational r = 1;
    for (size_t i = 0; i < x.size(); ++i) {
      uint64_t w = 0;
      for (unsigned y = 0; y < src.ay(); ++y) w += ex.weights[src.index(x[i], y, z[i])];
      r *= Rational(w, ex.denominator);
    }
    return r;
  };

  // all seed lists (s'_j, s_j), j = 0..q_e
  std::vector<std::vector<std::pair<BitString, BitString>>> lists{{}};
  for (unsigned j = 0; j <= q_e; ++j) {
    std::vector<std::vector<std::pair<BitString, BitString>>> next;
    for (const auto& l : lists)
      for (uint64_t sp = 0; sp < nsp; ++sp)
        for (uint64_t s = 0; s < (shared_s ? 1 : nss); ++s) {
          auto m = l;
          m.emplace_back(BitString::from_u64(sp, sp_bits), BitString::from_u64(s, s_bits));
          next.push_back(std::move(m));
        }
    lists = std::move(next);
  }
  const uint64_t shared_count = shared_s ? nss : 1;
  Rational sum = 0;
  const Rational uniform(1, boost::multiprecision::cpp_int(1) << p.ell);
  for (uint64_t shared = 0; shared < shared_count; ++shared) {
    for (auto list : lists) {
      if (shared_s)
        for (auto& [sp, s] : list) s = BitString::from_u64(shared, s_bits);
      for (const auto& z : zs) {
        // view -> (key -> probability)
        std::map<std::vector<BitString>, std::map<BitString, Rational>> table;
        for (const auto& x : xs) {
          const BitString xb = src.x_to_bits(x);
          std::vector<BitString> view;
          for (unsigned j = 0; j <= q_e; ++j) {
            view.push_back(ikem.tag_of(xb, list[j].first, list[j].second));
            if (j > 0) view.push_back(ikem.key_of(xb, list[j].first));
          }
          table[view][ikem.key_of(xb, list[0].first)] += pxz(x, z);
        }
        for (const auto& [view, keys] : table) {
          Rational pv = 0;
          for (const auto& [k, pk] : keys) pv += pk;
          for (const auto& [k, pk] : keys) sum += abs(pk - pv * uniform);
          const auto missing = (boost::multiprecision::cpp_int(1) << p.ell) - keys.size();
          sum += Rational(missing) * pv * uniform;
        }
      }
    }
  }
  return sum / (2 * Rational(lists.size() * shared_count));
}

IndependenceStats twise_independence(unsigned m, unsigned k, Exec exec) {
  if (m * k > 24 || k == 0 || k > (1u << m)) throw InfeasibleError("independence check too large");
  const gf2::Field& f = gf2::Field::get(m);
  const uint64_t q = uint64_t{1} << m, keys = uint64_t{1} << (m * k);
  std::vector<std::vector<uint64_t>> subsets;
  std::vector<uint64_t> c(k);
  std::iota(c.begin(), c.end(), 0);
  while (true) {
    subsets.push_back(c);
    int i = static_cast<int>(k) - 1;
    while (i >= 0 && c[static_cast<size_t>(i)] == q - k + static_cast<uint64_t>(i)) --i;
    if (i < 0) break;
    ++c[static_cast<size_t>(i)];
    for (size_t j = static_cast<size_t>(i) + 1; j < k; ++j) c[j] = c[j - 1] + 1;
  }
  std::vector<IndependenceStats> per(subsets.size());
  detail::for_each_index(subsets.size(), par(exec), [&](size_t si) {
    std::vector<gf2::Fe> points;
    for (uint64_t v : subsets[si]) points.push_back(f.from_u64(v));
    std::vector<uint64_t> hist(keys, 0);
    std::vector<gf2::Fe> coeffs(k);
    for (uint64_t key = 0; key < keys; ++key) {
      for (unsigned j = 0; j < k; ++j) coeffs[j] = f.from_u64((key >> (j * m)) & (q - 1));
      uint64_t idx = 0;
      for (unsigned j = 0; j < k; ++j) idx = (idx << m) | uhash::twise_poly(coeffs, points[j], m).to_u64();
      ++hist[idx];
    }
    per[si] = {*std::min_element(hist.begin(), hist.end()), *std::max_element(hist.begin(), hist.end()), 1};
  });
  IndependenceStats out{UINT64_MAX, 0, 0};
  for (const auto& s : per) {
    out.min_count = std::min(out.min_count, s.min_count);
    out.max_count = std::max(out.max_count, s.max_count);
    ++out.point_tuples;
  }
  return out;
}

}  // namespace pkem::analysis
