#include "pkem/source.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/multiprecision/cpp_int.hpp>

#include "pkem/errors.hpp"

namespace pkem {

namespace mp = boost::multiprecision;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

mp::cpp_rational exact_value(double v) {
  int e = 0;
  const double f = std::frexp(v, &e);
  const auto mant = static_cast<int64_t>(std::ldexp(f, 53));
  mp::cpp_rational r(mant);
  const int shift = e - 53;
  if (shift >= 0)
    r *= mp::cpp_rational(mp::cpp_int(1) << shift);
  else
    r /= mp::cpp_rational(mp::cpp_int(1) << -shift);
  return r;
}

// Exact integer weights when every entry's binary value shares a small common
// denominator and the entries sum to exactly one.
std::optional<ExactTable> exact_from_doubles(const std::vector<double>& probs) {
  std::vector<mp::cpp_rational> rs;
  mp::cpp_int den = 1;
  for (double p : probs) {
    rs.push_back(exact_value(p));
    const mp::cpp_int d = mp::denominator(rs.back());
    den = den / mp::gcd(den, d) * d;
    if (den > (mp::cpp_int(1) << 62)) return std::nullopt;
  }
  ExactTable t;
  t.denominator = den.convert_to<uint64_t>();
  mp::cpp_int total = 0;
  for (const auto& r : rs) {
    const mp::cpp_int w = mp::numerator(r) * (den / mp::denominator(r));
    total += w;
    t.weights.push_back(w.convert_to<uint64_t>());
  }
  if (total != den) return std::nullopt;
  return t;
}

uint64_t saturating_binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  long double r = 1;
  uint64_t exact = 1;
  bool overflow = false;
  for (unsigned i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > 1.8e19L) overflow = true;
    if (!overflow) {
      // exact / i after multiplying keeps an integer at every step
      const unsigned __int128 t = static_cast<unsigned __int128>(exact) * (n - k + i) / i;
      if (t > std::numeric_limits<uint64_t>::max()) overflow = true;
      exact = static_cast<uint64_t>(t);
    }
  }
  return overflow ? std::numeric_limits<uint64_t>::max() : exact;
}

bool use_ball(const SourceSpec& spec) {
  const auto& b = spec.binary_symmetric();
  return b && b->c1 > b->c0;
}

// Streams every string s of length costs.size() with sum_i costs[i][s_i]
// within the threshold. Summation runs left to right, matching
// cond_neg_log_prob.
void enumerate_budget(const std::vector<std::vector<double>>& costs, double nu, uint64_t cap, const ReconVisitor& visit) {
  const size_t n = costs.size();
  std::vector<double> suffix(n + 1, 0.0);
  for (size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] + *std::min_element(costs[i].begin(), costs[i].end());
  if (!within_threshold(suffix[0], nu)) return;
  const double prune_at = nu + 1e-9 * std::max(1.0, std::abs(nu)) + 1e-7;

  SymbolString s(n, 0);
  std::vector<double> acc(n + 1, 0.0);
  std::vector<int> choice(n, -1);
  uint64_t found = 0;
  size_t i = 0;
  for (;;) {
    // advance the choice at depth i
    int next = choice[i] + 1;
    const int alpha = static_cast<int>(costs[i].size());
    while (next < alpha && !(acc[i] + costs[i][next] + suffix[i + 1] <= prune_at)) ++next;
    if (next >= alpha) {
      choice[i] = -1;
      if (i == 0) return;
      --i;
      continue;
    }
    choice[i] = next;
    s[i] = static_cast<uint8_t>(next);
    acc[i + 1] = acc[i] + costs[i][next];
    if (i + 1 == n) {
      if (within_threshold(acc[n], nu)) {
        if (++found > cap) throw InfeasibleError("reconciliation set exceeds the enumeration cap");
        visit(s, acc[n]);
      }
    } else {
      ++i;
    }
  }
}

void enumerate_ball(const SymbolString& center, long radius, const BinarySymmetric& b, uint64_t cap,
                    const ReconVisitor& visit) {
  const unsigned n = static_cast<unsigned>(center.size());
  uint64_t total = 0;
  for (long d = 0; d <= radius; ++d) {
    const uint64_t c = saturating_binomial(n, static_cast<unsigned>(d));
    total = c > std::numeric_limits<uint64_t>::max() - total ? std::numeric_limits<uint64_t>::max() : total + c;
  }
  if (total > cap) throw InfeasibleError("reconciliation set exceeds the enumeration cap");
  SymbolString s = center;
  std::vector<unsigned> pos;
  for (long d = 0; d <= radius; ++d) {
    const double cost = d == 0 ? n * b.c0 : (n - d) * b.c0 + d * b.c1;
    pos.resize(d);
    std::iota(pos.begin(), pos.end(), 0u);
    for (;;) {
      for (unsigned p : pos) s[p] ^= 1;
      visit(s, cost);
      for (unsigned p : pos) s[p] ^= 1;
      // next combination
      long k = d - 1;
      while (k >= 0 && pos[k] == n - d + k) --k;
      if (k < 0) break;
      ++pos[k];
      for (long j = k + 1; j < d; ++j) pos[j] = pos[j - 1] + 1;
    }
  }
}

uint64_t checked_power(uint64_t base, unsigned exp, uint64_t limit) {
  uint64_t r = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (r > limit / std::max<uint64_t>(base, 1)) throw InfeasibleError("enumeration too large");
    r *= base;
  }
  return r;
}

void decode_index(uint64_t idx, unsigned alphabet, SymbolString& out) {
  for (size_t i = out.size(); i-- > 0;) {
    out[i] = static_cast<uint8_t>(idx % alphabet);
    idx /= alphabet;
  }
}

}  // namespace

SourceSpec::SourceSpec(std::array<unsigned, 3> alphabet, unsigned n, std::vector<double> pxyz,
                       std::optional<ExactTable> exact)
    : alphabet_(alphabet), n_(n), pxyz_(std::move(pxyz)), exact_(std::move(exact)) {
  for (unsigned a : alphabet_)
    if (a < 1 || a > 256) throw InvalidArgument("alphabet sizes must be in 1..256");
  if (n_ < 1) throw InvalidArgument("n must be positive");
  if (pxyz_.size() != size_t{ax()} * ay() * az()) throw InvalidArgument("probability table has the wrong size");
  double total = 0;
  for (double p : pxyz_) {
    if (!(p >= 0) || !std::isfinite(p)) throw InvalidArgument("probabilities must be finite and nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > 0x1.0p-40) throw InvalidArgument("probabilities do not sum to 1");
  if (!exact_) exact_ = exact_from_doubles(pxyz_);
  if (exact_ && exact_->weights.size() != pxyz_.size()) throw InvalidArgument("exact table has the wrong size");

  pxy_.assign(size_t{ax()} * ay(), 0);
  pxz_.assign(size_t{ax()} * az(), 0);
  pyz_.assign(size_t{ay()} * az(), 0);
  py_.assign(ay(), 0);
  pz_.assign(az(), 0);
  for (unsigned x = 0; x < ax(); ++x)
    for (unsigned y = 0; y < ay(); ++y)
      for (unsigned z = 0; z < az(); ++z) {
        const double p = prob(x, y, z);
        pxy_[size_t{x} * ay() + y] += p;
        pxz_[size_t{x} * az() + z] += p;
        pyz_[size_t{y} * az() + z] += p;
        py_[y] += p;
        pz_[z] += p;
      }
  cost_.assign(size_t{ax()} * ay(), kInf);
  for (unsigned x = 0; x < ax(); ++x)
    for (unsigned y = 0; y < ay(); ++y) {
      const double j = pxy(x, y);
      if (j > 0) cost_[size_t{x} * ay() + y] = -std::log2(j / py(y));
    }
  if (ax() == 2 && ay() == 2 && py(0) > 0 && py(1) > 0 && cost(0, 0) == cost(1, 1) && cost(0, 1) == cost(1, 0))
    bsym_ = BinarySymmetric{cost(0, 0), cost(1, 0)};
}

SourceSpec SourceSpec::bsc(double p, double q, unsigned n) {
  if (!(p >= 0 && p <= 1 && q >= 0 && q <= 1)) throw InvalidArgument("crossover probabilities must lie in [0,1]");
  std::vector<double> t(8);
  for (unsigned x = 0; x < 2; ++x)
    for (unsigned y = 0; y < 2; ++y)
      for (unsigned z = 0; z < 2; ++z) t[(x * 2 + y) * 2 + z] = 0.5 * (x == y ? 1 - p : p) * (x == z ? 1 - q : q);
  SourceSpec s({2, 2, 2}, n, std::move(t));
  s.bsc_ = BscOrigin{p, q};
  // the marginals above can differ in the last ulp; pin the costs
  if (p > 0 && p < 1) {
    s.cost_ = {-std::log2(1 - p), -std::log2(p), -std::log2(p), -std::log2(1 - p)};
    s.bsym_ = BinarySymmetric{s.cost_[0], s.cost_[1]};
  }
  return s;
}

SourceSpec SourceSpec::with_n(unsigned n) const {
  SourceSpec s = *this;
  if (n < 1) throw InvalidArgument("n must be positive");
  s.n_ = n;
  return s;
}

unsigned SourceSpec::bits_per_symbol() const {
  unsigned b = 0;
  while ((1u << b) < ax()) ++b;
  return std::max(b, 1u);
}

BitString SourceSpec::x_to_bits(const SymbolString& x) const {
  if (x.size() != n_) throw InvalidArgument("x has the wrong length");
  const unsigned b = bits_per_symbol();
  BitString out(x_bits());
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i] >= ax()) throw InvalidArgument("symbol outside the alphabet");
    for (unsigned k = 0; k < b; ++k) out.set_bit(i * b + k + 1, (x[i] >> (b - 1 - k)) & 1);
  }
  return out;
}

SampleTriple sample(const SourceSpec& spec, Rng& rng) {
  const auto& t = spec.table();
  std::vector<double> cdf(t.size());
  std::partial_sum(t.begin(), t.end(), cdf.begin());
  SampleTriple s;
  s.x.resize(spec.n());
  s.y.resize(spec.n());
  s.z.resize(spec.n());
  for (unsigned i = 0; i < spec.n(); ++i) {
    const double u = rng.uniform01() * cdf.back();
    size_t k = static_cast<size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    k = std::min(k, t.size() - 1);
    while (t[k] == 0 && k > 0) --k;  // never land on a zero-probability cell
    s.z[i] = static_cast<uint8_t>(k % spec.az());
    s.y[i] = static_cast<uint8_t>((k / spec.az()) % spec.ay());
    s.x[i] = static_cast<uint8_t>(k / (size_t{spec.az()} * spec.ay()));
  }
  return s;
}

bool within_threshold(double cost, double nu) { return cost <= nu + 1e-9 * std::max(1.0, std::abs(nu)); }

double cond_neg_log_prob(const SourceSpec& spec, const SymbolString& x, const SymbolString& y) {
  if (x.size() != spec.n() || y.size() != spec.n()) throw InvalidArgument("strings have the wrong length");
  if (use_ball(spec)) {
    const auto& b = *spec.binary_symmetric();
    unsigned d = 0;
    for (size_t i = 0; i < x.size(); ++i) {
      if (x[i] > 1 || y[i] > 1) throw InvalidArgument("symbol outside the alphabet");
      d += x[i] != y[i];
    }
    return d == 0 ? spec.n() * b.c0 : (spec.n() - d) * b.c0 + d * b.c1;
  }
  double c = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i] >= spec.ax() || y[i] >= spec.ay()) throw InvalidArgument("symbol outside the alphabet");
    c += spec.cost(x[i], y[i]);
  }
  return c;
}

long hamming_radius(const SourceSpec& spec, double nu) {
  if (!use_ball(spec)) throw InvalidArgument("Hamming radius needs a binary-symmetric source with p < 1/2");
  const auto& b = *spec.binary_symmetric();
  const unsigned n = spec.n();
  long d = -1;
  for (unsigned k = 0; k <= n; ++k) {
    const double c = k == 0 ? n * b.c0 : (n - k) * b.c0 + k * b.c1;
    if (!within_threshold(c, nu)) break;
    d = k;
  }
  return d;
}

std::optional<uint64_t> recon_set_size_bsc(const SourceSpec& spec, double nu) {
  if (!use_ball(spec)) return std::nullopt;
  const long r = hamming_radius(spec, nu);
  uint64_t total = 0;
  for (long d = 0; d <= r; ++d) {
    const uint64_t c = saturating_binomial(spec.n(), static_cast<unsigned>(d));
    if (c > std::numeric_limits<uint64_t>::max() - total) return std::numeric_limits<uint64_t>::max();
    total += c;
  }
  return total;
}

void for_each_recon_member(const SourceSpec& spec, const SymbolString& y, double nu, uint64_t cap,
                           const ReconVisitor& visit) {
  if (y.size() != spec.n()) throw InvalidArgument("y has the wrong length");
  for (uint8_t s : y)
    if (s >= spec.ay()) throw InvalidArgument("symbol outside the alphabet");
  if (use_ball(spec)) {
    const long r = hamming_radius(spec, nu);
    if (r >= 0) enumerate_ball(y, r, *spec.binary_symmetric(), cap, visit);
    return;
  }
  std::vector<std::vector<double>> costs(spec.n(), std::vector<double>(spec.ax()));
  for (unsigned i = 0; i < spec.n(); ++i)
    for (unsigned x = 0; x < spec.ax(); ++x) costs[i][x] = spec.cost(x, y[i]);
  enumerate_budget(costs, nu, cap, visit);
}

std::vector<SymbolString> recon_set(const SourceSpec& spec, const SymbolString& y, double nu, uint64_t cap) {
  std::vector<std::pair<double, SymbolString>> members;
  for_each_recon_member(spec, y, nu, cap, [&](const SymbolString& x, double c) { members.emplace_back(c, x); });
  std::sort(members.begin(), members.end());
  std::vector<SymbolString> out;
  out.reserve(members.size());
  for (auto& m : members) out.push_back(std::move(m.second));
  return out;
}

double shannon_cond_entropy(const SourceSpec& spec) {
  double h = 0;
  for (unsigned x = 0; x < spec.ax(); ++x)
    for (unsigned y = 0; y < spec.ay(); ++y) {
      const double j = spec.pxy(x, y);
      if (j > 0) h -= j * std::log2(j / spec.py(y));
    }
  return h;
}

double avg_min_entropy(const SourceSpec& spec) {
  double g = 0;
  for (unsigned z = 0; z < spec.az(); ++z) {
    double best = 0;
    for (unsigned x = 0; x < spec.ax(); ++x) best = std::max(best, spec.pxz(x, z));
    g += best;
  }
  return -std::log2(g);
}

double log2_binomial_cdf(unsigned n, double p, long k) {
  if (k < 0) return -kInf;
  if (k >= static_cast<long>(n)) return 0;
  if (p <= 0) return 0;
  if (p >= 1) return -kInf;
  const double lp = std::log(p), lq = std::log1p(-p);
  std::vector<double> terms;
  for (long j = 0; j <= k; ++j)
    terms.push_back(std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0) + j * lp + (n - j) * lq);
  const double mx = *std::max_element(terms.begin(), terms.end());
  double s = 0;
  for (double t : terms) s += std::exp(t - mx);
  return std::min(0.0, (mx + std::log(s)) / std::log(2.0));
}

GuessingMass guessing_mass(const SourceSpec& spec, double nu, uint64_t max_states) {
  const unsigned n = spec.n();
  const uint64_t nx = checked_power(spec.ax(), n, max_states);
  const uint64_t ny = checked_power(spec.ay(), n, max_states);
  const uint64_t nz = checked_power(spec.az(), n, max_states);
  if (nx * nz > max_states || ny * nz > max_states) throw InfeasibleError("guessing-mass enumeration too large");

  // acceptors[x] = { y : P(x|y) >= 2^-nu },  recon[y] = R(y)
  std::vector<std::vector<uint32_t>> acceptors(nx), recon(ny);
  uint64_t total_links = 0;
  SymbolString y(n);
  for (uint64_t yi = 0; yi < ny; ++yi) {
    decode_index(yi, spec.ay(), y);
    for_each_recon_member(spec, y, nu, max_states, [&](const SymbolString& x, double) {
      uint64_t xi = 0;
      for (uint8_t s : x) xi = xi * spec.ax() + s;
      recon[yi].push_back(static_cast<uint32_t>(xi));
      acceptors[xi].push_back(static_cast<uint32_t>(yi));
      if (++total_links > max_states) throw InfeasibleError("guessing-mass enumeration too large");
    });
  }

  std::vector<double> per_z_x(nz), per_z_y(nz);
#pragma omp parallel for schedule(static)
  for (int64_t zi = 0; zi < static_cast<int64_t>(nz); ++zi) {
    SymbolString z(n), s(n);
    decode_index(static_cast<uint64_t>(zi), spec.az(), z);
    std::vector<double> pyz(ny), pxz(nx);
    for (uint64_t yi = 0; yi < ny; ++yi) {
      decode_index(yi, spec.ay(), s);
      double p = 1;
      for (unsigned i = 0; i < n; ++i) p *= spec.pyz(s[i], z[i]);
      pyz[yi] = p;
    }
    for (uint64_t xi = 0; xi < nx; ++xi) {
      decode_index(xi, spec.ax(), s);
      double p = 1;
      for (unsigned i = 0; i < n; ++i) p *= spec.pxz(s[i], z[i]);
      pxz[xi] = p;
    }
    double bx = 0, by = 0;
    for (uint64_t xi = 0; xi < nx; ++xi) {
      double a = 0;
      for (uint32_t yi : acceptors[xi]) a += pyz[yi];
      bx = std::max(bx, a);
    }
    for (uint64_t yi = 0; yi < ny; ++yi) {
      double a = 0;
      for (uint32_t xi : recon[yi]) a += pxz[xi];
      by = std::max(by, a);
    }
    per_z_x[zi] = bx;
    per_z_y[zi] = by;
  }
  GuessingMass g;
  for (uint64_t zi = 0; zi < nz; ++zi) {
    g.mass_x += per_z_x[zi];
    g.mass_y += per_z_y[zi];
  }
  g.log2_mass_x = g.mass_x > 0 ? std::log2(g.mass_x) : -kInf;
  g.log2_mass_y = g.mass_y > 0 ? std::log2(g.mass_y) : -kInf;
  return g;
}

GuessingMass guessing_mass_bsc(const SourceSpec& spec, double nu) {
  if (!spec.bsc_origin() || !use_ball(spec)) throw InvalidArgument("closed form needs a binary symmetric source with p < 1/2");
  const double p = spec.bsc_origin()->p, q = spec.bsc_origin()->q;
  const long r = hamming_radius(spec, nu);
  const double pq = p * (1 - q) + q * (1 - p);
  GuessingMass g;
  g.log2_mass_x = log2_binomial_cdf(spec.n(), std::min(pq, 1 - pq), r);
  g.log2_mass_y = log2_binomial_cdf(spec.n(), std::min(q, 1 - q), r);
  g.mass_x = std::exp2(g.log2_mass_x);
  g.mass_y = std::exp2(g.log2_mass_y);
  return g;
}

GuessingMass guessing_mass_auto(const SourceSpec& spec, double nu) {
  const double states = std::pow(static_cast<double>(std::max(spec.ax(), spec.ay())) * spec.az(), spec.n());
  if (states <= static_cast<double>(uint64_t{1} << 20)) return guessing_mass(spec, nu);
  if (spec.bsc_origin() && use_ball(spec)) return guessing_mass_bsc(spec, nu);
  throw InfeasibleError("no tractable route to the guessing masses for this source");
}

}  // namespace pkem
