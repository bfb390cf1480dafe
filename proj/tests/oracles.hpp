#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library's arithmetic.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

// Shift-and-add multiplication in GF(2^m) modulo `poly` (bit m set), m <= 31.
inline uint64_t gf_mul(uint64_t a, uint64_t b, uint64_t poly, unsigned m) {
  uint64_t r = 0;
  for (unsigned i = 0; i < m; ++i) {
    if ((b >> i) & 1) r ^= a;
    a <<= 1;
    if ((a >> m) & 1) a ^= poly;
  }
  return r;
}

inline uint64_t gf_pow(uint64_t a, unsigned e, uint64_t poly, unsigned m) {
  uint64_t r = 1;
  for (unsigned i = 0; i < e; ++i) r = gf_mul(r, a, poly, m);
  return r;
}

// Inverse by exhaustive search; 0 when none exists.
inline uint64_t gf_inv(uint64_t a, uint64_t poly, unsigned m) {
  for (uint64_t c = 1; c < (uint64_t{1} << m); ++c)
    if (gf_mul(a, c, poly, m) == 1) return c;
  return 0;
}

// Leading `t` bits of an m-bit value.
inline uint64_t top(uint64_t v, unsigned m, unsigned t) { return v >> (m - t); }

// The CCA reconciliation hash evaluated term by term; pu and pt are the
// moduli of GF(2^(n-t)) and GF(2^t).
inline uint64_t cca_hash(uint64_t x, uint64_t sp, uint64_t s, unsigned n, unsigned t, unsigned w, uint64_t pu,
                         uint64_t pt) {
  const unsigned u = n - t;
  unsigned r = 2;
  while (r * u < w) r += 2;
  // s' split MSB first into r parts, tail padded with ones
  const unsigned pad = r * u - w;
  const uint64_t padded = (sp << pad) | ((uint64_t{1} << pad) - 1);
  std::vector<uint64_t> parts(r);
  for (unsigned i = 0; i < r; ++i) parts[i] = (padded >> ((r - 1 - i) * u)) & ((uint64_t{1} << u) - 1);
  const uint64_t x2 = x >> t, x1 = x & ((uint64_t{1} << t) - 1);
  const uint64_t s2 = s >> t, s1 = s & ((uint64_t{1} << t) - 1);
  uint64_t big = gf_pow(x2, r + 3, pu, u) ^ gf_mul(s2, x2, pu, u);
  for (unsigned i = 1; i <= r; ++i) big ^= gf_mul(parts[i - 1], gf_pow(x2, i + 1, pu, u), pu, u);
  const uint64_t small = gf_pow(x1, 3, pt, t) ^ gf_mul(s1, x1, pt, t);
  return top(big, u, t) ^ small;
}

// P[Bin(n, p) <= k] by direct summation in long double.
inline long double binomial_cdf(unsigned n, long double p, long k) {
  long double s = 0;
  for (long i = 0; i <= k && i <= static_cast<long>(n); ++i) {
    const long double lc = std::lgamma(n + 1.0L) - std::lgamma(i + 1.0L) - std::lgamma(n - i + 1.0L);
    s += std::exp(lc + i * std::log(p) + (n - i) * std::log1p(-p));
  }
  return s;
}

inline uint64_t choose(unsigned n, unsigned k) {
  uint64_t r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Deterministic generator for property tests.
struct Gen {
  std::mt19937_64 eng;
  explicit Gen(uint64_t seed) : eng(seed) {}
  uint64_t bits(unsigned n) { return n == 0 ? 0 : (n >= 64 ? eng() : eng() & ((uint64_t{1} << n) - 1)); }
  uint64_t below(uint64_t b) { return std::uniform_int_distribution<uint64_t>(0, b - 1)(eng); }
  std::vector<uint8_t> bytes(size_t n) {
    std::vector<uint8_t> v(n);
    for (auto& b : v) b = static_cast<uint8_t>(eng());
    return v;
  }
};

}  // namespace oracle
