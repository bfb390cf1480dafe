#pragma once

#include <vector>

#include "pkem/bitstring.hpp"
#include "pkem/gf2.hpp"

namespace pkem::uhash {

// [seed * x]_{1..out_bits} in GF(2^|seed|), with x zero-extended to the seed
// width. Universal for x of at most |seed| bits.
BitString hprime(const BitString& x, const BitString& seed, unsigned out_bits);

// Same multiply-then-truncate family, used as the reconciliation hash.
BitString h_cea(const BitString& x, const BitString& seed, unsigned t);

// [a*x + b]_{1..out_bits} over GF(2^|x|), seed = a || b. Strongly universal.
BitString affine(const BitString& x, const BitString& seed, unsigned out_bits);

// Smallest even r with w <= r*u; it also satisfies (r-2)*u < w.
unsigned choose_r(unsigned w, unsigned u);

// s' in GF(2^w) cut into r elements of GF(2^u), most significant part first,
// with the r*u - w spare low bits of the last parts set to one.
struct PaddedSeedVector {
  unsigned u = 0;
  std::vector<BitString> parts;

  static PaddedSeedVector split(const BitString& s_prime, unsigned u);
  BitString join(unsigned w) const;  // inverse of split
};

// The reconciliation hash of the CCA construction on x = x2 || x1, with x2
// the leading n-t bits and x1 the trailing t bits:
//   [x2^(r+3) + sum_{i=1..r} s'_i x2^(i+1) + s2 x2]_{1..t} + x1^3 + s1 x1
// where the bracket is computed in GF(2^(n-t)) and the sum with the x1 terms
// in GF(2^t). The seed s is s2 || s1 (n bits).
class CcaHash {
 public:
  CcaHash(unsigned x_bits, unsigned t, unsigned w);

  unsigned x_bits() const { return n_; }
  unsigned t() const { return t_; }
  unsigned w() const { return w_; }
  unsigned r() const { return r_; }

  struct Prepared {
    std::vector<gf2::Fe> s_prime;  // r elements of GF(2^(n-t))
    gf2::Fe s2, s1;
  };
  Prepared prepare(const BitString& s_prime, const BitString& s) const;
  BitString eval(const BitString& x, const Prepared& seeds) const;
  BitString operator()(const BitString& x, const BitString& s_prime, const BitString& s) const {
    return eval(x, prepare(s_prime, s));
  }

 private:
  unsigned n_, t_, w_, r_;
  const gf2::Field* fu_;
  const gf2::Field* ft_;
};

BitString h_cca(const BitString& x, const BitString& s_prime, const BitString& s2, const BitString& s1, unsigned t);

// [sum_i a_i x^i]_{1..out_bits}: a (d+1)-wise independent family keyed by
// the coefficients a_0..a_d.
BitString twise_poly(const std::vector<gf2::Fe>& coeffs, const gf2::Fe& x, unsigned out_bits);

}  // namespace pkem::uhash
