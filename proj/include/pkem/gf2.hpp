#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pkem/bitstring.hpp"

namespace pkem::gf2 {

inline constexpr unsigned kMaxFieldBits = 8192;

class Fe;

// GF(2^m) defined by a monic irreducible polynomial of degree m. Fields are
// interned by (m, modulus), so two handles with equal parameters are the same
// object and elements compare by value.
class Field {
 public:
  // Lowest-weight irreducible of degree m: the trinomial x^m+x^k+1 with the
  // smallest k, otherwise the pentanomial x^m+x^a+x^b+x^c+1 with (a,b,c)
  // lexicographically smallest.
  static const Field& get(unsigned m);
  // Modulus given as an (m+1)-bit string, leading bit the x^m coefficient.
  // Throws InvalidArgument unless it is irreducible.
  static const Field& with_modulus(const BitString& poly);

  unsigned bits() const { return m_; }
  size_t words() const { return words_; }
  size_t bytes() const { return (m_ + 7) / 8; }
  const BitString& modulus() const { return modulus_; }
  // Exponents below m with a nonzero coefficient, descending.
  const std::vector<unsigned>& taps() const { return taps_; }
  std::string modulus_string() const;  // "x^8+x^4+x^3+x+1"

  Fe zero() const;
  Fe one() const;
  // Integer value of `b` as a polynomial; b.size() may be at most m.
  Fe element(const BitString& b) const;
  Fe from_u64(uint64_t v) const;
  // Big-endian ceil(m/8) bytes with zero padding, as for BitString.
  Fe from_bytes(std::span<const uint8_t> bytes) const;

  Field(const Field&) = delete;
  Field& operator=(const Field&) = delete;

 private:
  friend class Fe;
  friend struct FieldRegistry;
  friend bool is_irreducible_rabin(const BitString& poly);
  Field(unsigned m, const BitString& modulus);

  void mul_into(const uint64_t* a, const uint64_t* b, uint64_t* out) const;
  void reduce(Limbs& wide) const;

  unsigned m_;
  size_t words_;
  BitString modulus_;
  std::vector<unsigned> taps_;
};

class Fe {
 public:
  Fe() = default;

  const Field& field() const { return *f_; }
  const Limbs& limbs() const { return v_; }
  BitString bits() const;
  Bytes to_bytes() const { return bits().to_bytes(); }
  uint64_t to_u64() const;
  bool is_zero() const;

  Fe operator+(const Fe& o) const;
  Fe operator-(const Fe& o) const { return *this + o; }
  Fe operator*(const Fe& o) const;
  Fe& operator+=(const Fe& o);
  Fe& operator*=(const Fe& o);
  Fe square() const { return *this * *this; }
  Fe pow(uint64_t e) const;
  Fe inv() const;  // throws InvalidArgument on zero

  friend bool operator==(const Fe& a, const Fe& b) { return a.f_ == b.f_ && a.v_ == b.v_; }

 private:
  friend class Field;
  Fe(const Field* f, Limbs v) : f_(f), v_(std::move(v)) {}
  void check_same(const Fe& o) const;

  const Field* f_ = nullptr;
  Limbs v_;
};

// Irreducibility over GF(2) of a polynomial given as a bit string whose
// leading bit is the top coefficient. Trial division up to degree 32, Rabin's
// test above that.
bool is_irreducible(const BitString& poly);
bool is_irreducible_trial_division(uint64_t poly);
bool is_irreducible_rabin(const BitString& poly);

// Carryless 64x64 -> 128 product, hardware when available.
void clmul64(uint64_t a, uint64_t b, uint64_t& lo, uint64_t& hi);
bool has_hardware_clmul();

}  // namespace pkem::gf2
