#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/container/small_vector.hpp>

namespace pkem {

using Bytes = std::vector<uint8_t>;
using Limbs = boost::container::small_vector<uint64_t, 4>;

// A string of `size()` bits, indexed 1..size() from the most significant end.
// Stored as an unsigned integer: limb 0 holds the least significant 64 bits,
// so bit i sits at integer position size()-i.
class BitString {
 public:
  BitString() = default;
  explicit BitString(size_t nbits);

  static BitString from_u64(uint64_t value, size_t nbits);
  static BitString from_limbs(const Limbs& limbs, size_t nbits);
  // Big-endian, ceil(nbits/8) bytes, padding in the top bits of byte 0.
  // Throws MalformedError on a length mismatch or nonzero padding.
  static BitString from_bytes(std::span<const uint8_t> bytes, size_t nbits);
  static BitString from_hex(std::string_view hex, size_t nbits);
  static BitString from_binary(std::string_view bits);  // "1101"

  size_t size() const { return nbits_; }
  bool empty() const { return nbits_ == 0; }
  const Limbs& limbs() const { return limbs_; }

  bool bit(size_t i) const;  // 1-based, MSB first
  void set_bit(size_t i, bool value);

  // [x]_{i..j}, inclusive, 1-based, MSB first. i > j yields the empty string.
  BitString block(size_t i, size_t j) const;
  BitString concat(const BitString& low) const;
  BitString resized(size_t nbits) const;  // keeps the low bits
  BitString operator^(const BitString& o) const;
  BitString& operator^=(const BitString& o);

  uint64_t to_u64() const;  // requires size() <= 64
  Bytes to_bytes() const;
  std::string to_hex() const;
  std::string to_binary() const;
  size_t popcount() const;
  bool is_zero() const;

  friend bool operator==(const BitString& a, const BitString& b) {
    return a.nbits_ == b.nbits_ && a.limbs_ == b.limbs_;
  }
  friend bool operator<(const BitString& a, const BitString& b);

 private:
  void trim();
  size_t nbits_ = 0;
  Limbs limbs_;
};

size_t limbs_for(size_t nbits);

}  // namespace pkem
