#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>

#include "pkem/bitstring.hpp"
#include "pkem/gf2.hpp"

namespace pkem::sym {

using Block = std::array<uint8_t, 16>;

// AES-256 block cipher (encryption direction only).
class Aes256 {
 public:
  explicit Aes256(std::span<const uint8_t> key);  // 32 bytes
  Aes256(Aes256&&) noexcept;
  Aes256& operator=(Aes256&&) noexcept;
  ~Aes256();

  Block encrypt(const Block& in) const;
  void encrypt_blocks(std::span<const uint8_t> in, std::span<uint8_t> out) const;  // whole blocks

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// CTR mode with a 128-bit big-endian counter starting at zero.
Bytes ctr_xor(const Aes256& aes, std::span<const uint8_t> data);

// AES-CMAC (NIST SP 800-38B).
Block cmac(const Aes256& aes, std::span<const uint8_t> msg);

std::array<uint8_t, 32> sha256(std::span<const uint8_t> data);

// Wegman-Carter polynomial MAC over GF(2^m), m a multiple of 8. With
// message blocks b_1..b_L (last one zero-padded on the right) and the
// message bit length as the final block,
//   tag = b_1 k1^(L+1) + ... + b_L k1^2 + len k1 + k2.
// Two distinct messages of at most L blocks collide on a fixed tag offset
// for at most L+1 values of k1.
class PolyMac {
 public:
  explicit PolyMac(const gf2::Field& field);
  size_t block_bytes() const { return bytes_; }
  gf2::Fe tag(const gf2::Fe& k1, const gf2::Fe& k2, std::span<const uint8_t> msg) const;

 private:
  const gf2::Field* f_;
  size_t bytes_;
};

}  // namespace pkem::sym
