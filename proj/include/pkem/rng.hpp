#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <string_view>

#include "pkem/bitstring.hpp"

namespace pkem {

// Deterministic random bit generator: AES-256 in counter mode keyed by
// SHA-256 of the seed. Satisfies UniformRandomBitGenerator.
class Rng {
 public:
  using result_type = uint64_t;

  explicit Rng(std::span<const uint8_t> seed);
  static Rng from_hex(std::string_view hex);  // throws MalformedError
  static Rng from_os();                       // 32 bytes from std::random_device

  Rng(Rng&&) noexcept;
  Rng& operator=(Rng&&) noexcept;
  ~Rng();

  // Independent child stream, a pure function of this generator's key and `stream`.
  Rng fork(uint64_t stream) const;

  void fill(std::span<uint8_t> out);
  uint64_t next_u64();
  uint64_t operator()() { return next_u64(); }
  static constexpr uint64_t min() { return 0; }
  static constexpr uint64_t max() { return std::numeric_limits<uint64_t>::max(); }

  double uniform01();                    // 53-bit resolution in [0,1)
  uint64_t below(uint64_t bound);        // unbiased, bound > 0
  BitString bits(size_t nbits);

 private:
  struct Impl;
  explicit Rng(const std::array<uint8_t, 32>& key);
  void refill();

  std::array<uint8_t, 32> key_{};
  std::unique_ptr<Impl> impl_;
};

}  // namespace pkem
