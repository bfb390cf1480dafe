#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "pkem/bitstring.hpp"

namespace pkem {

enum class DemKind { ot, otcca };
std::string to_string(DemKind k);
DemKind dem_kind_from_string(const std::string& s);

// A one-time DEM key. Encryption marks it used; a second encryption throws
// KeyReuseError.
class DemKey {
 public:
  explicit DemKey(BitString bits) : bits_(std::move(bits)) {}
  const BitString& bits() const { return bits_; }
  bool used() const { return used_; }
  void consume();

 private:
  BitString bits_;
  bool used_ = false;
};

struct DemCiphertext {
  Bytes body;
  Bytes tag;  // empty for the ot DEM

  Bytes encode() const;
  friend bool operator==(const DemCiphertext&, const DemCiphertext&) = default;
};

class Dem {
 public:
  virtual ~Dem() = default;
  virtual DemKind kind() const = 0;
  virtual unsigned key_bits() const = 0;
  virtual size_t tag_bytes() const = 0;
  virtual DemCiphertext encrypt(DemKey& key, std::span<const uint8_t> msg) const = 0;
  // nullopt is ⊥
  virtual std::optional<Bytes> decrypt(const DemKey& key, const DemCiphertext& c) const = 0;

  // body || tag split; throws MalformedError when shorter than the tag.
  DemCiphertext parse(std::span<const uint8_t> bytes) const;
};

// Keystream of `len` bytes for a key; the default is AES-256-CTR.
using KeystreamFn = std::function<Bytes(const BitString& key, size_t len)>;

// One-time secure DEM: body = msg xor AES-256-CTR(k), 256-bit key.
class OtDem : public Dem {
 public:
  OtDem();
  explicit OtDem(KeystreamFn keystream);  // for distribution tests
  DemKind kind() const override { return DemKind::ot; }
  unsigned key_bits() const override { return 256; }
  size_t tag_bytes() const override { return 0; }
  DemCiphertext encrypt(DemKey& key, std::span<const uint8_t> msg) const override;
  std::optional<Bytes> decrypt(const DemKey& key, const DemCiphertext& c) const override;

 private:
  KeystreamFn keystream_;
};

// One-time CCA secure DEM: encrypt-then-MAC with AES-256-CTR under k_e and
// the GF(2^128) polynomial MAC under (k_m1, k_m2). Key k_e || k_m1 || k_m2.
class OtCcaDem : public Dem {
 public:
  DemKind kind() const override { return DemKind::otcca; }
  unsigned key_bits() const override { return 512; }
  size_t tag_bytes() const override { return 16; }
  DemCiphertext encrypt(DemKey& key, std::span<const uint8_t> msg) const override;
  std::optional<Bytes> decrypt(const DemKey& key, const DemCiphertext& c) const override;
};

std::unique_ptr<Dem> make_dem(DemKind kind);

}  // namespace pkem
