#pragma once

#include <atomic>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pkem/bitstring.hpp"
#include "pkem/gf2.hpp"
#include "pkem/ikem.hpp"
#include "pkem/rng.hpp"

namespace pkem::comb {

struct KeyPair {
  Bytes pk, sk;
};

struct KemEncapsulation {
  BitString key;
  Bytes c;
};

// A computationally secure public-key KEM.
class Kem {
 public:
  virtual ~Kem() = default;
  virtual unsigned key_bits() const = 0;
  virtual size_t ciphertext_bytes() const = 0;
  virtual KeyPair gen(Rng& rng) const = 0;
  virtual KemEncapsulation enc(const Bytes& pk, Rng& rng) const = 0;
  virtual std::optional<BitString> dec(const Bytes& sk, std::span<const uint8_t> c) const = 0;
};

// Deterministic stand-in KEM with perfect correctness: pk = sk = a 32-byte
// AES key K, c = r xor AES-CTR_K (r 16 random bytes), key = SHA-256
// expansion of r. In broken mode every key is all-zero.
class TestDoubleKem : public Kem {
 public:
  explicit TestDoubleKem(unsigned key_bits, bool broken = false);
  unsigned key_bits() const override { return bits_; }
  size_t ciphertext_bytes() const override { return 16; }
  KeyPair gen(Rng& rng) const override;
  KemEncapsulation enc(const Bytes& pk, Rng& rng) const override;
  std::optional<BitString> dec(const Bytes& sk, std::span<const uint8_t> c) const override;
  bool broken() const { return broken_; }

 private:
  BitString key_from_seed(std::span<const uint8_t> r) const;
  unsigned bits_;
  bool broken_;
};

// Information-theoretic PRF: a degree-d polynomial over GF(2^m) keyed by its
// d+1 coefficients, truncated to out_bits. Inputs are byte strings encoded
// as u16 length || bytes, read big-endian into GF(2^m).
class ItPrf {
 public:
  ItPrf(unsigned m, unsigned degree, unsigned out_bits);
  // Smallest supported width holding an encoded input of `input_bytes` and
  // at least `min_bits`: 1..64, 80, 96, 128, 256, or a multiple of 64.
  static unsigned width_for(size_t input_bytes, unsigned min_bits = 0);

  unsigned m() const { return m_; }
  unsigned key_bits() const { return (degree_ + 1) * m_; }
  unsigned out_bits() const { return out_; }
  gf2::Fe encode_input(std::span<const uint8_t> input) const;
  BitString eval(const BitString& key, std::span<const uint8_t> input) const;

 private:
  unsigned m_, degree_, out_;
};

// AES-256-CMAC, extended to out_bits by CMAC(K, be32(i) || x) for i = 0,1,...
// Outputs for different lengths share prefixes.
class CompPrf {
 public:
  explicit CompPrf(unsigned out_bits);
  unsigned key_bits() const { return 256; }
  unsigned out_bits() const { return out_; }
  BitString eval(const BitString& key, std::span<const uint8_t> input) const;

 private:
  unsigned out_;
};

enum class Core { xor_keys, ptx };
std::string to_string(Core c);
Core core_from_string(const std::string& s);

std::optional<BitString> combine_xor(const std::optional<BitString>& k1, const std::optional<BitString>& k2);

struct CombinedCiphertext {
  Bytes c1;  // encoded iKEM ciphertext
  Bytes c2;  // public-key KEM ciphertext

  // "CMB1" | c1_len u32 | c1 | c2
  Bytes encode() const;
  static CombinedCiphertext decode(std::span<const uint8_t> bytes);
};

struct CombinedEncapsulation {
  BitString key;
  CombinedCiphertext ct;
};

// Combines an iKEM with a public-key KEM. xor_keys: k1 xor k2, both ell bits.
// ptx: F1(k1, c2) xor F2(k2, c1) with F1 a (q_d+2)-wise independent ItPrf
// and F2 the CompPrf; the iKEM key length must equal F1's key length. F1's
// field is wide enough for both the encoded c2 and the output.
class CombinedKem {
 public:
  CombinedKem(const Ikem& ikem, const Kem& kem, Core core, unsigned out_bits = 256);

  Core core() const { return core_; }
  unsigned key_bits() const { return core_ == Core::ptx ? out_ : ikem_->params().ell; }
  // Required iKEM key length for a ptx combination with this KEM.
  static unsigned ptx_ikem_key_bits(const Kem& kem, unsigned q_d, unsigned out_bits = 256);

  CombinedEncapsulation enc(const SymbolString& x, const Bytes& pk, Rng& rng,
                            const std::optional<BitString>& public_seed) const;
  std::optional<BitString> dec(const SymbolString& y, const Bytes& sk, const CombinedCiphertext& c,
                               const std::optional<BitString>& public_seed) const;

  uint64_t f1_calls() const { return f1_calls_.load(); }

 private:
  BitString ptx(const BitString& k1, const BitString& k2, const CombinedCiphertext& c) const;

  const Ikem* ikem_;
  const Kem* kem_;
  Core core_;
  unsigned out_;
  std::optional<ItPrf> f1_;
  std::optional<CompPrf> f2_;
  mutable std::atomic<uint64_t> f1_calls_{0};
};

}  // namespace pkem::comb
