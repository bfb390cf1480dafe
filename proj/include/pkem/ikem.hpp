#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "pkem/bitstring.hpp"
#include "pkem/rng.hpp"
#include "pkem/source.hpp"
#include "pkem/uhash.hpp"

namespace pkem {

// cea: public reconciliation seed s, fresh s' per encapsulation.
// cca: fresh (s', s) per encapsulation, integrity-protecting hash.
// baseline: strongly-universal a*x+b hashes with fresh seeds on the wire.
enum class Mode : uint8_t { cea = 0, cca = 1, baseline = 2 };

std::string to_string(Mode m);
Mode mode_from_string(const std::string& s);  // throws InvalidArgument

inline constexpr uint64_t kDefaultReconCap = uint64_t{1} << 24;

struct IkemParams {
  IkemParams(Mode mode, SourceSpec source) : mode(mode), source(std::move(source)) {}

  Mode mode;
  SourceSpec source;
  unsigned t = 0;    // reconciliation tag bits
  unsigned ell = 0;  // key bits
  unsigned w = 0;    // width of s' (cca); set by validate() for the other modes
  unsigned r = 0;    // number of s' parts (cca)
  double nu = 0;     // reconciliation threshold
  double epsilon = 0, sigma = 0, delta = 0;
  unsigned q_e = 0, q_d = 0;
  uint64_t recon_cap = kDefaultReconCap;

  unsigned n() const { return source.n(); }
  unsigned x_bits() const { return static_cast<unsigned>(source.x_bits()); }
  unsigned s_prime_bits() const;
  unsigned s_bits() const;  // public seed (cea) or wire seed (cca, baseline)

  // Fills w and r defaults and checks every width constraint.
  void validate();
};

struct IkemCiphertext {
  BitString v;
  BitString s_prime;
  std::optional<BitString> s;  // absent in cea mode

  friend bool operator==(const IkemCiphertext&, const IkemCiphertext&) = default;
};

struct Encapsulation {
  BitString key;
  IkemCiphertext ct;
};

struct IkemInstance {
  SampleTriple sample;
  std::optional<BitString> public_seed;  // cea mode only
};

class Ikem {
 public:
  explicit Ikem(IkemParams params);  // validates

  const IkemParams& params() const { return p_; }

  IkemInstance gen(Rng& rng) const;
  std::optional<BitString> draw_public_seed(Rng& rng) const;

  Encapsulation encap(const SymbolString& x, Rng& rng, const std::optional<BitString>& public_seed) const;
  // Deterministic core of encap with the seeds supplied by the caller.
  Encapsulation encap_with(const BitString& x_bits, const BitString& s_prime, const BitString& s) const;
  // The ⊥ outcome is nullopt. Throws InfeasibleError when R(y) exceeds the cap.
  std::optional<BitString> decap(const SymbolString& y, const IkemCiphertext& c,
                                 const std::optional<BitString>& public_seed) const;

  BitString key_of(const BitString& x_bits, const BitString& s_prime) const;
  // Reconciliation tag; `s` is the public seed in cea mode.
  BitString tag_of(const BitString& x_bits, const BitString& s_prime, const BitString& s) const;

  // "IKEM" | version | mode | n u16 | t u16 | w u16 | v | s' | [s]
  Bytes encode(const IkemCiphertext& c) const;
  IkemCiphertext decode(std::span<const uint8_t> bytes) const;  // throws MalformedError

  static constexpr uint8_t kWireVersion = 1;

 private:
  const BitString& seed_for_tag(const IkemCiphertext& c, const std::optional<BitString>& public_seed) const;
  void check_shape(const IkemCiphertext& c) const;

  IkemParams p_;
  std::optional<uhash::CcaHash> cca_;
};

}  // namespace pkem
