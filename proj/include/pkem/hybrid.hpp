#pragma once

#include <optional>
#include <span>

#include "pkem/dem.hpp"
#include "pkem/ikem.hpp"

namespace pkem {

struct HybridCiphertext {
  IkemCiphertext c1;
  DemCiphertext c2;

  friend bool operator==(const HybridCiphertext&, const HybridCiphertext&) = default;
};

// KEM/DEM composition. Accepted pairings: cea or baseline iKEM with the ot
// DEM (CPA-secure), cca iKEM with the otcca DEM (CCA-secure). The iKEM key
// length must equal the DEM key length. Holds references to both parts.
class HybridScheme {
 public:
  HybridScheme(const Ikem& ikem, const Dem& dem);

  static bool compatible(Mode mode, DemKind dem);

  const Ikem& ikem() const { return *ikem_; }
  const Dem& dem() const { return *dem_; }

  HybridCiphertext encrypt(const SymbolString& x, std::span<const uint8_t> msg, Rng& rng,
                           const std::optional<BitString>& public_seed) const;
  // nullopt is ⊥ (iKEM or DEM rejected)
  std::optional<Bytes> decrypt(const SymbolString& y, const HybridCiphertext& c,
                               const std::optional<BitString>& public_seed) const;

  // "HENV" | version u8 | c1_len u32 | c1 | c2
  Bytes encode(const HybridCiphertext& c) const;
  HybridCiphertext decode(std::span<const uint8_t> bytes) const;  // throws MalformedError

  static constexpr uint8_t kEnvelopeVersion = 1;

 private:
  const Ikem* ikem_;
  const Dem* dem_;
};

}  // namespace pkem
