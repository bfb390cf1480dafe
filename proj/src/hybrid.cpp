#include "pkem/hybrid.hpp"

#include <cstring>

#include "pkem/errors.hpp"

namespace pkem {

namespace {

constexpr char kMagic[4] = {'H', 'E', 'N', 'V'};
constexpr size_t kHeaderBytes = 4 + 1 + 4;

}  // namespace

bool HybridScheme::compatible(Mode mode, DemKind dem) {
  return mode == Mode::cca ? dem == DemKind::otcca : dem == DemKind::ot;
}

HybridScheme::HybridScheme(const Ikem& ikem, const Dem& dem) : ikem_(&ikem), dem_(&dem) {
  if (!compatible(ikem.params().mode, dem.kind()))
    throw InvalidArgument("iKEM mode " + to_string(ikem.params().mode) + " cannot be paired with the " +
                          to_string(dem.kind()) + " DEM");
  if (ikem.params().ell != dem.key_bits())
    throw InvalidArgument("iKEM key length " + std::to_string(ikem.params().ell) + " differs from the DEM key length " +
                          std::to_string(dem.key_bits()));
}

HybridCiphertext HybridScheme::encrypt(const SymbolString& x, std::span<const uint8_t> msg, Rng& rng,
                                       const std::optional<BitString>& public_seed) const {
  Encapsulation e = ikem_->encap(x, rng, public_seed);
  DemKey key(std::move(e.key));
  return HybridCiphertext{std::move(e.ct), dem_->encrypt(key, msg)};
}

std::optional<Bytes> HybridScheme::decrypt(const SymbolString& y, const HybridCiphertext& c,
                                           const std::optional<BitString>& public_seed) const {
  auto k = ikem_->decap(y, c.c1, public_seed);
  if (!k) return std::nullopt;
  return dem_->decrypt(DemKey(std::move(*k)), c.c2);
}

Bytes HybridScheme::encode(const HybridCiphertext& c) const {
  const Bytes c1 = ikem_->encode(c.c1);
  const Bytes c2 = c.c2.encode();
  Bytes out(kMagic, kMagic + 4);
  out.push_back(kEnvelopeVersion);
  const auto len = static_cast<uint32_t>(c1.size());
  for (int i = 3; i >= 0; --i) out.push_back(static_cast<uint8_t>(len >> (8 * i)));
  out.insert(out.end(), c1.begin(), c1.end());
  out.insert(out.end(), c2.begin(), c2.end());
  return out;
}

HybridCiphertext HybridScheme::decode(std::span<const uint8_t> b) const {
  if (b.size() < kHeaderBytes || std::memcmp(b.data(), kMagic, 4) != 0) throw MalformedError("not a hybrid envelope");
  if (b[4] != kEnvelopeVersion) throw MalformedError("unsupported envelope version");
  uint32_t len = 0;
  for (int i = 0; i < 4; ++i) len = (len << 8) | b[5 + i];
  if (len > b.size() - kHeaderBytes) throw MalformedError("envelope truncated");
  HybridCiphertext c;
  c.c1 = ikem_->decode(b.subspan(kHeaderBytes, len));
  c.c2 = dem_->parse(b.subspan(kHeaderBytes + len));
  return c;
}

}  // namespace pkem
