#include "pkem/dem.hpp"

#include <openssl/crypto.h>

#include "pkem/errors.hpp"
#include "pkem/gf2.hpp"
#include "pkem/symmetric.hpp"

namespace pkem {

namespace {

void check_key(const DemKey& key, unsigned bits) {
  if (key.bits().size() != bits) throw InvalidArgument("DEM key has the wrong length");
}

Bytes aes_ctr_stream(const BitString& key, size_t len) {
  const sym::Aes256 aes(key.to_bytes());
  return sym::ctr_xor(aes, Bytes(len, 0));
}

Bytes xor_bytes(std::span<const uint8_t> a, const Bytes& b) {
  Bytes out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] ^ b[i];
  return out;
}

Bytes mac_tag(const BitString& key, std::span<const uint8_t> body) {
  const gf2::Field& f = gf2::Field::get(128);
  const gf2::Fe k1 = f.element(key.block(257, 384));
  const gf2::Fe k2 = f.element(key.block(385, 512));
  return sym::PolyMac(f).tag(k1, k2, body).to_bytes();
}

}  // namespace

std::string to_string(DemKind k) { return k == DemKind::ot ? "ot" : "otcca"; }

DemKind dem_kind_from_string(const std::string& s) {
  if (s == "ot") return DemKind::ot;
  if (s == "otcca") return DemKind::otcca;
  throw InvalidArgument("unknown DEM '" + s + "'");
}

void DemKey::consume() {
  if (used_) throw KeyReuseError("one-time DEM key used twice");
  used_ = true;
}

Bytes DemCiphertext::encode() const {
  Bytes out = body;
  out.insert(out.end(), tag.begin(), tag.end());
  return out;
}

DemCiphertext Dem::parse(std::span<const uint8_t> bytes) const {
  if (bytes.size() < tag_bytes()) throw MalformedError("DEM ciphertext shorter than its tag");
  const size_t body = bytes.size() - tag_bytes();
  return DemCiphertext{Bytes(bytes.begin(), bytes.begin() + static_cast<long>(body)),
                       Bytes(bytes.begin() + static_cast<long>(body), bytes.end())};
}

OtDem::OtDem() : keystream_(aes_ctr_stream) {}
OtDem::OtDem(KeystreamFn keystream) : keystream_(std::move(keystream)) {}

DemCiphertext OtDem::encrypt(DemKey& key, std::span<const uint8_t> msg) const {
  check_key(key, key_bits());
  key.consume();
  return DemCiphertext{xor_bytes(msg, keystream_(key.bits(), msg.size())), {}};
}

std::optional<Bytes> OtDem::decrypt(const DemKey& key, const DemCiphertext& c) const {
  check_key(key, key_bits());
  if (!c.tag.empty()) return std::nullopt;
  return xor_bytes(c.body, keystream_(key.bits(), c.body.size()));
}

DemCiphertext OtCcaDem::encrypt(DemKey& key, std::span<const uint8_t> msg) const {
  check_key(key, key_bits());
  key.consume();
  DemCiphertext c;
  c.body = xor_bytes(msg, aes_ctr_stream(key.bits().block(1, 256), msg.size()));
  c.tag = mac_tag(key.bits(), c.body);
  return c;
}

std::optional<Bytes> OtCcaDem::decrypt(const DemKey& key, const DemCiphertext& c) const {
  check_key(key, key_bits());
  if (c.tag.size() != tag_bytes()) return std::nullopt;
  const Bytes expect = mac_tag(key.bits(), c.body);
  if (CRYPTO_memcmp(expect.data(), c.tag.data(), expect.size()) != 0) return std::nullopt;
  return xor_bytes(c.body, aes_ctr_stream(key.bits().block(1, 256), c.body.size()));
}

std::unique_ptr<Dem> make_dem(DemKind kind) {
  if (kind == DemKind::ot) return std::make_unique<OtDem>();
  return std::make_unique<OtCcaDem>();
}

}  // namespace pkem
