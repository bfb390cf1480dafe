#include "pkem/ikem.hpp"

#include <cmath>
#include <cstring>

#include "pkem/errors.hpp"
#include "pkem/gf2.hpp"

namespace pkem {

namespace {

constexpr char kMagic[4] = {'I', 'K', 'E', 'M'};
constexpr size_t kHeaderBytes = 4 + 1 + 1 + 2 + 2 + 2;

void put_u16(Bytes& out, unsigned v) {
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v));
}

unsigned get_u16(std::span<const uint8_t> b, size_t at) { return (unsigned{b[at]} << 8) | b[at + 1]; }

void append(Bytes& out, const BitString& b) {
  const Bytes raw = b.to_bytes();
  out.insert(out.end(), raw.begin(), raw.end());
}

}  // namespace

std::string to_string(Mode m) {
  switch (m) {
    case Mode::cea: return "cea";
    case Mode::cca: return "cca";
    case Mode::baseline: return "baseline";
  }
  return "?";
}

Mode mode_from_string(const std::string& s) {
  if (s == "cea") return Mode::cea;
  if (s == "cca") return Mode::cca;
  if (s == "baseline") return Mode::baseline;
  throw InvalidArgument("unknown mode '" + s + "'");
}

unsigned IkemParams::s_prime_bits() const {
  switch (mode) {
    case Mode::cea: return x_bits();
    case Mode::cca: return w;
    case Mode::baseline: return 2 * x_bits();
  }
  return 0;
}

unsigned IkemParams::s_bits() const { return mode == Mode::baseline ? 2 * x_bits() : x_bits(); }

void IkemParams::validate() {
  const unsigned nb = x_bits();
  if (n() > 0xffff) throw InvalidArgument("n must fit in 16 bits");
  if (nb > gf2::kMaxFieldBits / 2) throw InvalidArgument("x is too wide for the supported fields");
  if (!std::isfinite(nu)) throw InvalidArgument("nu must be finite");
  if (recon_cap < 1) throw InvalidArgument("recon_cap must be positive");
  switch (mode) {
    case Mode::cea:
      w = nb;
      r = 0;
      if (t > nb) throw InvalidArgument("t must not exceed the bit length of x");
      if (ell < 1 || ell > nb) throw InvalidArgument("ell must lie in 1..bits(x)");
      break;
    case Mode::cca: {
      if (w == 0) w = nb;
      if (w < nb) throw InvalidArgument("w must be at least the bit length of x");
      if (w > 0xffff || w > gf2::kMaxFieldBits) throw InvalidArgument("w too large");
      if (t < 1 || 2 * t > nb) throw InvalidArgument("cca mode needs 1 <= t <= bits(x)/2");
      const unsigned want = uhash::choose_r(w, nb - t);
      if (r != 0 && r != want) throw InvalidArgument("r must be the smallest even value with w <= r(n-t)");
      r = want;
      if (ell < 1 || ell > w) throw InvalidArgument("ell must lie in 1..w");
      break;
    }
    case Mode::baseline:
      w = 2 * nb;
      r = 0;
      if (t > nb) throw InvalidArgument("t must not exceed the bit length of x");
      if (ell < 1 || ell > nb) throw InvalidArgument("ell must lie in 1..bits(x)");
      break;
  }
}

Ikem::Ikem(IkemParams params) : p_(std::move(params)) {
  p_.validate();
  if (p_.mode == Mode::cca) cca_.emplace(p_.x_bits(), p_.t, p_.w);
}

std::optional<BitString> Ikem::draw_public_seed(Rng& rng) const {
  if (p_.mode != Mode::cea) return std::nullopt;
  return rng.bits(p_.s_bits());
}

IkemInstance Ikem::gen(Rng& rng) const {
  IkemInstance inst;
  inst.public_seed = draw_public_seed(rng);
  inst.sample = sample(p_.source, rng);
  return inst;
}

BitString Ikem::key_of(const BitString& x_bits, const BitString& s_prime) const {
  if (p_.mode == Mode::baseline) return uhash::affine(x_bits, s_prime, p_.ell);
  return uhash::hprime(x_bits, s_prime, p_.ell);
}

BitString Ikem::tag_of(const BitString& x_bits, const BitString& s_prime, const BitString& s) const {
  switch (p_.mode) {
    case Mode::cea: return uhash::h_cea(x_bits, s, p_.t);
    case Mode::cca: return (*cca_)(x_bits, s_prime, s);
    case Mode::baseline: return uhash::affine(x_bits, s, p_.t);
  }
  return {};
}

Encapsulation Ikem::encap_with(const BitString& x_bits, const BitString& s_prime, const BitString& s) const {
  if (x_bits.size() != p_.x_bits()) throw InvalidArgument("x has the wrong width");
  if (s_prime.size() != p_.s_prime_bits() || s.size() != p_.s_bits()) throw InvalidArgument("seed has the wrong width");
  Encapsulation e;
  e.key = key_of(x_bits, s_prime);
  e.ct.v = tag_of(x_bits, s_prime, s);
  e.ct.s_prime = s_prime;
  if (p_.mode != Mode::cea) e.ct.s = s;
  return e;
}

Encapsulation Ikem::encap(const SymbolString& x, Rng& rng, const std::optional<BitString>& public_seed) const {
  const BitString xb = p_.source.x_to_bits(x);
  const BitString s_prime = rng.bits(p_.s_prime_bits());
  if (p_.mode == Mode::cea) {
    if (!public_seed) throw InvalidArgument("cea mode needs the public seed");
    return encap_with(xb, s_prime, *public_seed);
  }
  return encap_with(xb, s_prime, rng.bits(p_.s_bits()));
}

void Ikem::check_shape(const IkemCiphertext& c) const {
  if (c.v.size() != p_.t || c.s_prime.size() != p_.s_prime_bits())
    throw InvalidArgument("ciphertext does not match the parameters");
  if ((p_.mode == Mode::cea) == c.s.has_value()) throw InvalidArgument("ciphertext seed presence does not match the mode");
  if (c.s && c.s->size() != p_.s_bits()) throw InvalidArgument("ciphertext seed has the wrong width");
}

const BitString& Ikem::seed_for_tag(const IkemCiphertext& c, const std::optional<BitString>& public_seed) const {
  if (p_.mode != Mode::cea) return *c.s;
  if (!public_seed || public_seed->size() != p_.s_bits()) throw InvalidArgument("cea mode needs the public seed");
  return *public_seed;
}

std::optional<BitString> Ikem::decap(const SymbolString& y, const IkemCiphertext& c,
                                     const std::optional<BitString>& public_seed) const {
  check_shape(c);
  const BitString& s = seed_for_tag(c, public_seed);
  std::optional<uhash::CcaHash::Prepared> prepared;
  if (cca_) prepared = cca_->prepare(c.s_prime, s);

  unsigned matches = 0;
  BitString found;
  for_each_recon_member(p_.source, y, p_.nu, p_.recon_cap, [&](const SymbolString& cand, double) {
    if (matches > 1) return;
    const BitString xb = p_.source.x_to_bits(cand);
    const BitString tag = cca_ ? cca_->eval(xb, *prepared) : tag_of(xb, c.s_prime, s);
    if (tag == c.v && ++matches == 1) found = xb;
  });
  if (matches != 1) return std::nullopt;
  return key_of(found, c.s_prime);
}

Bytes Ikem::encode(const IkemCiphertext& c) const {
  check_shape(c);
  Bytes out(kMagic, kMagic + 4);
  out.push_back(kWireVersion);
  out.push_back(static_cast<uint8_t>(p_.mode));
  put_u16(out, p_.n());
  put_u16(out, p_.t);
  put_u16(out, p_.s_prime_bits());
  append(out, c.v);
  append(out, c.s_prime);
  if (c.s) append(out, *c.s);
  return out;
}

IkemCiphertext Ikem::decode(std::span<const uint8_t> b) const {
  if (b.size() < kHeaderBytes || std::memcmp(b.data(), kMagic, 4) != 0) throw MalformedError("not an IKEM ciphertext");
  if (b[4] != kWireVersion) throw MalformedError("unsupported IKEM version");
  if (b[5] != static_cast<uint8_t>(p_.mode)) throw MalformedError("IKEM mode does not match the parameters");
  if (get_u16(b, 6) != p_.n() || get_u16(b, 8) != p_.t || get_u16(b, 10) != p_.s_prime_bits())
    throw MalformedError("IKEM header does not match the parameters");
  const size_t lv = (p_.t + 7) / 8, lsp = (p_.s_prime_bits() + 7) / 8;
  const size_t ls = p_.mode == Mode::cea ? 0 : (p_.s_bits() + 7) / 8;
  if (b.size() != kHeaderBytes + lv + lsp + ls) throw MalformedError("IKEM ciphertext has the wrong length");
  IkemCiphertext c;
  size_t at = kHeaderBytes;
  c.v = BitString::from_bytes(b.subspan(at, lv), p_.t);
  at += lv;
  c.s_prime = BitString::from_bytes(b.subspan(at, lsp), p_.s_prime_bits());
  at += lsp;
  if (ls != 0) c.s = BitString::from_bytes(b.subspan(at, ls), p_.s_bits());
  return c;
}

}  // namespace pkem
