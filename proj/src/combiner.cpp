#include "pkem/combiner.hpp"

#include <algorithm>
#include <cstring>

#include "pkem/errors.hpp"
#include "pkem/symmetric.hpp"
#include "pkem/uhash.hpp"

namespace pkem::comb {

namespace {

constexpr char kMagic[4] = {'C', 'M', 'B', '1'};

BitString sha256_expand(std::span<const uint8_t> seed, unsigned bits) {
  Bytes out;
  for (uint32_t i = 0; out.size() * 8 < bits; ++i) {
    Bytes in = {static_cast<uint8_t>(i >> 24), static_cast<uint8_t>(i >> 16), static_cast<uint8_t>(i >> 8),
                static_cast<uint8_t>(i)};
    in.insert(in.end(), seed.begin(), seed.end());
    const auto h = sym::sha256(in);
    out.insert(out.end(), h.begin(), h.end());
  }
  out.resize((bits + 7) / 8);
  if (bits % 8 != 0) out[0] &= static_cast<uint8_t>((1u << (bits % 8)) - 1);
  return BitString::from_bytes(out, bits);
}

}  // namespace

TestDoubleKem::TestDoubleKem(unsigned key_bits, bool broken) : bits_(key_bits), broken_(broken) {
  if (bits_ == 0) throw InvalidArgument("key length must be positive");
}

KeyPair TestDoubleKem::gen(Rng& rng) const {
  Bytes k(32);
  rng.fill(k);
  return KeyPair{k, k};
}

BitString TestDoubleKem::key_from_seed(std::span<const uint8_t> r) const {
  if (broken_) return BitString(bits_);
  return sha256_expand(r, bits_);
}

KemEncapsulation TestDoubleKem::enc(const Bytes& pk, Rng& rng) const {
  Bytes r(16);
  rng.fill(r);
  const sym::Aes256 aes(pk);
  return KemEncapsulation{key_from_seed(r), sym::ctr_xor(aes, r)};
}

std::optional<BitString> TestDoubleKem::dec(const Bytes& sk, std::span<const uint8_t> c) const {
  if (c.size() != ciphertext_bytes()) return std::nullopt;
  const sym::Aes256 aes(sk);
  const Bytes r = sym::ctr_xor(aes, c);
  return key_from_seed(r);
}

unsigned ItPrf::width_for(size_t input_bytes, unsigned min_bits) {
  const size_t need = std::max<size_t>(16 + 8 * input_bytes, min_bits);
  if (need <= 64) return static_cast<unsigned>(need);
  size_t m = (need + 63) / 64 * 64;
  for (size_t table : {80, 96, 128, 256})
    if (table >= need) m = std::min(m, table);
  if (m > gf2::kMaxFieldBits) throw InvalidArgument("PRF input too long");
  return static_cast<unsigned>(m);
}

ItPrf::ItPrf(unsigned m, unsigned degree, unsigned out_bits) : m_(m), degree_(degree), out_(out_bits) {
  if (out_ < 1 || out_ > m_) throw InvalidArgument("PRF output must lie in 1..m bits");
  gf2::Field::get(m_);
}

gf2::Fe ItPrf::encode_input(std::span<const uint8_t> input) const {
  if (input.size() > 0xffff) throw InvalidArgument("PRF input too long");
  Bytes enc = {static_cast<uint8_t>(input.size() >> 8), static_cast<uint8_t>(input.size())};
  enc.insert(enc.end(), input.begin(), input.end());
  if (16 + 8 * input.size() > m_) throw InvalidArgument("PRF input too long for the field");
  return gf2::Field::get(m_).element(BitString::from_bytes(enc, enc.size() * 8).resized(m_));
}

BitString ItPrf::eval(const BitString& key, std::span<const uint8_t> input) const {
  if (key.size() != key_bits()) throw InvalidArgument("PRF key has the wrong length");
  const gf2::Field& f = gf2::Field::get(m_);
  std::vector<gf2::Fe> coeffs;
  for (unsigned i = 0; i <= degree_; ++i) coeffs.push_back(f.element(key.block(size_t{i} * m_ + 1, size_t{i + 1} * m_)));
  return uhash::twise_poly(coeffs, encode_input(input), out_);
}

CompPrf::CompPrf(unsigned out_bits) : out_(out_bits) {
  if (out_ < 1) throw InvalidArgument("PRF output must be nonempty");
}

BitString CompPrf::eval(const BitString& key, std::span<const uint8_t> input) const {
  if (key.size() != key_bits()) throw InvalidArgument("PRF key has the wrong length");
  const sym::Aes256 aes(key.to_bytes());
  Bytes out;
  for (uint32_t i = 0; out.size() * 8 < out_; ++i) {
    Bytes msg = {static_cast<uint8_t>(i >> 24), static_cast<uint8_t>(i >> 16), static_cast<uint8_t>(i >> 8),
                 static_cast<uint8_t>(i)};
    msg.insert(msg.end(), input.begin(), input.end());
    const auto t = sym::cmac(aes, msg);
    out.insert(out.end(), t.begin(), t.end());
  }
  // leading out_ bits of the stream
  const BitString all = BitString::from_bytes(out, out.size() * 8);
  return all.block(1, out_);
}

std::string to_string(Core c) { return c == Core::ptx ? "ptx" : "xor"; }

Core core_from_string(const std::string& s) {
  if (s == "xor") return Core::xor_keys;
  if (s == "ptx") return Core::ptx;
  throw InvalidArgument("unknown combiner core '" + s + "'");
}

std::optional<BitString> combine_xor(const std::optional<BitString>& k1, const std::optional<BitString>& k2) {
  if (!k1 || !k2) return std::nullopt;
  return *k1 ^ *k2;
}

Bytes CombinedCiphertext::encode() const {
  Bytes out(kMagic, kMagic + 4);
  const auto len = static_cast<uint32_t>(c1.size());
  for (int i = 3; i >= 0; --i) out.push_back(static_cast<uint8_t>(len >> (8 * i)));
  out.insert(out.end(), c1.begin(), c1.end());
  out.insert(out.end(), c2.begin(), c2.end());
  return out;
}

CombinedCiphertext CombinedCiphertext::decode(std::span<const uint8_t> b) {
  if (b.size() < 8 || std::memcmp(b.data(), kMagic, 4) != 0) throw MalformedError("not a combined ciphertext");
  uint32_t len = 0;
  for (int i = 0; i < 4; ++i) len = (len << 8) | b[4 + i];
  if (len > b.size() - 8) throw MalformedError("combined ciphertext truncated");
  CombinedCiphertext c;
  c.c1.assign(b.begin() + 8, b.begin() + 8 + len);
  c.c2.assign(b.begin() + 8 + len, b.end());
  return c;
}

unsigned CombinedKem::ptx_ikem_key_bits(const Kem& kem, unsigned q_d, unsigned out_bits) {
  return (q_d + 2) * ItPrf::width_for(kem.ciphertext_bytes(), out_bits);
}

CombinedKem::CombinedKem(const Ikem& ikem, const Kem& kem, Core core, unsigned out_bits)
    : ikem_(&ikem), kem_(&kem), core_(core), out_(out_bits) {
  const unsigned ell = ikem.params().ell;
  if (core_ == Core::xor_keys) {
    if (kem.key_bits() != ell) throw InvalidArgument("xor combiner needs equal key lengths");
    return;
  }
  const unsigned m = ItPrf::width_for(kem.ciphertext_bytes(), out_);
  f1_.emplace(m, ikem.params().q_d + 1, out_);
  if (ell != f1_->key_bits())
    throw InvalidArgument("ptx combiner needs an iKEM key of " + std::to_string(f1_->key_bits()) + " bits");
  f2_.emplace(out_);
  if (kem.key_bits() != f2_->key_bits()) throw InvalidArgument("ptx combiner needs a 256-bit KEM key");
}

BitString CombinedKem::ptx(const BitString& k1, const BitString& k2, const CombinedCiphertext& c) const {
  f1_calls_.fetch_add(1);
  return f1_->eval(k1, c.c2) ^ f2_->eval(k2, c.c1);
}

CombinedEncapsulation CombinedKem::enc(const SymbolString& x, const Bytes& pk, Rng& rng,
                                       const std::optional<BitString>& public_seed) const {
  const Encapsulation e1 = ikem_->encap(x, rng, public_seed);
  const KemEncapsulation e2 = kem_->enc(pk, rng);
  CombinedEncapsulation out;
  out.ct = CombinedCiphertext{ikem_->encode(e1.ct), e2.c};
  out.key = core_ == Core::ptx ? ptx(e1.key, e2.key, out.ct) : e1.key ^ e2.key;
  return out;
}

std::optional<BitString> CombinedKem::dec(const SymbolString& y, const Bytes& sk, const CombinedCiphertext& c,
                                          const std::optional<BitString>& public_seed) const {
  const auto k1 = ikem_->decap(y, ikem_->decode(c.c1), public_seed);
  const auto k2 = kem_->dec(sk, c.c2);
  if (!k1 || !k2) return std::nullopt;
  if (core_ == Core::ptx) return ptx(*k1, *k2, c);
  return combine_xor(k1, k2);
}

}  // namespace pkem::comb
