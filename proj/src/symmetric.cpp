#include "pkem/symmetric.hpp"

#include <openssl/evp.h>
#include <openssl/sha.h>

#include <algorithm>

#include "pkem/errors.hpp"

namespace pkem::sym {

struct Aes256::Impl {
  EVP_CIPHER_CTX* ctx = nullptr;
  ~Impl() { EVP_CIPHER_CTX_free(ctx); }
};

Aes256::Aes256(std::span<const uint8_t> key) : impl_(std::make_unique<Impl>()) {
  if (key.size() != 32) throw InvalidArgument("AES-256 needs a 32-byte key");
  impl_->ctx = EVP_CIPHER_CTX_new();
  if (impl_->ctx == nullptr || EVP_EncryptInit_ex(impl_->ctx, EVP_aes_256_ecb(), nullptr, key.data(), nullptr) != 1)
    throw Error("AES initialisation failed");
  EVP_CIPHER_CTX_set_padding(impl_->ctx, 0);
}

Aes256::Aes256(Aes256&&) noexcept = default;
Aes256& Aes256::operator=(Aes256&&) noexcept = default;
Aes256::~Aes256() = default;

void Aes256::encrypt_blocks(std::span<const uint8_t> in, std::span<uint8_t> out) const {
  if (in.size() % 16 != 0 || out.size() != in.size()) throw InvalidArgument("AES input must be whole blocks");
  if (in.empty()) return;
  int outl = 0;
  if (EVP_EncryptUpdate(impl_->ctx, out.data(), &outl, in.data(), static_cast<int>(in.size())) != 1 ||
      outl != static_cast<int>(in.size()))
    throw Error("AES encryption failed");
}

Block Aes256::encrypt(const Block& in) const {
  Block out{};
  encrypt_blocks(in, out);
  return out;
}

Bytes ctr_xor(const Aes256& aes, std::span<const uint8_t> data) {
  const size_t nblocks = (data.size() + 15) / 16;
  Bytes counters(nblocks * 16, 0), stream(nblocks * 16);
  for (size_t i = 0; i < nblocks; ++i)
    for (int k = 0; k < 8; ++k) counters[16 * i + 8 + k] = static_cast<uint8_t>(uint64_t{i} >> (56 - 8 * k));
  aes.encrypt_blocks(counters, stream);
  Bytes out(data.size());
  for (size_t i = 0; i < data.size(); ++i) out[i] = data[i] ^ stream[i];
  return out;
}

namespace {

Block dbl(const Block& b) {
  Block out{};
  for (int i = 0; i < 16; ++i) out[i] = static_cast<uint8_t>((b[i] << 1) | (i < 15 ? b[i + 1] >> 7 : 0));
  if (b[0] & 0x80) out[15] ^= 0x87;
  return out;
}

}  // namespace

Block cmac(const Aes256& aes, std::span<const uint8_t> msg) {
  const Block k1 = dbl(aes.encrypt(Block{}));
  const Block k2 = dbl(k1);
  const size_t nblocks = msg.empty() ? 1 : (msg.size() + 15) / 16;
  const bool complete = !msg.empty() && msg.size() % 16 == 0;
  Block x{};
  for (size_t i = 0; i < nblocks; ++i) {
    Block m{};
    const size_t off = 16 * i;
    const size_t take = std::min<size_t>(16, msg.size() - std::min(msg.size(), off));
    std::copy_n(msg.begin() + static_cast<long>(off), take, m.begin());
    if (i + 1 == nblocks) {
      if (complete) {
        for (int k = 0; k < 16; ++k) m[k] ^= k1[k];
      } else {
        m[take] = 0x80;
        for (int k = 0; k < 16; ++k) m[k] ^= k2[k];
      }
    }
    for (int k = 0; k < 16; ++k) x[k] ^= m[k];
    x = aes.encrypt(x);
  }
  return x;
}

std::array<uint8_t, 32> sha256(std::span<const uint8_t> data) {
  std::array<uint8_t, 32> out{};
  SHA256(data.data(), data.size(), out.data());
  return out;
}

PolyMac::PolyMac(const gf2::Field& field) : f_(&field), bytes_(field.bits() / 8) {
  if (field.bits() % 8 != 0) throw InvalidArgument("MAC field width must be a multiple of 8");
}

gf2::Fe PolyMac::tag(const gf2::Fe& k1, const gf2::Fe& k2, std::span<const uint8_t> msg) const {
  if (&k1.field() != f_ || &k2.field() != f_) throw ContextMismatch("MAC keys belong to a different field");
  gf2::Fe acc = f_->zero();
  Bytes blk(bytes_);
  for (size_t off = 0; off < msg.size(); off += bytes_) {
    std::fill(blk.begin(), blk.end(), 0);
    std::copy_n(msg.begin() + static_cast<long>(off), std::min(bytes_, msg.size() - off), blk.begin());
    acc = (acc + f_->from_bytes(blk)) * k1;
  }
  // bit length, reduced to the low min(m, 64) bits
  const uint64_t bitlen = uint64_t{msg.size()} * 8;
  const unsigned lw = std::min(f_->bits(), 64u);
  const uint64_t len = lw == 64 ? bitlen : bitlen & ((uint64_t{1} << lw) - 1);
  acc = (acc + f_->from_u64(len)) * k1;
  return acc + k2;
}

}  // namespace pkem::sym
