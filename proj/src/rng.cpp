#include "pkem/rng.hpp"

#include <openssl/evp.h>
#include <openssl/sha.h>

#include <algorithm>
#include <cstring>
#include <iterator>
#include <random>
#include <vector>

#include <boost/algorithm/hex.hpp>

#include "pkem/errors.hpp"

namespace pkem {

namespace {

constexpr size_t kBufferBytes = 4096;

std::array<uint8_t, 32> sha256(std::span<const uint8_t> data) {
  std::array<uint8_t, 32> out{};
  SHA256(data.data(), data.size(), out.data());
  return out;
}

}  // namespace

struct Rng::Impl {
  EVP_CIPHER_CTX* ctx = nullptr;
  uint64_t counter = 0;
  std::array<uint8_t, kBufferBytes> buf{};
  size_t pos = kBufferBytes;

  ~Impl() { EVP_CIPHER_CTX_free(ctx); }
};

Rng::Rng(const std::array<uint8_t, 32>& key) : key_(key), impl_(std::make_unique<Impl>()) {
  impl_->ctx = EVP_CIPHER_CTX_new();
  if (impl_->ctx == nullptr || EVP_EncryptInit_ex(impl_->ctx, EVP_aes_256_ecb(), nullptr, key_.data(), nullptr) != 1)
    throw Error("failed to initialise AES for the random generator");
  EVP_CIPHER_CTX_set_padding(impl_->ctx, 0);
}

Rng::Rng(std::span<const uint8_t> seed) : Rng(sha256(seed)) {}

Rng::Rng(Rng&&) noexcept = default;
Rng& Rng::operator=(Rng&&) noexcept = default;
Rng::~Rng() = default;

Rng Rng::from_hex(std::string_view hex) {
  Bytes raw;
  try {
    boost::algorithm::unhex(hex.begin(), hex.end(), std::back_inserter(raw));
  } catch (const std::exception&) {
    throw MalformedError("seed must be an even-length hex string");
  }
  return Rng(raw);
}

Rng Rng::from_os() {
  std::random_device rd;
  std::array<uint8_t, 32> seed{};
  for (auto& b : seed) b = static_cast<uint8_t>(rd());
  return Rng(std::span<const uint8_t>(seed));
}

Rng Rng::fork(uint64_t stream) const {
  std::array<uint8_t, 32 + 5 + 8> material{};
  std::copy(key_.begin(), key_.end(), material.begin());
  std::memcpy(material.data() + 32, "fork:", 5);
  for (int i = 0; i < 8; ++i) material[37 + i] = static_cast<uint8_t>(stream >> (56 - 8 * i));
  return Rng(sha256(material));
}

void Rng::refill() {
  std::array<uint8_t, kBufferBytes> counters{};
  for (size_t blk = 0; blk < kBufferBytes / 16; ++blk) {
    const uint64_t c = impl_->counter++;
    for (int i = 0; i < 8; ++i) counters[16 * blk + 8 + i] = static_cast<uint8_t>(c >> (56 - 8 * i));
  }
  int outl = 0;
  if (EVP_EncryptUpdate(impl_->ctx, impl_->buf.data(), &outl, counters.data(), kBufferBytes) != 1 ||
      outl != static_cast<int>(kBufferBytes))
    throw Error("AES keystream generation failed");
  impl_->pos = 0;
}

void Rng::fill(std::span<uint8_t> out) {
  size_t done = 0;
  while (done < out.size()) {
    if (impl_->pos == kBufferBytes) refill();
    const size_t take = std::min(out.size() - done, kBufferBytes - impl_->pos);
    std::memcpy(out.data() + done, impl_->buf.data() + impl_->pos, take);
    impl_->pos += take;
    done += take;
  }
}

uint64_t Rng::next_u64() {
  std::array<uint8_t, 8> b{};
  fill(b);
  uint64_t v = 0;
  for (uint8_t x : b) v = (v << 8) | x;
  return v;
}

double Rng::uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

uint64_t Rng::below(uint64_t bound) {
  if (bound == 0) throw InvalidArgument("empty range");
  const uint64_t limit = max() - max() % bound;
  for (;;) {
    const uint64_t v = next_u64();
    if (v < limit) return v % bound;
  }
}

BitString Rng::bits(size_t nbits) {
  Bytes raw((nbits + 7) / 8);
  fill(raw);
  if (nbits % 8 != 0) raw[0] &= static_cast<uint8_t>((1u << (nbits % 8)) - 1);
  return BitString::from_bytes(raw, nbits);
}

}  // namespace pkem
