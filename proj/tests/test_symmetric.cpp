#include <openssl/evp.h>

#include <boost/algorithm/hex.hpp>

#include "doctest.h"
#include "oracles.hpp"
#include "pkem/gf2.hpp"
#include "pkem/symmetric.hpp"

using namespace pkem;

namespace {

Bytes unhex(const std::string& s) {
  Bytes out;
  boost::algorithm::unhex(s, std::back_inserter(out));
  return out;
}

std::string hex(std::span<const uint8_t> b) {
  return boost::algorithm::hex_lower(std::string(b.begin(), b.end()));
}

// Second implementation of CTR: OpenSSL's own counter mode.
Bytes evp_ctr(const Bytes& key, const Bytes& data) {
  EVP_CIPHER_CTX* ctx = EVP_CIPHER_CTX_new();
  const uint8_t iv[16] = {};
  EVP_EncryptInit_ex(ctx, EVP_aes_256_ctr(), nullptr, key.data(), iv);
  Bytes out(data.size());
  int len = 0;
  EVP_EncryptUpdate(ctx, out.data(), &len, data.data(), static_cast<int>(data.size()));
  EVP_CIPHER_CTX_free(ctx);
  return out;
}

// Second implementation of CMAC: OpenSSL's MAC provider.
Bytes evp_cmac(const Bytes& key, const Bytes& msg) {
  EVP_MAC* mac = EVP_MAC_fetch(nullptr, "CMAC", nullptr);
  EVP_MAC_CTX* ctx = EVP_MAC_CTX_new(mac);
  char cipher[] = "AES-256-CBC";
  OSSL_PARAM params[] = {OSSL_PARAM_construct_utf8_string("cipher", cipher, 0), OSSL_PARAM_construct_end()};
  EVP_MAC_init(ctx, key.data(), key.size(), params);
  EVP_MAC_update(ctx, msg.data(), msg.size());
  Bytes out(16);
  size_t len = 0;
  EVP_MAC_final(ctx, out.data(), &len, out.size());
  EVP_MAC_CTX_free(ctx);
  EVP_MAC_free(mac);
  return out;
}

const std::string kNistKey = "603deb1015ca71be2b73aef0857d77811f352c073b6108d72d9810a30914dff4";
const std::string kNistMsg =
    "6bc1bee22e409f96e93d7e117393172aae2d8a571e03ac9c9eb76fac45af8e5130c81c46a35ce411e5fbc1191a0a52ef"
    "f69f2445df4f9b17ad2b417be66c3710";

}  // namespace

TEST_CASE("AES-256 known answer") {
  const sym::Aes256 aes(unhex("000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f"));
  sym::Block in;
  const Bytes pt = unhex("00112233445566778899aabbccddeeff");
  std::copy(pt.begin(), pt.end(), in.begin());
  CHECK(hex(aes.encrypt(in)) == "8ea2b7ca516745bfeafc49904b496089");
}

TEST_CASE("CTR keystream is AES of the big-endian block counter, and matches OpenSSL's CTR") {
  const Bytes key = unhex(kNistKey);
  const sym::Aes256 aes(key);
  const Bytes zeros(16 * 3 + 5, 0);
  const Bytes ks = sym::ctr_xor(aes, zeros);
  for (uint8_t i = 0; i < 3; ++i) {
    sym::Block ctr{};
    ctr[15] = i;
    const auto b = aes.encrypt(ctr);
    CHECK(Bytes(ks.begin() + 16 * i, ks.begin() + 16 * (i + 1)) == Bytes(b.begin(), b.end()));
  }
  oracle::Gen g(9);
  for (size_t len : {0, 1, 15, 16, 17, 100, 1000}) {
    const Bytes m = g.bytes(len);
    CHECK(sym::ctr_xor(aes, m) == evp_ctr(key, m));
  }
}

TEST_CASE("CMAC known answers for AES-256") {
  const sym::Aes256 aes(unhex(kNistKey));
  const Bytes msg = unhex(kNistMsg);
  CHECK(hex(sym::cmac(aes, Bytes{})) == "028962f61b7bf89efc6b551f4667d983");
  CHECK(hex(sym::cmac(aes, std::span(msg).first(16))) == "28a7023f452e8f82bd4bf28d8c37c35c");
  CHECK(hex(sym::cmac(aes, std::span(msg).first(40))) == "aaf3d8f1de5640c232f5b169b9c911e6");
  CHECK(hex(sym::cmac(aes, msg)) == "e1992190549f6ed5696a2c056c315410");
}

TEST_CASE("property: CMAC matches OpenSSL's implementation") {
  oracle::Gen g(10);
  for (int i = 0; i < 200; ++i) {
    const Bytes key = g.bytes(32), m = g.bytes(g.below(80));
    const auto tag = sym::cmac(sym::Aes256(key), m);
    CHECK(Bytes(tag.begin(), tag.end()) == evp_cmac(key, m));
  }
}

TEST_CASE("SHA-256 known answer") {
  const std::string abc = "abc";
  const auto d = sym::sha256(std::span(reinterpret_cast<const uint8_t*>(abc.data()), abc.size()));
  CHECK(hex(d) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("polynomial MAC: empty message tags to k2, and Horner matches the explicit sum") {
  const auto& f = gf2::Field::get(16);
  const sym::PolyMac mac(f);
  const auto k1 = f.from_u64(0x1234), k2 = f.from_u64(0xbeef);
  CHECK(mac.tag(k1, k2, Bytes{}) == k2);
  const Bytes m{0x01, 0x02, 0x03, 0x04, 0x05};
  // blocks 0102, 0304, 0500 then the bit length 40
  const auto expect = f.from_u64(0x0102) * k1.pow(4) + f.from_u64(0x0304) * k1.pow(3) + f.from_u64(0x0500) * k1.pow(2) +
                      f.from_u64(40) * k1 + k2;
  CHECK(mac.tag(k1, k2, m) == expect);
}

TEST_CASE("polynomial MAC forgery probability at GF(2^16), exhaustive over k1") {
  const auto& f = gf2::Field::get(16);
  const sym::PolyMac mac(f);
  oracle::Gen g(12);
  const auto k2 = f.zero();
  for (int pair = 0; pair < 6; ++pair) {
    const Bytes a = g.bytes(1 + g.below(6));
    Bytes b = g.bytes(1 + g.below(6));
    if (b == a) b.push_back(0);
    const size_t blocks = std::max((a.size() + 1) / 2, (b.size() + 1) / 2);
    std::vector<uint32_t> hist(65536, 0);
    for (uint64_t k = 0; k < 65536; ++k) {
      const auto k1 = f.from_u64(k);
      ++hist[(mac.tag(k1, k2, a) + mac.tag(k1, k2, b)).to_u64()];
    }
    // any fixed tag offset is hit by at most L+1 keys
    CHECK(*std::max_element(hist.begin(), hist.end()) <= blocks + 1);
  }
}
