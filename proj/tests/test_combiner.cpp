#include "doctest.h"
#include "oracles.hpp"
#include "pkem/combiner.hpp"
#include "pkem/errors.hpp"
#include "pkem/symmetric.hpp"

using namespace pkem;
using namespace pkem::comb;

namespace {

Ikem small_ikem(Mode mode, unsigned ell, unsigned q_d = 0) {
  IkemParams p(mode, SourceSpec::bsc(0.0001, 0.5, 600));
  p.t = 40;
  p.ell = ell;
  p.nu = 15;  // radius 1
  p.q_d = q_d;
  return Ikem(p);
}

}  // namespace

TEST_CASE("test-double KEM: correctness, determinism, broken mode") {
  const TestDoubleKem kem(256);
  Rng rng = Rng::from_hex("01");
  const KeyPair kp = kem.gen(rng);
  CHECK(kp.pk.size() == 32);
  for (int i = 0; i < 50; ++i) {
    const auto e = kem.enc(kp.pk, rng);
    CHECK(e.c.size() == 16);
    CHECK(e.key.size() == 256);
    CHECK(kem.dec(kp.sk, e.c) == e.key);
  }
  Rng a = Rng::from_hex("02"), b = Rng::from_hex("02");
  CHECK(kem.enc(kp.pk, a).key == kem.enc(kp.pk, b).key);
  const TestDoubleKem broken(256, true);
  CHECK(broken.enc(kp.pk, rng).key == BitString(256));
  CHECK_FALSE(kem.dec(kp.sk, Bytes(3)).has_value());
  CHECK_THROWS_AS(TestDoubleKem(0), InvalidArgument);
}

TEST_CASE("xor combiner: key is k1 xor k2, and a broken KEM leaves exactly the iKEM key") {
  const Ikem ikem = small_ikem(Mode::cea, 256);
  const TestDoubleKem broken(256, true);
  const CombinedKem comb(ikem, broken, Core::xor_keys);
  Rng rng = Rng::from_hex("03");
  const auto inst = ikem.gen(rng);
  const KeyPair kp = broken.gen(rng);
  for (int i = 0; i < 20; ++i) {
    Rng r1 = rng.fork(i), r2 = rng.fork(i);
    const auto c = comb.enc(inst.sample.x, kp.pk, r1, inst.public_seed);
    const auto k1 = ikem.encap(inst.sample.x, r2, inst.public_seed).key;
    CHECK(c.key == k1);
  }
  CHECK(combine_xor(BitString::from_u64(5, 8), BitString::from_u64(3, 8)) == BitString::from_u64(6, 8));
  CHECK_FALSE(combine_xor(std::nullopt, BitString(8)).has_value());
  CHECK_THROWS_AS(CombinedKem(ikem, TestDoubleKem(128), Core::xor_keys), InvalidArgument);
}

TEST_CASE("combined round trip and wire format") {
  const Ikem ikem = small_ikem(Mode::cea, 256);
  const TestDoubleKem kem(256);
  const CombinedKem comb(ikem, kem, Core::xor_keys);
  Rng rng = Rng::from_hex("04");
  const auto inst = ikem.gen(rng);
  const KeyPair kp = kem.gen(rng);
  const auto e = comb.enc(inst.sample.x, kp.pk, rng, inst.public_seed);
  const Bytes wire = e.ct.encode();
  const auto back = CombinedCiphertext::decode(wire);
  CHECK(back.c1 == e.ct.c1);
  CHECK(back.c2 == e.ct.c2);
  CHECK(comb.dec(inst.sample.y, kp.sk, back, inst.public_seed) == e.key);
  CHECK_THROWS_AS(CombinedCiphertext::decode(Bytes(wire.begin(), wire.begin() + 6)), MalformedError);
  Bytes bad = wire;
  bad[0] ^= 1;
  CHECK_THROWS_AS(CombinedCiphertext::decode(bad), MalformedError);
}

TEST_CASE("ptx combiner: width rule, round trip, one F1 call per decapsulation") {
  const TestDoubleKem kem(256);
  CHECK(ItPrf::width_for(16) == 192);
  CHECK(ItPrf::width_for(16, 256) == 256);
  CHECK(ItPrf::width_for(4, 20) == 48);
  CHECK(ItPrf::width_for(9) == 96);
  CHECK(CombinedKem::ptx_ikem_key_bits(kem, 0) == 512);
  CHECK(CombinedKem::ptx_ikem_key_bits(kem, 0, 128) == 384);
  CHECK(CombinedKem::ptx_ikem_key_bits(kem, 2) == 1024);
  CHECK_THROWS_AS(CombinedKem(small_ikem(Mode::cea, 256), kem, Core::ptx), InvalidArgument);
  const Ikem ikem = small_ikem(Mode::cea, 512);
  const CombinedKem comb(ikem, kem, Core::ptx);
  CHECK(comb.key_bits() == 256);
  Rng rng = Rng::from_hex("05");
  const auto inst = ikem.gen(rng);
  const KeyPair kp = kem.gen(rng);
  const auto e = comb.enc(inst.sample.x, kp.pk, rng, inst.public_seed);
  const uint64_t before = comb.f1_calls();
  for (int i = 0; i < 100; ++i) comb.dec(inst.sample.y, kp.sk, e.ct, inst.public_seed);
  CHECK(comb.f1_calls() - before <= 100);
  CHECK(comb.dec(inst.sample.y, kp.sk, e.ct, inst.public_seed) == e.key);
  CombinedCiphertext t = e.ct;
  t.c2[0] ^= 1;
  CHECK(comb.dec(inst.sample.y, kp.sk, t, inst.public_seed) != e.key);
}

TEST_CASE("ItPrf evaluates the keyed polynomial on the encoded input") {
  const ItPrf f(32, 2, 32);
  CHECK(f.key_bits() == 96);
  oracle::Gen g(6);
  const auto& field = gf2::Field::get(32);
  for (int i = 0; i < 50; ++i) {
    const BitString key = BitString::from_bytes(g.bytes(12), 96);
    const Bytes in = g.bytes(2);
    const auto x = f.encode_input(in);
    // u16 length then the bytes, read as one integer
    CHECK(x.to_u64() == ((uint64_t{2} << 16) | (uint64_t{in[0]} << 8) | in[1]));
    const auto a0 = field.element(key.block(1, 32)), a1 = field.element(key.block(33, 64)),
               a2 = field.element(key.block(65, 96));
    CHECK(f.eval(key, in) == (a0 + a1 * x + a2 * x * x).bits());
  }
  CHECK_THROWS_AS(f.encode_input(Bytes(3)), InvalidArgument);
  CHECK_THROWS_AS(f.eval(BitString(95), Bytes{}), InvalidArgument);
  CHECK_THROWS_AS(ItPrf(16, 1, 17), InvalidArgument);
}

TEST_CASE("CompPrf: CMAC blocks with counter prefix, prefix-consistent") {
  oracle::Gen g(7);
  const BitString key = BitString::from_bytes(g.bytes(32), 256);
  const Bytes in = g.bytes(10);
  const auto long_out = CompPrf(300).eval(key, in);
  CHECK(long_out.size() == 300);
  CHECK(CompPrf(100).eval(key, in) == long_out.block(1, 100));
  Bytes msg = {0, 0, 0, 1};
  msg.insert(msg.end(), in.begin(), in.end());
  const auto blk = sym::cmac(sym::Aes256(key.to_bytes()), msg);
  CHECK(long_out.block(129, 256) == BitString::from_bytes(Bytes(blk.begin(), blk.end()), 128));
}
