#include "doctest.h"
#include "oracles.hpp"
#include "pkem/errors.hpp"
#include "pkem/gf2.hpp"

using pkem::BitString;
using pkem::gf2::Field;

namespace {
uint64_t modulus_u64(const Field& f) { return f.modulus().to_u64(); }
}  // namespace

TEST_CASE("GF(2^3) worked values with x^3+x+1") {
  const Field& f = Field::get(3);
  CHECK(f.modulus_string() == "x^3+x+1");
  const auto a = f.from_u64(0b010), b = f.from_u64(0b011), c = f.from_u64(0b101);
  CHECK((a + b).to_u64() == 0b001);
  CHECK((a + a).is_zero());
  CHECK((a * b).to_u64() == 0b110);
  CHECK((a * c).to_u64() == 0b001);
  CHECK(a.pow(3).to_u64() == 0b011);
  CHECK(a.pow(0) == f.one());
  CHECK(a.pow(1) == a);
  CHECK(a.inv().to_u64() == 0b101);
  CHECK(f.one().inv() == f.one());
  CHECK_THROWS_AS(f.zero().inv(), pkem::InvalidArgument);
}

TEST_CASE("mixing fields is rejected") {
  const auto a = Field::get(3).one(), b = Field::get(4).one();
  CHECK_THROWS_AS(a + b, pkem::ContextMismatch);
  CHECK_THROWS_AS(a * b, pkem::ContextMismatch);
}

TEST_CASE("exhaustive field axioms for m <= 4 against the shift-and-add oracle") {
  for (unsigned m = 1; m <= 4; ++m) {
    const Field& f = Field::get(m);
    const uint64_t poly = modulus_u64(f), q = uint64_t{1} << m;
    for (uint64_t a = 0; a < q; ++a)
      for (uint64_t b = 0; b < q; ++b) {
        const auto fa = f.from_u64(a), fb = f.from_u64(b);
        REQUIRE((fa * fb).to_u64() == oracle::gf_mul(a, b, poly, m));
        CHECK(fa * fb == fb * fa);
        CHECK(fa + fb == fb + fa);
        for (uint64_t c = 0; c < q; ++c) {
          const auto fc = f.from_u64(c);
          CHECK((fa * fb) * fc == fa * (fb * fc));
          CHECK((fa + fb) + fc == fa + (fb + fc));
          CHECK(fa * (fb + fc) == fa * fb + fa * fc);
        }
      }
    for (uint64_t a = 0; a < q; ++a)
      for (unsigned e = 0; e <= 16; ++e) CHECK(f.from_u64(a).pow(e).to_u64() == oracle::gf_pow(a, e, poly, m));
  }
}

TEST_CASE("inverses exhaustive for m <= 8") {
  for (unsigned m = 1; m <= 8; ++m) {
    const Field& f = Field::get(m);
    const uint64_t poly = modulus_u64(f);
    for (uint64_t a = 1; a < (uint64_t{1} << m); ++a) {
      const auto inv = f.from_u64(a).inv();
      CHECK((f.from_u64(a) * inv) == f.one());
      CHECK(inv.to_u64() == oracle::gf_inv(a, poly, m));
    }
  }
}

TEST_CASE("property: wide-field multiplication matches the oracle up to m = 31") {
  oracle::Gen g(7);
  for (unsigned m = 5; m <= 31; ++m) {
    const Field& f = Field::get(m);
    const uint64_t poly = modulus_u64(f);
    for (int i = 0; i < 200; ++i) {
      const uint64_t a = g.bits(m), b = g.bits(m);
      CHECK((f.from_u64(a) * f.from_u64(b)).to_u64() == oracle::gf_mul(a, b, poly, m));
    }
  }
}

TEST_CASE("property: large fields satisfy ring laws and inverse") {
  oracle::Gen g(11);
  for (unsigned m : {64u, 80u, 96u, 127u, 128u, 192u, 256u, 521u}) {
    const Field& f = Field::get(m);
    auto rnd = [&] {
      pkem::Limbs l;
      for (size_t i = 0; i < pkem::limbs_for(m); ++i) l.push_back(g.bits(64));
      return f.element(BitString::from_limbs(l, m));
    };
    for (int i = 0; i < 20; ++i) {
      const auto a = rnd(), b = rnd(), c = rnd();
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      if (!a.is_zero()) CHECK(a * a.inv() == f.one());
      CHECK(a.pow(5) == a * a * a * a * a);
    }
  }
}

TEST_CASE("moduli are irreducible and lowest weight") {
  for (unsigned m = 2; m <= 64; ++m) {
    const Field& f = Field::get(m);
    CHECK(pkem::gf2::is_irreducible(f.modulus()));
    CHECK(f.modulus().size() == m + 1);
    const size_t weight = f.modulus().popcount();
    if (m <= 32) CHECK(pkem::gf2::is_irreducible_trial_division(f.modulus().to_u64()));
    // no irreducible trinomial with a smaller middle exponent
    const unsigned k = f.taps().size() == 2 ? f.taps()[0] : m;
    for (unsigned j = 1; j < std::min(k, m); ++j) {
      const uint64_t tri = (uint64_t{1} << m) | (uint64_t{1} << j) | 1;
      if (m <= 32) CHECK_FALSE(pkem::gf2::is_irreducible_trial_division(tri));
      else if (m < 64) CHECK_FALSE(pkem::gf2::is_irreducible_rabin(BitString::from_u64(tri, m + 1)));
    }
    CHECK((weight == 3 || weight == 5 || m == 1 || weight == 2));
  }
  CHECK(Field::get(128).modulus_string() == "x^128+x^7+x^2+x+1");
  CHECK(Field::get(8).modulus_string() == "x^8+x^4+x^3+x+1");
}

TEST_CASE("Rabin test agrees with trial division") {
  oracle::Gen g(3);
  for (int i = 0; i < 400; ++i) {
    const unsigned deg = 2 + static_cast<unsigned>(g.below(30));
    const uint64_t p = (uint64_t{1} << deg) | g.bits(deg) | 1;
    const BitString b = BitString::from_u64(p, deg + 1);
    CHECK(pkem::gf2::is_irreducible_rabin(b) == pkem::gf2::is_irreducible_trial_division(p));
  }
}

TEST_CASE("clmul64 matches a bitwise carryless product") {
  oracle::Gen g(5);
  for (int i = 0; i < 1000; ++i) {
    const uint64_t a = g.bits(64), b = g.bits(64);
    uint64_t lo = 0, hi = 0;
    pkem::gf2::clmul64(a, b, lo, hi);
    uint64_t elo = 0, ehi = 0;
    for (unsigned k = 0; k < 64; ++k)
      if ((b >> k) & 1) {
        elo ^= a << k;
        if (k) ehi ^= a >> (64 - k);
      }
    CHECK(lo == elo);
    CHECK(hi == ehi);
  }
}

TEST_CASE("custom modulus and serialization") {
  const Field& f = Field::with_modulus(BitString::from_binary("1011"));
  CHECK(&f == &Field::get(3));
  CHECK_THROWS_AS(Field::with_modulus(BitString::from_binary("1001")), pkem::InvalidArgument);
  const Field& g9 = Field::get(9);
  const auto e = g9.from_u64(0x1ab);
  CHECK(e.to_bytes() == pkem::Bytes{0x01, 0xab});
  CHECK(g9.from_bytes(e.to_bytes()) == e);
}
