#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "pkem/errors.hpp"
#include "pkem/gf2.hpp"
#include "pkem/ikem.hpp"
#include "pkem/params.hpp"

using namespace pkem;

namespace {

IkemParams make(Mode mode, const SourceSpec& s, unsigned t, unsigned ell, double nu) {
  IkemParams p(mode, s);
  p.t = t;
  p.ell = ell;
  p.nu = nu;
  return p;
}

SourceSpec noiseless(unsigned n) {
  std::vector<double> t(8, 0.0);
  t[0] = t[1] = t[6] = t[7] = 0.25;  // y = x, z uniform
  return SourceSpec({2, 2, 2}, n, t);
}

uint64_t poly(unsigned m) { return gf2::Field::get(m).modulus().to_u64(); }

}  // namespace

TEST_CASE("gen publishes a seed only in cea mode") {
  Rng rng = Rng::from_hex("01");
  const Ikem cea(make(Mode::cea, noiseless(8), 2, 4, 0.0));
  const Ikem cca(make(Mode::cca, noiseless(8), 2, 4, 0.0));
  const Ikem base(make(Mode::baseline, noiseless(8), 2, 4, 0.0));
  CHECK(cea.gen(rng).public_seed.has_value());
  CHECK(cea.gen(rng).public_seed->size() == 8);
  CHECK_FALSE(cca.gen(rng).public_seed.has_value());
  CHECK_FALSE(base.gen(rng).public_seed.has_value());
}

TEST_CASE("noiseless round trips in every mode") {
  for (Mode m : {Mode::cea, Mode::cca, Mode::baseline}) {
    const Ikem ikem(make(m, noiseless(16), 4, 8, 0.0));
    Rng rng = Rng::from_hex("02");
    for (int i = 0; i < 20; ++i) {
      const auto inst = ikem.gen(rng);
      const auto e = ikem.encap(inst.sample.x, rng, inst.public_seed);
      CHECK(e.key.size() == 8);
      const auto k = ikem.decap(inst.sample.y, e.ct, inst.public_seed);
      REQUIRE(k.has_value());
      CHECK(*k == e.key);
      CHECK(ikem.decode(ikem.encode(e.ct)) == e.ct);
    }
  }
}

TEST_CASE("cea tag is reused across encapsulations; s' is fresh") {
  const Ikem ikem(make(Mode::cea, noiseless(32), 8, 16, 0.0));
  Rng rng = Rng::from_hex("03");
  const auto inst = ikem.gen(rng);
  const auto a = ikem.encap(inst.sample.x, rng, inst.public_seed);
  const auto b = ikem.encap(inst.sample.x, rng, inst.public_seed);
  CHECK(a.ct.v == b.ct.v);
  CHECK(a.ct.s_prime != b.ct.s_prime);
  CHECK_FALSE(a.ct.s.has_value());
}

TEST_CASE("golden vector at n = 4, t = 2, ell = 1 against the formula") {
  const Ikem ikem(make(Mode::cca, SourceSpec::bsc(0.25, 0.25, 4), 2, 1, 3.5));
  const uint64_t x = 0b1011, sp = 0b0110, s = 0b1001;
  const auto e = ikem.encap_with(BitString::from_u64(x, 4), BitString::from_u64(sp, 4), BitString::from_u64(s, 4));
  const uint64_t key = oracle::top(oracle::gf_mul(sp, x, poly(4), 4), 4, 1);
  const uint64_t v = oracle::cca_hash(x, sp, s, 4, 2, 4, poly(2), poly(2));
  CHECK(e.key.to_u64() == key);
  CHECK(e.ct.v.to_u64() == v);
  // 1011 * 0110 mod x^4+x+1 = 1111: key is the top bit, 1
  CHECK(oracle::gf_mul(sp, x, poly(4), 4) == 0b1111);
  CHECK(e.key == BitString::from_binary("1"));
  Rng r1 = Rng::from_hex("77"), r2 = Rng::from_hex("77");
  const SymbolString xs{1, 0, 1, 1};
  CHECK(ikem.encap(xs, r1, std::nullopt).ct == ikem.encap(xs, r2, std::nullopt).ct);
}

TEST_CASE("single-bit tampering of v is rejected at least at rate 1 - 2^(nu - t)") {
  const double nu = 1.0;
  const Ikem ikem(make(Mode::cca, SourceSpec::bsc(0.1, 0.5, 4), 2, 1, nu));
  size_t total = 0, rejected = 0;
  for (uint64_t x = 0; x < 16; ++x)
    for (uint64_t y = 0; y < 16; ++y)
      for (uint64_t sp = 0; sp < 16; sp += 3)
        for (uint64_t s = 0; s < 16; s += 5) {
          auto e = ikem.encap_with(BitString::from_u64(x, 4), BitString::from_u64(sp, 4), BitString::from_u64(s, 4));
          const SymbolString ys{static_cast<uint8_t>(y >> 3 & 1), static_cast<uint8_t>(y >> 2 & 1),
                                static_cast<uint8_t>(y >> 1 & 1), static_cast<uint8_t>(y & 1)};
          for (size_t b = 1; b <= 2; ++b) {
            IkemCiphertext c = e.ct;
            c.v.set_bit(b, !c.v.bit(b));
            ++total;
            rejected += !ikem.decap(ys, c, std::nullopt).has_value();
          }
        }
  CHECK(static_cast<double>(rejected) / static_cast<double>(total) >= 1 - std::exp2(nu - 2));
}

TEST_CASE("empty reconciliation set always rejects; oversized set is an error") {
  const Ikem ikem(make(Mode::cea, SourceSpec::bsc(0.25, 0.5, 8), 2, 4, -1.0));
  Rng rng = Rng::from_hex("04");
  const auto inst = ikem.gen(rng);
  const auto e = ikem.encap(inst.sample.x, rng, inst.public_seed);
  CHECK_FALSE(ikem.decap(inst.sample.y, e.ct, inst.public_seed).has_value());
  IkemParams p = make(Mode::cea, SourceSpec::bsc(0.25, 0.5, 20), 2, 4, 30.0);
  p.recon_cap = 100;
  const Ikem big(p);
  const auto inst2 = big.gen(rng);
  const auto e2 = big.encap(inst2.sample.x, rng, inst2.public_seed);
  CHECK_THROWS_AS(big.decap(inst2.sample.y, e2.ct, inst2.public_seed), InfeasibleError);
}

TEST_CASE("ambiguous matches reject") {
  // t = 0 makes every member of R match; two or more members means reject
  const Ikem ikem(make(Mode::cea, SourceSpec::bsc(0.25, 0.5, 4), 0, 2, 3.5));
  Rng rng = Rng::from_hex("05");
  const auto inst = ikem.gen(rng);
  const auto e = ikem.encap(inst.sample.x, rng, inst.public_seed);
  CHECK_FALSE(ikem.decap(inst.sample.y, e.ct, inst.public_seed).has_value());
}

TEST_CASE("wire format") {
  const Ikem ikem(make(Mode::cca, noiseless(12), 3, 5, 0.0));
  Rng rng = Rng::from_hex("06");
  const auto inst = ikem.gen(rng);
  const auto e = ikem.encap(inst.sample.x, rng, std::nullopt);
  const Bytes wire = ikem.encode(e.ct);
  CHECK(wire.size() == 4 + 1 + 1 + 2 + 2 + 2 + 1 + 2 + 2);
  CHECK(Bytes(wire.begin(), wire.begin() + 4) == Bytes{'I', 'K', 'E', 'M'});
  CHECK(wire[4] == Ikem::kWireVersion);
  CHECK(wire[5] == static_cast<uint8_t>(Mode::cca));
  Bytes bad = wire;
  bad.pop_back();
  CHECK_THROWS_AS(ikem.decode(bad), MalformedError);
  bad = wire;
  bad[0] = 'X';
  CHECK_THROWS_AS(ikem.decode(bad), MalformedError);
  bad = wire;
  bad[4] = 9;
  CHECK_THROWS_AS(ikem.decode(bad), MalformedError);
  bad = wire;
  bad[5] = static_cast<uint8_t>(Mode::cea);
  CHECK_THROWS_AS(ikem.decode(bad), MalformedError);
  bad = wire;
  bad[12] |= 0x80;  // padding bit of the 3-bit tag
  CHECK_THROWS_AS(ikem.decode(bad), MalformedError);
  bad = wire;
  bad.push_back(0);
  CHECK_THROWS_AS(ikem.decode(bad), MalformedError);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(Ikem(make(Mode::cca, noiseless(8), 5, 4, 0.0)), InvalidArgument);
  CHECK_THROWS_AS(Ikem(make(Mode::cca, noiseless(8), 0, 4, 0.0)), InvalidArgument);
  CHECK_THROWS_AS(Ikem(make(Mode::cea, noiseless(8), 2, 9, 0.0)), InvalidArgument);
  CHECK_THROWS_AS(Ikem(make(Mode::cea, noiseless(8), 2, 0, 0.0)), InvalidArgument);
  IkemParams p = make(Mode::cca, noiseless(8), 2, 4, 0.0);
  p.w = 7;
  CHECK_THROWS_AS(Ikem{p}, InvalidArgument);
  p.w = 13;
  const Ikem ok(p);
  CHECK(ok.params().r == 4);  // u = 6: 2*6 < 13 <= 4*6
  CHECK(mode_from_string("baseline") == Mode::baseline);
  CHECK_THROWS_AS(mode_from_string("xyz"), InvalidArgument);
}

TEST_CASE("empirical failure rate within the exact bound at n = 24") {
  const SourceSpec s = SourceSpec::bsc(0.02, 0.5, 24);
  IkemParams p(Mode::cca, s);
  p.nu = 24 * -std::log2(0.98) + 2 * (std::log2(0.98) - std::log2(0.02)) + 1e-6;
  p.t = 12;
  p.ell = 8;
  CHECK(hamming_radius(s, p.nu) == 2);
  const Ikem ikem(p);
  const double bound = failure_bound_bsc(s, p.nu, p.t);
  const size_t trials = 2000;
  Rng master = Rng::from_hex("08");
  size_t fail = 0;
  for (size_t i = 0; i < trials; ++i) {
    Rng rng = master.fork(i);
    const auto inst = ikem.gen(rng);
    const auto e = ikem.encap(inst.sample.x, rng, inst.public_seed);
    const auto k = ikem.decap(inst.sample.y, e.ct, inst.public_seed);
    fail += !(k && *k == e.key);
  }
  CHECK(static_cast<double>(fail) / trials <= bound + 3 * std::sqrt(bound / trials));
  // the bound itself, recomputed from its two terms
  const double e1 = 1 - static_cast<double>(oracle::binomial_cdf(24, 0.02L, 2));
  CHECK(bound == doctest::Approx(e1 + (1 + 24 + 276) / 4096.0));
}
