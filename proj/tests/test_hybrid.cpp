#include "doctest.h"
#include "oracles.hpp"
#include "pkem/errors.hpp"
#include "pkem/hybrid.hpp"

using namespace pkem;

namespace {

IkemParams make(Mode mode, const SourceSpec& s, unsigned t, unsigned ell, double nu) {
  IkemParams p(mode, s);
  p.t = t;
  p.ell = ell;
  p.nu = nu;
  return p;
}

}  // namespace

TEST_CASE("compatibility matrix is enforced") {
  const Ikem cea(make(Mode::cea, SourceSpec::bsc(0.01, 0.5, 600), 40, 256, 60));
  const Ikem cca(make(Mode::cca, SourceSpec::bsc(0.01, 0.5, 600), 40, 512, 60));
  const OtDem ot;
  const OtCcaDem otcca;
  CHECK_NOTHROW(HybridScheme(cea, ot));
  CHECK_NOTHROW(HybridScheme(cca, otcca));
  CHECK_THROWS_AS(HybridScheme(cea, otcca), InvalidArgument);
  CHECK_THROWS_AS(HybridScheme(cca, ot), InvalidArgument);
  const Ikem short_key(make(Mode::cea, SourceSpec::bsc(0.01, 0.5, 600), 40, 128, 60));
  CHECK_THROWS_AS(HybridScheme(short_key, ot), InvalidArgument);
}

TEST_CASE("round trip, lengths, and tampering") {
  // radius 2 around y; more flips than that is rare at p = 0.001
  const SourceSpec s = SourceSpec::bsc(0.001, 0.5, 200);
  IkemParams p = make(Mode::cca, s, 40, 512, 21);
  p.w = 512;
  const Ikem ikem(p);
  const OtCcaDem dem;
  const HybridScheme he(ikem, dem);
  Rng rng = Rng::from_hex("10");
  oracle::Gen g(5);
  int checked = 0;
  for (int i = 0; i < 20; ++i) {
    const auto inst = ikem.gen(rng);
    const Bytes m = g.bytes(i == 0 ? 0 : g.below(300));
    const auto c = he.encrypt(inst.sample.x, m, rng, inst.public_seed);
    const Bytes env = he.encode(c);
    CHECK(env.size() == 4 + 1 + 4 + ikem.encode(c.c1).size() + m.size() + 16);
    CHECK(he.decode(env) == c);
    const auto out = he.decrypt(inst.sample.y, c, inst.public_seed);
    if (!out) continue;
    ++checked;
    CHECK(*out == m);
    HybridCiphertext t = c;
    t.c2.tag[0] ^= 1;
    CHECK_FALSE(he.decrypt(inst.sample.y, t, inst.public_seed).has_value());
    t = c;
    t.c1.v.set_bit(1, !t.c1.v.bit(1));
    CHECK_FALSE(he.decrypt(inst.sample.y, t, inst.public_seed).has_value());
  }
  CHECK(checked >= 18);
  Bytes bad = he.encode(he.encrypt(SymbolString(200, 0), Bytes{1, 2}, rng, std::nullopt));
  bad.resize(7);
  CHECK_THROWS_AS(he.decode(bad), MalformedError);
}
