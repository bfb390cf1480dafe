#include <algorithm>
#include <map>

#include "doctest.h"
#include "oracles.hpp"
#include "pkem/analysis.hpp"
#include "pkem/errors.hpp"
#include "pkem/gf2.hpp"

using namespace pkem;
using namespace pkem::analysis;

namespace {

struct OracleHash {
  unsigned n, t, w;
  uint64_t pu, pt;
  OracleHash(unsigned n, unsigned t, unsigned w)
      : n(n), t(t), w(w), pu(gf2::Field::get(n - t).modulus().to_u64()), pt(gf2::Field::get(t).modulus().to_u64()) {}
  uint64_t operator()(uint64_t x, uint64_t seed) const {
    return oracle::cca_hash(x, seed >> n, seed & ((uint64_t{1} << n) - 1), n, t, w, pu, pt);
  }
};

// Part i and ii maxima by direct counting over every tuple.
std::pair<uint64_t, uint64_t> brute_maxima(unsigned n, unsigned t, unsigned w) {
  const OracleHash h(n, t, w);
  const uint64_t nx = uint64_t{1} << n, ns = uint64_t{1} << (w + n), nv = uint64_t{1} << t;
  uint64_t best_i = 0, best_ii = 0;
  for (uint64_t a = 0; a < ns; ++a)
    for (uint64_t b = 0; b < ns; ++b)
      for (uint64_t v = 0; v < nv; ++v)
        for (uint64_t vf = 0; vf < nv; ++vf) {
          if (a != b) {
            uint64_t c = 0;
            for (uint64_t x = 0; x < nx; ++x) c += h(x, a) == v && h(x, b) == vf;
            best_i = std::max(best_i, c);
          }
          if (a == b && v == vf) continue;
          for (uint64_t e = 1; e < nx; ++e) {
            uint64_t c = 0;
            for (uint64_t x = 0; x < nx; ++x) c += h(x ^ e, a) == v && h(x, b) == vf;
            best_ii = std::max(best_ii, c);
          }
        }
  return {best_i, best_ii};
}

IkemParams toy(Mode mode, unsigned n, unsigned t, unsigned ell, double nu) {
  IkemParams p(mode, SourceSpec::bsc(0.25, 0.25, n));
  p.t = t;
  p.ell = ell;
  p.nu = nu;
  return p;
}

}  // namespace

TEST_CASE("integer view of the CCA hash agrees with the oracle") {
  const uhash::CcaHash h(6, 2, 8);
  const auto ih = cca_int_hash(h, 6, 8);
  const OracleHash o(6, 2, 8);
  oracle::Gen g(1);
  for (int i = 0; i < 500; ++i) {
    const uint64_t x = g.bits(6), seed = g.bits(14);
    CHECK(ih(x, seed) == o(x, seed));
  }
}

TEST_CASE("max_collision against a direct pair count, both routes") {
  const OracleHash o(4, 2, 4);
  uint64_t best = 0;
  for (uint64_t x = 0; x < 16; ++x)
    for (uint64_t x2 = x + 1; x2 < 16; ++x2) {
      uint64_t c = 0;
      for (uint64_t s = 0; s < 256; ++s) c += o(x, s) == o(x2, s);
      best = std::max(best, c);
    }
  const auto ih = cca_int_hash(uhash::CcaHash(4, 2, 4), 4, 4);
  const auto ser = max_collision(4, 8, ih, Exec::serial);
  const auto par = max_collision(4, 8, ih, Exec::parallel);
  CHECK(ser.max_collisions == best);
  CHECK(par.max_collisions == best);
  CHECK(ser.seeds == 256);
  CHECK(ser.probability() <= Rational(1, 4));
  // a constant hash collides on every seed
  CHECK(max_collision(3, 4, [](uint64_t, uint64_t) { return 0; }, Exec::serial).probability() == 1);
}

TEST_CASE("solution maxima: table route equals direct counting") {
  for (auto [n, t, w] : {std::tuple{2u, 1u, 2u}, std::tuple{4u, 2u, 4u}}) {
    const auto ser = solution_maxima(n, t, w, Exec::serial);
    const auto par = solution_maxima(n, t, w, Exec::parallel);
    CHECK(ser.max_i == par.max_i);
    CHECK(ser.max_ii == par.max_ii);
    CHECK(ser.tuples_i == par.tuples_i);
    CHECK(ser.tuples_ii == par.tuples_ii);
    if (n == 2) {
      const auto [bi, bii] = brute_maxima(n, t, w);
      CHECK(ser.max_i == bi);
      CHECK(ser.max_ii == bii);
    }
  }
  CHECK_THROWS_AS(solution_maxima(8, 4, 8, Exec::serial), InfeasibleError);
}

TEST_CASE("count_solutions matches the oracle and rejects degenerate tuples") {
  const uhash::CcaHash h(4, 2, 4);
  const OracleHash o(4, 2, 4);
  oracle::Gen g(2);
  auto bs = [](uint64_t v, unsigned bits) { return BitString::from_u64(v, bits); };
  for (int i = 0; i < 300; ++i) {
    const uint64_t a = g.bits(8), b = g.bits(8), v = g.bits(2), vf = g.bits(2), e = 1 + g.below(15);
    if (a == b) continue;
    SolutionQuery q{bs(a >> 4, 4), bs(a & 15, 4), bs(b >> 4, 4), bs(b & 15, 4), bs(v, 2), bs(vf, 2), bs(e, 4)};
    uint64_t ci = 0, cii = 0;
    for (uint64_t x = 0; x < 16; ++x) {
      ci += o(x, a) == v && o(x, b) == vf;
      cii += o(x ^ e, a) == v && o(x, b) == vf;
    }
    CHECK(count_solutions(h, q, Part::i) == ci);
    CHECK(count_solutions(h, q, Part::ii) == cii);
  }
  SolutionQuery same{bs(1, 4), bs(2, 4), bs(1, 4), bs(2, 4), bs(0, 2), bs(0, 2), std::nullopt};
  CHECK_THROWS_AS(count_solutions(h, same, Part::i), InvalidArgument);
  CHECK_THROWS_AS(count_solutions(h, same, Part::ii), InvalidArgument);
  same.e = bs(0, 4);
  CHECK_THROWS_AS(count_solutions(h, same, Part::ii), InvalidArgument);
  same.e = bs(3, 4);
  CHECK_THROWS_AS(count_solutions(h, same, Part::ii), InvalidArgument);
  same.v_f = bs(1, 2);
  CHECK_NOTHROW(count_solutions(h, same, Part::ii));
}

TEST_CASE("exact distance: fast route equals the rational reference") {
  for (Mode mode : {Mode::cea, Mode::cca}) {
    for (unsigned q_e : {0u, 1u}) {
      const Ikem ikem(toy(mode, 3, 1, 1, 4));
      const Rational ref = exact_distance_reference(ikem, q_e);
      const auto ser = exact_distance(ikem, q_e, Exec::serial);
      const auto par = exact_distance(ikem, q_e, Exec::parallel);
      CHECK(ser.delta == ref);
      CHECK(par.delta == ref);
      CHECK(ser.delta >= 0);
      CHECK(ser.delta <= 1);
    }
  }
}

TEST_CASE("exact distance refuses inexact sources and oversized work") {
  IkemParams p(Mode::cea, SourceSpec::bsc(0.1, 0.2, 3));
  p.t = 1;
  p.ell = 1;
  p.nu = 4;
  CHECK_THROWS_AS(exact_distance(Ikem(p), 0, Exec::serial), InvalidArgument);
  CHECK_THROWS_AS(exact_distance(Ikem(toy(Mode::cea, 4, 2, 1, 5)), 1, Exec::serial, 1000), InfeasibleError);
}

TEST_CASE("polynomial family independence") {
  CHECK(twise_independence(3, 3, Exec::serial).uniform());
  const auto s = twise_independence(3, 2, Exec::parallel);
  CHECK(s.uniform());
  CHECK(s.point_tuples == 28);
  CHECK(s.min_count == 1);
}
