#include <cmath>

#include "doctest.h"
#include "pkem/errors.hpp"
#include "pkem/params.hpp"

using namespace pkem;

TEST_CASE("cea length from the secrecy bound") {
  // Z independent of X: one bit of min-entropy per symbol
  const SourceSpec s = SourceSpec::bsc(0.1, 0.5, 100);
  CHECK(avg_min_entropy(s) == doctest::Approx(1.0));
  CHECK(ell_bound_cea(100, 1.0, std::exp2(-10), 0, 0) == doctest::Approx(82.0));
  CHECK(ell_bound_cea(100, 1.0, 0.5, 0, 5) == doctest::Approx(100 - 2 + 2 - 5));
  DeriveRequest req;
  req.sigma = std::exp2(-10);
  req.t = 0;
  req.nu = 20;
  CHECK(derive_params_cea(s, req).params.ell == 82);
  req.sigma = 0.5;
  req.ell = 50;
  CHECK(derive_params_cea(s, req).params.ell == 50);
  req.ell.reset();
  req.t = 90;
  req.sigma = std::exp2(-10);
  CHECK_THROWS_AS(derive_params_cea(SourceSpec::bsc(0.1, 0.5, 10), req), InfeasibleError);
}

TEST_CASE("threshold, tag length and cca secrecy bound") {
  const SourceSpec s = SourceSpec::bsc(0.02, 0.5, 1000);
  const double h = -0.02 * std::log2(0.02) - 0.98 * std::log2(0.98);
  const double nu_ref =
      1000 * h + std::sqrt(1000.0) * std::log2(5.0) * std::sqrt(std::log2(std::sqrt(1000.0) / ((std::sqrt(1000.0) - 1) * 0.01)));
  const double nu = nu_for_epsilon(s, 0.01);
  CHECK(nu == doctest::Approx(nu_ref).epsilon(1e-12));
  CHECK(nu == doctest::Approx(331.3).epsilon(1e-3));
  const unsigned t = t_for_epsilon(nu, 1000, 0.01);
  CHECK(t == static_cast<unsigned>(std::ceil(nu_ref + std::log2(std::sqrt(1000.0) / 0.01))));
  CHECK(t == 343);
  const double ell = ell_bound_cca_secrecy(1000, 1.0, std::exp2(-40), 0, t);
  CHECK(std::floor(ell) == 579);
  DeriveRequest req;
  req.epsilon = 0.01;
  const auto d = derive_params_cca(s, req);
  CHECK(d.params.t == 343);
  CHECK(d.params.ell == 579);
  CHECK(d.params.r == 2);
}

TEST_CASE("full leakage is infeasible; epsilon near one approaches n H(X|Y)") {
  DeriveRequest req;
  req.epsilon = 0.01;
  CHECK_THROWS_AS(derive_params_cca(SourceSpec::bsc(0.02, 0.0, 1000), req), InfeasibleError);
  const SourceSpec s = SourceSpec::bsc(0.02, 0.5, 400);
  const double floor = 400 * shannon_cond_entropy(s);
  double prev = nu_for_epsilon(s, 0.001);
  for (double e : {0.01, 0.1, 0.5, 0.9}) {
    const double nu = nu_for_epsilon(s, e);
    CHECK(nu < prev);
    CHECK(nu > floor);
    prev = nu;
  }
  // sqrt(n)/((sqrt(n)-1) eps) -> 1 drives the root term to zero
  const double eps_limit = std::sqrt(400.0) / (std::sqrt(400.0) - 1) * 0.999999;
  if (eps_limit < 1) CHECK(nu_for_epsilon(s, eps_limit) == doctest::Approx(floor).epsilon(1e-3));
  CHECK(nu_for_epsilon(s, 0.96) - floor < 0.4 * std::sqrt(400.0) * std::log2(5.0));
}

TEST_CASE("baseline bound") {
  CHECK(ell_bound_baseline(100, 1.0, std::exp2(-10), 0, 4) == doctest::Approx(ell_bound_cca_secrecy(100, 1.0, std::exp2(-10), 0, 4)));
  CHECK(ell_bound_baseline(100, 1.0, std::exp2(-10), 3, 4) ==
        doctest::Approx((100 - 20 + 2) / 4.0 - 4 - std::log2(3 / std::exp2(-10))));
}

TEST_CASE("integrity bound and its inverse agree") {
  GuessingMass g;
  g.mass_x = 0.01;
  g.mass_y = 0.02;
  g.log2_mass_x = std::log2(0.01);
  g.log2_mass_y = std::log2(0.02);
  const double ell = ell_bound_integrity(100, 20, 2, 3, std::exp2(-10), g);
  CHECK(ell == doctest::Approx(20 + std::log2(50.0) - 100 - std::log2(3 * 5 * 4 / std::exp2(-10))));
  CHECK(log2_delta_integrity(100, 10, 20, 2, 3, g) == doctest::Approx(10 - 20 - std::log2(50.0) + 100 + std::log2(60.0)));
  CHECK(std::isinf(ell_bound_integrity(100, 20, 2, 0, std::exp2(-10), g)));
}

TEST_CASE("distance bound exponents") {
  CHECK(key_distance_bound(Mode::cea, 4, 1.0, 0, 2, 1) == doctest::Approx(0.5 * std::sqrt(std::exp2(1 + 2 - 4))));
  CHECK(key_distance_bound(Mode::cca, 4, 1.0, 1, 2, 1) == doctest::Approx(0.5 * std::sqrt(std::exp2(2 * 3 - 4))));
}
