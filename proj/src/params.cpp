#include "pkem/params.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pkem/errors.hpp"

namespace pkem {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_unit_interval(double v, const char* what) {
  if (!(v > 0 && v < 1)) throw InvalidArgument(std::string(what) + " must lie in (0,1)");
}

struct ThresholdChoice {
  double nu;
  unsigned t;
};

ThresholdChoice choose_threshold(const SourceSpec& spec, const DeriveRequest& req) {
  if (req.nu) {
    if (!req.t) {
      if (req.epsilon <= 0) throw InvalidArgument("give t, or epsilon to derive it");
      return {*req.nu, t_for_epsilon(*req.nu, spec.n(), req.epsilon)};
    }
    return {*req.nu, *req.t};
  }
  if (req.epsilon <= 0) throw InvalidArgument("give nu, or epsilon to derive it");
  const double nu = nu_for_epsilon(spec, req.epsilon);
  return {nu, req.t ? *req.t : t_for_epsilon(nu, spec.n(), req.epsilon)};
}

unsigned floor_length(double bound, std::optional<unsigned> cap, unsigned width) {
  double b = std::min(bound, static_cast<double>(width));
  if (cap) b = std::min(b, static_cast<double>(*cap));
  if (!(b >= 1)) throw InfeasibleError("no positive key length satisfies the requested bounds");
  return static_cast<unsigned>(std::floor(b));
}

}  // namespace

double nu_for_epsilon(const SourceSpec& spec, double epsilon) {
  check_unit_interval(epsilon, "epsilon");
  const double n = spec.n();
  if (spec.n() < 2) throw InvalidArgument("the threshold formula needs n >= 2");
  const double rn = std::sqrt(n);
  const double inner = std::log2(rn / ((rn - 1) * epsilon));
  if (!(inner > 0)) throw InfeasibleError("epsilon too large for this n");
  return n * shannon_cond_entropy(spec) + rn * std::log2(spec.ax() + 3.0) * std::sqrt(inner);
}

unsigned t_for_epsilon(double nu, unsigned n, double epsilon) {
  check_unit_interval(epsilon, "epsilon");
  const double t = std::ceil(nu + std::log2(std::sqrt(static_cast<double>(n)) / epsilon) - 1e-9);
  return static_cast<unsigned>(std::max(0.0, t));
}

double ell_bound_cea(unsigned n, double h_min, double sigma, unsigned q_e, unsigned t) {
  check_unit_interval(sigma, "sigma");
  return (n * h_min + 2 * std::log2(sigma) + 2 - t) / (q_e + 1.0);
}

double ell_bound_cca_secrecy(unsigned n, double h_min, double sigma, unsigned q_e, unsigned t) {
  check_unit_interval(sigma, "sigma");
  return (n * h_min + 2 * std::log2(sigma) + 2) / (q_e + 1.0) - t;
}

double ell_bound_baseline(unsigned n, double h_min, double sigma, unsigned q_e, unsigned t) {
  check_unit_interval(sigma, "sigma");
  const double query_term = q_e == 0 ? 0.0 : std::log2(q_e / sigma);
  return (n * h_min + 2 * std::log2(sigma) + 2) / (q_e + 1.0) - t - query_term;
}

double ell_bound_integrity(unsigned x_bits, unsigned t, unsigned r, unsigned q_d, double delta, const GuessingMass& g) {
  if (q_d == 0) return kInf;
  check_unit_interval(delta, "delta");
  const double guess = std::min(-g.log2_mass_x, -g.log2_mass_y);
  if (guess == kInf) return kInf;
  return t + guess - static_cast<double>(x_bits) - std::log2(q_d * (r + 3.0) * (r + 2.0) / delta);
}

double log2_delta_integrity(unsigned x_bits, unsigned ell, unsigned t, unsigned r, unsigned q_d, const GuessingMass& g) {
  if (q_d == 0) return -kInf;
  return std::log2(q_d * (r + 3.0) * (r + 2.0)) + static_cast<double>(x_bits) + ell - t +
         std::max(g.log2_mass_x, g.log2_mass_y);
}

double key_distance_bound(Mode mode, unsigned n, double h_min, unsigned q_e, unsigned t, unsigned ell) {
  const double e = mode == Mode::cca ? (q_e + 1.0) * (t + ell) - n * h_min : (q_e + 1.0) * ell + t - n * h_min;
  return 0.5 * std::sqrt(std::exp2(e));
}

double failure_bound_bsc(const SourceSpec& spec, double nu, unsigned t) {
  const auto size = recon_set_size_bsc(spec, nu);
  if (!size || !spec.bsc_origin()) throw InvalidArgument("failure bound needs a binary symmetric source");
  const long radius = hamming_radius(spec, nu);
  const double p = spec.bsc_origin()->p;
  const double miss = 1 - std::exp2(log2_binomial_cdf(spec.n(), p, radius));
  return std::min(1.0, std::max(0.0, miss) + static_cast<double>(*size) * std::exp2(-static_cast<double>(t)));
}

Derivation derive_params_cea(const SourceSpec& spec, const DeriveRequest& req) {
  const ThresholdChoice th = choose_threshold(spec, req);
  Derivation d{IkemParams(Mode::cea, spec)};
  d.h_xy = shannon_cond_entropy(spec);
  d.h_min = avg_min_entropy(spec);
  d.ell_secrecy = ell_bound_cea(spec.n(), d.h_min, req.sigma, req.q_e, th.t);
  d.ell_integrity = kInf;
  auto& p = d.params;
  p.nu = th.nu;
  p.t = th.t;
  p.epsilon = req.epsilon;
  p.sigma = req.sigma;
  p.q_e = req.q_e;
  p.q_d = 0;
  if (p.t > spec.x_bits()) throw InfeasibleError("t exceeds the bit length of x");
  p.ell = floor_length(d.ell_secrecy, req.ell, static_cast<unsigned>(spec.x_bits()));
  p.validate();
  return d;
}

Derivation derive_params_cca(const SourceSpec& spec, const DeriveRequest& req) {
  const ThresholdChoice th = choose_threshold(spec, req);
  Derivation d{IkemParams(Mode::cca, spec)};
  d.h_xy = shannon_cond_entropy(spec);
  d.h_min = avg_min_entropy(spec);
  auto& p = d.params;
  p.nu = th.nu;
  p.t = th.t;
  p.epsilon = req.epsilon;
  p.sigma = req.sigma;
  p.delta = req.delta;
  p.q_e = req.q_e;
  p.q_d = req.q_d;
  const unsigned nb = static_cast<unsigned>(spec.x_bits());
  if (p.t < 1 || 2 * p.t > nb)
    throw InfeasibleError("t = " + std::to_string(p.t) + " violates 1 <= t <= " + std::to_string(nb / 2));
  p.w = req.w.value_or(nb);
  p.r = 0;
  d.ell_secrecy = ell_bound_cca_secrecy(spec.n(), d.h_min, req.sigma, req.q_e, p.t);
  const unsigned r = uhash::choose_r(p.w, nb - p.t);
  if (req.q_d > 0) {
    d.mass = guessing_mass_auto(spec, p.nu);
    d.ell_integrity = ell_bound_integrity(nb, p.t, r, req.q_d, req.delta, *d.mass);
  } else {
    d.ell_integrity = kInf;
  }
  p.ell = floor_length(std::min(d.ell_secrecy, d.ell_integrity), req.ell, p.w);
  p.validate();
  return d;
}

Derivation derive_params_baseline(const SourceSpec& spec, const DeriveRequest& req) {
  const ThresholdChoice th = choose_threshold(spec, req);
  Derivation d{IkemParams(Mode::baseline, spec)};
  d.h_xy = shannon_cond_entropy(spec);
  d.h_min = avg_min_entropy(spec);
  d.ell_secrecy = ell_bound_baseline(spec.n(), d.h_min, req.sigma, req.q_e, th.t);
  d.ell_integrity = kInf;
  auto& p = d.params;
  p.nu = th.nu;
  p.t = th.t;
  p.epsilon = req.epsilon;
  p.sigma = req.sigma;
  p.q_e = req.q_e;
  if (p.t > spec.x_bits()) throw InfeasibleError("t exceeds the bit length of x");
  p.ell = floor_length(d.ell_secrecy, req.ell, static_cast<unsigned>(spec.x_bits()));
  p.validate();
  return d;
}

Derivation derive_params(Mode mode, const SourceSpec& spec, const DeriveRequest& req) {
  switch (mode) {
    case Mode::cea: return derive_params_cea(spec, req);
    case Mode::cca: return derive_params_cca(spec, req);
    case Mode::baseline: return derive_params_baseline(spec, req);
  }
  throw InvalidArgument("unknown mode");
}

}  // namespace pkem
