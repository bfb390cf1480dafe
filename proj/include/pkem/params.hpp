#pragma once

#include <optional>
#include <string>

#include "pkem/ikem.hpp"
#include "pkem/source.hpp"

namespace pkem {

// Reconciliation threshold achieving failure probability epsilon:
//   nu = n H(X|Y) + sqrt(n) log2(|X|+3) sqrt(log2(sqrt(n) / ((sqrt(n)-1) epsilon)))
double nu_for_epsilon(const SourceSpec& spec, double epsilon);
// Smallest integer t >= nu + log2(sqrt(n)/epsilon).
unsigned t_for_epsilon(double nu, unsigned n, double epsilon);

// Real-valued key-length bounds (floor them for a usable length). Entropies
// are per symbol; n is the number of symbols, x_bits the bit length of x.
double ell_bound_cea(unsigned n, double h_min, double sigma, unsigned q_e, unsigned t);
double ell_bound_cca_secrecy(unsigned n, double h_min, double sigma, unsigned q_e, unsigned t);
double ell_bound_baseline(unsigned n, double h_min, double sigma, unsigned q_e, unsigned t);
// Key length allowed by the integrity requirement delta. +infinity when
// q_d = 0 or both guessing masses vanish.
double ell_bound_integrity(unsigned x_bits, unsigned t, unsigned r, unsigned q_d, double delta, const GuessingMass& g);
// The integrity error for a given key length, as log2 (may exceed 0).
double log2_delta_integrity(unsigned x_bits, unsigned ell, unsigned t, unsigned r, unsigned q_d, const GuessingMass& g);

// Distance bounds of the key from uniform for the exact analyzer.
//   cea: 1/2 sqrt(2^((q_e+1) ell + t - n H))    cca: 1/2 sqrt(2^((q_e+1)(t+ell) - n H))
double key_distance_bound(Mode mode, unsigned n, double h_min, unsigned q_e, unsigned t, unsigned ell);

// Exact decapsulation-failure bound for a binary-symmetric source:
// P[more than radius flips] + |R| 2^-t.
double failure_bound_bsc(const SourceSpec& spec, double nu, unsigned t);

struct DeriveRequest {
  double epsilon = 0;  // 0: take nu from the request
  double sigma = 0x1.0p-40;
  double delta = 0x1.0p-40;
  unsigned q_e = 0, q_d = 0;
  std::optional<unsigned> t;
  std::optional<double> nu;
  std::optional<unsigned> w;
  std::optional<unsigned> ell;  // cap the derived length
};

struct Derivation {
  IkemParams params;
  double h_xy = 0;             // per-symbol H(X|Y)
  double h_min = 0;            // per-symbol average min-entropy of X given Z
  double ell_secrecy = 0;      // real-valued secrecy bound
  double ell_integrity = 0;    // cca only; +infinity otherwise
  std::optional<GuessingMass> mass{};
};

// Throw InfeasibleError when no positive key length or valid t exists.
Derivation derive_params_cea(const SourceSpec& spec, const DeriveRequest& req);
Derivation derive_params_cca(const SourceSpec& spec, const DeriveRequest& req);
Derivation derive_params_baseline(const SourceSpec& spec, const DeriveRequest& req);
Derivation derive_params(Mode mode, const SourceSpec& spec, const DeriveRequest& req);

}  // namespace pkem
