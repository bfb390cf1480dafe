#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "pkem/bitstring.hpp"
#include "pkem/rng.hpp"

namespace pkem {

// One symbol per entry; x, y and z are strings of n symbols.
using SymbolString = std::vector<uint8_t>;

// Integer form of an exactly-known distribution: P(x,y,z) = weight / denominator.
struct ExactTable {
  uint64_t denominator = 1;
  std::vector<uint64_t> weights;  // same layout as SourceSpec::prob
};

// Per-symbol costs of a binary source with P(x|y) depending only on x == y.
struct BinarySymmetric {
  double c0;  // -log2 P(x = y | y)
  double c1;  // -log2 P(x != y | y)
};

// The crossover parameters a source was built from by SourceSpec::bsc.
struct BscOrigin {
  double p;
  double q;
};

// An i.i.d. source P_XYZ over finite alphabets, repeated n times.
class SourceSpec {
 public:
  SourceSpec(std::array<unsigned, 3> alphabet, unsigned n, std::vector<double> pxyz,
             std::optional<ExactTable> exact = std::nullopt);

  // X uniform bit, Y = X xor Ber(p), Z = X xor Ber(q).
  static SourceSpec bsc(double p, double q, unsigned n);

  unsigned n() const { return n_; }
  const std::array<unsigned, 3>& alphabet() const { return alphabet_; }
  unsigned ax() const { return alphabet_[0]; }
  unsigned ay() const { return alphabet_[1]; }
  unsigned az() const { return alphabet_[2]; }
  SourceSpec with_n(unsigned n) const;

  size_t index(unsigned x, unsigned y, unsigned z) const { return (size_t{x} * ay() + y) * az() + z; }
  double prob(unsigned x, unsigned y, unsigned z) const { return pxyz_[index(x, y, z)]; }
  const std::vector<double>& table() const { return pxyz_; }
  double pxy(unsigned x, unsigned y) const { return pxy_[size_t{x} * ay() + y]; }
  double pxz(unsigned x, unsigned z) const { return pxz_[size_t{x} * az() + z]; }
  double pyz(unsigned y, unsigned z) const { return pyz_[size_t{y} * az() + z]; }
  double py(unsigned y) const { return py_[y]; }
  double pz(unsigned z) const { return pz_[z]; }
  // -log2 P(x|y); +infinity when P(x,y) = 0.
  double cost(unsigned x, unsigned y) const { return cost_[size_t{x} * ay() + y]; }

  const std::optional<ExactTable>& exact() const { return exact_; }
  const std::optional<BinarySymmetric>& binary_symmetric() const { return bsym_; }
  const std::optional<BscOrigin>& bsc_origin() const { return bsc_; }

  // Bit encoding of x strings: each symbol takes bits_per_symbol() bits, first
  // symbol most significant.
  unsigned bits_per_symbol() const;
  size_t x_bits() const { return size_t{n_} * bits_per_symbol(); }
  BitString x_to_bits(const SymbolString& x) const;

 private:
  std::array<unsigned, 3> alphabet_;
  unsigned n_;
  std::vector<double> pxyz_;
  std::vector<double> pxy_, pxz_, pyz_, py_, pz_, cost_;
  std::optional<ExactTable> exact_;
  std::optional<BinarySymmetric> bsym_;
  std::optional<BscOrigin> bsc_;
};

struct SampleTriple {
  SymbolString x, y, z;
};

SampleTriple sample(const SourceSpec& spec, Rng& rng);

// Sum of per-symbol -log2 P(x_i | y_i).
double cond_neg_log_prob(const SourceSpec& spec, const SymbolString& x, const SymbolString& y);
// cost <= nu, with a relative slack of 1e-9 so that equal costs computed by
// different summation orders classify the same way.
bool within_threshold(double cost, double nu);

using ReconVisitor = std::function<void(const SymbolString& candidate, double cost)>;

// Number of members of R(y) for a binary-symmetric source, or nullopt for
// other sources. Saturates at UINT64_MAX.
std::optional<uint64_t> recon_set_size_bsc(const SourceSpec& spec, double nu);
// Largest Hamming distance d with cost <= nu for a binary-symmetric source;
// -1 when even y itself is excluded.
long hamming_radius(const SourceSpec& spec, double nu);

// Streams every x with cond_neg_log_prob(x, y) <= nu, in no particular order.
// Throws InfeasibleError once more than `cap` members are found.
void for_each_recon_member(const SourceSpec& spec, const SymbolString& y, double nu, uint64_t cap,
                           const ReconVisitor& visit);
// The same set, sorted by cost and then lexicographically.
std::vector<SymbolString> recon_set(const SourceSpec& spec, const SymbolString& y, double nu, uint64_t cap);

// Per-symbol H(X|Y) and the average conditional min-entropy of X given Z.
double shannon_cond_entropy(const SourceSpec& spec);
double avg_min_entropy(const SourceSpec& spec);

// The two guessing expectations over n-symbol strings:
//   mass_x = E_z max_x sum_{y': P(x|y') >= 2^-nu} P(y'|z)
//   mass_y = E_z max_y sum_{x': P(x'|y) >= 2^-nu} P(x'|z)
struct GuessingMass {
  double mass_x = 0;
  double mass_y = 0;
  double log2_mass_x = 0;  // -infinity when the mass is zero
  double log2_mass_y = 0;
};

// Exact evaluation by enumeration of all z and guesses. Throws
// InfeasibleError above `max_states` enumeration states.
GuessingMass guessing_mass(const SourceSpec& spec, double nu, uint64_t max_states = uint64_t{1} << 26);
// Closed form for sources built by SourceSpec::bsc: both expectations are
// binomial tails at the Hamming radius of R.
GuessingMass guessing_mass_bsc(const SourceSpec& spec, double nu);
// Picks the exact route when it is small enough, else the closed form.
GuessingMass guessing_mass_auto(const SourceSpec& spec, double nu);

// log2 P[Bin(n, p) <= k]
double log2_binomial_cdf(unsigned n, double p, long k);

}  // namespace pkem
