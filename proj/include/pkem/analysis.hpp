#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include <boost/multiprecision/cpp_int.hpp>

#include "pkem/bitstring.hpp"
#include "pkem/ikem.hpp"
#include "pkem/uhash.hpp"

// Exhaustive analyzers for toy-sized instances. Each kernel takes an Exec
// switch: the serial route is the reference the OpenMP route is tested and
// benchmarked against.
namespace pkem::analysis {

using Rational = boost::multiprecision::cpp_rational;

enum class Exec { serial, parallel };

// Hash of an x given as an integer, keyed by a seed given as an integer.
using IntHash = std::function<uint64_t(uint64_t x, uint64_t seed)>;

struct CollisionStats {
  uint64_t max_collisions = 0;  // over all pairs x != x'
  uint64_t seeds = 0;
  uint64_t worst_x = 0, worst_x2 = 0;
  Rational probability() const { return Rational(max_collisions, seeds); }
};

// max over x != x' of #{seed : h(x, seed) == h(x', seed)}.
CollisionStats max_collision(unsigned x_bits, unsigned seed_bits, const IntHash& h, Exec exec);

// The integrity-protecting reconciliation hash as an IntHash: the seed
// integer is s' (high w bits) followed by s (low x_bits bits).
IntHash cca_int_hash(const uhash::CcaHash& h, unsigned x_bits, unsigned w);

// A pair of seed tuples and target tags for the simultaneous-solution counts.
struct SolutionQuery {
  BitString s_prime, s;      // first seed tuple
  BitString s_prime_f, s_f;  // second seed tuple
  BitString v, v_f;
  std::optional<BitString> e;  // offset, part ii only
};

enum class Part { i, ii };

// Part i: #x with h(x; s', s) = v and h(x; s'_f, s_f) = v_f, distinct seed
// tuples required. Part ii: #x' with h(x' + e; s', s) = v and
// h(x'; s'_f, s_f) = v_f, e != 0 and (v_f, s'_f, s_f) != (v, s', s) required.
// Throws InvalidArgument when a precondition fails.
uint64_t count_solutions(const uhash::CcaHash& h, const SolutionQuery& q, Part part);

struct SolutionMaxima {
  uint64_t max_i = 0, max_ii = 0;
  uint64_t tuples_i = 0, tuples_ii = 0;  // admissible (seed, seed, v, v_f[, e]) tuples examined
};

// Maxima of both counts over every admissible tuple, from a table of all
// hash values. Needs x_bits + w + x_bits <= 20.
SolutionMaxima solution_maxima(unsigned x_bits, unsigned t, unsigned w, Exec exec);

struct ExactDistance {
  Rational delta;
  double value = 0;
  double bound = 0;          // key_distance_bound for the instance
  bool within_bound = false;  // decided in exact arithmetic
};

// Statistical distance between (K, view) and (U_ell, view), where the view is
// z, the challenge ciphertext and q_e encapsulation answers, by enumeration of
// x, z and every seed. Needs an exact source table and ell, t <= 32.
ExactDistance exact_distance(const Ikem& ikem, unsigned q_e, Exec exec,
                             uint64_t max_work = uint64_t{1} << 34);

// Straightforward enumeration with rational arithmetic throughout; slow.
Rational exact_distance_reference(const Ikem& ikem, unsigned q_e);

struct IndependenceStats {
  uint64_t min_count = 0, max_count = 0;  // over output tuples, for each point tuple
  uint64_t point_tuples = 0;
  bool uniform() const { return min_count == max_count; }
};

// For every set of k distinct points of GF(2^m), the joint output
// distribution of the degree k-1 polynomial family over all keys.
IndependenceStats twise_independence(unsigned m, unsigned k, Exec exec);

}  // namespace pkem::analysis
