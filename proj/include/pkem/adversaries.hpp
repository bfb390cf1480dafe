#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "pkem/games.hpp"

namespace pkem::games {

// Every x and y string of a small instance, with R(y) membership and
// bit encodings precomputed. Shared read-only between adversary clones.
class SmallWorld {
 public:
  explicit SmallWorld(const Ikem& ikem, uint64_t max_pairs = uint64_t{1} << 16);

  const Ikem& ikem() const { return *ikem_; }
  size_t nx() const { return xs_.size(); }
  size_t ny() const { return ys_.size(); }
  const SymbolString& x(size_t i) const { return xs_[i]; }
  const BitString& x_bits(size_t i) const { return xbits_[i]; }
  const SymbolString& y(size_t j) const { return ys_[j]; }
  bool in_recon(size_t xi, size_t yj) const { return member_[xi * ys_.size() + yj] != 0; }
  // P(x, y, z) over the n-symbol strings.
  double joint(size_t xi, size_t yj, const SymbolString& z) const;

 private:
  const Ikem* ikem_;
  std::vector<SymbolString> xs_, ys_;
  std::vector<BitString> xbits_;
  std::vector<uint8_t> member_;
};

// An encapsulation seen by the adversary; the key may be unknown.
struct Observation {
  IkemCiphertext ct;
  std::optional<BitString> key;
};

struct ForgeryResult {
  IkemCiphertext c_f;
  double p_success = 0;  // exact acceptance probability under the posterior
  double score_x = 0;    // max_x sum_{y: x in R(y)} P(x, y | view)
  double score_y = 0;    // max_y sum_{x in R(y)} P(x, y | view)
};

// Posterior over (x, y) given z and the observations, then the best
// ciphertext among guesses built from the x-guessing and y-guessing
// strategies with a sweep of fresh seeds. Observed ciphertexts are never
// returned.
ForgeryResult brute_force_forger(const SmallWorld& world, const SymbolString& z,
                                 const std::optional<BitString>& public_seed, const std::vector<Observation>& observed);

// Acceptance probability of `c` against the posterior, by a table of tags
// rather than by calling decap.
double acceptance_probability(const SmallWorld& world, const std::vector<double>& posterior_y, const IkemCiphertext& c,
                              const std::optional<BitString>& public_seed);

class RandomGuessPkind : public PkindAdversary {
 public:
  std::unique_ptr<PkindAdversary> clone() const override { return std::make_unique<RandomGuessPkind>(); }
  bool phase2(const PkindView&, const IkemCiphertext&, const BitString&, KemOracles&, Rng& rng) override;
};

// Calibration cheat: compares the offered key with the leaked real key.
class LeakPkind : public PkindAdversary {
 public:
  std::unique_ptr<PkindAdversary> clone() const override { return std::make_unique<LeakPkind>(); }
  bool phase2(const PkindView&, const IkemCiphertext&, const BitString& key, KemOracles& o, Rng& rng) override;
};

// Exact Bayes distinguisher: answers 1 iff the posterior probability of the
// offered key exceeds 2^-ell. Uses every encapsulation query it may make; with
// `decap_probe` it also submits one forged ciphertext to the decapsulation
// oracle and conditions on the answer.
class BayesPkind : public PkindAdversary {
 public:
  BayesPkind(std::shared_ptr<const SmallWorld> world, unsigned encaps, bool decap_probe)
      : world_(std::move(world)), encaps_(encaps), probe_(decap_probe) {}
  std::unique_ptr<PkindAdversary> clone() const override { return std::make_unique<BayesPkind>(world_, encaps_, probe_); }
  void phase1(const PkindView& view, KemOracles& o, Rng& rng) override;
  bool phase2(const PkindView& view, const IkemCiphertext& c, const BitString& key, KemOracles& o, Rng& rng) override;

 private:
  std::shared_ptr<const SmallWorld> world_;
  unsigned encaps_;
  bool probe_;
  std::vector<Observation> seen_;
};

// One encapsulation query, then the brute-force forgery.
class ForgerKint : public KintAdversary {
 public:
  explicit ForgerKint(std::shared_ptr<const SmallWorld> world) : world_(std::move(world)) {}
  std::unique_ptr<KintAdversary> clone() const override { return std::make_unique<ForgerKint>(world_); }
  std::optional<IkemCiphertext> forge(const PkindView& view, KemOracles& o, Rng& rng) override;
  std::optional<double> predicted_success() const override { return last_; }

 private:
  std::shared_ptr<const SmallWorld> world_;
  std::optional<double> last_;
};

// Replays the oracle's ciphertext; the game must refuse to count it.
class ReplayKint : public KintAdversary {
 public:
  std::unique_ptr<KintAdversary> clone() const override { return std::make_unique<ReplayKint>(); }
  std::optional<IkemCiphertext> forge(const PkindView& view, KemOracles& o, Rng& rng) override;
};

// Submits a uniformly random well-formed ciphertext.
class RandomKint : public KintAdversary {
 public:
  std::unique_ptr<KintAdversary> clone() const override { return std::make_unique<RandomKint>(); }
  std::optional<IkemCiphertext> forge(const PkindView& view, KemOracles& o, Rng& rng) override;
};

class RandomGuessDem : public DemAdversary {
 public:
  std::unique_ptr<DemAdversary> clone() const override { return std::make_unique<RandomGuessDem>(); }
  std::pair<Bytes, Bytes> choose(Rng& rng) override;
  bool guess(const DemCiphertext&, DemOracle&, Rng& rng) override;
};

// Answers 1 iff the challenge body equals the first message in the clear.
class PlaintextMatchDem : public DemAdversary {
 public:
  std::unique_ptr<DemAdversary> clone() const override { return std::make_unique<PlaintextMatchDem>(); }
  std::pair<Bytes, Bytes> choose(Rng& rng) override;
  bool guess(const DemCiphertext& c, DemOracle&, Rng& rng) override;
};

// Flips one body bit of the challenge and asks for its decryption.
class TamperDem : public DemAdversary {
 public:
  std::unique_ptr<DemAdversary> clone() const override { return std::make_unique<TamperDem>(); }
  std::pair<Bytes, Bytes> choose(Rng& rng) override;
  bool guess(const DemCiphertext& c, DemOracle& o, Rng& rng) override;
};

class RandomGuessPri : public PriAdversary {
 public:
  explicit RandomGuessPri(unsigned queries) : queries_(queries) {}
  std::unique_ptr<PriAdversary> clone() const override { return std::make_unique<RandomGuessPri>(queries_); }
  bool run(PriOracle& o, Rng& rng) override;

 private:
  unsigned queries_;
};

// Against a full-width polynomial PRF of the given degree: queries degree+2
// points and checks whether they lie on one polynomial of that degree.
class InterpolationPri : public PriAdversary {
 public:
  InterpolationPri(unsigned m, unsigned degree) : m_(m), degree_(degree) {}
  std::unique_ptr<PriAdversary> clone() const override { return std::make_unique<InterpolationPri>(m_, degree_); }
  bool run(PriOracle& o, Rng& rng) override;

 private:
  unsigned m_, degree_;
};

class RandomGuessHe : public HeAdversary {
 public:
  std::unique_ptr<HeAdversary> clone() const override { return std::make_unique<RandomGuessHe>(); }
  std::pair<Bytes, Bytes> choose(const SymbolString&, HeOracles&, Rng& rng) override;
  bool guess(const SymbolString&, const HybridCiphertext&, HeOracles&, Rng& rng) override;
};

// Flips one DEM body bit of the challenge and asks for its decryption.
class TamperHe : public HeAdversary {
 public:
  std::unique_ptr<HeAdversary> clone() const override { return std::make_unique<TamperHe>(); }
  std::pair<Bytes, Bytes> choose(const SymbolString&, HeOracles&, Rng& rng) override;
  bool guess(const SymbolString&, const HybridCiphertext& c, HeOracles& o, Rng& rng) override;
};

}  // namespace pkem::games
