#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pkem/combiner.hpp"
#include "pkem/dem.hpp"
#include "pkem/hybrid.hpp"
#include "pkem/ikem.hpp"
#include "pkem/rng.hpp"

namespace pkem::games {

// Oracle access of the key-indistinguishability game: none, encapsulation,
// or encapsulation and decapsulation.
enum class Atk { ot, cea, cca };
std::string to_string(Atk a);
Atk atk_from_string(const std::string& s);

// Two-sided 99% Hoeffding half-width for a rate estimated from `trials` draws.
double hoeffding_halfwidth(size_t trials);

struct GameConfig {
  Atk atk = Atk::cea;
  size_t trials = 1000;  // per arm
  unsigned q_e = 0;
  unsigned q_d = 0;
  Bytes seed;                 // master seed; trial i of arm b uses fork(2i+b)
  bool leak_real_key = false;  // calibration only: oracles expose the real challenge key
  bool parallel = true;
};

struct AdvantageReport {
  std::string game, atk;
  double estimate = 0;   // |p0 - p1|, or the success rate for single-arm games
  double halfwidth = 0;  // per arm
  double bound = 0;
  size_t n_trials = 0;   // per arm
  unsigned arms = 2;
  double p0 = 0, p1 = 0;
  std::optional<double> predicted;  // mean of the adversary's own success prediction
  size_t rejected = 0;              // replayed forgeries, not counted

  std::string to_json() const;
  // estimate > bound + arms * halfwidth
  bool exceeds_bound() const;
};

// Per-trial oracle set for the iKEM games, enforcing budgets and barring
// the challenge ciphertext from decapsulation.
class KemOracles {
 public:
  KemOracles(const Ikem& ikem, const IkemInstance& inst, Rng& rng, Atk atk, unsigned q_e, unsigned q_d,
             bool leak_real_key);

  Encapsulation encapsulate();
  std::optional<BitString> decapsulate(const IkemCiphertext& c);
  std::optional<BitString> leaked_real_key() const;

  unsigned encaps_used() const { return enc_used_; }
  unsigned decaps_used() const { return dec_used_; }
  const std::vector<IkemCiphertext>& issued() const { return issued_; }

  void set_challenge(const IkemCiphertext& c, const BitString& real_key);

 private:
  const Ikem* ikem_;
  const IkemInstance* inst_;
  Rng* rng_;
  Atk atk_;
  unsigned q_e_, q_d_;
  bool leak_;
  unsigned enc_used_ = 0, dec_used_ = 0;
  std::vector<IkemCiphertext> issued_;
  std::optional<IkemCiphertext> challenge_;
  std::optional<BitString> real_key_;
};

// What the distinguisher sees besides oracle answers.
struct PkindView {
  const Ikem& ikem;
  const SymbolString& z;
  const std::optional<BitString>& public_seed;
};

class PkindAdversary {
 public:
  virtual ~PkindAdversary() = default;
  virtual std::unique_ptr<PkindAdversary> clone() const = 0;
  virtual void phase1(const PkindView&, KemOracles&, Rng&) {}
  virtual bool phase2(const PkindView& view, const IkemCiphertext& challenge, const BitString& key, KemOracles& o,
                      Rng& rng) = 0;
};

// Arm b = 0 hands the distinguisher the real key, arm b = 1 a uniform one.
AdvantageReport run_pkind(const Ikem& ikem, const GameConfig& cfg, const PkindAdversary& adv, double bound);

class KintAdversary {
 public:
  virtual ~KintAdversary() = default;
  virtual std::unique_ptr<KintAdversary> clone() const = 0;
  virtual std::optional<IkemCiphertext> forge(const PkindView& view, KemOracles& o, Rng& rng) = 0;
  // Exact success probability of the last forgery, if the adversary knows it.
  virtual std::optional<double> predicted_success() const { return std::nullopt; }
};

// Key-integrity game. Requires cfg.q_e == 1. A forgery equal to a ciphertext
// returned by the encapsulation oracle is rejected and scores zero.
AdvantageReport run_kint(const Ikem& ikem, const GameConfig& cfg, const KintAdversary& adv, double bound);

class DemOracle {
 public:
  DemOracle(const Dem& dem, const DemKey& key, bool dec_enabled, unsigned q_d);
  std::optional<Bytes> decrypt(const DemCiphertext& c);
  void set_challenge(const DemCiphertext& c) { challenge_ = c; }

 private:
  const Dem* dem_;
  const DemKey* key_;
  bool enabled_;
  unsigned q_d_, used_ = 0;
  std::optional<DemCiphertext> challenge_;
};

class DemAdversary {
 public:
  virtual ~DemAdversary() = default;
  virtual std::unique_ptr<DemAdversary> clone() const = 0;
  virtual std::pair<Bytes, Bytes> choose(Rng& rng) = 0;
  virtual bool guess(const DemCiphertext& challenge, DemOracle& o, Rng& rng) = 0;
};

// One-time DEM indistinguishability; `otcca` adds a decryption oracle.
AdvantageReport run_dem_ind(const Dem& dem, DemKind atk, const GameConfig& cfg, const DemAdversary& adv, double bound);

// A DEM that leaves messages in the clear. Calibration stub only.
class IdentityDem : public Dem {
 public:
  explicit IdentityDem(DemKind kind) : kind_(kind) {}
  DemKind kind() const override { return kind_; }
  unsigned key_bits() const override { return kind_ == DemKind::ot ? 256 : 512; }
  size_t tag_bytes() const override { return kind_ == DemKind::ot ? 0 : 16; }
  DemCiphertext encrypt(DemKey& key, std::span<const uint8_t> msg) const override;
  std::optional<Bytes> decrypt(const DemKey& key, const DemCiphertext& c) const override;

 private:
  DemKind kind_;
};

class PrfFamily {
 public:
  virtual ~PrfFamily() = default;
  virtual unsigned key_bits() const = 0;
  virtual unsigned out_bits() const = 0;
  virtual BitString eval(const BitString& key, std::span<const uint8_t> x) const = 0;
};

class ItPrfFamily : public PrfFamily {
 public:
  explicit ItPrfFamily(comb::ItPrf f) : f_(std::move(f)) {}
  unsigned key_bits() const override { return f_.key_bits(); }
  unsigned out_bits() const override { return f_.out_bits(); }
  BitString eval(const BitString& key, std::span<const uint8_t> x) const override { return f_.eval(key, x); }

 private:
  comb::ItPrf f_;
};

class CompPrfFamily : public PrfFamily {
 public:
  explicit CompPrfFamily(comb::CompPrf f) : f_(f) {}
  unsigned key_bits() const override { return f_.key_bits(); }
  unsigned out_bits() const override { return f_.out_bits(); }
  BitString eval(const BitString& key, std::span<const uint8_t> x) const override { return f_.eval(key, x); }

 private:
  comb::CompPrf f_;
};

// Real-or-random evaluation oracle; a repeated input aborts the game.
class PriOracle {
 public:
  PriOracle(const PrfFamily& f, const BitString& key, bool real, unsigned q, Rng& rng);
  BitString eval(std::span<const uint8_t> x);

 private:
  const PrfFamily* f_;
  const BitString* key_;
  bool real_;
  unsigned q_, used_ = 0;
  Rng* rng_;
  std::vector<Bytes> seen_;
};

class PriAdversary {
 public:
  virtual ~PriAdversary() = default;
  virtual std::unique_ptr<PriAdversary> clone() const = 0;
  virtual bool run(PriOracle& o, Rng& rng) = 0;
};

AdvantageReport run_pri(const PrfFamily& f, unsigned q, const GameConfig& cfg, const PriAdversary& adv, double bound);

// Indistinguishability of hybrid encryption: cpa pairs with cea/baseline + ot,
// cca with cca + otcca; other pairings are rejected.
enum class HeAtk { cpa, cca };

class HeOracles {
 public:
  HeOracles(const HybridScheme& he, const IkemInstance& inst, Rng& rng, HeAtk atk, unsigned q_e, unsigned q_d);
  HybridCiphertext encrypt(std::span<const uint8_t> msg);
  std::optional<Bytes> decrypt(const HybridCiphertext& c);
  void set_challenge(const HybridCiphertext& c) { challenge_ = c; }

 private:
  const HybridScheme* he_;
  const IkemInstance* inst_;
  Rng* rng_;
  HeAtk atk_;
  unsigned q_e_, q_d_, enc_used_ = 0, dec_used_ = 0;
  std::optional<HybridCiphertext> challenge_;
};

class HeAdversary {
 public:
  virtual ~HeAdversary() = default;
  virtual std::unique_ptr<HeAdversary> clone() const = 0;
  virtual std::pair<Bytes, Bytes> choose(const SymbolString& z, HeOracles& o, Rng& rng) = 0;
  virtual bool guess(const SymbolString& z, const HybridCiphertext& c, HeOracles& o, Rng& rng) = 0;
};

AdvantageReport run_he_ind(const HybridScheme& he, HeAtk atk, const GameConfig& cfg, const HeAdversary& adv,
                           double bound);

}  // namespace pkem::games
