#include "pkem/games.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

#include "parallel.hpp"
#include "pkem/errors.hpp"

namespace pkem::games {

namespace {

Rng master_rng(const GameConfig& cfg) { return Rng(std::span<const uint8_t>(cfg.seed)); }

double mean(const std::vector<uint8_t>& v, size_t from, size_t step) {
  size_t n = 0, ones = 0;
  for (size_t i = from; i < v.size(); i += step, ++n) ones += v[i];
  return n == 0 ? 0.0 : static_cast<double>(ones) / static_cast<double>(n);
}

AdvantageReport two_arm_report(std::string game, std::string atk, const std::vector<uint8_t>& out, size_t trials,
                               double bound) {
  AdvantageReport r;
  r.game = std::move(game);
  r.atk = std::move(atk);
  r.p0 = mean(out, 0, 2);
  r.p1 = mean(out, 1, 2);
  r.estimate = std::abs(r.p0 - r.p1);
  r.halfwidth = hoeffding_halfwidth(trials);
  r.bound = bound;
  r.n_trials = trials;
  r.arms = 2;
  return r;
}

void check_trials(const GameConfig& cfg) {
  if (cfg.trials == 0) throw InvalidArgument("at least one trial is needed");
}

}  // namespace

std::string to_string(Atk a) {
  switch (a) {
    case Atk::ot: return "ot";
    case Atk::cea: return "cea";
    case Atk::cca: return "cca";
  }
  return "?";
}

Atk atk_from_string(const std::string& s) {
  if (s == "ot") return Atk::ot;
  if (s == "cea") return Atk::cea;
  if (s == "cca") return Atk::cca;
  throw InvalidArgument("unknown attack model '" + s + "'");
}

double hoeffding_halfwidth(size_t trials) {
  if (trials == 0) return 1;
  return std::sqrt(std::log(2 / 0.01) / (2.0 * static_cast<double>(trials)));
}

std::string AdvantageReport::to_json() const {
  nlohmann::ordered_json j;
  j["game"] = game;
  j["atk"] = atk;
  j["estimate"] = estimate;
  j["halfwidth"] = halfwidth;
  j["bound"] = bound;
  j["n_trials"] = n_trials;
  if (predicted) j["predicted"] = *predicted;
  if (rejected != 0) j["rejected"] = rejected;
  return j.dump();
}

bool AdvantageReport::exceeds_bound() const { return estimate > bound + arms * halfwidth; }

KemOracles::KemOracles(const Ikem& ikem, const IkemInstance& inst, Rng& rng, Atk atk, unsigned q_e, unsigned q_d,
                       bool leak_real_key)
    : ikem_(&ikem), inst_(&inst), rng_(&rng), atk_(atk), q_e_(q_e), q_d_(q_d), leak_(leak_real_key) {}

Encapsulation KemOracles::encapsulate() {
  if (atk_ == Atk::ot) throw GameRuleError("no encapsulation oracle in the ot game");
  if (enc_used_ >= q_e_) throw GameRuleError("encapsulation budget exhausted");
  ++enc_used_;
  Encapsulation e = ikem_->encap(inst_->sample.x, *rng_, inst_->public_seed);
  issued_.push_back(e.ct);
  return e;
}

std::optional<BitString> KemOracles::decapsulate(const IkemCiphertext& c) {
  if (atk_ != Atk::cca) throw GameRuleError("no decapsulation oracle in this game");
  if (dec_used_ >= q_d_) throw GameRuleError("decapsulation budget exhausted");
  if (challenge_ && c == *challenge_) throw GameRuleError("the challenge ciphertext cannot be decapsulated");
  ++dec_used_;
  try {
    return ikem_->decap(inst_->sample.y, c, inst_->public_seed);
  } catch (const InvalidArgument&) {
    return std::nullopt;  // ill-shaped ciphertexts are rejected
  }
}

std::optional<BitString> KemOracles::leaked_real_key() const { return leak_ ? real_key_ : std::nullopt; }

void KemOracles::set_challenge(const IkemCiphertext& c, const BitString& real_key) {
  challenge_ = c;
  real_key_ = real_key;
}

AdvantageReport run_pkind(const Ikem& ikem, const GameConfig& cfg, const PkindAdversary& adv, double bound) {
  check_trials(cfg);
  const Rng master = master_rng(cfg);
  std::vector<uint8_t> out(2 * cfg.trials);
  detail::for_each_index(out.size(), cfg.parallel, [&](size_t i) {
    Rng rng = master.fork(i);
    Rng adv_rng = rng.fork(0);
    const IkemInstance inst = ikem.gen(rng);
    KemOracles o(ikem, inst, rng, cfg.atk, cfg.q_e, cfg.q_d, cfg.leak_real_key);
    const PkindView view{ikem, inst.sample.z, inst.public_seed};
    auto a = adv.clone();
    a->phase1(view, o, adv_rng);
    const Encapsulation ch = ikem.encap(inst.sample.x, rng, inst.public_seed);
    o.set_challenge(ch.ct, ch.key);
    const BitString k = i % 2 == 0 ? ch.key : rng.bits(ikem.params().ell);
    out[i] = a->phase2(view, ch.ct, k, o, adv_rng) ? 1 : 0;
  });
  return two_arm_report("pkind", to_string(cfg.atk), out, cfg.trials, bound);
}

AdvantageReport run_kint(const Ikem& ikem, const GameConfig& cfg, const KintAdversary& adv, double bound) {
  check_trials(cfg);
  if (cfg.q_e != 1) throw InvalidArgument("the integrity game allows exactly one encapsulation query");
  const Rng master = master_rng(cfg);
  std::vector<uint8_t> win(cfg.trials), replay(cfg.trials);
  std::vector<double> predicted(cfg.trials, -1);
  detail::for_each_index(cfg.trials, cfg.parallel, [&](size_t i) {
    Rng rng = master.fork(i);
    Rng adv_rng = rng.fork(0);
    const IkemInstance inst = ikem.gen(rng);
    KemOracles o(ikem, inst, rng, Atk::cca, 1, cfg.q_d, false);
    const PkindView view{ikem, inst.sample.z, inst.public_seed};
    auto a = adv.clone();
    const auto forged = a->forge(view, o, adv_rng);
    if (auto p = a->predicted_success()) predicted[i] = *p;
    if (!forged) return;
    if (std::find(o.issued().begin(), o.issued().end(), *forged) != o.issued().end()) {
      replay[i] = 1;
      return;
    }
    try {
      win[i] = ikem.decap(inst.sample.y, *forged, inst.public_seed) ? 1 : 0;
    } catch (const InvalidArgument&) {
      win[i] = 0;
    }
  });
  AdvantageReport r;
  r.game = "kint";
  r.atk = "cca";
  r.estimate = mean(win, 0, 1);
  r.p0 = r.estimate;
  r.halfwidth = hoeffding_halfwidth(cfg.trials);
  r.bound = bound;
  r.n_trials = cfg.trials;
  r.arms = 1;
  for (uint8_t x : replay) r.rejected += x;
  if (std::all_of(predicted.begin(), predicted.end(), [](double p) { return p >= 0; })) {
    double s = 0;
    for (double p : predicted) s += p;
    r.predicted = s / static_cast<double>(cfg.trials);
  }
  return r;
}

DemOracle::DemOracle(const Dem& dem, const DemKey& key, bool dec_enabled, unsigned q_d)
    : dem_(&dem), key_(&key), enabled_(dec_enabled), q_d_(q_d) {}

std::optional<Bytes> DemOracle::decrypt(const DemCiphertext& c) {
  if (!enabled_) throw GameRuleError("no decryption oracle in the ot game");
  if (used_ >= q_d_) throw GameRuleError("decryption budget exhausted");
  if (challenge_ && c == *challenge_) throw GameRuleError("the challenge ciphertext cannot be decrypted");
  ++used_;
  return dem_->decrypt(*key_, c);
}

AdvantageReport run_dem_ind(const Dem& dem, DemKind atk, const GameConfig& cfg, const DemAdversary& adv, double bound) {
  check_trials(cfg);
  const Rng master = master_rng(cfg);
  std::vector<uint8_t> out(2 * cfg.trials);
  detail::for_each_index(out.size(), cfg.parallel, [&](size_t i) {
    Rng rng = master.fork(i);
    Rng adv_rng = rng.fork(0);
    DemKey key(rng.bits(dem.key_bits()));
    auto a = adv.clone();
    const auto [m0, m1] = a->choose(adv_rng);
    if (m0.size() != m1.size()) throw GameRuleError("challenge messages must have equal length");
    const DemCiphertext c = dem.encrypt(key, i % 2 == 0 ? m0 : m1);
    DemOracle o(dem, key, atk == DemKind::otcca, cfg.q_d);
    o.set_challenge(c);
    out[i] = a->guess(c, o, adv_rng) ? 1 : 0;
  });
  return two_arm_report("dem", to_string(atk), out, cfg.trials, bound);
}

DemCiphertext IdentityDem::encrypt(DemKey& key, std::span<const uint8_t> msg) const {
  key.consume();
  return DemCiphertext{Bytes(msg.begin(), msg.end()), Bytes(tag_bytes(), 0)};
}

std::optional<Bytes> IdentityDem::decrypt(const DemKey&, const DemCiphertext& c) const {
  if (c.tag.size() != tag_bytes()) return std::nullopt;
  return c.body;
}

PriOracle::PriOracle(const PrfFamily& f, const BitString& key, bool real, unsigned q, Rng& rng)
    : f_(&f), key_(&key), real_(real), q_(q), rng_(&rng) {}

BitString PriOracle::eval(std::span<const uint8_t> x) {
  if (used_ >= q_) throw GameRuleError("evaluation budget exhausted");
  Bytes in(x.begin(), x.end());
  if (std::find(seen_.begin(), seen_.end(), in) != seen_.end()) throw GameRuleError("repeated PRF query aborts the game");
  seen_.push_back(std::move(in));
  ++used_;
  return real_ ? f_->eval(*key_, x) : rng_->bits(f_->out_bits());
}

AdvantageReport run_pri(const PrfFamily& f, unsigned q, const GameConfig& cfg, const PriAdversary& adv, double bound) {
  check_trials(cfg);
  const Rng master = master_rng(cfg);
  std::vector<uint8_t> out(2 * cfg.trials);
  detail::for_each_index(out.size(), cfg.parallel, [&](size_t i) {
    Rng rng = master.fork(i);
    Rng adv_rng = rng.fork(0);
    const BitString key = rng.bits(f.key_bits());
    PriOracle o(f, key, i % 2 == 0, q, rng);
    auto a = adv.clone();
    out[i] = a->run(o, adv_rng) ? 1 : 0;
  });
  return two_arm_report("pri", "q=" + std::to_string(q), out, cfg.trials, bound);
}

HeOracles::HeOracles(const HybridScheme& he, const IkemInstance& inst, Rng& rng, HeAtk atk, unsigned q_e, unsigned q_d)
    : he_(&he), inst_(&inst), rng_(&rng), atk_(atk), q_e_(q_e), q_d_(q_d) {}

HybridCiphertext HeOracles::encrypt(std::span<const uint8_t> msg) {
  if (enc_used_ >= q_e_) throw GameRuleError("encryption budget exhausted");
  ++enc_used_;
  return he_->encrypt(inst_->sample.x, msg, *rng_, inst_->public_seed);
}

std::optional<Bytes> HeOracles::decrypt(const HybridCiphertext& c) {
  if (atk_ != HeAtk::cca) throw GameRuleError("no decryption oracle in the cpa game");
  if (dec_used_ >= q_d_) throw GameRuleError("decryption budget exhausted");
  if (challenge_ && c == *challenge_) throw GameRuleError("the challenge ciphertext cannot be decrypted");
  ++dec_used_;
  try {
    return he_->decrypt(inst_->sample.y, c, inst_->public_seed);
  } catch (const InvalidArgument&) {
    return std::nullopt;
  }
}

AdvantageReport run_he_ind(const HybridScheme& he, HeAtk atk, const GameConfig& cfg, const HeAdversary& adv,
                           double bound) {
  check_trials(cfg);
  const Mode mode = he.ikem().params().mode;
  const bool ok = atk == HeAtk::cca ? mode == Mode::cca && he.dem().kind() == DemKind::otcca
                                    : mode != Mode::cca && he.dem().kind() == DemKind::ot;
  if (!ok) throw InvalidArgument("hybrid scheme pairing does not match the requested game");
  const Rng master = master_rng(cfg);
  std::vector<uint8_t> out(2 * cfg.trials);
  detail::for_each_index(out.size(), cfg.parallel, [&](size_t i) {
    Rng rng = master.fork(i);
    Rng adv_rng = rng.fork(0);
    const IkemInstance inst = he.ikem().gen(rng);
    HeOracles o(he, inst, rng, atk, cfg.q_e, cfg.q_d);
    auto a = adv.clone();
    const auto [m0, m1] = a->choose(inst.sample.z, o, adv_rng);
    if (m0.size() != m1.size()) throw GameRuleError("challenge messages must have equal length");
    const HybridCiphertext c = he.encrypt(inst.sample.x, i % 2 == 0 ? m0 : m1, rng, inst.public_seed);
    o.set_challenge(c);
    out[i] = a->guess(inst.sample.z, c, o, adv_rng) ? 1 : 0;
  });
  return two_arm_report("he", atk == HeAtk::cca ? "cca" : "cpa", out, cfg.trials, bound);
}

}  // namespace pkem::games
