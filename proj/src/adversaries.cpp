#include "pkem/adversaries.hpp"

#include <algorithm>
#include <cmath>

#include "pkem/errors.hpp"
#include "pkem/gf2.hpp"

namespace pkem::games {
namespace {

std::vector<SymbolString> all_strings(unsigned alphabet, unsigned n) {
  std::vector<SymbolString> out;
  SymbolString s(n, 0);
  while (true) {
    out.push_back(s);
    unsigned i = n;
    while (i > 0 && ++s[i - 1] == alphabet) s[--i] = 0;
    if (i == 0) break;
  }
  return out;
}

const BitString& tag_seed(const IkemCiphertext& c, const std::optional<BitString>& public_seed) {
  if (c.s) return *c.s;
  if (!public_seed) throw InvalidArgument("cea ciphertext without a public seed");
  return *public_seed;
}

// Unnormalised P(x, y | z, observations) over the nx * ny grid.
std::vector<double> posterior(const SmallWorld& w, const SymbolString& z, const std::optional<BitString>& public_seed,
                              const std::vector<Observation>& observed) {
  const Ikem& ikem = w.ikem();
  std::vector<uint8_t> ok(w.nx(), 1);
  for (size_t xi = 0; xi < w.nx(); ++xi) {
    for (const auto& o : observed) {
      if (ikem.tag_of(w.x_bits(xi), o.ct.s_prime, tag_seed(o.ct, public_seed)) != o.ct.v ||
          (o.key && ikem.key_of(w.x_bits(xi), o.ct.s_prime) != *o.key)) {
        ok[xi] = 0;
        break;
      }
    }
  }
  std::vector<double> post(w.nx() * w.ny(), 0.0);
  for (size_t xi = 0; xi < w.nx(); ++xi) {
    if (!ok[xi]) continue;
    for (size_t yj = 0; yj < w.ny(); ++yj) post[xi * w.ny() + yj] = w.joint(xi, yj, z);
  }
  return post;
}

std::vector<uint8_t> tag_matches(const SmallWorld& w, const IkemCiphertext& c,
                                 const std::optional<BitString>& public_seed) {
  std::vector<uint8_t> t(w.nx());
  const BitString& seed = tag_seed(c, public_seed);
  for (size_t xi = 0; xi < w.nx(); ++xi) t[xi] = w.ikem().tag_of(w.x_bits(xi), c.s_prime, seed) == c.v;
  return t;
}

// Index of the unique member of R(y) matching the tag, or -1 for ⊥.
long decap_index(const SmallWorld& w, const std::vector<uint8_t>& matches, size_t yj) {
  long found = -1;
  for (size_t xi = 0; xi < w.nx(); ++xi) {
    if (!matches[xi] || !w.in_recon(xi, yj)) continue;
    if (found >= 0) return -1;
    found = static_cast<long>(xi);
  }
  return found;
}

// Seeds to try for a forgery, derived from the first observation.
std::vector<std::pair<BitString, std::optional<BitString>>> seed_variants(const Ikem& ikem,
                                                                          const std::vector<Observation>& observed) {
  const IkemParams& p = ikem.params();
  BitString sp = observed.empty() ? BitString(p.s_prime_bits()) : observed.front().ct.s_prime;
  std::optional<BitString> s;
  if (p.mode != Mode::cea) s = observed.empty() ? BitString(p.s_bits()) : *observed.front().ct.s;

  std::vector<std::pair<BitString, std::optional<BitString>>> out;
  auto flip = [](const BitString& b, size_t pos) {
    BitString r = b;
    r.set_bit(pos, !r.bit(pos));
    return r;
  };
  out.emplace_back(sp, s);
  const size_t sp_flips = std::min<size_t>(sp.size(), 16);
  for (size_t j = 0; j < sp_flips; ++j) out.emplace_back(flip(sp, sp.size() - j), s);
  if (s) {
    const unsigned low = p.mode == Mode::cca ? std::min(p.t, 6u) : std::min<unsigned>(static_cast<unsigned>(s->size()), 6u);
    for (uint64_t e = 1; e < (uint64_t{1} << low); ++e) out.emplace_back(sp, *s ^ BitString::from_u64(e, s->size()));
    for (size_t j = low; j < std::min<size_t>(s->size(), low + 16); ++j) out.emplace_back(sp, flip(*s, s->size() - j));
  }
  return out;
}

struct Scores {
  std::vector<double> py;
  double score_x = 0, score_y = 0;
  std::vector<size_t> candidates;
};

Scores score(const SmallWorld& w, const std::vector<double>& post) {
  Scores s;
  s.py.assign(w.ny(), 0.0);
  std::vector<double> px(w.nx(), 0.0), gx(w.nx(), 0.0), gy(w.ny(), 0.0);
  for (size_t xi = 0; xi < w.nx(); ++xi)
    for (size_t yj = 0; yj < w.ny(); ++yj) {
      const double v = post[xi * w.ny() + yj];
      s.py[yj] += v;
      px[xi] += v;
      if (w.in_recon(xi, yj)) {
        gx[xi] += v;
        gy[yj] += v;
      }
    }
  const auto bx = static_cast<size_t>(std::max_element(gx.begin(), gx.end()) - gx.begin());
  const auto by = static_cast<size_t>(std::max_element(gy.begin(), gy.end()) - gy.begin());
  s.score_x = gx[bx];
  s.score_y = gy[by];
  s.candidates.push_back(bx);
  s.candidates.push_back(static_cast<size_t>(std::max_element(px.begin(), px.end()) - px.begin()));
  long in_y = -1;
  for (size_t xi = 0; xi < w.nx(); ++xi)
    if (w.in_recon(xi, by) && (in_y < 0 || px[xi] > px[static_cast<size_t>(in_y)])) in_y = static_cast<long>(xi);
  if (in_y >= 0) s.candidates.push_back(static_cast<size_t>(in_y));
  std::sort(s.candidates.begin(), s.candidates.end());
  s.candidates.erase(std::unique(s.candidates.begin(), s.candidates.end()), s.candidates.end());
  return s;
}

ForgeryResult forge_from(const SmallWorld& w, std::vector<double> post, const std::optional<BitString>& public_seed,
                         const std::vector<Observation>& observed) {
  double total = 0;
  for (double v : post) total += v;
  if (total <= 0) throw InvalidArgument("observations inconsistent with every x");
  for (double& v : post) v /= total;
  Scores sc = score(w, post);

  const Ikem& ikem = w.ikem();
  ForgeryResult best;
  best.p_success = -1;
  for (const auto& [sp, s] : seed_variants(ikem, observed)) {
    const BitString& seed = s ? *s : *public_seed;
    for (size_t xi : sc.candidates) {
      IkemCiphertext c{ikem.tag_of(w.x_bits(xi), sp, seed), sp, s};
      if (std::any_of(observed.begin(), observed.end(), [&](const Observation& o) { return o.ct == c; })) continue;
      const double p = acceptance_probability(w, sc.py, c, public_seed);
      if (p > best.p_success) {
        best.p_success = p;
        best.c_f = c;
      }
    }
  }
  if (best.p_success < 0) throw InvalidArgument("no fresh forgery candidate");
  best.score_x = sc.score_x;
  best.score_y = sc.score_y;
  return best;
}

}  // namespace

SmallWorld::SmallWorld(const Ikem& ikem, uint64_t max_pairs) : ikem_(&ikem) {
  const SourceSpec& src = ikem.params().source;
  const double pairs = std::pow(static_cast<double>(src.ax()), src.n()) * std::pow(static_cast<double>(src.ay()), src.n());
  if (pairs > static_cast<double>(max_pairs)) throw InfeasibleError("instance too large to enumerate");
  xs_ = all_strings(src.ax(), src.n());
  ys_ = all_strings(src.ay(), src.n());
  for (const auto& x : xs_) xbits_.push_back(src.x_to_bits(x));
  member_.resize(xs_.size() * ys_.size());
  for (size_t i = 0; i < xs_.size(); ++i)
    for (size_t j = 0; j < ys_.size(); ++j)
      member_[i * ys_.size() + j] = within_threshold(cond_neg_log_prob(src, xs_[i], ys_[j]), ikem.params().nu);
}

double SmallWorld::joint(size_t xi, size_t yj, const SymbolString& z) const {
  const SourceSpec& src = ikem_->params().source;
  double p = 1;
  for (size_t i = 0; i < z.size(); ++i) p *= src.prob(xs_[xi][i], ys_[yj][i], z[i]);
  return p;
}

double acceptance_probability(const SmallWorld& world, const std::vector<double>& posterior_y, const IkemCiphertext& c,
                              const std::optional<BitString>& public_seed) {
  const auto matches = tag_matches(world, c, public_seed);
  double p = 0;
  for (size_t yj = 0; yj < world.ny(); ++yj)
    if (posterior_y[yj] > 0 && decap_index(world, matches, yj) >= 0) p += posterior_y[yj];
  return p;
}

ForgeryResult brute_force_forger(const SmallWorld& world, const SymbolString& z,
                                 const std::optional<BitString>& public_seed, const std::vector<Observation>& observed) {
  return forge_from(world, posterior(world, z, public_seed, observed), public_seed, observed);
}

bool RandomGuessPkind::phase2(const PkindView&, const IkemCiphertext&, const BitString&, KemOracles&, Rng& rng) {
  return rng.below(2) == 1;
}

bool LeakPkind::phase2(const PkindView&, const IkemCiphertext&, const BitString& key, KemOracles& o, Rng& rng) {
  const auto real = o.leaked_real_key();
  if (!real) return rng.below(2) == 1;
  return key != *real;
}

void BayesPkind::phase1(const PkindView&, KemOracles& o, Rng&) {
  seen_.clear();
  for (unsigned i = 0; i < encaps_; ++i) {
    Encapsulation e = o.encapsulate();
    seen_.push_back({std::move(e.ct), std::move(e.key)});
  }
}

bool BayesPkind::phase2(const PkindView& view, const IkemCiphertext& c, const BitString& key, KemOracles& o, Rng& rng) {
  const SmallWorld& w = *world_;
  std::vector<Observation> obs = seen_;
  obs.push_back({c, std::nullopt});
  std::vector<double> post = posterior(w, view.z, view.public_seed, obs);
  if (probe_) {
    const ForgeryResult f = forge_from(w, post, view.public_seed, obs);
    const auto answer = o.decapsulate(f.c_f);
    const auto matches = tag_matches(w, f.c_f, view.public_seed);
    for (size_t yj = 0; yj < w.ny(); ++yj) {
      const long xi = decap_index(w, matches, yj);
      std::optional<BitString> k;
      if (xi >= 0) k = w.ikem().key_of(w.x_bits(static_cast<size_t>(xi)), f.c_f.s_prime);
      if (k != answer)
        for (size_t x = 0; x < w.nx(); ++x) post[x * w.ny() + yj] = 0;
    }
  }
  double num = 0, den = 0;
  for (size_t xi = 0; xi < w.nx(); ++xi) {
    double m = 0;
    for (size_t yj = 0; yj < w.ny(); ++yj) m += post[xi * w.ny() + yj];
    den += m;
    if (m > 0 && w.ikem().key_of(w.x_bits(xi), c.s_prime) == key) num += m;
  }
  if (den <= 0) return rng.below(2) == 1;
  // 1 means "uniform key", so answer 0 when the key is likelier than uniform.
  return !(std::ldexp(num, static_cast<int>(w.ikem().params().ell)) > den * (1 + 1e-12));
}

std::optional<IkemCiphertext> ForgerKint::forge(const PkindView& view, KemOracles& o, Rng&) {
  Encapsulation e = o.encapsulate();
  const ForgeryResult f = brute_force_forger(*world_, view.z, view.public_seed, {{e.ct, e.key}});
  last_ = f.p_success;
  return f.c_f;
}

std::optional<IkemCiphertext> ReplayKint::forge(const PkindView&, KemOracles& o, Rng&) {
  return o.encapsulate().ct;
}

std::optional<IkemCiphertext> RandomKint::forge(const PkindView& view, KemOracles&, Rng& rng) {
  const IkemParams& p = view.ikem.params();
  IkemCiphertext c{rng.bits(p.t), rng.bits(p.s_prime_bits()), std::nullopt};
  if (p.mode != Mode::cea) c.s = rng.bits(p.s_bits());
  return c;
}

std::pair<Bytes, Bytes> RandomGuessDem::choose(Rng&) { return {Bytes(16, 0x00), Bytes(16, 0xff)}; }

bool RandomGuessDem::guess(const DemCiphertext&, DemOracle&, Rng& rng) { return rng.below(2) == 1; }

std::pair<Bytes, Bytes> PlaintextMatchDem::choose(Rng&) { return {Bytes(16, 0x00), Bytes(16, 0xff)}; }

bool PlaintextMatchDem::guess(const DemCiphertext& c, DemOracle&, Rng&) { return c.body != Bytes(16, 0x00); }

std::pair<Bytes, Bytes> TamperDem::choose(Rng&) { return {Bytes(16, 0x00), Bytes(16, 0xff)}; }

bool TamperDem::guess(const DemCiphertext& c, DemOracle& o, Rng& rng) {
  DemCiphertext t = c;
  t.body[0] ^= 0x01;
  const auto m = o.decrypt(t);
  if (!m || m->empty()) return rng.below(2) == 1;
  return ((*m)[0] ^ 0x01) != 0x00;
}

bool RandomGuessPri::run(PriOracle& o, Rng& rng) {
  for (unsigned i = 0; i < queries_; ++i) {
    const Bytes x{static_cast<uint8_t>(i >> 8), static_cast<uint8_t>(i)};
    o.eval(x);
  }
  return rng.below(2) == 1;
}

bool InterpolationPri::run(PriOracle& o, Rng&) {
  const comb::ItPrf enc(m_, degree_, m_);
  const gf2::Field& f = gf2::Field::get(m_);
  std::vector<gf2::Fe> xs, ys;
  for (unsigned i = 0; i < degree_ + 2; ++i) {
    const Bytes x{static_cast<uint8_t>(i)};
    xs.push_back(enc.encode_input(x));
    ys.push_back(f.element(o.eval(x)));
  }
  // Lagrange value at the last point from the first degree+1 points.
  const gf2::Fe& at = xs.back();
  gf2::Fe v = f.zero();
  for (unsigned j = 0; j <= degree_; ++j) {
    gf2::Fe num = f.one(), den = f.one();
    for (unsigned k = 0; k <= degree_; ++k) {
      if (k == j) continue;
      num *= at - xs[k];
      den *= xs[j] - xs[k];
    }
    v += ys[j] * num * den.inv();
  }
  return !(v == ys.back());
}

std::pair<Bytes, Bytes> RandomGuessHe::choose(const SymbolString&, HeOracles&, Rng&) {
  return {Bytes(16, 0x00), Bytes(16, 0xff)};
}

bool RandomGuessHe::guess(const SymbolString&, const HybridCiphertext&, HeOracles&, Rng& rng) {
  return rng.below(2) == 1;
}

std::pair<Bytes, Bytes> TamperHe::choose(const SymbolString&, HeOracles&, Rng&) {
  return {Bytes(16, 0x00), Bytes(16, 0xff)};
}

bool TamperHe::guess(const SymbolString&, const HybridCiphertext& c, HeOracles& o, Rng& rng) {
  HybridCiphertext t = c;
  t.c2.body[0] ^= 0x01;
  const auto m = o.decrypt(t);
  if (!m || m->empty()) return rng.below(2) == 1;
  return ((*m)[0] ^ 0x01) != 0x00;
}

}  // namespace pkem::games
