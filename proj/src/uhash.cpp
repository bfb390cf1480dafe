#include "pkem/uhash.hpp"

#include "pkem/errors.hpp"

namespace pkem::uhash {

using gf2::Fe;
using gf2::Field;

namespace {

BitString truncate(const Fe& v, unsigned out_bits) {
  if (out_bits > v.field().bits()) throw InvalidArgument("output wider than the field");
  return v.bits().block(1, out_bits);
}

}  // namespace

BitString hprime(const BitString& x, const BitString& seed, unsigned out_bits) {
  if (seed.empty()) throw InvalidArgument("empty seed");
  if (x.size() > seed.size()) throw InvalidArgument("input wider than the seed");
  const Field& f = Field::get(static_cast<unsigned>(seed.size()));
  return truncate(f.element(seed) * f.element(x), out_bits);
}

BitString h_cea(const BitString& x, const BitString& seed, unsigned t) { return hprime(x, seed, t); }

BitString affine(const BitString& x, const BitString& seed, unsigned out_bits) {
  const size_t m = x.size();
  if (m == 0 || seed.size() != 2 * m) throw InvalidArgument("affine seed must be twice the input width");
  const Field& f = Field::get(static_cast<unsigned>(m));
  const Fe a = f.element(seed.block(1, m));
  const Fe b = f.element(seed.block(m + 1, 2 * m));
  return truncate(a * f.element(x) + b, out_bits);
}

unsigned choose_r(unsigned w, unsigned u) {
  if (w == 0 || u == 0) throw InvalidArgument("seed widths must be positive");
  return 2 * ((w + 2 * u - 1) / (2 * u));
}

PaddedSeedVector PaddedSeedVector::split(const BitString& s_prime, unsigned u) {
  const unsigned w = static_cast<unsigned>(s_prime.size());
  const unsigned r = choose_r(w, u);
  const size_t total = size_t{r} * u;
  BitString padded = s_prime;
  if (total > w) {
    BitString ones(total - w);
    for (size_t i = 1; i <= ones.size(); ++i) ones.set_bit(i, true);
    padded = padded.concat(ones);
  }
  PaddedSeedVector v;
  v.u = u;
  for (unsigned i = 0; i < r; ++i) v.parts.push_back(padded.block(size_t{i} * u + 1, size_t{i + 1} * u));
  return v;
}

BitString PaddedSeedVector::join(unsigned w) const {
  BitString all(0);
  for (const auto& p : parts) all = all.concat(p);
  if (w > all.size()) throw InvalidArgument("seed vector shorter than w");
  return all.block(1, w);
}

CcaHash::CcaHash(unsigned x_bits, unsigned t, unsigned w) : n_(x_bits), t_(t), w_(w) {
  if (t_ < 1 || 2 * t_ > n_) throw InvalidArgument("reconciliation hash needs 1 <= t <= n/2");
  if (w_ < 1) throw InvalidArgument("w must be positive");
  r_ = choose_r(w_, n_ - t_);
  fu_ = &Field::get(n_ - t_);
  ft_ = &Field::get(t_);
}

CcaHash::Prepared CcaHash::prepare(const BitString& s_prime, const BitString& s) const {
  if (s_prime.size() != w_) throw InvalidArgument("s' has the wrong width");
  if (s.size() != n_) throw InvalidArgument("s has the wrong width");
  Prepared p;
  for (const auto& part : PaddedSeedVector::split(s_prime, n_ - t_).parts) p.s_prime.push_back(fu_->element(part));
  p.s2 = fu_->element(s.block(1, n_ - t_));
  p.s1 = ft_->element(s.block(n_ - t_ + 1, n_));
  return p;
}

BitString CcaHash::eval(const BitString& x, const Prepared& seeds) const {
  if (x.size() != n_) throw InvalidArgument("x has the wrong width");
  const Fe x2 = fu_->element(x.block(1, n_ - t_));
  const Fe x1 = ft_->element(x.block(n_ - t_ + 1, n_));
  Fe pw = x2.square();  // x2^(i+1) for i = 1
  Fe acc = seeds.s2 * x2;
  for (const Fe& si : seeds.s_prime) {
    acc += si * pw;
    pw *= x2;
  }
  acc += pw * x2;  // x2^(r+3)
  const Fe low = x1.square() * x1 + seeds.s1 * x1;
  return acc.bits().block(1, t_) ^ low.bits();
}

BitString h_cca(const BitString& x, const BitString& s_prime, const BitString& s2, const BitString& s1, unsigned t) {
  const CcaHash h(static_cast<unsigned>(x.size()), t, static_cast<unsigned>(s_prime.size()));
  return h(x, s_prime, s2.concat(s1));
}

BitString twise_poly(const std::vector<Fe>& coeffs, const Fe& x, unsigned out_bits) {
  if (coeffs.empty()) throw InvalidArgument("polynomial needs at least one coefficient");
  Fe acc = coeffs.back();
  for (size_t i = coeffs.size() - 1; i-- > 0;) acc = acc * x + coeffs[i];
  return truncate(acc, out_bits);
}

}  // namespace pkem::uhash
