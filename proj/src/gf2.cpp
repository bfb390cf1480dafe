#include "pkem/gf2.hpp"

#include <immintrin.h>

#include <algorithm>
#include <bit>
#include <map>
#include <memory>
#include <mutex>

#include "pkem/errors.hpp"

namespace pkem::gf2 {

namespace {

void clmul_portable(uint64_t a, uint64_t b, uint64_t& lo, uint64_t& hi) {
  uint64_t l = 0, h = 0;
  for (unsigned i = 0; i < 64; ++i) {
    if ((b >> i) & 1) {
      l ^= a << i;
      if (i != 0) h ^= a >> (64 - i);
    }
  }
  lo = l;
  hi = h;
}

__attribute__((target("pclmul,sse2"))) void clmul_hw(uint64_t a, uint64_t b, uint64_t& lo, uint64_t& hi) {
  const __m128i r = _mm_clmulepi64_si128(_mm_cvtsi64_si128(static_cast<long long>(a)),
                                         _mm_cvtsi64_si128(static_cast<long long>(b)), 0x00);
  lo = static_cast<uint64_t>(_mm_cvtsi128_si64(r));
  hi = static_cast<uint64_t>(_mm_cvtsi128_si64(_mm_srli_si128(r, 8)));
}

const bool kHardwareClmul = __builtin_cpu_supports("pclmul");

// Degree of a polynomial held in limbs, -1 for zero.
long degree(const Limbs& p) {
  for (size_t k = p.size(); k-- > 0;)
    if (p[k] != 0) return static_cast<long>(64 * k + 63 - std::countl_zero(p[k]));
  return -1;
}

// p ^= q << shift, growing p if needed.
void xor_shifted(Limbs& p, const Limbs& q, size_t shift) {
  const size_t ws = shift / 64, bs = shift % 64;
  const size_t need = q.size() + ws + 1;
  if (p.size() < need) p.resize(need, 0);
  for (size_t k = 0; k < q.size(); ++k) {
    if (q[k] == 0) continue;
    p[ws + k] ^= q[k] << bs;
    if (bs != 0) p[ws + k + 1] ^= q[k] >> (64 - bs);
  }
}

// p >> shift
Limbs shifted_right(const Limbs& p, size_t shift) {
  const size_t ws = shift / 64, bs = shift % 64;
  Limbs out(p.size() > ws ? p.size() - ws : 0, 0);
  for (size_t k = 0; k < out.size(); ++k) {
    const uint64_t lo = p[ws + k];
    const uint64_t hi = ws + k + 1 < p.size() ? p[ws + k + 1] : 0;
    out[k] = bs == 0 ? lo : (lo >> bs) | (hi << (64 - bs));
  }
  return out;
}

void mask_low(Limbs& p, size_t nbits) {
  for (size_t k = 0; k < p.size(); ++k) {
    if (64 * k >= nbits)
      p[k] = 0;
    else if (64 * (k + 1) > nbits)
      p[k] &= (uint64_t{1} << (nbits % 64)) - 1;
  }
}

// a mod b over GF(2)[x]; b nonzero.
void poly_mod(Limbs& a, const Limbs& b) {
  const long db = degree(b);
  for (long da = degree(a); da >= db; da = degree(a)) xor_shifted(a, b, static_cast<size_t>(da - db));
}

bool poly_coprime(Limbs a, Limbs b) {
  while (degree(b) >= 0) {
    poly_mod(a, b);
    std::swap(a, b);
  }
  return degree(a) == 0;
}

std::vector<unsigned> prime_factors(unsigned m) {
  std::vector<unsigned> ps;
  for (unsigned p = 2; p * p <= m; ++p) {
    if (m % p == 0) ps.push_back(p);
    while (m % p == 0) m /= p;
  }
  if (m > 1) ps.push_back(m);
  return ps;
}

BitString poly_from_exponents(unsigned m, std::initializer_list<unsigned> exps) {
  BitString p(m + 1);
  for (unsigned e : exps) p.set_bit(m + 1 - e, true);
  return p;
}

}  // namespace

void clmul64(uint64_t a, uint64_t b, uint64_t& lo, uint64_t& hi) {
  if (kHardwareClmul)
    clmul_hw(a, b, lo, hi);
  else
    clmul_portable(a, b, lo, hi);
}

bool has_hardware_clmul() { return kHardwareClmul; }

bool is_irreducible_trial_division(uint64_t poly) {
  const int m = 63 - std::countl_zero(poly);
  if (m < 1 || m > 32) throw InvalidArgument("trial division supports degrees 1..32");
  for (uint64_t d = 2; d < (uint64_t{1} << (m / 2 + 1)); ++d) {
    const int dd = 63 - std::countl_zero(d);
    uint64_t r = poly;
    for (int dr = m; dr >= dd; dr = r ? 63 - std::countl_zero(r) : -1) r ^= d << (dr - dd);
    if (r == 0) return false;
  }
  return true;
}

bool is_irreducible_rabin(const BitString& poly) {
  const unsigned m = static_cast<unsigned>(poly.size() - 1);
  if (poly.size() < 2 || !poly.bit(1)) throw InvalidArgument("polynomial must have its leading bit set");
  if (m == 1) return true;
  if (!poly.bit(poly.size())) return false;  // divisible by x
  const Field ring(m, poly);                   // arithmetic mod poly, not a field yet
  const Fe x = ring.from_u64(2);
  // x^(2^k) for k = 1..m
  std::vector<Fe> frob{x};
  for (unsigned k = 1; k <= m; ++k) frob.push_back(frob.back().square());
  if (!(frob[m] == x)) return false;
  for (unsigned p : prime_factors(m)) {
    Limbs g = (frob[m / p] + x).limbs();
    if (!poly_coprime(poly.limbs(), g)) return false;
  }
  return true;
}

bool is_irreducible(const BitString& poly) {
  if (poly.size() < 2 || !poly.bit(1)) throw InvalidArgument("polynomial must have its leading bit set");
  if (poly.size() - 1 <= 32) return is_irreducible_trial_division(poly.to_u64());
  return is_irreducible_rabin(poly);
}

namespace {

BitString lowest_weight_irreducible(unsigned m) {
  if (m == 1) return poly_from_exponents(1, {1, 0});
  // No irreducible trinomials exist when m is a multiple of 8.
  if (m % 8 != 0)
    for (unsigned k = 1; k < m; ++k) {
      BitString p = poly_from_exponents(m, {m, k, 0});
      if (is_irreducible(p)) return p;
    }
  for (unsigned a = 3; a < m; ++a)
    for (unsigned b = 2; b < a; ++b)
      for (unsigned c = 1; c < b; ++c) {
        BitString p = poly_from_exponents(m, {m, a, b, c, 0});
        if (is_irreducible(p)) return p;
      }
  throw InfeasibleError("no low-weight irreducible found for m=" + std::to_string(m));
}

}  // namespace

struct FieldRegistry {
  std::mutex mu;
  std::map<BitString, std::unique_ptr<Field>> by_modulus;
  std::map<unsigned, const Field*> by_width;

  const Field& intern(const BitString& poly) {
    auto it = by_modulus.find(poly);
    if (it != by_modulus.end()) return *it->second;
    auto f = std::unique_ptr<Field>(new Field(static_cast<unsigned>(poly.size() - 1), poly));
    const Field& ref = *f;
    by_modulus.emplace(poly, std::move(f));
    return ref;
  }

  static FieldRegistry& instance() {
    static FieldRegistry r;
    return r;
  }
};

Field::Field(unsigned m, const BitString& modulus)
    : m_(m), words_(limbs_for(m)), modulus_(modulus) {
  for (unsigned e = m; e-- > 0;)
    if (modulus.bit(m + 1 - e)) taps_.push_back(e);
}

const Field& Field::get(unsigned m) {
  if (m < 1 || m > kMaxFieldBits) throw InvalidArgument("unsupported field width " + std::to_string(m));
  auto& reg = FieldRegistry::instance();
  {
    std::lock_guard lock(reg.mu);
    auto it = reg.by_width.find(m);
    if (it != reg.by_width.end()) return *it->second;
  }
  const BitString poly = lowest_weight_irreducible(m);
  std::lock_guard lock(reg.mu);
  const Field& f = reg.intern(poly);
  reg.by_width.emplace(m, &f);
  return f;
}

const Field& Field::with_modulus(const BitString& poly) {
  if (poly.size() < 2 || poly.size() - 1 > kMaxFieldBits) throw InvalidArgument("unsupported modulus degree");
  if (!is_irreducible(poly)) throw InvalidArgument("modulus is not irreducible");
  auto& reg = FieldRegistry::instance();
  std::lock_guard lock(reg.mu);
  return reg.intern(poly);
}

std::string Field::modulus_string() const {
  std::string s = "x^" + std::to_string(m_);
  for (unsigned e : taps_) s += e == 0 ? "+1" : e == 1 ? "+x" : "+x^" + std::to_string(e);
  return s;
}

Fe Field::zero() const { return Fe(this, Limbs(words_, 0)); }

Fe Field::one() const {
  Limbs v(words_, 0);
  v[0] = 1;
  return Fe(this, std::move(v));
}

Fe Field::element(const BitString& b) const {
  if (b.size() > m_) throw InvalidArgument("bit string wider than the field");
  return Fe(this, b.resized(m_).limbs());
}

Fe Field::from_u64(uint64_t v) const { return element(BitString::from_u64(v, std::min<unsigned>(m_, 64))); }

Fe Field::from_bytes(std::span<const uint8_t> bytes) const { return element(BitString::from_bytes(bytes, m_)); }

void Field::reduce(Limbs& wide) const {
  for (;;) {
    const long d = degree(wide);
    if (d < static_cast<long>(m_)) break;
    const Limbs high = shifted_right(wide, m_);
    mask_low(wide, m_);
    for (unsigned tap : taps_) xor_shifted(wide, high, tap);
  }
  wide.resize(words_);
}

void Field::mul_into(const uint64_t* a, const uint64_t* b, uint64_t* out) const {
  for (size_t i = 0; i < words_; ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < words_; ++j) {
      uint64_t lo, hi;
      clmul64(a[i], b[j], lo, hi);
      out[i + j] ^= lo;
      out[i + j + 1] ^= hi;
    }
  }
}

BitString Fe::bits() const { return BitString::from_limbs(v_, f_->m_); }

uint64_t Fe::to_u64() const { return bits().to_u64(); }

bool Fe::is_zero() const {
  return std::all_of(v_.begin(), v_.end(), [](uint64_t w) { return w == 0; });
}

void Fe::check_same(const Fe& o) const {
  if (f_ == nullptr || f_ != o.f_) throw ContextMismatch("operands belong to different fields");
}

Fe& Fe::operator+=(const Fe& o) {
  check_same(o);
  for (size_t k = 0; k < v_.size(); ++k) v_[k] ^= o.v_[k];
  return *this;
}

Fe Fe::operator+(const Fe& o) const {
  Fe r = *this;
  r += o;
  return r;
}

Fe Fe::operator*(const Fe& o) const {
  check_same(o);
  Limbs wide(2 * f_->words_ + 1, 0);
  f_->mul_into(v_.data(), o.v_.data(), wide.data());
  f_->reduce(wide);
  return Fe(f_, std::move(wide));
}

Fe& Fe::operator*=(const Fe& o) {
  *this = *this * o;
  return *this;
}

Fe Fe::pow(uint64_t e) const {
  Fe result = f_->one();
  Fe base = *this;
  for (; e != 0; e >>= 1) {
    if (e & 1) result *= base;
    base = base.square();
  }
  return result;
}

Fe Fe::inv() const {
  if (is_zero()) throw InvalidArgument("inverse of zero");
  // a^(2^m - 2) = prod_{i=1}^{m-1} a^(2^i)
  Fe result = f_->one();
  Fe t = *this;
  for (unsigned i = 1; i < f_->m_; ++i) {
    t = t.square();
    result *= t;
  }
  return result;
}

}  // namespace pkem::gf2
