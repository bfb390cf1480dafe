#include "pkem/bitstring.hpp"

#include <algorithm>
#include <bit>
#include <iterator>

#include <boost/algorithm/hex.hpp>

#include "pkem/errors.hpp"

namespace pkem {

size_t limbs_for(size_t nbits) { return (nbits + 63) / 64; }

BitString::BitString(size_t nbits) : nbits_(nbits), limbs_(limbs_for(nbits), 0) {}

void BitString::trim() {
  if (nbits_ % 64 != 0 && !limbs_.empty()) limbs_.back() &= (uint64_t{1} << (nbits_ % 64)) - 1;
}

BitString BitString::from_u64(uint64_t value, size_t nbits) {
  BitString b(nbits);
  if (nbits == 0) return b;
  b.limbs_[0] = value;
  b.trim();
  if (nbits < 64 && (value >> nbits) != 0) throw InvalidArgument("value does not fit in bit width");
  return b;
}

BitString BitString::from_limbs(const Limbs& limbs, size_t nbits) {
  BitString b(nbits);
  std::copy_n(limbs.begin(), std::min(limbs.size(), b.limbs_.size()), b.limbs_.begin());
  b.trim();
  return b;
}

BitString BitString::from_bytes(std::span<const uint8_t> bytes, size_t nbits) {
  const size_t nbytes = (nbits + 7) / 8;
  if (bytes.size() != nbytes)
    throw MalformedError("expected " + std::to_string(nbytes) + " bytes, got " + std::to_string(bytes.size()));
  BitString b(nbits);
  for (size_t k = 0; k < nbytes; ++k) {
    const size_t pos = 8 * (nbytes - 1 - k);  // integer position of this byte's low bit
    b.limbs_[pos / 64] |= uint64_t{bytes[k]} << (pos % 64);
  }
  if (nbits % 8 != 0 && (bytes[0] >> (nbits % 8)) != 0) throw MalformedError("nonzero padding bits");
  return b;
}

BitString BitString::from_hex(std::string_view hex, size_t nbits) {
  Bytes raw;
  try {
    boost::algorithm::unhex(hex.begin(), hex.end(), std::back_inserter(raw));
  } catch (const std::exception&) {
    throw MalformedError("bad hex string");
  }
  return from_bytes(raw, nbits);
}

BitString BitString::from_binary(std::string_view bits) {
  BitString b(bits.size());
  for (size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != '0' && bits[i] != '1') throw MalformedError("bad binary digit");
    b.set_bit(i + 1, bits[i] == '1');
  }
  return b;
}

bool BitString::bit(size_t i) const {
  const size_t pos = nbits_ - i;
  return (limbs_[pos / 64] >> (pos % 64)) & 1;
}

void BitString::set_bit(size_t i, bool value) {
  const size_t pos = nbits_ - i;
  const uint64_t mask = uint64_t{1} << (pos % 64);
  if (value)
    limbs_[pos / 64] |= mask;
  else
    limbs_[pos / 64] &= ~mask;
}

BitString BitString::block(size_t i, size_t j) const {
  if (i > j) return BitString(0);
  if (i < 1 || j > nbits_) throw InvalidArgument("block range out of bounds");
  const size_t len = j - i + 1;
  const size_t shift = nbits_ - j;
  BitString out(len);
  const size_t ws = shift / 64, bs = shift % 64;
  for (size_t k = 0; k < out.limbs_.size(); ++k) {
    uint64_t lo = ws + k < limbs_.size() ? limbs_[ws + k] : 0;
    uint64_t hi = ws + k + 1 < limbs_.size() ? limbs_[ws + k + 1] : 0;
    out.limbs_[k] = bs == 0 ? lo : (lo >> bs) | (hi << (64 - bs));
  }
  out.trim();
  return out;
}

BitString BitString::concat(const BitString& low) const {
  BitString out(nbits_ + low.nbits_);
  std::copy(low.limbs_.begin(), low.limbs_.end(), out.limbs_.begin());
  const size_t ws = low.nbits_ / 64, bs = low.nbits_ % 64;
  for (size_t k = 0; k < limbs_.size(); ++k) {
    out.limbs_[ws + k] |= limbs_[k] << bs;
    if (bs != 0 && ws + k + 1 < out.limbs_.size()) out.limbs_[ws + k + 1] |= limbs_[k] >> (64 - bs);
  }
  return out;
}

BitString BitString::resized(size_t nbits) const { return from_limbs(limbs_, nbits); }

BitString& BitString::operator^=(const BitString& o) {
  if (o.nbits_ != nbits_) throw InvalidArgument("xor of bit strings with different lengths");
  for (size_t k = 0; k < limbs_.size(); ++k) limbs_[k] ^= o.limbs_[k];
  return *this;
}

BitString BitString::operator^(const BitString& o) const {
  BitString out = *this;
  out ^= o;
  return out;
}

uint64_t BitString::to_u64() const {
  if (nbits_ > 64) throw InvalidArgument("bit string wider than 64 bits");
  return limbs_.empty() ? 0 : limbs_[0];
}

Bytes BitString::to_bytes() const {
  const size_t nbytes = (nbits_ + 7) / 8;
  Bytes out(nbytes);
  for (size_t k = 0; k < nbytes; ++k) {
    const size_t pos = 8 * (nbytes - 1 - k);
    out[k] = static_cast<uint8_t>(limbs_[pos / 64] >> (pos % 64));
  }
  return out;
}

std::string BitString::to_hex() const {
  const Bytes b = to_bytes();
  std::string s;
  boost::algorithm::hex_lower(b.begin(), b.end(), std::back_inserter(s));
  return s;
}

std::string BitString::to_binary() const {
  std::string s(nbits_, '0');
  for (size_t i = 1; i <= nbits_; ++i)
    if (bit(i)) s[i - 1] = '1';
  return s;
}

size_t BitString::popcount() const {
  size_t c = 0;
  for (uint64_t w : limbs_) c += std::popcount(w);
  return c;
}

bool BitString::is_zero() const {
  return std::all_of(limbs_.begin(), limbs_.end(), [](uint64_t w) { return w == 0; });
}

bool operator<(const BitString& a, const BitString& b) {
  if (a.nbits_ != b.nbits_) return a.nbits_ < b.nbits_;
  for (size_t k = a.limbs_.size(); k-- > 0;)
    if (a.limbs_[k] != b.limbs_[k]) return a.limbs_[k] < b.limbs_[k];
  return false;
}

}  // namespace pkem
