// Copyright 2026 the derand authors
// SPDX-License-Identifier: Apache-2.0

#include "derand/rational.hpp"

#include <algorithm>
#include <cmath>

namespace derand {

BigInt::BigInt(int64_t v) {
  neg_ = v < 0;
  uint64_t m = neg_ ? (~static_cast<uint64_t>(v) + 1) : static_cast<uint64_t>(v);
  while (m) {
    limbs_.push_back(static_cast<uint32_t>(m));
    m >>= 32;
  }
}

BigInt BigInt::from_uint64(uint64_t v) {
  BigInt r;
  while (v) {
    r.limbs_.push_back(static_cast<uint32_t>(v));
    v >>= 32;
  }
  return r;
}

BigInt BigInt::pow2(unsigned k) {
  BigInt r;
  r.limbs_.assign(k / 32 + 1, 0);
  r.limbs_[k / 32] = 1u << (k % 32);
  return r;
}

void BigInt::trim() {
  while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
  if (limbs_.empty()) neg_ = false;
}

int BigInt::cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (std::size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  }
  return 0;
}

std::vector<uint32_t> BigInt::add_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
  const auto& big = a.size() >= b.size() ? a : b;
  const auto& small = a.size() >= b.size() ? b : a;
  std::vector<uint32_t> r(big.size() + 1, 0);
  uint64_t carry = 0;
  for (std::size_t i = 0; i < big.size(); ++i) {
    uint64_t s = carry + big[i] + (i < small.size() ? small[i] : 0);
    r[i] = static_cast<uint32_t>(s);
    carry = s >> 32;
  }
  r[big.size()] = static_cast<uint32_t>(carry);
  while (!r.empty() && r.back() == 0) r.pop_back();
  return r;
}

// requires |a| >= |b|
std::vector<uint32_t> BigInt::sub_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
  std::vector<uint32_t> r(a.size(), 0);
  int64_t borrow = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    int64_t d = static_cast<int64_t>(a[i]) - borrow - (i < b.size() ? b[i] : 0);
    if (d < 0) {
      d += (1ll << 32);
      borrow = 1;
    } else {
      borrow = 0;
    }
    r[i] = static_cast<uint32_t>(d);
  }
  while (!r.empty() && r.back() == 0) r.pop_back();
  return r;
}

BigInt BigInt::operator-() const {
  BigInt r = *this;
  if (!r.is_zero()) r.neg_ = !r.neg_;
  return r;
}

BigInt BigInt::operator+(const BigInt& o) const {
  BigInt r;
  if (neg_ == o.neg_) {
    r.limbs_ = add_mag(limbs_, o.limbs_);
    r.neg_ = neg_;
  } else {
    int c = cmp_mag(limbs_, o.limbs_);
    if (c == 0) return BigInt();
    if (c > 0) {
      r.limbs_ = sub_mag(limbs_, o.limbs_);
      r.neg_ = neg_;
    } else {
      r.limbs_ = sub_mag(o.limbs_, limbs_);
      r.neg_ = o.neg_;
    }
  }
  r.trim();
  return r;
}

BigInt BigInt::operator-(const BigInt& o) const { return *this + (-o); }

BigInt BigInt::operator*(const BigInt& o) const {
  if (is_zero() || o.is_zero()) return BigInt();
  BigInt r;
  r.limbs_.assign(limbs_.size() + o.limbs_.size(), 0);
  for (std::size_t i = 0; i < limbs_.size(); ++i) {
    uint64_t carry = 0;
    for (std::size_t j = 0; j < o.limbs_.size(); ++j) {
      uint64_t cur = r.limbs_[i + j] + static_cast<uint64_t>(limbs_[i]) * o.limbs_[j] + carry;
      r.limbs_[i + j] = static_cast<uint32_t>(cur);
      carry = cur >> 32;
    }
    std::size_t k = i + o.limbs_.size();
    while (carry) {
      uint64_t cur = r.limbs_[k] + carry;
      r.limbs_[k] = static_cast<uint32_t>(cur);
      carry = cur >> 32;
      ++k;
    }
  }
  r.neg_ = neg_ != o.neg_;
  r.trim();
  return r;
}

// Shift-and-subtract long division on magnitudes; fine at desk scale.
void BigInt::divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
  if (b.is_zero()) fail(errc::invalid_argument, "division by zero");
  q = BigInt();
  r = BigInt();
  if (cmp_mag(a.limbs_, b.limbs_) < 0) {
    r = a;
    r.neg_ = false;
  } else {
    std::size_t nbits = a.bit_length();
    std::vector<uint32_t> qm((a.limbs_.size()), 0);
    BigInt rem;
    for (std::size_t i = nbits; i-- > 0;) {
      // rem = rem*2 + bit i of |a|
      uint32_t carry = (a.limbs_[i / 32] >> (i % 32)) & 1u;
      for (std::size_t k = 0; k < rem.limbs_.size(); ++k) {
        uint32_t next = rem.limbs_[k] >> 31;
        rem.limbs_[k] = (rem.limbs_[k] << 1) | carry;
        carry = next;
      }
      if (carry) rem.limbs_.push_back(carry);
      if (cmp_mag(rem.limbs_, b.limbs_) >= 0) {
        rem.limbs_ = sub_mag(rem.limbs_, b.limbs_);
        qm[i / 32] |= 1u << (i % 32);
      }
    }
    q.limbs_ = std::move(qm);
    q.trim();
    rem.trim();
    r = rem;
  }
  q.neg_ = !q.is_zero() && (a.neg_ != b.neg_);
  r.neg_ = !r.is_zero() && a.neg_;
}

BigInt BigInt::operator/(const BigInt& o) const {
  BigInt q, r;
  divmod(*this, o, q, r);
  return q;
}

BigInt BigInt::operator%(const BigInt& o) const {
  BigInt q, r;
  divmod(*this, o, q, r);
  return r;
}

bool BigInt::operator<(const BigInt& o) const {
  if (neg_ != o.neg_) return neg_;
  int c = cmp_mag(limbs_, o.limbs_);
  return neg_ ? c > 0 : c < 0;
}

BigInt BigInt::gcd(BigInt a, BigInt b) {
  a.neg_ = false;
  b.neg_ = false;
  // Fast path: both fit in 64 bits.
  if (a.limbs_.size() <= 2 && b.limbs_.size() <= 2) {
    uint64_t x = a.is_zero() ? 0 : (a.limbs_[0] | (a.limbs_.size() > 1 ? (static_cast<uint64_t>(a.limbs_[1]) << 32) : 0));
    uint64_t y = b.is_zero() ? 0 : (b.limbs_[0] | (b.limbs_.size() > 1 ? (static_cast<uint64_t>(b.limbs_[1]) << 32) : 0));
    while (y) {
      uint64_t t = x % y;
      x = y;
      y = t;
    }
    return from_uint64(x);
  }
  while (!b.is_zero()) {
    BigInt t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::size_t BigInt::bit_length() const {
  if (limbs_.empty()) return 0;
  std::size_t top = 32 - static_cast<std::size_t>(__builtin_clz(limbs_.back()));
  return (limbs_.size() - 1) * 32 + top;
}

bool BigInt::fits_int64() const {
  if (limbs_.size() > 2) return false;
  if (limbs_.size() < 2) return true;
  uint64_t m = limbs_[0] | (static_cast<uint64_t>(limbs_[1]) << 32);
  return neg_ ? m <= 0x8000000000000000ull : m < 0x8000000000000000ull;
}

int64_t BigInt::to_int64() const {
  uint64_t m = 0;
  if (!limbs_.empty()) m = limbs_[0];
  if (limbs_.size() > 1) m |= static_cast<uint64_t>(limbs_[1]) << 32;
  return neg_ ? -static_cast<int64_t>(m) : static_cast<int64_t>(m);
}

double BigInt::to_double() const {
  double v = 0;
  for (std::size_t i = limbs_.size(); i-- > 0;) v = v * 4294967296.0 + limbs_[i];
  return neg_ ? -v : v;
}

std::string BigInt::to_string() const {
  if (is_zero()) return "0";
  BigInt t = abs();
  const BigInt base(1000000000);
  std::string out;
  while (!t.is_zero()) {
    BigInt q, r;
    divmod(t, base, q, r);
    uint32_t chunk = r.is_zero() ? 0 : r.limbs_[0];
    for (int i = 0; i < 9; ++i) {
      out.push_back(static_cast<char>('0' + chunk % 10));
      chunk /= 10;
    }
    t = q;
  }
  while (out.size() > 1 && out.back() == '0') out.pop_back();
  if (neg_) out.push_back('-');
  std::reverse(out.begin(), out.end());
  return out;
}

BigInt BigInt::from_string(const std::string& s) {
  BigInt r;
  bool neg = false;
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) {
    neg = s[i] == '-';
    ++i;
  }
  if (i >= s.size()) fail(errc::parse, "empty integer literal");
  const BigInt ten(10);
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') fail(errc::parse, "invalid digit in integer literal");
    r = r * ten + BigInt(s[i] - '0');
  }
  if (neg && !r.is_zero()) r = -r;
  return r;
}

// ---------------------------------------------------------------------------

Rational::Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) fail(errc::invalid_argument, "rational with zero denominator");
  if (den_.negative()) {
    den_ = -den_;
    num_ = -num_;
  }
  if (num_.is_zero()) {
    den_ = BigInt(1);
    return;
  }
  BigInt g = BigInt::gcd(num_, den_);
  if (g != BigInt(1)) {
    num_ = num_ / g;
    den_ = den_ / g;
  }
}

Rational Rational::operator+(const Rational& o) const {
  return Rational(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

Rational Rational::operator-(const Rational& o) const {
  return Rational(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

Rational Rational::operator*(const Rational& o) const { return Rational(num_ * o.num_, den_ * o.den_); }

Rational Rational::operator/(const Rational& o) const {
  if (o.is_zero()) fail(errc::invalid_argument, "rational division by zero");
  return Rational(num_ * o.den_, den_ * o.num_);
}

Rational Rational::operator-() const {
  Rational r = *this;
  r.num_ = -r.num_;
  return r;
}

bool Rational::operator<(const Rational& o) const { return num_ * o.den_ < o.num_ * den_; }

double Rational::to_double() const { return num_.to_double() / den_.to_double(); }

std::string Rational::to_string() const {
  if (den_ == BigInt(1)) return num_.to_string();
  return num_.to_string() + "/" + den_.to_string();
}

Rational Rational::from_string(const std::string& s) {
  auto slash = s.find('/');
  if (slash != std::string::npos)
    return Rational(BigInt::from_string(s.substr(0, slash)), BigInt::from_string(s.substr(slash + 1)));
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    BigInt den(1);
    const BigInt ten(10);
    for (std::size_t i = dot + 1; i < s.size(); ++i) den = den * ten;
    return Rational(BigInt::from_string(digits), den);
  }
  return Rational(BigInt::from_string(s), BigInt(1));
}

}  // namespace derand
