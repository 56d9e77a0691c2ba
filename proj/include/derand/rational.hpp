// Copyright 2026 the derand authors
// SPDX-License-Identifier: Apache-2.0
//
// Exact arbitrary-precision rationals. The hybrid-equality checks compare
// probability laws for exact equality, which rules out floating point; the
// magnitudes involved at desk scale (hundreds of bits) stay cheap.

#ifndef DERAND_RATIONAL_HPP
#define DERAND_RATIONAL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "derand/common.hpp"

namespace derand {

/// Sign-magnitude big integer, little-endian 32-bit limbs.
class BigInt {
 public:
  BigInt() = default;
  BigInt(int64_t v);  // NOLINT: implicit by design
  static BigInt from_uint64(uint64_t v);
  static BigInt pow2(unsigned k);

  bool is_zero() const { return limbs_.empty(); }
  bool negative() const { return neg_; }
  int sign() const { return is_zero() ? 0 : (neg_ ? -1 : 1); }

  BigInt operator-() const;
  BigInt operator+(const BigInt& o) const;
  BigInt operator-(const BigInt& o) const;
  BigInt operator*(const BigInt& o) const;
  /// Truncated division; requires o != 0.
  BigInt operator/(const BigInt& o) const;
  BigInt operator%(const BigInt& o) const;

  bool operator==(const BigInt& o) const { return neg_ == o.neg_ && limbs_ == o.limbs_; }
  bool operator!=(const BigInt& o) const { return !(*this == o); }
  bool operator<(const BigInt& o) const;
  bool operator<=(const BigInt& o) const { return !(o < *this); }
  bool operator>(const BigInt& o) const { return o < *this; }
  bool operator>=(const BigInt& o) const { return !(*this < o); }

  static BigInt gcd(BigInt a, BigInt b);

  BigInt abs() const {
    BigInt r = *this;
    r.neg_ = false;
    return r;
  }

  std::size_t bit_length() const;
  bool fits_int64() const;
  int64_t to_int64() const;  // requires fits_int64()
  double to_double() const;

  std::string to_string() const;
  static BigInt from_string(const std::string& s);

 private:
  static int cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
  static std::vector<uint32_t> add_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
  static std::vector<uint32_t> sub_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
  static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r);
  void trim();

  std::vector<uint32_t> limbs_;
  bool neg_ = false;
};

/// Reduced fraction with positive denominator.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(int64_t v) : num_(v), den_(1) {}  // NOLINT
  Rational(BigInt num, BigInt den);

  static Rational dyadic(int64_t numerator, unsigned log2_denominator) {
    return Rational(BigInt(numerator), BigInt::pow2(log2_denominator));
  }

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  int sign() const { return num_.sign(); }

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;
  Rational operator-() const;
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }

  bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator<(const Rational& o) const;
  bool operator<=(const Rational& o) const { return !(o < *this); }
  bool operator>(const Rational& o) const { return o < *this; }
  bool operator>=(const Rational& o) const { return !(*this < o); }

  Rational abs() const { return sign() < 0 ? -*this : *this; }
  double to_double() const;

  /// "num/den", or just "num" when den == 1.
  std::string to_string() const;
  static Rational from_string(const std::string& s);

 private:
  BigInt num_, den_;
};

}  // namespace derand

#endif  // DERAND_RATIONAL_HPP
