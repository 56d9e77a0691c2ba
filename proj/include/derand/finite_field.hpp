// Copyright 2026 the derand authors
// SPDX-License-Identifier: Apache-2.0
//
// Arithmetic over F_16 = F_2[w]/(w^4 + w + 1) with generator g = w, its
// extensions F_q = F_16[z]/(z^(5^a) - g^3), and polynomials over F_q modulo
// E(x) = x^(3^b) - g^5, including the coefficient-shuffling algorithm that
// computes f^(2^t) mod E through the Frobenius automorphism.

#ifndef DERAND_FINITE_FIELD_HPP
#define DERAND_FINITE_FIELD_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "derand/common.hpp"

namespace derand::ff {

using F16 = uint8_t;  // 4-bit residue, little-endian in w

inline constexpr F16 kF16Modulus = 0x13;  // w^4 + w + 1
inline constexpr F16 kGen = 0x2;          // g = w, multiplicative order 15

F16 f16_add(F16 a, F16 b);
F16 f16_mul(F16 a, F16 b);
F16 f16_inv(F16 a);  // fails on 0
F16 f16_pow(F16 a, uint64_t e);

inline constexpr F16 kGen3 = 0x8;   // g^3
inline constexpr F16 kGen5 = 0x6;   // g^5
inline constexpr F16 kGen10 = 0x7;  // g^10

/// Element of F_q, q = 16^(5^a): coefficient vector of length 5^a over F_16,
/// constant term first, reduced by z^(5^a) = g^3.
struct Fq {
  int a = 0;
  std::vector<F16> c;

  bool is_zero() const;
  bool operator==(const Fq& o) const { return a == o.a && c == o.c; }
  bool operator!=(const Fq& o) const { return !(*this == o); }
  std::string to_string() const;  // coefficient tuple, hex nibbles
};

uint64_t fq_dim(int a);             // 5^a
unsigned fq_bits(int a);            // 4 * 5^a
Fq fq_zero(int a);
Fq fq_one(int a);
Fq fq_from_f16(int a, F16 v);
Fq fq_add(const Fq& x, const Fq& y);
Fq fq_mul(const Fq& x, const Fq& y);
Fq fq_inv(const Fq& x);             // extended Euclid on representatives
Fq fq_mul_f16(const Fq& x, F16 s);
/// x^(2^t); t is reduced modulo the Frobenius period 4 * 5^a.
Fq fq_pow2k(const Fq& x, uint64_t t);

// ---------------------------------------------------------------------------
// Polynomials over F_q (dense, little-endian)

struct PolyFq {
  int a = 0;
  std::vector<Fq> c;

  bool operator==(const PolyFq& o) const { return a == o.a && c == o.c; }
  bool operator!=(const PolyFq& o) const { return !(*this == o); }
};

/// Degree bound n = 3^b and tower index a for reduction by E(x) = x^n - g^5.
struct EParams {
  int a = 0;
  int b = 0;
  uint64_t n() const;  // 3^b
};

PolyFq poly_zero(int a, uint64_t len);

/// f^(2^t) mod E, computed coefficient-wise: output coefficient j accumulates
/// f_i^(2^t) scaled by 1, g^5 or g^10 according to i*2^t mod 3n. Runs in time
/// polynomial in n, log t and log q.
PolyFq frobenius_power(const PolyFq& f, uint64_t t, const EParams& e);

/// Oracle route: t literal squarings mod E. Exponential in log t; test use.
PolyFq naive_pow2k_mod_e(const PolyFq& f, uint64_t t, const EParams& e);

Fq poly_eval(const PolyFq& f, const Fq& y);  // Horner

// ---------------------------------------------------------------------------
// Irreducibility (Rabin's criterion: gcd with x^(q^i) - x)

/// Coefficients over F_16, little-endian. Degree cap 27.
bool irreducible_over_f16(const std::vector<F16>& coeffs);
/// Coefficients over F_q, little-endian. Degree cap 9, a <= 1.
bool irreducible_over_fq(const std::vector<Fq>& coeffs, int a);

/// z^(5^a) - g^3 as a polynomial over F_16.
std::vector<F16> tower_modulus_f16(int a);
/// x^(3^b) - g^5 as a polynomial over F_q.
std::vector<Fq> guv_modulus_fq(int a, int b);

}  // namespace derand::ff

#endif  // DERAND_FINITE_FIELD_HPP
