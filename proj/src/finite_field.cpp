// Copyright 2026 the derand authors
// SPDX-License-Identifier: Apache-2.0

#include "derand/finite_field.hpp"

#include <algorithm>
#include <array>

namespace derand::ff {

namespace {

constexpr F16 mul_slow(F16 a, F16 b) {
  uint32_t r = 0;
  for (int i = 0; i < 4; ++i)
    if ((b >> i) & 1) r ^= static_cast<uint32_t>(a) << i;
  for (int i = 7; i >= 4; --i)
    if ((r >> i) & 1) r ^= static_cast<uint32_t>(kF16Modulus) << (i - 4);
  return static_cast<F16>(r & 0xF);
}

struct Tables {
  std::array<std::array<F16, 16>, 16> mul{};
  std::array<F16, 16> inv{};
  Tables() {
    for (int a = 0; a < 16; ++a)
      for (int b = 0; b < 16; ++b) mul[a][b] = mul_slow(static_cast<F16>(a), static_cast<F16>(b));
    for (int a = 1; a < 16; ++a)
      for (int b = 1; b < 16; ++b)
        if (mul[a][b] == 1) inv[a] = static_cast<F16>(b);
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

}  // namespace

F16 f16_add(F16 a, F16 b) { return a ^ b; }

F16 f16_mul(F16 a, F16 b) { return tables().mul[a & 0xF][b & 0xF]; }

F16 f16_inv(F16 a) {
  if ((a & 0xF) == 0) fail(errc::invalid_argument, "inversion of zero in F_16");
  return tables().inv[a & 0xF];
}

F16 f16_pow(F16 a, uint64_t e) {
  a &= 0xF;
  if (a == 0) return e == 0 ? 1 : 0;
  e %= 15;  // multiplicative group order
  F16 r = 1, base = a;
  while (e) {
    if (e & 1) r = f16_mul(r, base);
    base = f16_mul(base, base);
    e >>= 1;
  }
  return r;
}

// ---------------------------------------------------------------------------
// F_16[z] helpers (for the tower modulus and extended Euclid)

namespace {

using PolyF16 = std::vector<F16>;  // little-endian

int deg(const PolyF16& p) {
  for (std::size_t i = p.size(); i-- > 0;)
    if (p[i]) return static_cast<int>(i);
  return -1;
}

PolyF16 trim(PolyF16 p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
  return p;
}

PolyF16 poly_add16(const PolyF16& x, const PolyF16& y) {
  PolyF16 r(std::max(x.size(), y.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i)
    r[i] = static_cast<F16>((i < x.size() ? x[i] : 0) ^ (i < y.size() ? y[i] : 0));
  return trim(r);
}

PolyF16 poly_mul16(const PolyF16& x, const PolyF16& y) {
  if (deg(x) < 0 || deg(y) < 0) return {};
  PolyF16 r(x.size() + y.size() - 1, 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!x[i]) continue;
    for (std::size_t j = 0; j < y.size(); ++j) r[i + j] ^= f16_mul(x[i], y[j]);
  }
  return trim(r);
}

PolyF16 poly_scale16(const PolyF16& x, F16 s) {
  PolyF16 r = x;
  for (F16& v : r) v = f16_mul(v, s);
  return trim(r);
}

// x = q*y + r
void poly_divmod16(const PolyF16& x, const PolyF16& y, PolyF16& q, PolyF16& r) {
  int dy = deg(y);
  if (dy < 0) fail(errc::invalid_argument, "polynomial division by zero");
  r = trim(x);
  q.assign(r.size(), 0);
  F16 lead_inv = f16_inv(y[dy]);
  while (deg(r) >= dy) {
    int dr = deg(r);
    F16 f = f16_mul(r[dr], lead_inv);
    q[dr - dy] ^= f;
    for (int i = 0; i <= dy; ++i) r[dr - dy + i] ^= f16_mul(f, y[i]);
    r = trim(r);
  }
  q = trim(q);
}

// Inverse of x modulo mod, both over F_16.
PolyF16 poly_inv_mod16(const PolyF16& x, const PolyF16& mod) {
  PolyF16 r0 = mod, r1 = trim(x);
  PolyF16 t0 = {}, t1 = {1};
  if (deg(r1) < 0) fail(errc::invalid_argument, "inversion of zero in F_q");
  while (deg(r1) > 0) {
    PolyF16 q, rem;
    poly_divmod16(r0, r1, q, rem);
    PolyF16 tn = poly_add16(t0, poly_mul16(q, t1));
    r0 = r1;
    r1 = rem;
    t0 = t1;
    t1 = tn;
    if (deg(r1) < 0) fail(errc::invalid_argument, "element not invertible");
  }
  // r1 is a nonzero constant
  return trim(poly_scale16(t1, f16_inv(r1[0])));
}

}  // namespace

// ---------------------------------------------------------------------------
// F_q

uint64_t fq_dim(int a) {
  if (a < 0 || a > 3) fail(errc::invalid_argument, "tower index out of supported range");
  uint64_t d = 1;
  for (int i = 0; i < a; ++i) d *= 5;
  return d;
}

unsigned fq_bits(int a) { return static_cast<unsigned>(4 * fq_dim(a)); }

bool Fq::is_zero() const {
  for (F16 v : c)
    if (v) return false;
  return true;
}

std::string Fq::to_string() const {
  static const char* digits = "0123456789abcdef";
  std::string s = "(";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) s.push_back(',');
    s.push_back(digits[c[i] & 0xF]);
  }
  s.push_back(')');
  return s;
}

Fq fq_zero(int a) { return Fq{a, std::vector<F16>(fq_dim(a), 0)}; }

Fq fq_one(int a) {
  Fq r = fq_zero(a);
  r.c[0] = 1;
  return r;
}

Fq fq_from_f16(int a, F16 v) {
  Fq r = fq_zero(a);
  r.c[0] = static_cast<F16>(v & 0xF);
  return r;
}

static void check_tower(const Fq& x, const Fq& y) {
  if (x.a != y.a) fail(errc::invalid_argument, "tower parameter mismatch");
}

Fq fq_add(const Fq& x, const Fq& y) {
  check_tower(x, y);
  Fq r = x;
  for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] ^= y.c[i];
  return r;
}

Fq fq_mul(const Fq& x, const Fq& y) {
  check_tower(x, y);
  const std::size_t d = x.c.size();
  std::vector<F16> conv(2 * d - 1, 0);
  for (std::size_t i = 0; i < d; ++i) {
    if (!x.c[i]) continue;
    for (std::size_t j = 0; j < d; ++j) conv[i + j] ^= f16_mul(x.c[i], y.c[j]);
  }
  // z^(d+t) = g^3 * z^t
  Fq r{x.a, std::vector<F16>(d, 0)};
  for (std::size_t i = 0; i < d; ++i) r.c[i] = conv[i];
  for (std::size_t i = d; i < conv.size(); ++i) r.c[i - d] ^= f16_mul(conv[i], kGen3);
  return r;
}

Fq fq_mul_f16(const Fq& x, F16 s) {
  Fq r = x;
  for (F16& v : r.c) v = f16_mul(v, s);
  return r;
}

Fq fq_inv(const Fq& x) {
  if (x.is_zero()) fail(errc::invalid_argument, "inversion of zero in F_q");
  if (x.a == 0) return fq_from_f16(0, f16_inv(x.c[0]));
  PolyF16 rep(x.c.begin(), x.c.end());
  PolyF16 inv = poly_inv_mod16(rep, tower_modulus_f16(x.a));
  Fq r = fq_zero(x.a);
  for (std::size_t i = 0; i < inv.size(); ++i) r.c[i] = inv[i];
  return r;
}

Fq fq_pow2k(const Fq& x, uint64_t t) {
  uint64_t period = 4 * fq_dim(x.a);  // Frobenius order of F_q over F_2
  uint64_t reps = t % period;
  Fq r = x;
  for (uint64_t i = 0; i < reps; ++i) r = fq_mul(r, r);
  return r;
}

// ---------------------------------------------------------------------------
// Polynomials over F_q mod E(x) = x^n - g^5

uint64_t EParams::n() const {
  if (b < 0 || b > 4) fail(errc::invalid_argument, "degree exponent out of supported range");
  uint64_t v = 1;
  for (int i = 0; i < b; ++i) v *= 3;
  return v;
}

PolyFq poly_zero(int a, uint64_t len) {
  PolyFq p;
  p.a = a;
  p.c.assign(len, fq_zero(a));
  return p;
}

static uint64_t modpow2(uint64_t t, uint64_t mod) {
  // 2^t mod `mod`
  uint64_t result = 1 % mod, base = 2 % mod;
  while (t) {
    if (t & 1) result = (result * base) % mod;
    base = (base * base) % mod;
    t >>= 1;
  }
  return result;
}

PolyFq frobenius_power(const PolyFq& f, uint64_t t, const EParams& e) {
  if (t == 0) fail(errc::invalid_argument, "frobenius_power: t must be >= 1");
  const uint64_t n = e.n();
  if (f.a != e.a || f.c.size() > n) fail(errc::invalid_argument, "frobenius_power: operand not reduced mod E");
  PolyFq h = poly_zero(e.a, n);
  const uint64_t p3n = modpow2(t, 3 * n);
  for (uint64_t i = 0; i < f.c.size(); ++i) {
    if (f.c[i].is_zero()) continue;
    uint64_t shifted = (i * p3n) % (3 * n);
    uint64_t j = shifted % n;
    Fq coeff = fq_pow2k(f.c[i], t);
    if (shifted >= 2 * n)
      coeff = fq_mul_f16(coeff, kGen10);
    else if (shifted >= n)
      coeff = fq_mul_f16(coeff, kGen5);
    h.c[j] = fq_add(h.c[j], coeff);
  }
  return h;
}

PolyFq naive_pow2k_mod_e(const PolyFq& f, uint64_t t, const EParams& e) {
  const uint64_t n = e.n();
  if (f.a != e.a || f.c.size() > n) fail(errc::invalid_argument, "operand not reduced mod E");
  PolyFq cur = poly_zero(e.a, n);
  for (std::size_t i = 0; i < f.c.size(); ++i) cur.c[i] = f.c[i];
  for (uint64_t s = 0; s < t; ++s) {
    // square then reduce by x^n = g^5
    std::vector<Fq> conv(2 * n - 1, fq_zero(e.a));
    for (uint64_t i = 0; i < n; ++i) {
      if (cur.c[i].is_zero()) continue;
      for (uint64_t j = 0; j < n; ++j) {
        if (cur.c[j].is_zero()) continue;
        conv[i + j] = fq_add(conv[i + j], fq_mul(cur.c[i], cur.c[j]));
      }
    }
    PolyFq next = poly_zero(e.a, n);
    for (uint64_t i = 0; i < n; ++i) next.c[i] = conv[i];
    for (uint64_t i = n; i < conv.size(); ++i)
      next.c[i - n] = fq_add(next.c[i - n], fq_mul_f16(conv[i], kGen5));
    cur = next;
  }
  return cur;
}

Fq poly_eval(const PolyFq& f, const Fq& y) {
  if (f.a != y.a) fail(errc::invalid_argument, "poly_eval: tower parameter mismatch");
  Fq acc = fq_zero(f.a);
  for (std::size_t i = f.c.size(); i-- > 0;) acc = fq_add(fq_mul(acc, y), f.c[i]);
  return acc;
}

// ---------------------------------------------------------------------------
// Irreducibility via Rabin's criterion

namespace {

// Generic dense polynomial machinery over a field given by callbacks; only
// instantiated for F_16 and F_q, both tiny.
template <class K>
struct FieldOps {
  K (*add)(const K&, const K&);
  K (*mul)(const K&, const K&);
  K (*inv)(const K&);
  bool (*is_zero)(const K&);
  K zero, one;
};

template <class K>
int pdeg(const std::vector<K>& p, const FieldOps<K>& F) {
  for (std::size_t i = p.size(); i-- > 0;)
    if (!F.is_zero(p[i])) return static_cast<int>(i);
  return -1;
}

template <class K>
std::vector<K> ptrim(std::vector<K> p, const FieldOps<K>& F) {
  while (!p.empty() && F.is_zero(p.back())) p.pop_back();
  return p;
}

template <class K>
std::vector<K> pmul(const std::vector<K>& x, const std::vector<K>& y, const FieldOps<K>& F) {
  if (pdeg(x, F) < 0 || pdeg(y, F) < 0) return {};
  std::vector<K> r(x.size() + y.size() - 1, F.zero);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (F.is_zero(x[i])) continue;
    for (std::size_t j = 0; j < y.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(x[i], y[j]));
  }
  return ptrim(std::move(r), F);
}

template <class K>
std::vector<K> pmod(std::vector<K> x, const std::vector<K>& mod, const FieldOps<K>& F) {
  int dm = pdeg(mod, F);
  x = ptrim(std::move(x), F);
  K lead_inv = F.inv(mod[dm]);
  while (pdeg(x, F) >= dm) {
    int dx = pdeg(x, F);
    K f = F.mul(x[dx], lead_inv);
    for (int i = 0; i <= dm; ++i) x[dx - dm + i] = F.add(x[dx - dm + i], F.mul(f, mod[i]));
    x = ptrim(std::move(x), F);
  }
  return x;
}

template <class K>
std::vector<K> pgcd(std::vector<K> a, std::vector<K> b, const FieldOps<K>& F) {
  a = ptrim(std::move(a), F);
  b = ptrim(std::move(b), F);
  while (pdeg(b, F) >= 0) {
    std::vector<K> r = pmod(a, b, F);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// x^(q^e) mod f, by (e * log2 q) modular squarings.
template <class K>
std::vector<K> frobenius_iterate(const std::vector<K>& f, unsigned log2q, unsigned e, const FieldOps<K>& F) {
  std::vector<K> x = {F.zero, F.one};
  std::vector<K> cur = pmod(x, f, F);
  for (unsigned s = 0; s < log2q * e; ++s) cur = pmod(pmul(cur, cur, F), f, F);
  return cur;
}

template <class K>
bool rabin_irreducible(const std::vector<K>& coeffs, unsigned log2q, const FieldOps<K>& F) {
  std::vector<K> f = ptrim(coeffs, F);
  int n = pdeg(f, F);
  if (n <= 0) return false;
  if (n == 1) return true;

  std::vector<unsigned> primes;
  {
    int rest = n;
    for (int p = 2; p * p <= rest; ++p)
      while (rest % p == 0) {
        if (primes.empty() || primes.back() != static_cast<unsigned>(p)) primes.push_back(p);
        rest /= p;
      }
    if (rest > 1) primes.push_back(static_cast<unsigned>(rest));
  }

  std::vector<K> x = {F.zero, F.one};
  // x^(q^n) == x mod f
  std::vector<K> xn = frobenius_iterate(f, log2q, static_cast<unsigned>(n), F);
  std::vector<K> diff = xn;
  if (diff.size() < 2) diff.resize(2, F.zero);
  diff[1] = F.add(diff[1], F.one);  // subtract x (char 2)
  if (pdeg(ptrim(diff, F), F) >= 0) return false;
  // gcd(x^(q^(n/p)) - x, f) must be constant for every prime p | n
  for (unsigned p : primes) {
    std::vector<K> xe = frobenius_iterate(f, log2q, static_cast<unsigned>(n) / p, F);
    std::vector<K> d = xe;
    if (d.size() < 2) d.resize(2, F.zero);
    d[1] = F.add(d[1], F.one);
    std::vector<K> g = pgcd(f, ptrim(std::move(d), F), F);
    if (pdeg(g, F) > 0) return false;
  }
  return true;
}

F16 f16t_add(const F16& a, const F16& b) { return a ^ b; }
F16 f16t_mul(const F16& a, const F16& b) { return f16_mul(a, b); }
F16 f16t_inv(const F16& a) { return f16_inv(a); }
bool f16t_zero(const F16& a) { return (a & 0xF) == 0; }

Fq fqt_add(const Fq& a, const Fq& b) { return fq_add(a, b); }
Fq fqt_mul(const Fq& a, const Fq& b) { return fq_mul(a, b); }
Fq fqt_inv(const Fq& a) { return fq_inv(a); }
bool fqt_zero(const Fq& a) { return a.is_zero(); }

}  // namespace

bool irreducible_over_f16(const std::vector<F16>& coeffs) {
  FieldOps<F16> F{f16t_add, f16t_mul, f16t_inv, f16t_zero, 0, 1};
  if (pdeg(coeffs, F) > 27) fail(errc::resource, "irreducibility cap exceeded (degree > 27 over F_16)");
  return rabin_irreducible(coeffs, 4, F);
}

bool irreducible_over_fq(const std::vector<Fq>& coeffs, int a) {
  if (a > 1) fail(errc::resource, "irreducibility over F_q capped at a <= 1");
  for (const Fq& v : coeffs)
    if (v.a != a) fail(errc::invalid_argument, "coefficient tower mismatch");
  FieldOps<Fq> F{fqt_add, fqt_mul, fqt_inv, fqt_zero, fq_zero(a), fq_one(a)};
  if (pdeg(coeffs, F) > 9) fail(errc::resource, "irreducibility cap exceeded (degree > 9 over F_q)");
  return rabin_irreducible(coeffs, fq_bits(a), F);
}

std::vector<F16> tower_modulus_f16(int a) {
  std::vector<F16> mod(fq_dim(a) + 1, 0);
  mod[0] = kGen3;  // minus g^3 = plus g^3 in characteristic 2
  mod.back() = 1;
  return mod;
}

std::vector<Fq> guv_modulus_fq(int a, int b) {
  EParams e{a, b};
  std::vector<Fq> mod(e.n() + 1, fq_zero(a));
  mod[0] = fq_from_f16(a, kGen5);
  mod.back() = fq_one(a);
  return mod;
}

}  // namespace derand::ff
