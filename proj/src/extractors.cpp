// Copyright 2026 the derand authors
// SPDX-License-Identifier: Apache-2.0

#include "derand/extractors.hpp"

#include <algorithm>
#include <cmath>

namespace derand::ext {

namespace {
// Seeds the fixed expansion matrices of the hash family. Changing this
// constant changes every hash extractor output.
constexpr uint64_t kHashFamilySeed = 0xA2C2B5D1D1E4C7F3ull;
}  // namespace

uint64_t Expander::step(uint64_t v, uint64_t label) const {
  const uint64_t size = vertex_count();
  if (s <= 4) return (v + label) % size;
  const uint64_t half = 1ull << ((s + 1) / 2);
  switch (label & 7) {
    case 0: return (v + 1) % size;
    case 1: return (v + size - 1) % size;
    case 2: return (v + half) % size;
    case 3: return (v + size - half) % size;
    case 4: return (v + 3) % size;
    default: return v;  // self-loops pad the degree to 8
  }
}

uint64_t Expander::walk(uint64_t start, const BitString& labels) const {
  const unsigned lb = label_bits();
  if (labels.size() % lb != 0) fail(errc::invalid_argument, "walk labels not a multiple of label width");
  uint64_t v = start % vertex_count();
  for (std::size_t pos = 0; pos < labels.size(); pos += lb) v = step(v, labels.to_uint(pos, lb));
  return v;
}

// ---------------------------------------------------------------------------

void ExtractorSpec::validate() const {
  if (d < 1 || s < 1) fail(errc::invalid_argument, "extractor needs d >= 1 and s >= 1");
  if (k > static_cast<int>(ell)) fail(errc::invalid_argument, "entropy parameter exceeds source length");
  if (!(eps > 0 && eps < 1)) fail(errc::invalid_argument, "extractor error must lie in (0,1)");
}

HashExtractor::HashExtractor(unsigned ell, unsigned d, unsigned s, int k, double eps) {
  spec_ = ExtractorSpec{ell, d, s, k, eps, "hash"};
  spec_.validate();
  if (static_cast<double>(s) > k - 2.0 * std::log2(1.0 / eps) + 1e-9)
    fail(errc::invalid_argument, "hash extractor outside the leftover-hash regime: s > k - 2 log(1/eps)");
  // Fixed expansion: seed bit r toggles a pinned pseudorandom diagonal row.
  SplitMix64 gen(kHashFamilySeed ^ (static_cast<uint64_t>(ell) << 32) ^ (static_cast<uint64_t>(d) << 16) ^ s);
  const unsigned diag = ell + s - 1;
  expansion_.reserve(d);
  for (unsigned r = 0; r < d; ++r) {
    BitString row;
    for (unsigned c = 0; c < diag; ++c) row.push_back(static_cast<int>(gen.next() & 1));
    expansion_.push_back(std::move(row));
  }
}

BitString HashExtractor::extract(const BitString& x, const BitString& y) const {
  if (x.size() != spec_.ell) fail(errc::invalid_argument, "hash extractor: source length mismatch");
  if (y.size() != spec_.d) fail(errc::invalid_argument, "hash extractor: seed length mismatch");
  const unsigned ell = spec_.ell, s = spec_.s;
  BitString diag(ell + s - 1);
  for (unsigned r = 0; r < spec_.d; ++r) {
    if (!y[r]) continue;
    for (unsigned c = 0; c < diag.size(); ++c) diag.set(c, diag[c] ^ expansion_[r][c]);
  }
  // Toeplitz apply: out[r] = XOR_c diag[r - c + ell - 1] * x[c]
  BitString out(s);
  for (unsigned r = 0; r < s; ++r) {
    int acc = 0;
    for (unsigned c = 0; c < ell; ++c)
      if (x[c]) acc ^= diag[r + ell - 1 - c];
    out.set(r, acc);
  }
  return out;
}

IdentityExtractor::IdentityExtractor(unsigned ell, unsigned s) {
  spec_ = ExtractorSpec{ell, s, s, 0, 0.5, "custom"};
  spec_.validate();
}

ConstantExtractor::ConstantExtractor(unsigned ell, unsigned d, BitString value) : value_(std::move(value)) {
  spec_ = ExtractorSpec{ell, d, static_cast<unsigned>(value_.size()), 0, 0.5, "custom"};
  spec_.validate();
}

// ---------------------------------------------------------------------------
// Parameter derivation for the field-expander condenser

GuvParams derive_guv_params(unsigned ell, int k, double eps, double alpha) {
  if (!(alpha > 0 && alpha < 0.5)) fail(errc::invalid_argument, "alpha must lie in (0, 1/2)");
  if (k < 1 || static_cast<unsigned>(k) > ell) fail(errc::invalid_argument, "need 1 <= k <= ell");
  if (!(eps > 0 && eps < 1)) fail(errc::invalid_argument, "eps must lie in (0,1)");
  GuvParams p;
  p.ell = ell;
  p.k = k;
  p.eps = eps;
  p.alpha = alpha;
  p.z = 3.0 * static_cast<double>(ell) * static_cast<double>(k) / eps;
  const double L = std::log2(p.z);
  // Smallest tower with alpha' <= alpha, i.e. 4*5^a >= (1 + 1/alpha) * L.
  const double need = (1.0 + 1.0 / alpha) * L;
  int a = 0;
  double bits = 4;
  while (bits + 1e-9 < need) {
    ++a;
    bits *= 5;
    if (a > 2) fail(errc::resource, "condenser parameters require q beyond the configured cap (a > 2)");
  }
  p.a = a;
  p.log2q = static_cast<unsigned>(bits);
  p.alpha_prime = L / (bits - L);
  // n: smallest power of 3 with n > ell / log2 q
  p.b = 0;
  p.n = 1;
  while (static_cast<double>(p.n) <= static_cast<double>(ell) / bits) {
    p.n *= 3;
    ++p.b;
  }
  p.log2_h0 = bits - L;  // log2 of z^(1/alpha')
  p.log2h = static_cast<unsigned>(std::ceil(p.log2_h0 - 1e-9));
  if (p.log2h < 1) p.log2h = 1;
  p.m = static_cast<uint64_t>(std::ceil(static_cast<double>(k) / static_cast<double>(p.log2h) - 1e-9));
  if (p.m < 1) p.m = 1;
  p.d_bits = p.log2q;
  p.s_bits = static_cast<unsigned>((p.m + 1) * p.log2q);
  return p;
}

std::vector<ff::Fq> guv_expander(const ff::PolyFq& f, const ff::Fq& y, unsigned log2h, uint64_t m,
                                 const ff::EParams& e) {
  if (f.a != e.a || y.a != e.a) fail(errc::invalid_argument, "guv_expander: tower parameter mismatch");
  if (f.c.size() > e.n()) fail(errc::invalid_argument, "guv_expander: polynomial degree exceeds bound");
  if (m < 1) fail(errc::invalid_argument, "guv_expander: m must be >= 1");
  std::vector<ff::Fq> out;
  out.reserve(m + 1);
  out.push_back(y);
  ff::PolyFq cur = f;
  out.push_back(ff::poly_eval(cur, y));
  for (uint64_t i = 1; i < m; ++i) {
    cur = ff::frobenius_power(cur, log2h, e);  // cur = previous^h, h = 2^log2h
    out.push_back(ff::poly_eval(cur, y));
  }
  return out;
}

ff::Fq pack_bits_to_fq(const BitString& bits, std::size_t pos, int a) {
  ff::Fq v = ff::fq_zero(a);
  const unsigned nb = ff::fq_bits(a);
  for (unsigned t = 0; t < nb && pos + t < bits.size(); ++t) {
    if (bits[pos + t]) v.c[t / 4] = static_cast<ff::F16>(v.c[t / 4] | (1u << (t % 4)));
  }
  return v;
}

ff::PolyFq pack_bits_to_poly(const BitString& bits, int a, uint64_t n) {
  ff::PolyFq f = ff::poly_zero(a, n);
  const unsigned nb = ff::fq_bits(a);
  for (uint64_t i = 0; i < n; ++i) f.c[i] = pack_bits_to_fq(bits, i * nb, a);
  return f;
}

BitString unpack_fq_vector(const std::vector<ff::Fq>& vals) {
  BitString out;
  for (const ff::Fq& v : vals) {
    for (ff::F16 nib : v.c)
      for (int t = 0; t < 4; ++t) out.push_back((nib >> t) & 1);
  }
  return out;
}

BitString guv_condense(const BitString& x, const BitString& y, int k, double eps, double alpha) {
  GuvParams p = derive_guv_params(static_cast<unsigned>(x.size()), k, eps, alpha);
  if (y.size() != p.d_bits)
    fail(errc::invalid_argument, "guv_condense: seed must have " + std::to_string(p.d_bits) + " bits");
  ff::EParams e{p.a, p.b};
  ff::PolyFq f = pack_bits_to_poly(x, p.a, p.n);
  ff::Fq yf = pack_bits_to_fq(y, 0, p.a);
  return unpack_fq_vector(guv_expander(f, yf, p.log2h, p.m, e));
}

// ---------------------------------------------------------------------------

void WalkParams::validate() const {
  if (source_len == 0 || out_len == 0) fail(errc::invalid_argument, "walk extractor: empty source or output");
  if (s < 1 || s > 20) fail(errc::invalid_argument, "walk extractor: block-count exponent out of range");
  if (static_cast<uint64_t>(out_len) > (static_cast<uint64_t>(steps) + 1) * block_len())
    fail(errc::invalid_argument, "walk extractor: output longer than visited blocks");
}

WalkExtractor::WalkExtractor(WalkParams params, int k, double eps) : params_(params) {
  params_.validate();
  spec_ = ExtractorSpec{params_.source_len, params_.seed_len(), params_.out_len, k, eps, "walk"};
  spec_.validate();
}

BitString WalkExtractor::extract(const BitString& x, const BitString& y) const {
  if (x.size() != params_.source_len) fail(errc::invalid_argument, "walk extractor: source length mismatch");
  if (y.size() != params_.seed_len()) fail(errc::invalid_argument, "walk extractor: seed length mismatch");
  Expander g{params_.s};
  const unsigned bl = params_.block_len();
  uint64_t v = y.to_uint(0, params_.s);
  BitString out;
  std::size_t pos = params_.s;
  for (unsigned step = 0; step <= params_.steps; ++step) {
    if (step > 0) {
      v = g.step(v, y.to_uint(pos, g.label_bits()));
      pos += g.label_bits();
    }
    for (unsigned t = 0; t < bl; ++t) {
      std::size_t idx = static_cast<std::size_t>(v) * bl + t;
      out.push_back(idx < x.size() ? x[idx] : 0);  // zero padding past the source
    }
  }
  return out.slice(0, params_.out_len);
}

// ---------------------------------------------------------------------------

GuvExtParams derive_guv_ext(unsigned ell, int k, double eps, double alpha) {
  GuvExtParams p;
  p.cond = derive_guv_params(ell, k, eps, alpha);
  const unsigned n2 = p.cond.s_bits;
  p.s_out = static_cast<unsigned>(std::ceil((1.0 - alpha) * k - 1e-9));
  if (p.s_out < 1) p.s_out = 1;
  WalkParams w;
  w.source_len = n2;
  w.s = n2 >= 32 ? 3 : 2;
  const unsigned bl = w.block_len();
  unsigned visited = static_cast<unsigned>(ceil_div(p.s_out, bl));
  w.steps = visited > 0 ? visited - 1 : 0;
  w.out_len = p.s_out;
  w.validate();
  p.walk = w;
  p.d_total = p.cond.d_bits + w.seed_len();
  return p;
}

GuvExtractor::GuvExtractor(unsigned ell, int k, double eps, double alpha)
    : params_(derive_guv_ext(ell, k, eps, alpha)) {
  spec_ = ExtractorSpec{ell, params_.d_total, params_.s_out, k, eps, "guv_composed"};
  spec_.validate();
}

BitString GuvExtractor::extract(const BitString& x, const BitString& y) const {
  if (x.size() != spec_.ell) fail(errc::invalid_argument, "guv extractor: source length mismatch");
  if (y.size() != spec_.d) fail(errc::invalid_argument, "guv extractor: seed length mismatch");
  BitString y1 = y.slice(0, params_.cond.d_bits);
  BitString y2 = y.slice(params_.cond.d_bits, y.size() - params_.cond.d_bits);
  BitString condensed = guv_condense(x, y1, params_.cond.k, params_.cond.eps, params_.cond.alpha);
  WalkExtractor walk(params_.walk, params_.cond.k, params_.cond.eps);
  return walk.extract(condensed, y2);
}

// ---------------------------------------------------------------------------

uint64_t sampler_badset_count(const Extractor& ext, const std::vector<int>& f, int v_size,
                              const Rational& delta, uint64_t enumeration_cap) {
  const ExtractorSpec& sp = ext.spec();
  if (sp.ell >= 40 || sp.d >= 30 || sp.s >= 30) fail(errc::resource, "sampler_badset_count: space too large");
  const uint64_t X = 1ull << sp.ell, D = 1ull << sp.d, S = 1ull << sp.s;
  if (f.size() != S) fail(errc::invalid_argument, "function table has wrong size");
  for (int v : f)
    if (v < 0 || v >= v_size) fail(errc::invalid_argument, "function value out of range");
  if (X * D > enumeration_cap) fail(errc::resource, "sampler_badset_count: enumeration cap exceeded");

  // Reference law: f(U_s)
  std::vector<uint64_t> base(static_cast<std::size_t>(v_size), 0);
  for (uint64_t u = 0; u < S; ++u) base[static_cast<std::size_t>(f[u])]++;

  uint64_t bad = 0;
  std::vector<uint64_t> counts(static_cast<std::size_t>(v_size));
  for (uint64_t xi = 0; xi < X; ++xi) {
    BitString x = BitString::from_uint(xi, sp.ell);
    std::fill(counts.begin(), counts.end(), 0);
    for (uint64_t yi = 0; yi < D; ++yi) {
      BitString out = ext.extract(x, BitString::from_uint(yi, sp.d));
      counts[static_cast<std::size_t>(f[out.to_uint(0, sp.s)])]++;
    }
    // TVD between counts/D and base/S, exactly: sum |counts*S - base*D| / (2*D*S)
    BigInt l1(0);
    for (int v = 0; v < v_size; ++v) {
      BigInt diff = BigInt::from_uint64(counts[v]) * BigInt::from_uint64(S) -
                    BigInt::from_uint64(base[v]) * BigInt::from_uint64(D);
      l1 = l1 + diff.abs();
    }
    Rational tv(l1, BigInt::from_uint64(2 * D * S));
    if (tv > delta) ++bad;
  }
  return bad;
}

Rational flat_source_tvd(const Extractor& ext, const std::vector<uint64_t>& support) {
  const ExtractorSpec& sp = ext.spec();
  if (support.empty()) fail(errc::invalid_argument, "empty flat source");
  const uint64_t D = 1ull << sp.d, S = 1ull << sp.s;
  std::vector<uint64_t> counts(static_cast<std::size_t>(S), 0);
  for (uint64_t xv : support) {
    BitString x = BitString::from_uint(xv, sp.ell);
    for (uint64_t yi = 0; yi < D; ++yi) {
      BitString out = ext.extract(x, BitString::from_uint(yi, sp.d));
      counts[out.to_uint(0, sp.s)]++;
    }
  }
  const uint64_t total = support.size() * D;
  BigInt l1(0);
  for (uint64_t u = 0; u < S; ++u) {
    BigInt diff = BigInt::from_uint64(counts[u]) * BigInt::from_uint64(S) - BigInt::from_uint64(total);
    l1 = l1 + diff.abs();
  }
  return Rational(l1, BigInt::from_uint64(2 * total) * BigInt::from_uint64(S));
}

std::vector<std::vector<uint64_t>> flat_source_family(unsigned ell, int k, int count, uint64_t seed) {
  if (k < 0 || static_cast<unsigned>(k) > ell || ell >= 40)
    fail(errc::invalid_argument, "flat_source_family: bad parameters");
  const uint64_t size = 1ull << k;
  const uint64_t space = 1ull << ell;
  SplitMix64 gen(seed);
  std::vector<std::vector<uint64_t>> family;
  family.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    // Floyd-style distinct sampling; support sizes stay far below the space.
    std::vector<uint64_t> support;
    std::vector<char> taken(space, 0);
    while (support.size() < size) {
      uint64_t v = gen.below(space);
      if (!taken[v]) {
        taken[v] = 1;
        support.push_back(v);
      }
    }
    std::sort(support.begin(), support.end());
    family.push_back(std::move(support));
  }
  return family;
}

}  // namespace derand::ext
