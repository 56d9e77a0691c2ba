// Copyright 2026 the derand authors
// SPDX-License-Identifier: Apache-2.0
//
// Seeded extractors: a pairwise-independent-hash reference extractor, the
// condenser built from the field expander of finite_field.hpp, an
// expander-walk extractor, and their condense-then-extract composition.

#ifndef DERAND_EXTRACTORS_HPP
#define DERAND_EXTRACTORS_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "derand/common.hpp"
#include "derand/finite_field.hpp"
#include "derand/rational.hpp"

namespace derand::ext {

// ---------------------------------------------------------------------------
// The pinned explicit expander on {0,1}^s.
//
// For s > 4: circulant with generator set {+1, -1, +2^ceil(s/2), -2^ceil(s/2),
// +3}, padded to degree 8 with three self-loops so each step consumes exactly
// 3 label bits. For s <= 4: the complete graph with self-loops, label width s,
// edge label L from vertex v leading to (v + L) mod 2^s.
struct Expander {
  unsigned s = 1;

  unsigned label_bits() const { return s <= 4 ? s : 3; }
  uint64_t vertex_count() const { return 1ull << s; }
  uint64_t step(uint64_t v, uint64_t label) const;
  uint64_t walk(uint64_t start, const BitString& labels) const;  // consumes all labels
};

// ---------------------------------------------------------------------------

struct ExtractorSpec {
  unsigned ell = 1;  // source length (bits)
  unsigned d = 1;    // seed length
  unsigned s = 1;    // output length
  int k = 1;         // entropy parameter
  double eps = 0.5;  // error
  std::string kind = "custom";

  void validate() const;
};

class Extractor {
 public:
  virtual ~Extractor() = default;
  virtual const ExtractorSpec& spec() const = 0;
  virtual BitString extract(const BitString& x, const BitString& y) const = 0;
};

/// Leftover-hash reference extractor: the seed selects a member of a linear
/// Toeplitz family through a fixed full-rank expansion matrix, so the all-zero
/// seed selects the zero map. Requires s <= k - 2 log2(1/eps).
class HashExtractor final : public Extractor {
 public:
  HashExtractor(unsigned ell, unsigned d, unsigned s, int k, double eps);
  const ExtractorSpec& spec() const override { return spec_; }
  BitString extract(const BitString& x, const BitString& y) const override;

 private:
  ExtractorSpec spec_;
  std::vector<BitString> expansion_;  // d rows of ell+s-1 Toeplitz diagonal bits
};

/// ext(x, y) = y. A perfect (0, 0)-extractor of its seed; test fixture.
class IdentityExtractor final : public Extractor {
 public:
  explicit IdentityExtractor(unsigned ell, unsigned s);
  const ExtractorSpec& spec() const override { return spec_; }
  BitString extract(const BitString&, const BitString& y) const override { return y; }

 private:
  ExtractorSpec spec_;
};

/// ext(x, y) = fixed constant; the pathological fixture.
class ConstantExtractor final : public Extractor {
 public:
  ConstantExtractor(unsigned ell, unsigned d, BitString value);
  const ExtractorSpec& spec() const override { return spec_; }
  BitString extract(const BitString&, const BitString&) const override { return value_; }

 private:
  ExtractorSpec spec_;
  BitString value_;
};

// ---------------------------------------------------------------------------
// Field-expander condenser (the lossless-condenser route)

struct GuvParams {
  // inputs
  unsigned ell = 0;  // log2 N, source bits
  int k = 0;         // log2 K
  double eps = 0;
  double alpha = 0;  // in (0, 1/2)
  // derived
  double z = 0;           // 3 * ell * k / eps
  int a = 0;              // q = 16^(5^a)
  unsigned log2q = 0;     // 4 * 5^a
  double alpha_prime = 0; // largest alpha' <= alpha with q = z^(1+1/alpha')
  int b = 0;              // n = 3^b
  uint64_t n = 0;
  double log2_h0 = 0;     // h0 = z^(1/alpha')
  unsigned log2h = 0;     // h: smallest power of 2 >= h0
  uint64_t m = 0;         // ceil(k / log2 h)
  unsigned d_bits = 0;    // seed bits: one field element
  unsigned s_bits = 0;    // output bits: m+1 field elements
};

/// Parameter derivation; fails when no supported field size fits.
GuvParams derive_guv_params(unsigned ell, int k, double eps, double alpha);

/// (y, f(y), (f^h mod E)(y), ..., (f^(h^(m-1)) mod E)(y)); h = 2^log2h.
std::vector<ff::Fq> guv_expander(const ff::PolyFq& f, const ff::Fq& y, unsigned log2h, uint64_t m,
                                 const ff::EParams& e);

/// Bit-packs x into a polynomial and y into a field element, runs the
/// expander, and packs the output. |y| must equal the derived seed length.
BitString guv_condense(const BitString& x, const BitString& y, int k, double eps, double alpha);

// Little-endian packing: 4 bits per F_16 coefficient, constant term first.
ff::Fq pack_bits_to_fq(const BitString& bits, std::size_t pos, int a);
ff::PolyFq pack_bits_to_poly(const BitString& bits, int a, uint64_t n);
BitString unpack_fq_vector(const std::vector<ff::Fq>& vals);

// ---------------------------------------------------------------------------
// Expander-walk extractor

struct WalkParams {
  unsigned source_len = 0;
  unsigned s = 1;        // log2 block count
  unsigned steps = 0;    // walk length in edges
  unsigned out_len = 0;  // output bits

  unsigned block_len() const { return static_cast<unsigned>(ceil_div(source_len, 1ull << s)); }
  unsigned seed_len() const { return s + steps * Expander{s}.label_bits(); }
  void validate() const;
};

class WalkExtractor final : public Extractor {
 public:
  WalkExtractor(WalkParams params, int k, double eps);
  const ExtractorSpec& spec() const override { return spec_; }
  BitString extract(const BitString& x, const BitString& y) const override;
  const WalkParams& params() const { return params_; }

 private:
  WalkParams params_;
  ExtractorSpec spec_;
};

// ---------------------------------------------------------------------------
// Condense-then-extract composition

struct GuvExtParams {
  GuvParams cond;
  WalkParams walk;
  unsigned d_total = 0;
  unsigned s_out = 0;
};

GuvExtParams derive_guv_ext(unsigned ell, int k, double eps, double alpha);

class GuvExtractor final : public Extractor {
 public:
  GuvExtractor(unsigned ell, int k, double eps, double alpha);
  const ExtractorSpec& spec() const override { return spec_; }
  BitString extract(const BitString& x, const BitString& y) const override;
  const GuvExtParams& params() const { return params_; }

 private:
  GuvExtParams params_;
  ExtractorSpec spec_;
};

// ---------------------------------------------------------------------------
// Sampling properties

/// Exact count of sources x whose extracted-seed output law of f is more than
/// delta-far (TVD) from the uniform-seed law. f maps {0,1}^s -> [v_size].
uint64_t sampler_badset_count(const Extractor& ext, const std::vector<int>& f, int v_size,
                              const Rational& delta, uint64_t enumeration_cap = (1ull << 26));

/// TVD between Ext(X, U_d) and U_s for X uniform on `support` (exact, returned
/// as a rational).
Rational flat_source_tvd(const Extractor& ext, const std::vector<uint64_t>& support);

/// Deterministic family of flat-source supports of size 2^k over {0,1}^ell.
std::vector<std::vector<uint64_t>> flat_source_family(unsigned ell, int k, int count, uint64_t seed);

}  // namespace derand::ext

#endif  // DERAND_EXTRACTORS_HPP
