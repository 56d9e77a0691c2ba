// Copyright 2026 the derand authors
// SPDX-License-Identifier: Apache-2.0

#include "derand/prg.hpp"

#include <cmath>

#include "derand/distribution.hpp"
#include "derand/extractors.hpp"

namespace derand::prg {

int NisanParams::block_len() const {
  if (block_override > 0) return block_override;
  int n0 = space + static_cast<int>(std::ceil(std::log2(1.0 / eps) - 1e-9)) + 2;
  return std::max(n0, 2);
}

int NisanParams::levels() const {
  const uint64_t n0 = static_cast<uint64_t>(block_len());
  int L = 0;
  uint64_t reach = n0;
  while (reach < out_len) {
    reach *= 2;
    ++L;
    if (L > 40) fail(errc::invalid_argument, "output length out of range");
  }
  return L;
}

unsigned NisanParams::seed_len() const {
  const unsigned n0 = static_cast<unsigned>(block_len());
  return n0 + static_cast<unsigned>(levels()) * (3 * n0 - 1);
}

void NisanParams::validate() const {
  if (space < 1) fail(errc::invalid_argument, "space bound must be positive");
  if (out_len < 1) fail(errc::invalid_argument, "output length must be positive");
  if (!(eps > 0 && eps < 1)) fail(errc::invalid_argument, "eps must lie in (0,1)");
  if (space < 63 && out_len > (1ull << space)) fail(errc::invalid_argument, "requires T <= 2^S");
}

namespace {

// Affine Toeplitz hash on n0 bits: description = 2*n0-1 diagonal bits followed
// by an n0-bit offset, so the all-zero description is the zero map.
void apply_hash(const BitString& seed, std::size_t desc_pos, int n0, const uint8_t* in, uint8_t* out) {
  for (int r = 0; r < n0; ++r) {
    int acc = seed[desc_pos + 2 * n0 - 1 + r];  // offset bit
    for (int c = 0; c < n0; ++c)
      if (in[c]) acc ^= seed[desc_pos + r + n0 - 1 - c];
    out[r] = static_cast<uint8_t>(acc & 1);
  }
}

}  // namespace

int nisan_bit(const BitString& seed, uint64_t i, const NisanParams& p) {
  p.validate();
  if (seed.size() != p.seed_len()) fail(errc::invalid_argument, "seed length mismatch");
  if (i >= p.out_len) fail(errc::invalid_argument, "output index out of range");
  const int n0 = p.block_len();
  const int L = p.levels();
  uint64_t block = i / static_cast<uint64_t>(n0);
  uint8_t cur[64], tmp[64];
  for (int c = 0; c < n0; ++c) cur[c] = static_cast<uint8_t>(seed[c]);
  for (int t = L; t >= 1; --t) {
    uint64_t half = 1ull << (t - 1);
    if (block >= half) {
      apply_hash(seed, static_cast<std::size_t>(n0) + static_cast<std::size_t>(t - 1) * (3 * n0 - 1), n0, cur,
                 tmp);
      for (int c = 0; c < n0; ++c) cur[c] = tmp[c];
      block -= half;
    }
  }
  return cur[i % static_cast<uint64_t>(n0)];
}

namespace {

void materialize_rec(const BitString& seed, int n0, int t, std::vector<uint8_t> block, BitString& out) {
  if (t == 0) {
    for (int c = 0; c < n0; ++c) out.push_back(block[c]);
    return;
  }
  materialize_rec(seed, n0, t - 1, block, out);
  std::vector<uint8_t> hashed(static_cast<std::size_t>(n0));
  apply_hash(seed, static_cast<std::size_t>(n0) + static_cast<std::size_t>(t - 1) * (3 * n0 - 1), n0,
             block.data(), hashed.data());
  materialize_rec(seed, n0, t - 1, std::move(hashed), out);
}

}  // namespace

BitString nisan_materialize(const BitString& seed, const NisanParams& p) {
  p.validate();
  if (seed.size() != p.seed_len()) fail(errc::invalid_argument, "seed length mismatch");
  const int n0 = p.block_len();
  std::vector<uint8_t> base(static_cast<std::size_t>(n0));
  for (int c = 0; c < n0; ++c) base[c] = static_cast<uint8_t>(seed[c]);
  BitString out;
  materialize_rec(seed, n0, p.levels(), std::move(base), out);
  return out;
}

BitString nisan_stream(const BitString& seed, const NisanParams& p) {
  return nisan_materialize(seed, p).slice(0, p.out_len);
}

Rational nisan_fooling_tvd(const bp::Program& p, bp::VertexId v0, const BitString& x,
                           const NisanParams& np, uint64_t seed_cap) {
  np.validate();
  if (!bp::validate_discipline(p, bp::Discipline::R_OW))
    fail(errc::invalid_argument, "fooling TVD requires an R-OW program");
  if (static_cast<uint64_t>(p.m()) > np.out_len)
    fail(errc::invalid_argument, "program reads more random bits than the generator outputs");
  const unsigned s = np.seed_len();
  if (s >= 40 || (1ull << s) > seed_cap) fail(errc::resource, "seed space exceeds enumeration cap");

  dist::VertexDistribution uniform_law = dist::exact_distribution(p, v0, x);
  std::vector<uint64_t> counts(p.size(), 0);
  const uint64_t total = 1ull << s;
  for (uint64_t sv = 0; sv < total; ++sv) {
    BitString seed = BitString::from_uint(sv, s);
    BitString y;
    for (int j = 0; j < p.m(); ++j) y.push_back(nisan_bit(seed, static_cast<uint64_t>(j), np));
    counts[p.index_of(bp::eval(p, v0, x, y))]++;
  }
  Rational sum(0);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    Rational prg_mass(BigInt::from_uint64(counts[i]), BigInt::from_uint64(total));
    sum += (prg_mass - uniform_law.prob[i]).abs();
  }
  return sum / Rational(2);
}

// ---------------------------------------------------------------------------

unsigned NzParams::blocks(uint64_t target_len) const {
  return static_cast<unsigned>(ceil_div(target_len, out_block));
}

unsigned NzParams::seed_len(uint64_t target_len) const {
  return source_len + blocks(target_len) * seed_block;
}

void NzParams::validate() const {
  if (source_len < 1 || seed_block < 1 || out_block < 1) fail(errc::invalid_argument, "bad generator shape");
  if (!(eps > 0 && eps < 1)) fail(errc::invalid_argument, "eps must lie in (0,1)");
  if (static_cast<double>(out_block) > k - 2.0 * std::log2(1.0 / eps) + 1e-9)
    fail(errc::config, "extraction regime violated: out_block > k - 2 log2(1/eps)");
  if (k > static_cast<int>(source_len)) fail(errc::config, "entropy claim exceeds source block");
}

BitString nz_generate(const BitString& seed, uint64_t target_len, const NzParams& params) {
  params.validate();
  if (target_len < 1) fail(errc::invalid_argument, "target length must be positive");
  if (seed.size() != params.seed_len(target_len)) fail(errc::invalid_argument, "seed length mismatch");
  ext::HashExtractor hx(params.source_len, params.seed_block, params.out_block, params.k, params.eps);
  BitString x0 = seed.slice(0, params.source_len);
  BitString out;
  std::size_t pos = params.source_len;
  for (unsigned b = 0; b < params.blocks(target_len); ++b) {
    out.append(hx.extract(x0, seed.slice(pos, params.seed_block)));
    pos += params.seed_block;
  }
  return out.slice(0, target_len);
}

Rational nz_fooling_tvd(const bp::Program& p, bp::VertexId v0, const BitString& x, const NzParams& params,
                        uint64_t seed_cap) {
  params.validate();
  if (!bp::validate_discipline(p, bp::Discipline::R_OW))
    fail(errc::invalid_argument, "fooling TVD requires an R-OW program");
  const uint64_t target = static_cast<uint64_t>(p.m());
  const unsigned s = params.seed_len(target);
  if (s >= 40 || (1ull << s) > seed_cap) fail(errc::resource, "seed space exceeds enumeration cap");

  // Memoize the per-block extraction; the seed loop revisits each (x0, y) pair
  // an exponential number of times.
  ext::HashExtractor hx(params.source_len, params.seed_block, params.out_block, params.k, params.eps);
  const uint64_t X0 = 1ull << params.source_len, Y = 1ull << params.seed_block;
  std::vector<BitString> table(static_cast<std::size_t>(X0 * Y));
  for (uint64_t xv = 0; xv < X0; ++xv) {
    BitString x0 = BitString::from_uint(xv, params.source_len);
    for (uint64_t yv = 0; yv < Y; ++yv)
      table[xv * Y + yv] = hx.extract(x0, BitString::from_uint(yv, params.seed_block));
  }

  dist::VertexDistribution uniform_law = dist::exact_distribution(p, v0, x);
  std::vector<uint64_t> counts(p.size(), 0);
  const unsigned blocks = params.blocks(target);
  const uint64_t total = 1ull << s;
  for (uint64_t sv = 0; sv < total; ++sv) {
    BitString seed = BitString::from_uint(sv, s);
    uint64_t x0v = seed.to_uint(0, params.source_len);
    BitString y;
    for (unsigned b = 0; b < blocks && y.size() < target; ++b) {
      uint64_t yv = seed.to_uint(params.source_len + b * params.seed_block, params.seed_block);
      y.append(table[x0v * Y + yv]);
    }
    counts[p.index_of(bp::eval(p, v0, x, y.slice(0, target)))]++;
  }
  Rational sum(0);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    Rational prg_mass(BigInt::from_uint64(counts[i]), BigInt::from_uint64(total));
    sum += (prg_mass - uniform_law.prob[i]).abs();
  }
  return sum / Rational(2);
}

}  // namespace derand::prg
