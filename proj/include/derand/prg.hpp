// Copyright 2026 the derand authors
// SPDX-License-Identifier: Apache-2.0
//
// Pseudorandom generators consumed by the simulator: a space-bounded PRG
// built from a recursive pairwise-independent hash construction with per-bit
// evaluation, and a generator that stretches a short seed by extracting from
// a fixed source block many times.

#ifndef DERAND_PRG_HPP
#define DERAND_PRG_HPP

#include <cstdint>

#include "derand/branching_program.hpp"
#include "derand/common.hpp"
#include "derand/rational.hpp"

namespace derand::prg {

struct NisanParams {
  int space = 4;         // S
  uint64_t out_len = 16; // T
  double eps = 0.25;
  int block_override = 0;  // base block length n0 when > 0

  /// n0: base block length; default S + ceil(log2(1/eps)) + 2, at least 2.
  int block_len() const;
  /// L: recursion depth, smallest with n0 * 2^L >= T.
  int levels() const;
  /// n0 + L * (3*n0 - 1): base block plus one affine Toeplitz hash per level.
  unsigned seed_len() const;
  void validate() const;
};

/// Bit i of the generator output, computed by descending the recursion
/// G_{t+1}(x, h_1..h_{t+1}) = G_t(x, h_1..h_t) o G_t(h_{t+1}(x), h_1..h_t)
/// without materializing anything.
int nisan_bit(const BitString& seed, uint64_t i, const NisanParams& p);

/// The full recursion, materialized; oracle route for the per-bit evaluator.
BitString nisan_materialize(const BitString& seed, const NisanParams& p);

/// First out_len bits as a string.
BitString nisan_stream(const BitString& seed, const NisanParams& p);

/// Exact TVD between P(v0; x, NisGen(U_seed)) and P(v0; x, U_m), enumerating
/// every seed. The program must be R-OW with m <= out_len.
Rational nisan_fooling_tvd(const bp::Program& p, bp::VertexId v0, const BitString& x,
                           const NisanParams& np, uint64_t seed_cap = (1ull << 26));

// ---------------------------------------------------------------------------

struct NzParams {
  unsigned source_len = 32;  // bits of the seed reserved as extraction source
  unsigned seed_block = 16;  // seed bits consumed per extraction
  unsigned out_block = 8;    // bits produced per extraction
  int k = 16;                // entropy claimed of the source block
  double eps = 1.0 / 16;

  unsigned blocks(uint64_t target_len) const;
  unsigned seed_len(uint64_t target_len) const;
  void validate() const;  // leftover-hash regime: out_block <= k - 2 log2(1/eps)
};

/// hash_extract(x0, y_1) o ... o hash_extract(x0, y_t), truncated.
BitString nz_generate(const BitString& seed, uint64_t target_len, const NzParams& params);

/// Exact TVD against the uniform law, enumerating every seed.
Rational nz_fooling_tvd(const bp::Program& p, bp::VertexId v0, const BitString& x,
                        const NzParams& params, uint64_t seed_cap = (1ull << 26));

}  // namespace derand::prg

#endif  // DERAND_PRG_HPP
