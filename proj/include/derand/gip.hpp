// Copyright 2026 the derand authors
// SPDX-License-Identifier: Apache-2.0
//
// Input-as-seed derandomization of sequential-input programs with random
// tape access: the generalized-inner-product coin generator R(x), the
// three-party protocol cost counter, and the one-way-to-random-access
// amplification that majority-votes expander-walk-seeded runs.

#ifndef DERAND_GIP_HPP
#define DERAND_GIP_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "derand/branching_program.hpp"
#include "derand/common.hpp"
#include "derand/prg.hpp"

namespace derand::gip {

struct GipLayout {
  int n = 0, m = 0;
  int n1 = 0, n2 = 0, n3 = 0;  // thirds; n_i = floor(n/3) + (1 if i <= n mod 3)
  int ell = 0;                 // floor(floor(n/3) / m)

  /// 0-based offset of block (third, j) in x; third in [1,3], j in [1,m].
  int block_start(int third, int j) const;
  /// Trailing bits of each third not covered by any block.
  int unused_bits(int third) const;

  static GipLayout derive(int n, int m);
};

/// Parity of coordinate-wise triple products.
int gip(const BitString& x, const BitString& y, const BitString& z);

/// R(x): the m GIP bits of the block table. Requires m <= n/3.
BitString generate_r(const BitString& x, int m);

/// compute_boolean(P, x, R(x)); consumes no random bits.
int derandomize_sr(const bp::Program& p, const BitString& x);

// ---------------------------------------------------------------------------

struct ProtocolCost {
  int handoffs = 0;
  int state_bits = 0;        // bits sent per handoff for the state
  int frame_bits = 2;        // fixed header per handoff
  int64_t total_bits = 0;    // handoffs * (state_bits + frame_bits)
  std::vector<int64_t> handoff_steps;  // walk step index of each handoff
};

/// Simulates the alternating two-outer-party execution of P on (x, y) and
/// counts handoffs: the simulating party yields whenever the walk reads from
/// the third it cannot see.
ProtocolCost protocol_cost(const bp::Program& p, const GipLayout& layout, const BitString& x,
                           const BitString& y);

// ---------------------------------------------------------------------------

struct AmplifyOptions {
  double delta = 0.05;
  std::optional<int> r_override;  // default: smallest odd integer >= 8 ln(1/delta)
  prg::NisanParams prg{0, 0, 0.0, 0};
  uint64_t size_cap = 1u << 20;
};

struct AmplifyResult {
  bp::Program program;
  int r = 0;
  unsigned walk_s = 0;       // expander vertex bits = inner generator seed bits
  unsigned label_bits = 0;
  unsigned m_bits = 0;       // coin length of the product program
  uint64_t predicted_size = 0;  // closed-form vertex count; equals size exactly
};

/// Builds the explicit product program: coins encode an expander-walk start
/// vertex plus edge labels; each walk vertex seeds the generator for one run
/// of P; the output is the majority over r runs. Requires a layered program
/// with a per-depth input index (what the generator produces).
AmplifyResult amplify_sow_to_sr(const bp::Program& p, const AmplifyOptions& opt);

}  // namespace derand::gip

#endif  // DERAND_GIP_HPP
