// Copyright 2026 the derand authors
// SPDX-License-Identifier: Apache-2.0
//
// The phased input-as-randomness simulation of R-OW branching programs, its
// hybrid variants (uniform PRG seed / true randomness / run-to-absorption),
// and the sequential-input variant with deterministic block selection.

#ifndef DERAND_SIMULATOR_HPP
#define DERAND_SIMULATOR_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "derand/branching_program.hpp"
#include "derand/common.hpp"
#include "derand/distribution.hpp"
#include "derand/extractors.hpp"
#include "derand/prg.hpp"

namespace derand::sim {

enum class Mode { A, H1, H2, H3, SOW, SOW_H1, SOW_H2 };

std::string to_string(Mode m);
Mode mode_from_string(const std::string& s);

struct SimulationConfig {
  int c = 1;       // mistake-rate exponent constant
  int64_t T = -1;  // declared length bound; -1 derives max(length(P), m)

  // PRG attached to the phased modes. space/out_len are filled from the
  // resolved parameters when left at 0; eps <= 0 selects the 1/4 default.
  prg::NisanParams prg{0, 0, 0.0, 0};

  // Extractor attached to mode A / SOW. When null, a hash extractor with the
  // default seed width is built against the resolved block size.
  std::shared_ptr<const ext::Extractor> extractor;
  unsigned default_extractor_seed_len = 16;
  double default_extractor_eps = 0.5;

  std::optional<int64_t> r_override;
  std::optional<int> block_size_override;      // overrides S^(c+1) (A) or h (SOW)
  std::optional<int64_t> threshold_override;   // overrides the direct-branch bound
  int h3_cap_multiplier = 64;

  uint64_t trials = 10000;
  uint64_t master_seed = 1;
};

struct ResolvedParams {
  int S = 0;
  int c = 1;
  int64_t T = 0;
  bool direct = false;
  int64_t threshold = 0;   // direct branch taken when block_size > threshold
  int block_size = 0;      // S^(c+1), h for the SOW variant, or the override
  int B = 0;
  std::vector<std::pair<int, int>> blocks;  // 1-based inclusive ranges
  int64_t r = 0;

  // Paper-formula values, reported regardless of the attached components.
  long double eps_formula = 0;
  long double eps_prime_formula = 0;
  long double k_formula = 0;

  // Attached components.
  prg::NisanParams prg;
  unsigned ext_seed_len = 0;
  unsigned ext_source_len = 0;

  int sow_h = 0;
  std::vector<std::vector<char>> sow_restricted;  // per block b: mask over [0..n], 1 = in I'_b

  unsigned block_draw_bits = 0;  // ceil(log2 B), bits per block-draw attempt
};

ResolvedParams derive_parameters(const bp::Program& p, const SimulationConfig& cfg, Mode mode);

struct PhaseRecord {
  int block = 0;           // 1-based block index
  unsigned seed_bits = 0;  // stream bits consumed by this phase
  int64_t steps = 0;
  enum class Halt { restricted_read, true_terminal, exhausted } reason = Halt::exhausted;
};

struct SimResult {
  bp::VertexId vertex = 0;
  std::vector<PhaseRecord> phases;
  uint64_t bits_consumed = 0;
  bool direct_branch = false;
};

/// One run of the requested mode, drawing randomness from `stream`.
SimResult simulate(const bp::Program& p, bp::VertexId v0, const BitString& x, const SimulationConfig& cfg,
                   Mode mode, BitStream& stream);

/// Monte-Carlo law over `trials` independent streams derived from master_seed.
dist::VertexDistribution sampled_law(const bp::Program& p, bp::VertexId v0, const BitString& x,
                                     const SimulationConfig& cfg, Mode mode);

// ---------------------------------------------------------------------------
// Exact analysis (enumeration; desk-scale instances only)

/// Halting law of one restricted phase started at u with fresh randomness:
/// the dynamic program over (vertex, pending bit) states. `allowed` is a mask
/// over input indices 0..n (1-based), 1 = readable.
std::vector<Rational> restricted_phase_law(const bp::Program& p, std::size_t u_index, const BitString& x,
                                           const std::vector<char>& allowed);

/// Exact one-phase transition matrix of the given mode at fixed x.
dist::Matrix<Rational> phase_matrix(const bp::Program& p, const BitString& x, const SimulationConfig& cfg,
                                    Mode mode, uint64_t enumeration_cap = (1ull << 26));

/// Exact output law of the given mode at fixed x: r phase applications, or an
/// absorbing solve for the run-to-termination variant. Direct-branch
/// resolutions return exact_distribution.
dist::VertexDistribution exact_mode_law(const bp::Program& p, bp::VertexId v0, const BitString& x,
                                        const SimulationConfig& cfg, Mode mode,
                                        uint64_t enumeration_cap = (1ull << 26));

}  // namespace derand::sim

#endif  // DERAND_SIMULATOR_HPP
