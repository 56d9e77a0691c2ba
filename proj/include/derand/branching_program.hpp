// Copyright 2026 the derand authors
// SPDX-License-Identifier: Apache-2.0
//
// Randomized branching programs: DAGs whose nonterminal vertices read one
// input bit x_i and one random bit y_j and branch four ways on the pair.

#ifndef DERAND_BRANCHING_PROGRAM_HPP
#define DERAND_BRANCHING_PROGRAM_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "derand/common.hpp"
#include "derand/rational.hpp"

namespace derand::bp {

using VertexId = uint32_t;

/// Input/random-tape access disciplines. R = random access, S = sequential
/// (head moves at most one position per step), OW = one-way tape.
enum class Discipline { R_OW, S_OW, S_R, Unrestricted };

std::string to_string(Discipline d);
Discipline discipline_from_string(const std::string& s);

struct Vertex {
  VertexId id = 0;
  bool terminal = true;
  int i = 0;  // input index in [1..n], nonterminal only
  int j = 0;  // random index in [1..m], nonterminal only
  std::array<VertexId, 4> edges{};  // label (x_bit, y_bit) -> 2*x_bit + y_bit
  int out = -1;                     // terminal output bit, -1 when unlabeled
};

/// Immutable after construction; all operations are pure.
class Program {
 public:
  /// Validates: unique ids, edges resolve, indices in range, graph acyclic.
  static Program build(int n, int m, std::vector<Vertex> vertices,
                       std::optional<VertexId> start = std::nullopt,
                       std::optional<VertexId> accept = std::nullopt);

  int n() const { return n_; }
  int m() const { return m_; }
  std::size_t size() const { return verts_.size(); }
  const std::vector<Vertex>& vertices() const { return verts_; }
  std::optional<VertexId> start() const { return start_; }
  std::optional<VertexId> accept() const { return accept_; }

  bool has_vertex(VertexId id) const;
  const Vertex& vertex(VertexId id) const;
  std::size_t index_of(VertexId id) const;  // position in canonical (sorted) order
  const Vertex& vertex_at(std::size_t index) const { return verts_[index]; }

  /// Vertex indices in topological order (edges point forward).
  const std::vector<std::size_t>& topo_order() const { return topo_; }

  /// Longest path length in the DAG.
  int length() const;
  /// Def-4.4 queries measure: max over nonterminal paths of 1 + #{i changes}.
  int queries() const;

 private:
  int n_ = 0, m_ = 0;
  std::vector<Vertex> verts_;  // sorted by id
  std::optional<VertexId> start_, accept_;
  std::vector<std::size_t> topo_;
  mutable int length_cache_ = -1;
  mutable int queries_cache_ = -1;
};

// ---------------------------------------------------------------------------
// Operations

/// The terminal (or edge-less) vertex reached from v on input x, randomness y.
VertexId eval(const Program& p, VertexId v, const BitString& x, const BitString& y);

/// P restricted to I: every vertex reading outside I loses its out-edges.
/// Indices in I are 1-based.
Program restrict(const Program& p, const std::vector<int>& allowed_indices);

bool validate_discipline(const Program& p, Discipline d);

/// Output bit of eval from the start vertex; requires start and labels.
int compute_boolean(const Program& p, const BitString& x, const BitString& y);

/// max_x Pr_y[P(x, y) != f(x)], exact by enumeration over all (x, y).
/// truth: bit with index sum_i x_i 2^(n-i) (x read as a binary numeral).
Rational failure_probability(const Program& p, const BitString& truth, uint64_t eval_cap = (1ull << 22));

// Serialization (BP text format v1; JSON mirror accepted on parse).
Program parse_bp(const std::string& text);
std::string serialize_bp(const Program& p);
std::string bp_to_json(const Program& p);

// ---------------------------------------------------------------------------
// Test-instance generation

struct RandomProgramSpec {
  int n = 4;
  int m = 4;
  int width = 4;
  int depth = 4;
  Discipline discipline = Discipline::Unrestricted;
  int terminals = 2;
  bool labeled = true;
  /// When set, every layer reads a fresh random index (j = layer); walks then
  /// consume independent bits step by step. Requires depth <= m.
  bool fresh_randomness = false;
  uint64_t vertex_cap = 1u << 20;
};

/// Layered program satisfying the requested discipline; deterministic in seed.
Program random_program(const RandomProgramSpec& spec, uint64_t seed);

}  // namespace derand::bp

#endif  // DERAND_BRANCHING_PROGRAM_HPP
