// Copyright 2026 the derand authors
// SPDX-License-Identifier: Apache-2.0
//
// Exact and sampled vertex distributions, total variation distance, and the
// stochastic-matrix calculus used by the hybrid-argument experiments.

#ifndef DERAND_DISTRIBUTION_HPP
#define DERAND_DISTRIBUTION_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "derand/branching_program.hpp"
#include "derand/common.hpp"
#include "derand/rational.hpp"

namespace derand::dist {

/// Probability vector over the vertices of a program, canonical (ascending id)
/// order. Exact rational entries.
struct VertexDistribution {
  std::vector<bp::VertexId> ids;
  std::vector<Rational> prob;

  Rational total() const;
  const Rational& at(bp::VertexId id) const;
  std::string to_json() const;
};

/// Half the l1 distance. Requires identical index sets.
Rational tvd(const VertexDistribution& a, const VertexDistribution& b);

/// Exact law of eval(P, v0, x, Y) for Y uniform. R-OW programs use a dynamic
/// program over (vertex, current random bit) states; anything else enumerates
/// all 2^m tapes under the cap.
VertexDistribution exact_distribution(const bp::Program& p, bp::VertexId v0, const BitString& x,
                                      uint64_t enumeration_cap = (1ull << 22));

/// Empirical frequencies of a sampler; deterministic in master_seed. Trial t
/// runs the sampler with an independent stream derived from (master_seed, t).
VertexDistribution sampled_distribution(const std::function<bp::VertexId(BitStream&)>& sampler,
                                        uint64_t trials, uint64_t master_seed,
                                        const std::vector<bp::VertexId>& ids);

// ---------------------------------------------------------------------------

template <class S>
struct Matrix {
  std::size_t n = 0;
  std::vector<S> a;  // row-major

  Matrix() = default;
  explicit Matrix(std::size_t dim) : n(dim), a(dim * dim, S(0)) {}

  S& at(std::size_t r, std::size_t c) { return a[r * n + c]; }
  const S& at(std::size_t r, std::size_t c) const { return a[r * n + c]; }

  static Matrix identity(std::size_t dim) {
    Matrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m.at(i, i) = S(1);
    return m;
  }

  Matrix operator*(const Matrix& o) const {
    if (n != o.n) fail(errc::invalid_argument, "matrix dimension mismatch");
    Matrix r(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        const S& v = at(i, k);
        if (v == S(0)) continue;
        for (std::size_t j = 0; j < n; ++j) r.at(i, j) += v * o.at(k, j);
      }
    return r;
  }
};

template <class S>
Matrix<S> matrix_power(const Matrix<S>& m, unsigned r) {
  Matrix<S> acc = Matrix<S>::identity(m.n);
  for (unsigned i = 0; i < r; ++i) acc = acc * m;
  return acc;
}

inline double scalar_abs(double v) { return std::fabs(v); }
inline Rational scalar_abs(const Rational& v) { return v.abs(); }

/// max over rows of the row-wise total variation distance ("M ~gamma M'").
template <class S>
S matrix_closeness(const Matrix<S>& m, const Matrix<S>& o) {
  if (m.n != o.n) fail(errc::invalid_argument, "matrix dimension mismatch");
  S best(0);
  for (std::size_t i = 0; i < m.n; ++i) {
    S row(0);
    for (std::size_t j = 0; j < m.n; ++j) row += scalar_abs(m.at(i, j) - o.at(i, j));
    row = row * S(1) / S(2);
    if (best < row) best = row;
  }
  return best;
}

std::string matrix_to_json(const Matrix<Rational>& m);
std::string matrix_to_json(const Matrix<double>& m);

/// One-phase transition matrix by exact enumeration of the phase randomness:
/// M[u][v] = #{w in [space] : step(u, w) = v} / space, over canonical order.
Matrix<Rational> transition_matrix(const bp::Program& p,
                                   const std::function<bp::VertexId(bp::VertexId, uint64_t)>& step,
                                   uint64_t randomness_space, uint64_t enumeration_cap = (1ull << 22));

/// Exact absorption law of the chain started at `start`: states with
/// absorbing[i] set are absorbing. Fails with a divergence error when some
/// transient state cannot reach an absorbing one.
std::vector<Rational> absorbing_distribution(const Matrix<Rational>& m, std::size_t start,
                                             const std::vector<char>& absorbing);

}  // namespace derand::dist

#endif  // DERAND_DISTRIBUTION_HPP
