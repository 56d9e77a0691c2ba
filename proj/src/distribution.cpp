// Copyright 2026 the derand authors
// SPDX-License-Identifier: Apache-2.0

#include "derand/distribution.hpp"

#include <algorithm>
#include <map>

#include "json.hpp"

namespace derand::dist {

Rational VertexDistribution::total() const {
  Rational t(0);
  for (const Rational& r : prob) t += r;
  return t;
}

const Rational& VertexDistribution::at(bp::VertexId id) const {
  auto it = std::lower_bound(ids.begin(), ids.end(), id);
  if (it == ids.end() || *it != id) fail(errc::invalid_argument, "no such vertex in distribution");
  return prob[static_cast<std::size_t>(it - ids.begin())];
}

std::string VertexDistribution::to_json() const {
  nlohmann::ordered_json j;
  for (std::size_t i = 0; i < ids.size(); ++i) j[std::to_string(ids[i])] = prob[i].to_string();
  return j.dump();
}

Rational tvd(const VertexDistribution& a, const VertexDistribution& b) {
  if (a.ids != b.ids) fail(errc::invalid_argument, "tvd: distributions over different index sets");
  Rational sum(0);
  for (std::size_t i = 0; i < a.prob.size(); ++i) sum += (a.prob[i] - b.prob[i]).abs();
  return sum / Rational(2);
}

// ---------------------------------------------------------------------------

namespace {

std::vector<bp::VertexId> canonical_ids(const bp::Program& p) {
  std::vector<bp::VertexId> ids;
  ids.reserve(p.size());
  for (const auto& v : p.vertices()) ids.push_back(v.id);
  return ids;
}

// Exact law for R-OW programs. State = (vertex, value of the bit y_{j(v)} it
// is about to read); a step to a vertex with the same j keeps the bit, a step
// that advances j draws a fresh fair bit.
VertexDistribution exact_distribution_rw(const bp::Program& p, bp::VertexId v0, const BitString& x) {
  const std::size_t V = p.size();
  std::vector<Rational> absorbed(V, Rational(0));
  std::vector<Rational> mass(2 * V, Rational(0));
  const Rational half(BigInt(1), BigInt(2));

  std::size_t start = p.index_of(v0);
  if (p.vertex_at(start).terminal) {
    absorbed[start] = Rational(1);
  } else {
    mass[2 * start] = half;
    mass[2 * start + 1] = half;
  }

  for (std::size_t idx : p.topo_order()) {
    const bp::Vertex& v = p.vertex_at(idx);
    if (v.terminal) continue;
    for (int b = 0; b < 2; ++b) {
      Rational m = mass[2 * idx + b];
      if (m.is_zero()) continue;
      mass[2 * idx + b] = Rational(0);
      int label = 2 * x[v.i - 1] + b;
      std::size_t t = p.index_of(v.edges[label]);
      const bp::Vertex& w = p.vertex_at(t);
      if (w.terminal) {
        absorbed[t] += m;
      } else if (w.j == v.j) {
        mass[2 * t + b] += m;
      } else {
        Rational h = m * half;
        mass[2 * t] += h;
        mass[2 * t + 1] += h;
      }
    }
  }
  return VertexDistribution{canonical_ids(p), std::move(absorbed)};
}

}  // namespace

VertexDistribution exact_distribution(const bp::Program& p, bp::VertexId v0, const BitString& x,
                                      uint64_t enumeration_cap) {
  if (static_cast<int>(x.size()) != p.n()) fail(errc::invalid_argument, "input length mismatch");
  p.index_of(v0);  // existence check
  if (bp::validate_discipline(p, bp::Discipline::R_OW)) return exact_distribution_rw(p, v0, x);

  const int m = p.m();
  if (m >= 63 || (1ull << m) > enumeration_cap)
    fail(errc::resource, "exact_distribution: 2^m exceeds enumeration cap and program is not R-OW");
  std::vector<uint64_t> counts(p.size(), 0);
  for (uint64_t yi = 0; yi < (1ull << m); ++yi) {
    BitString y = BitString::from_uint(yi, m);
    counts[p.index_of(bp::eval(p, v0, x, y))]++;
  }
  std::vector<Rational> prob;
  prob.reserve(counts.size());
  for (uint64_t c : counts) prob.push_back(Rational(BigInt::from_uint64(c), BigInt::pow2(static_cast<unsigned>(m))));
  return VertexDistribution{canonical_ids(p), std::move(prob)};
}

VertexDistribution sampled_distribution(const std::function<bp::VertexId(BitStream&)>& sampler,
                                        uint64_t trials, uint64_t master_seed,
                                        const std::vector<bp::VertexId>& ids) {
  if (trials < 1) fail(errc::invalid_argument, "sampled_distribution: trials must be >= 1");
  std::map<bp::VertexId, uint64_t> counts;
  for (bp::VertexId id : ids) counts[id] = 0;
  for (uint64_t t = 0; t < trials; ++t) {
    SeededBitStream stream(trial_seed(master_seed, t));
    bp::VertexId out = sampler(stream);
    auto it = counts.find(out);
    if (it == counts.end()) fail(errc::invalid_argument, "sampler produced a vertex outside the index set");
    it->second++;
  }
  VertexDistribution d;
  for (const auto& [id, c] : counts) {
    d.ids.push_back(id);
    d.prob.push_back(Rational(BigInt::from_uint64(c), BigInt::from_uint64(trials)));
  }
  return d;
}

// ---------------------------------------------------------------------------

std::string matrix_to_json(const Matrix<Rational>& m) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < m.n; ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (std::size_t j = 0; j < m.n; ++j) row.push_back(m.at(i, j).to_string());
    rows.push_back(row);
  }
  return rows.dump();
}

std::string matrix_to_json(const Matrix<double>& m) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < m.n; ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (std::size_t j = 0; j < m.n; ++j) row.push_back(m.at(i, j));
    rows.push_back(row);
  }
  return rows.dump();
}

Matrix<Rational> transition_matrix(const bp::Program& p,
                                   const std::function<bp::VertexId(bp::VertexId, uint64_t)>& step,
                                   uint64_t randomness_space, uint64_t enumeration_cap) {
  if (randomness_space == 0) fail(errc::invalid_argument, "empty randomness space");
  const std::size_t V = p.size();
  if (randomness_space > enumeration_cap / std::max<std::size_t>(V, 1))
    fail(errc::resource, "transition_matrix: enumeration cap exceeded");
  Matrix<Rational> m(V);
  BigInt denom = BigInt::from_uint64(randomness_space);
  for (std::size_t u = 0; u < V; ++u) {
    std::vector<uint64_t> counts(V, 0);
    for (uint64_t w = 0; w < randomness_space; ++w) counts[p.index_of(step(p.vertex_at(u).id, w))]++;
    for (std::size_t v = 0; v < V; ++v)
      if (counts[v]) m.at(u, v) = Rational(BigInt::from_uint64(counts[v]), denom);
  }
  return m;
}

std::vector<Rational> absorbing_distribution(const Matrix<Rational>& m, std::size_t start,
                                             const std::vector<char>& absorbing) {
  const std::size_t N = m.n;
  if (absorbing.size() != N) fail(errc::invalid_argument, "absorbing mask size mismatch");
  if (start >= N) fail(errc::invalid_argument, "start index out of range");
  for (std::size_t i = 0; i < N; ++i) {
    Rational row(0);
    for (std::size_t j = 0; j < N; ++j) row += m.at(i, j);
    if (row != Rational(1)) fail(errc::invalid_argument, "matrix is not stochastic");
  }

  std::vector<Rational> out(N, Rational(0));
  if (absorbing[start]) {
    out[start] = Rational(1);
    return out;
  }

  // Reachability of the absorbing set from every transient state.
  {
    std::vector<char> reaches = absorbing;
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < N; ++i) {
        if (reaches[i]) continue;
        for (std::size_t j = 0; j < N; ++j) {
          if (reaches[j] && m.at(i, j).sign() > 0) {
            reaches[i] = 1;
            changed = true;
            break;
          }
        }
      }
    }
    for (std::size_t i = 0; i < N; ++i)
      if (!reaches[i] && !absorbing[i])
        fail(errc::divergence, "chain is not absorbing from state " + std::to_string(i));
  }

  std::vector<std::size_t> transient;
  std::vector<std::size_t> absorbers;
  for (std::size_t i = 0; i < N; ++i) (absorbing[i] ? absorbers : transient).push_back(i);
  const std::size_t T = transient.size(), A = absorbers.size();

  // Solve (I - Q) X = R by exact Gaussian elimination; X is T x A.
  std::vector<std::vector<Rational>> aug(T, std::vector<Rational>(T + A, Rational(0)));
  for (std::size_t r = 0; r < T; ++r) {
    for (std::size_t c = 0; c < T; ++c) {
      Rational v = -m.at(transient[r], transient[c]);
      if (r == c) v += Rational(1);
      aug[r][c] = v;
    }
    for (std::size_t c = 0; c < A; ++c) aug[r][T + c] = m.at(transient[r], absorbers[c]);
  }
  for (std::size_t col = 0; col < T; ++col) {
    std::size_t piv = col;
    while (piv < T && aug[piv][col].is_zero()) ++piv;
    if (piv == T) fail(errc::divergence, "singular absorption system");
    std::swap(aug[piv], aug[col]);
    Rational inv = Rational(1) / aug[col][col];
    for (std::size_t c = col; c < T + A; ++c) aug[col][c] *= inv;
    for (std::size_t r = 0; r < T; ++r) {
      if (r == col || aug[r][col].is_zero()) continue;
      Rational f = aug[r][col];
      for (std::size_t c = col; c < T + A; ++c) aug[r][c] -= f * aug[col][c];
    }
  }
  std::size_t srow = static_cast<std::size_t>(
      std::find(transient.begin(), transient.end(), start) - transient.begin());
  for (std::size_t c = 0; c < A; ++c) out[absorbers[c]] = aug[srow][T + c];
  return out;
}

}  // namespace derand::dist
