// Copyright 2026 the derand authors
// SPDX-License-Identifier: Apache-2.0

#include "derand/distribution.hpp"

#include "doctest.h"

using namespace derand;
using namespace derand::bp;
using namespace derand::dist;

namespace {

Program coin_program() {
  Vertex v0{0, false, 1, 1, {1, 2, 1, 2}, -1};
  Vertex t0{1, true, 0, 0, {}, 0};
  Vertex t1{2, true, 0, 0, {}, 1};
  return Program::build(1, 1, {v0, t0, t1}, 0, std::nullopt);
}

// Brute-force oracle: enumerate every random tape.
VertexDistribution enumerate_law(const Program& p, VertexId v0, const BitString& x) {
  std::vector<uint64_t> counts(p.size(), 0);
  const int m = p.m();
  for (uint64_t yv = 0; yv < (1ull << m); ++yv)
    counts[p.index_of(eval(p, v0, x, BitString::from_uint(yv, m)))]++;
  VertexDistribution d;
  for (const auto& v : p.vertices()) d.ids.push_back(v.id);
  for (uint64_t c : counts) d.prob.push_back(Rational(BigInt::from_uint64(c), BigInt::pow2(m)));
  return d;
}

Matrix<Rational> random_stochastic_rational(SplitMix64& gen, std::size_t dim) {
  Matrix<Rational> m(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    int64_t total = 16;
    for (std::size_t j = 0; j + 1 < dim; ++j) {
      int64_t take = static_cast<int64_t>(gen.below(static_cast<uint64_t>(total + 1)));
      m.at(i, j) = Rational(take, 16);
      total -= take;
    }
    m.at(i, dim - 1) = Rational(total, 16);
  }
  return m;
}

Matrix<double> to_double(const Matrix<Rational>& m) {
  Matrix<double> d(m.n);
  for (std::size_t i = 0; i < m.n * m.n; ++i) d.a[i] = m.a[i].to_double();
  return d;
}

}  // namespace

TEST_CASE("exact_distribution: terminal start is a point mass") {
  Program p = Program::build(1, 1, {Vertex{3, true, 0, 0, {}, 0}});
  auto d = exact_distribution(p, 3, BitString::from_string("0"));
  CHECK(d.at(3) == Rational(1));
  CHECK(d.total() == Rational(1));
}

TEST_CASE("exact_distribution: a fair coin splits evenly") {
  Program p = coin_program();
  auto d = exact_distribution(p, 0, BitString::from_string("0"));
  CHECK(d.at(1) == Rational(1) / Rational(2));
  CHECK(d.at(2) == Rational(1) / Rational(2));
  CHECK(d.at(0) == Rational(0));
}

TEST_CASE("exact_distribution: dynamic program equals enumeration on R-OW programs") {
  SplitMix64 gen(31);
  for (int rep = 0; rep < 40; ++rep) {
    RandomProgramSpec spec;
    spec.n = 4;
    spec.m = 3 + static_cast<int>(gen.below(4));
    spec.width = 2 + static_cast<int>(gen.below(3));
    spec.depth = 4 + static_cast<int>(gen.below(4));
    spec.discipline = Discipline::R_OW;
    Program p = random_program(spec, gen.next());
    REQUIRE(validate_discipline(p, Discipline::R_OW));
    BitString x = BitString::from_uint(gen.below(1ull << spec.n), spec.n);
    auto dp = exact_distribution(p, 0, x);
    auto brute = enumerate_law(p, 0, x);
    CHECK(dp.ids == brute.ids);
    for (std::size_t i = 0; i < dp.prob.size(); ++i) CHECK(dp.prob[i] == brute.prob[i]);
    CHECK(dp.total() == Rational(1));
  }
}

TEST_CASE("exact_distribution enumerates non-R-OW programs under the cap") {
  // j decreasing: not R-OW, still well-defined
  Vertex a{0, false, 1, 2, {1, 1, 2, 2}, -1};
  Vertex b{1, false, 1, 1, {3, 4, 3, 4}, -1};
  Vertex c{2, false, 1, 1, {4, 3, 4, 3}, -1};
  Vertex t0{3, true, 0, 0, {}, 0};
  Vertex t1{4, true, 0, 0, {}, 1};
  Program p = Program::build(1, 2, {a, b, c, t0, t1}, 0, std::nullopt);
  REQUIRE_FALSE(validate_discipline(p, Discipline::R_OW));
  auto d = exact_distribution(p, 0, BitString::from_string("1"));
  auto brute = enumerate_law(p, 0, BitString::from_string("1"));
  for (std::size_t i = 0; i < d.prob.size(); ++i) CHECK(d.prob[i] == brute.prob[i]);
  CHECK_THROWS_AS(exact_distribution(p, 0, BitString::from_string("1"), 2), error);
}

TEST_CASE("sampled_distribution: point masses and determinism") {
  std::vector<VertexId> ids = {0, 1};
  auto constant = [](BitStream&) { return VertexId(1); };
  auto d = sampled_distribution(constant, 50, 7, ids);
  CHECK(d.at(1) == Rational(1));
  CHECK(d.at(0) == Rational(0));

  auto single = sampled_distribution([](BitStream& s) { return VertexId(s.next_bit()); }, 1, 3, ids);
  CHECK(single.total() == Rational(1));
  CHECK((single.at(0) == Rational(1) || single.at(1) == Rational(1)));

  // fair coin at 10^5 trials: within 0.01 of half with this frozen seed
  auto coin = sampled_distribution([](BitStream& s) { return VertexId(s.next_bit()); }, 100000, 99, ids);
  CHECK((coin.at(0) - Rational(1) / Rational(2)).abs() < Rational(1) / Rational(100));
  auto coin2 = sampled_distribution([](BitStream& s) { return VertexId(s.next_bit()); }, 100000, 99, ids);
  CHECK(coin.at(0) == coin2.at(0));  // deterministic in the master seed
}

TEST_CASE("tvd: metric properties") {
  auto mk = [](std::vector<int> weights) {
    VertexDistribution d;
    int total = 0;
    for (int w : weights) total += w;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      d.ids.push_back(static_cast<VertexId>(i));
      d.prob.push_back(Rational(weights[i], total));
    }
    return d;
  };
  auto pa = mk({1, 0, 0}), pb = mk({0, 1, 0}), pu = mk({1, 1, 0});
  CHECK(tvd(pa, pa) == Rational(0));
  CHECK(tvd(pa, pb) == Rational(1));
  CHECK(tvd(pu, pa) == Rational(1) / Rational(2));

  SplitMix64 gen(13);
  for (int rep = 0; rep < 200; ++rep) {
    auto rnd = [&] {
      std::vector<int> w(4);
      for (auto& v : w) v = static_cast<int>(gen.below(8));
      w[0] += 1;
      return mk(w);
    };
    auto x = rnd(), y = rnd(), z = rnd();
    CHECK(tvd(x, y) == tvd(y, x));
    CHECK(tvd(x, z) <= tvd(x, y) + tvd(y, z));
    CHECK((tvd(x, y) == Rational(0)) == (x.prob == y.prob));
  }
}

TEST_CASE("transition_matrix: identity step and stochasticity") {
  Program p = coin_program();
  auto ident = transition_matrix(p, [](VertexId v, uint64_t) { return v; }, 4);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(ident.at(i, j) == Rational(i == j ? 1 : 0));

  SplitMix64 gen(41);
  RandomProgramSpec spec;
  spec.n = 3;
  spec.m = 3;
  Program q = random_program(spec, gen.next());
  BitString x = BitString::from_string("101");
  auto step = [&](VertexId v, uint64_t w) {
    return eval(q, v, x, BitString::from_uint(w, 3));
  };
  auto m = transition_matrix(q, step, 8);
  for (std::size_t i = 0; i < m.n; ++i) {
    Rational row(0);
    for (std::size_t j = 0; j < m.n; ++j) row += m.at(i, j);
    CHECK(row == Rational(1));
  }
  // direct enumeration oracle for one row
  std::vector<uint64_t> counts(q.size(), 0);
  for (uint64_t w = 0; w < 8; ++w) counts[q.index_of(step(q.vertices()[0].id, w))]++;
  for (std::size_t j = 0; j < q.size(); ++j)
    CHECK(m.at(0, j) == Rational(BigInt::from_uint64(counts[j]), BigInt(8)));
}

TEST_CASE("matrix_power and closeness basics") {
  auto ident = Matrix<Rational>::identity(4);
  auto p5 = matrix_power(ident, 5);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(p5.at(i, j) == ident.at(i, j));
  CHECK(matrix_closeness(ident, ident) == Rational(0));
}

TEST_CASE("closeness contraction: closeness(M^r, N^r) <= r * closeness(M, N)") {
  SplitMix64 gen(59);
  for (int rep = 0; rep < 100; ++rep) {
    std::size_t dim = 2 + gen.below(3);
    auto m = random_stochastic_rational(gen, dim);
    auto nmat = random_stochastic_rational(gen, dim);
    Rational gamma = matrix_closeness(m, nmat);
    for (unsigned r = 1; r <= 4; ++r) {
      Rational lhs = matrix_closeness(matrix_power(m, r), matrix_power(nmat, r));
      CHECK(lhs <= Rational(static_cast<int64_t>(r)) * gamma);
    }
  }
  // double variant with slack
  for (int rep = 0; rep < 100; ++rep) {
    std::size_t dim = 2 + gen.below(7);
    auto m = to_double(random_stochastic_rational(gen, dim));
    auto nmat = to_double(random_stochastic_rational(gen, dim));
    double gamma = matrix_closeness(m, nmat);
    for (unsigned r = 1; r <= 8; ++r)
      CHECK(matrix_closeness(matrix_power(m, r), matrix_power(nmat, r)) <= r * gamma + 1e-9);
  }
}

TEST_CASE("absorbing_distribution: direct cases") {
  // start already absorbing
  Matrix<Rational> m(2);
  m.at(0, 0) = Rational(1);
  m.at(1, 1) = Rational(1);
  auto d = absorbing_distribution(m, 0, {1, 1});
  CHECK(d[0] == Rational(1));

  // one transient vertex splitting 1/3, 2/3
  Matrix<Rational> t(3);
  t.at(0, 1) = Rational(1) / Rational(3);
  t.at(0, 2) = Rational(2) / Rational(3);
  t.at(1, 1) = Rational(1);
  t.at(2, 2) = Rational(1);
  auto law = absorbing_distribution(t, 0, {0, 1, 1});
  CHECK(law[1] == Rational(1) / Rational(3));
  CHECK(law[2] == Rational(2) / Rational(3));
}

TEST_CASE("absorbing_distribution: loop chain matches a Monte-Carlo oracle") {
  // states: 0 transient with self-loop 1/2, to 1 w.p. 1/4, to 2 w.p. 1/4
  Matrix<Rational> m(3);
  m.at(0, 0) = Rational(1) / Rational(2);
  m.at(0, 1) = Rational(1) / Rational(4);
  m.at(0, 2) = Rational(1) / Rational(4);
  m.at(1, 1) = Rational(1);
  m.at(2, 2) = Rational(1);
  auto law = absorbing_distribution(m, 0, {0, 1, 1});
  CHECK(law[1] == Rational(1) / Rational(2));

  SplitMix64 gen(77);
  uint64_t hits = 0;
  const uint64_t trials = 1000000;
  for (uint64_t t = 0; t < trials; ++t) {
    int state = 0;
    while (state == 0) {
      uint64_t roll = gen.below(4);
      if (roll >= 2)
        state = 0;
      else
        state = roll == 0 ? 1 : 2;
    }
    if (state == 1) ++hits;
  }
  double mc = static_cast<double>(hits) / static_cast<double>(trials);
  CHECK(std::abs(mc - law[1].to_double()) < 0.005);
}

TEST_CASE("absorbing_distribution equals the unrolled law on DAG chains") {
  // Single-step chain of a fresh-randomness program: absorption law from the
  // start equals the exact walk distribution.
  SplitMix64 gen(83);
  for (int rep = 0; rep < 10; ++rep) {
    RandomProgramSpec spec;
    spec.n = 3;
    spec.m = 6;
    spec.width = 3;
    spec.depth = 4;
    spec.discipline = Discipline::R_OW;
    spec.fresh_randomness = true;
    Program p = random_program(spec, gen.next());
    BitString x = BitString::from_uint(gen.below(8), 3);
    Matrix<Rational> step(p.size());
    std::vector<char> absorbing(p.size(), 0);
    for (std::size_t u = 0; u < p.size(); ++u) {
      const Vertex& v = p.vertices()[u];
      if (v.terminal) {
        step.at(u, u) = Rational(1);
        absorbing[u] = 1;
        continue;
      }
      int xb = x[static_cast<std::size_t>(v.i - 1)];
      for (int yb = 0; yb < 2; ++yb)
        step.at(u, p.index_of(v.edges[static_cast<std::size_t>(2 * xb + yb)])) += Rational(1, 2);
    }
    auto law = absorbing_distribution(step, 0, absorbing);
    auto direct = exact_distribution(p, 0, x);
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(law[i] == direct.prob[i]);
  }
}

TEST_CASE("absorbing_distribution rejects non-absorbing chains") {
  Matrix<Rational> m(2);
  m.at(0, 0) = Rational(1);
  m.at(1, 1) = Rational(1);
  CHECK_THROWS_AS(absorbing_distribution(m, 0, {0, 1}), error);
}

TEST_CASE("distribution and matrix JSON forms") {
  Program p = coin_program();
  auto d = exact_distribution(p, 0, BitString::from_string("1"));
  CHECK(d.to_json() == R"({"0":"0","1":"1/2","2":"1/2"})");
  Matrix<Rational> m(1);
  m.at(0, 0) = Rational(1);
  CHECK(matrix_to_json(m) == R"([["1"]])");
}
