// Copyright 2026 the derand authors
// SPDX-License-Identifier: Apache-2.0

#include "derand/prg.hpp"

#include "derand/extractors.hpp"
#include "doctest.h"

using namespace derand;
using namespace derand::prg;

TEST_CASE("nisan: zero recursion levels make the generator the identity on its base block") {
  NisanParams np;
  np.space = 4;
  np.out_len = 8;
  np.eps = 0.25;
  np.block_override = 8;
  CHECK(np.levels() == 0);
  CHECK(np.seed_len() == 8);
  BitString seed = BitString::from_string("10110010");
  for (uint64_t i = 0; i < 8; ++i) CHECK(nisan_bit(seed, i, np) == seed[i]);
}

TEST_CASE("nisan: all-zero seed gives the all-zero stream") {
  NisanParams np;
  np.space = 4;
  np.out_len = 16;
  np.eps = 0.25;
  REQUIRE(np.block_len() == 8);
  REQUIRE(np.levels() == 1);
  BitString zero(np.seed_len());
  BitString out = nisan_stream(zero, np);
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == 0);
}

TEST_CASE("nisan: per-bit evaluation equals the materialized recursion at (S=4, T=16)") {
  NisanParams np;
  np.space = 4;
  np.out_len = 16;
  np.eps = 0.25;
  SplitMix64 gen(71);
  for (int rep = 0; rep < 200; ++rep) {
    BitString seed;
    for (unsigned i = 0; i < np.seed_len(); ++i) seed.push_back(static_cast<int>(gen.below(2)));
    BitString full = nisan_materialize(seed, np);
    for (uint64_t i = 0; i < np.out_len; ++i) CHECK(nisan_bit(seed, i, np) == full[i]);
  }
  // deeper recursion (3 levels) as well
  NisanParams deep;
  deep.space = 4;
  deep.out_len = 16;
  deep.eps = 0.25;
  deep.block_override = 2;
  REQUIRE(deep.levels() == 3);
  for (int rep = 0; rep < 200; ++rep) {
    BitString seed;
    for (unsigned i = 0; i < deep.seed_len(); ++i) seed.push_back(static_cast<int>(gen.below(2)));
    BitString full = nisan_materialize(seed, deep);
    for (uint64_t i = 0; i < deep.out_len; ++i) CHECK(nisan_bit(seed, i, deep) == full[i]);
  }
}

TEST_CASE("nisan: parameter validation") {
  NisanParams np;
  np.space = 2;
  np.out_len = 16;  // T > 2^S
  np.eps = 0.25;
  CHECK_THROWS_AS(np.validate(), error);
  NisanParams ok;
  ok.space = 4;
  ok.out_len = 16;
  ok.eps = 0.25;
  CHECK_THROWS_AS(nisan_bit(BitString(3), 0, ok), error);   // wrong seed length
  BitString seed(ok.seed_len());
  CHECK_THROWS_AS(nisan_bit(seed, 16, ok), error);          // index out of range
}

TEST_CASE("nisan fooling: programs that ignore randomness have TVD zero") {
  // reads y1 but both branches converge
  bp::Vertex v0{0, false, 1, 1, {1, 1, 2, 2}, -1};
  bp::Vertex t0{1, true, 0, 0, {}, 0};
  bp::Vertex t1{2, true, 0, 0, {}, 1};
  bp::Program p = bp::Program::build(1, 1, {v0, t0, t1}, 0, std::nullopt);
  NisanParams np;
  np.space = 2;
  np.out_len = 4;
  np.eps = 0.25;
  np.block_override = 2;
  CHECK(nisan_fooling_tvd(p, 0, BitString::from_string("1"), np) == Rational(0));
}

TEST_CASE("nisan fooling: the first output bit is uniform over seeds") {
  // program outputs y1 directly
  bp::Vertex v0{0, false, 1, 1, {1, 2, 1, 2}, -1};
  bp::Vertex t0{1, true, 0, 0, {}, 0};
  bp::Vertex t1{2, true, 0, 0, {}, 1};
  bp::Program p = bp::Program::build(1, 1, {v0, t0, t1}, 0, std::nullopt);
  NisanParams np;
  np.space = 2;
  np.out_len = 4;
  np.eps = 0.25;
  np.block_override = 2;
  CHECK(nisan_fooling_tvd(p, 0, BitString::from_string("0"), np) == Rational(0));
}

TEST_CASE("nisan fooling: frozen width-4/length-8 family stays within eps") {
  NisanParams np;
  np.space = 4;
  np.out_len = 8;
  np.eps = 0.25;
  np.block_override = 4;
  REQUIRE(np.seed_len() == 15);
  double worst = 0;
  for (int i = 0; i < 5; ++i) {
    bp::RandomProgramSpec spec;
    spec.n = 6;
    spec.m = 8;
    spec.width = 4;
    spec.depth = 8;
    spec.discipline = bp::Discipline::R_OW;
    spec.fresh_randomness = true;
    bp::Program p = bp::random_program(spec, 100 + static_cast<uint64_t>(i));
    Rational tv = nisan_fooling_tvd(p, *p.start(), BitString::from_uint(static_cast<uint64_t>(i), 6), np);
    worst = std::max(worst, tv.to_double());
    CHECK(tv.to_double() <= np.eps);
  }
  // one level of affine hashing is exact on fresh-read programs: the offset
  // bits make every block uniform (frozen measurement)
  CHECK(worst == 0.0);
}

TEST_CASE("nisan fooling: three-level recursion measured against eps (frozen)") {
  NisanParams np;
  np.space = 4;
  np.out_len = 16;
  np.eps = 0.25;
  np.block_override = 2;
  bp::RandomProgramSpec spec;
  spec.n = 6;
  spec.m = 16;
  spec.width = 4;
  spec.depth = 16;
  spec.discipline = bp::Discipline::R_OW;
  spec.fresh_randomness = true;
  bp::Program p = bp::random_program(spec, 303);
  Rational tv = nisan_fooling_tvd(p, *p.start(), BitString::from_uint(39 % 64, 6), np);
  CHECK(tv.to_double() <= np.eps);
  CHECK(tv.to_double() == doctest::Approx(0.010254).epsilon(1e-3));
}

// ---------------------------------------------------------------------------

TEST_CASE("nz: one block is a single extractor call") {
  NzParams nz;
  nz.source_len = 8;
  nz.seed_block = 4;
  nz.out_block = 2;
  nz.k = 4;
  nz.eps = 0.5;
  BitString seed = BitString::from_uint(0xF3A, 12);
  BitString out = nz_generate(seed, 2, nz);
  ext::HashExtractor hx(8, 4, 2, 4, 0.5);
  CHECK(out == hx.extract(seed.slice(0, 8), seed.slice(8, 4)));
}

TEST_CASE("nz: frozen determinism vector") {
  NzParams nz;
  nz.source_len = 8;
  nz.seed_block = 4;
  nz.out_block = 2;
  nz.k = 4;
  nz.eps = 0.5;
  REQUIRE(nz.seed_len(8) == 24);
  BitString seed = BitString::from_uint(0x123456, 24);
  CHECK(nz_generate(seed, 8, nz).to_string() == "10101000");
  CHECK(nz_generate(seed, 8, nz) == nz_generate(seed, 8, nz));
}

TEST_CASE("nz: regime violations are configuration errors") {
  NzParams bad;
  bad.source_len = 8;
  bad.seed_block = 4;
  bad.out_block = 6;
  bad.k = 4;
  bad.eps = 0.5;  // 6 > 4 - 2
  CHECK_THROWS_AS(bad.validate(), error);
  NzParams too_entropic;
  too_entropic.source_len = 4;
  too_entropic.k = 8;
  too_entropic.out_block = 2;
  too_entropic.seed_block = 4;
  too_entropic.eps = 0.5;
  CHECK_THROWS_AS(too_entropic.validate(), error);
}

TEST_CASE("nz fooling: frozen desk family stays within the configured error") {
  NzParams nz;
  nz.source_len = 8;
  nz.seed_block = 4;
  nz.out_block = 2;
  nz.k = 4;
  nz.eps = 0.5;
  bp::RandomProgramSpec spec;
  spec.n = 6;
  spec.m = 8;
  spec.width = 4;
  spec.depth = 8;
  spec.discipline = bp::Discipline::R_OW;
  spec.fresh_randomness = true;
  bp::Program p = bp::random_program(spec, 200);
  Rational tv = nz_fooling_tvd(p, *p.start(), BitString::from_uint(21, 6), nz);
  CHECK(tv.to_double() <= 0.25);  // configured eps' for the desk family
  CHECK(tv.to_double() == doctest::Approx(0.0458984).epsilon(1e-3));  // frozen
}
