// Copyright 2026 the derand authors
// SPDX-License-Identifier: Apache-2.0

#include "derand/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace derand::sim {

std::string to_string(Mode m) {
  switch (m) {
    case Mode::A: return "A";
    case Mode::H1: return "H1";
    case Mode::H2: return "H2";
    case Mode::H3: return "H3";
    case Mode::SOW: return "SOW";
    case Mode::SOW_H1: return "SOW-H1";
    case Mode::SOW_H2: return "SOW-H2";
  }
  return "?";
}

Mode mode_from_string(const std::string& s) {
  if (s == "A") return Mode::A;
  if (s == "H1") return Mode::H1;
  if (s == "H2") return Mode::H2;
  if (s == "H3") return Mode::H3;
  if (s == "SOW") return Mode::SOW;
  if (s == "SOW-H1" || s == "SOWH1") return Mode::SOW_H1;
  if (s == "SOW-H2" || s == "SOWH2") return Mode::SOW_H2;
  fail(errc::invalid_argument, "unknown simulation mode: " + s);
}

namespace {

bool is_sow(Mode m) { return m == Mode::SOW || m == Mode::SOW_H1 || m == Mode::SOW_H2; }
bool needs_extractor(Mode m) { return m == Mode::A || m == Mode::SOW; }
bool needs_prg(Mode m) { return m == Mode::A || m == Mode::H1 || m == Mode::SOW || m == Mode::SOW_H1; }

int64_t int_pow(int64_t base, int exp) {
  int64_t v = 1;
  for (int i = 0; i < exp; ++i) {
    if (v > (int64_t(1) << 40)) return int64_t(1) << 40;  // saturate; only compared against n
    v *= base;
  }
  return v;
}

int64_t isqrt(int64_t n) {
  int64_t r = static_cast<int64_t>(std::sqrt(static_cast<double>(n)));
  while ((r + 1) * (r + 1) <= n) ++r;
  while (r * r > n) --r;
  return r;
}

}  // namespace

ResolvedParams derive_parameters(const bp::Program& p, const SimulationConfig& cfg, Mode mode) {
  ResolvedParams rp;
  rp.c = cfg.c;
  if (cfg.c < 1) fail(errc::config, "constant c must be >= 1");
  const int n = p.n();
  rp.S = std::max(ceil_log2(p.size()), ceil_log2(static_cast<uint64_t>(std::max(n, 1))));
  if (rp.S < 1) rp.S = 1;

  rp.T = cfg.T >= 0 ? cfg.T : std::max<int64_t>(p.length(), p.m());
  if (rp.T < p.length()) fail(errc::config, "declared T is below length(P)");
  if (rp.T < p.m()) fail(errc::config, "declared T is below the randomness length m");
  // T can be replaced by min(T, 2^S) without loss: no walk is longer.
  if (rp.S < 62 && rp.T > (int64_t(1) << rp.S) && (int64_t(1) << rp.S) >= std::max<int64_t>(p.length(), p.m()))
    rp.T = int64_t(1) << rp.S;

  const int64_t s_pow = int_pow(rp.S, rp.c + 1);

  if (!is_sow(mode)) {
    rp.block_size = cfg.block_size_override ? *cfg.block_size_override : static_cast<int>(std::min<int64_t>(s_pow, 1 << 30));
    rp.threshold = cfg.threshold_override ? *cfg.threshold_override : n / 9;
    rp.direct = !cfg.block_size_override && !cfg.r_override && s_pow > rp.threshold;
    if (rp.block_size < 1) fail(errc::config, "block size must be positive");
    if (!rp.direct) {
      rp.B = n / rp.block_size;
      if (rp.B < 1) fail(errc::config, "no block fits: block size exceeds n");
      for (int b = 0; b < rp.B; ++b) rp.blocks.push_back({b * rp.block_size + 1, (b + 1) * rp.block_size});
      if (cfg.r_override) {
        rp.r = *cfg.r_override;
      } else {
        if (rp.B <= 8) fail(errc::config, "phase formula needs B >= 9; supply an r override");
        rp.r = std::max<int64_t>(static_cast<int64_t>(ceil_div(8 * static_cast<uint64_t>(rp.T),
                                                               static_cast<uint64_t>(rp.B - 8))),
                                 8 * (static_cast<int64_t>(rp.c) * rp.S + 1));
      }
      if (rp.r < 1) fail(errc::config, "phase count must be >= 1");
    }
  } else {
    rp.threshold = cfg.threshold_override ? *cfg.threshold_override : isqrt(n);
    rp.direct = !cfg.block_size_override && !cfg.r_override && s_pow > rp.threshold;
    if (!rp.direct) {
      rp.sow_h = cfg.block_size_override ? *cfg.block_size_override
                                         : static_cast<int>(n / (3 * std::min<int64_t>(s_pow, n)));
      if (rp.sow_h < 1) fail(errc::config, "sequential block size h must be >= 1; supply an override");
      rp.block_size = rp.sow_h;
      rp.B = static_cast<int>(ceil_div(static_cast<uint64_t>(n), static_cast<uint64_t>(rp.sow_h)));
      for (int b = 0; b < rp.B; ++b)
        rp.blocks.push_back({b * rp.sow_h + 1, std::min((b + 1) * rp.sow_h, n)});
      rp.r = cfg.r_override ? *cfg.r_override
                            : static_cast<int64_t>(ceil_div(static_cast<uint64_t>(rp.T),
                                                            static_cast<uint64_t>(rp.sow_h)));
      // I'_b = [n] \ (I_{b-1} u I_b u I_{b+1}), largest elements removed so
      // that |I'_b| = n - 3h.
      const int target = std::max(0, n - 3 * rp.sow_h);
      rp.sow_restricted.assign(rp.B, std::vector<char>(n + 1, 0));
      for (int b = 0; b < rp.B; ++b) {
        std::vector<int> cand;
        for (int i = 1; i <= n; ++i) {
          bool in_neighborhood = false;
          for (int nb = b - 1; nb <= b + 1; ++nb) {
            if (nb < 0 || nb >= rp.B) continue;
            if (i >= rp.blocks[nb].first && i <= rp.blocks[nb].second) in_neighborhood = true;
          }
          if (!in_neighborhood) cand.push_back(i);
        }
        if (static_cast<int>(cand.size()) > target) cand.resize(target);
        for (int i : cand) rp.sow_restricted[b][i] = 1;
      }
    }
  }

  if (!rp.direct) {
    rp.block_draw_bits = is_sow(mode) ? 0 : static_cast<unsigned>(ceil_log2(static_cast<uint64_t>(rp.B)));

    // Attached PRG.
    rp.prg = cfg.prg;
    if (rp.prg.space <= 0) rp.prg.space = rp.S;
    if (rp.prg.out_len == 0) rp.prg.out_len = static_cast<uint64_t>(rp.T);
    if (!(rp.prg.eps > 0)) rp.prg.eps = 0.25;
    if (needs_prg(mode)) rp.prg.validate();

    // Paper-formula parameter values, for reporting and manifest output.
    const long double ecs = std::exp(static_cast<long double>(-rp.c) * rp.S);
    rp.eps_formula = ecs / (4.0L * static_cast<long double>(rp.r));
    rp.eps_prime_formula =
        ecs / (2.0L * static_cast<long double>(rp.r) * std::pow(2.0L, static_cast<long double>(rp.S)));
    const long double s_nis = needs_prg(mode) ? static_cast<long double>(rp.prg.seed_len()) : 0.0L;
    const long double ell = static_cast<long double>(
        is_sow(mode) ? std::max(0, n - 3 * rp.sow_h) : rp.block_size);
    const long double log_ell = ell > 1 ? std::log2(ell) : 0.0L;
    const long double log_inv_eps = rp.eps_formula > 0 ? -std::log2(rp.eps_formula) : 0.0L;
    rp.k_formula = std::max({s_nis * s_nis * s_nis, std::pow(log_ell, 6.0L), std::pow(log_inv_eps, 6.0L)});

    // Attached extractor dimensions.
    if (needs_extractor(mode)) {
      rp.ext_source_len = is_sow(mode) ? static_cast<unsigned>(std::max(0, n - 3 * rp.sow_h))
                                       : static_cast<unsigned>(rp.block_size);
      if (cfg.extractor) {
        if (cfg.extractor->spec().ell != rp.ext_source_len)
          fail(errc::config, "attached extractor expects source length " +
                                 std::to_string(cfg.extractor->spec().ell) + ", phase source is " +
                                 std::to_string(rp.ext_source_len) + " bits");
        rp.ext_seed_len = cfg.extractor->spec().d;
      } else {
        rp.ext_seed_len = cfg.default_extractor_seed_len;
      }
    }
  }
  return rp;
}

namespace {

std::shared_ptr<const ext::Extractor> make_extractor(const SimulationConfig& cfg, const ResolvedParams& rp,
                                                     Mode mode) {
  if (!needs_extractor(mode)) return nullptr;
  if (cfg.extractor) {
    if (cfg.extractor->spec().s != rp.prg.seed_len())
      fail(errc::config, "attached extractor outputs " + std::to_string(cfg.extractor->spec().s) +
                             " bits but the generator seed needs " + std::to_string(rp.prg.seed_len()));
    return cfg.extractor;
  }
  const unsigned s_nis = rp.prg.seed_len();
  const int k = static_cast<int>(s_nis) +
                static_cast<int>(std::ceil(2.0 * std::log2(1.0 / cfg.default_extractor_eps) - 1e-9));
  if (k > static_cast<int>(rp.ext_source_len))
    fail(errc::config,
         "phase source of " + std::to_string(rp.ext_source_len) +
             " bits cannot feed a seed of " + std::to_string(s_nis) +
             " bits through the default hash extractor; attach an extractor or override parameters");
  return std::make_shared<ext::HashExtractor>(rp.ext_source_len, cfg.default_extractor_seed_len, s_nis, k,
                                              cfg.default_extractor_eps);
}

BitString source_slice(const BitString& x, const ResolvedParams& rp, Mode mode, int block) {
  if (!is_sow(mode)) {
    auto [lo, hi] = rp.blocks[static_cast<std::size_t>(block)];
    return x.slice(static_cast<std::size_t>(lo - 1), static_cast<std::size_t>(hi - lo + 1));
  }
  BitString out;
  const auto& mask = rp.sow_restricted[static_cast<std::size_t>(block)];
  for (int i = 1; i <= static_cast<int>(x.size()); ++i)
    if (mask[i]) out.push_back(x[static_cast<std::size_t>(i - 1)]);
  return out;
}

struct WalkHalt {
  std::size_t vertex_index;
  int64_t steps;
  bool true_terminal;
};

// Walks the program from `v` with reads confined to allowed(i); `bit(j)`
// supplies y_j. Halts at a true terminal or at the first restricted read.
WalkHalt restricted_walk(const bp::Program& p, std::size_t v_idx, const BitString& x,
                         const std::function<bool(int)>& allowed, const std::function<int(int)>& bit) {
  int64_t steps = 0;
  std::size_t cur = v_idx;
  for (;;) {
    const bp::Vertex& v = p.vertex_at(cur);
    if (v.terminal) return {cur, steps, true};
    if (!allowed(v.i)) return {cur, steps, false};
    int label = 2 * x[static_cast<std::size_t>(v.i - 1)] + bit(v.j);
    cur = p.index_of(v.edges[static_cast<std::size_t>(label)]);
    ++steps;
    if (steps > static_cast<int64_t>(p.size())) fail(errc::internal, "walk exceeded program size");
  }
}

// One-way fresh-bit supply for the true-randomness phases: rereads of the
// same index within a phase return the cached bit.
struct FreshBits {
  BitStream* stream;
  int last_j = -1;
  int last_bit = 0;
  int operator()(int j) {
    if (j == last_j) return last_bit;
    last_j = j;
    last_bit = stream->next_bit();
    return last_bit;
  }
};

int draw_block(BitStream& stream, const ResolvedParams& rp) {
  if (rp.B == 1) return 0;
  for (;;) {
    uint64_t v = stream.take(rp.block_draw_bits).to_uint(0, rp.block_draw_bits);
    if (v < static_cast<uint64_t>(rp.B)) return static_cast<int>(v);
  }
}

}  // namespace

SimResult simulate(const bp::Program& p, bp::VertexId v0, const BitString& x, const SimulationConfig& cfg,
                   Mode mode, BitStream& stream) {
  if (static_cast<int>(x.size()) != p.n()) fail(errc::invalid_argument, "input length mismatch");
  const bp::Discipline needed = is_sow(mode) ? bp::Discipline::S_OW : bp::Discipline::R_OW;
  if (!bp::validate_discipline(p, needed))
    fail(errc::invalid_argument, "program violates the " + bp::to_string(needed) + " discipline");

  ResolvedParams rp = derive_parameters(p, cfg, mode);
  SimResult result;
  const uint64_t consumed_before = stream.bits_consumed();

  if (rp.direct) {
    BitString tape = stream.take(static_cast<std::size_t>(rp.T));
    BitString y = tape.slice(0, static_cast<std::size_t>(p.m()));
    result.vertex = bp::eval(p, v0, x, y);
    result.direct_branch = true;
    result.bits_consumed = stream.bits_consumed() - consumed_before;
    return result;
  }

  std::shared_ptr<const ext::Extractor> extractor = make_extractor(cfg, rp, mode);
  std::size_t cur = p.index_of(v0);
  const int64_t max_phases =
      p.vertex_at(cur).terminal ? 0 : (mode == Mode::H3 ? rp.r * cfg.h3_cap_multiplier : rp.r);

  for (int64_t phase = 0; phase < max_phases; ++phase) {
    if (is_sow(mode) || mode == Mode::H3) {
      if (p.vertex_at(cur).terminal) break;
    }
    PhaseRecord rec;
    const uint64_t phase_start = stream.bits_consumed();

    int b;
    if (is_sow(mode)) {
      int i = p.vertex_at(cur).i;
      b = (i - 1) / rp.sow_h;  // deterministic: the block containing i(v)
    } else {
      b = draw_block(stream, rp);
    }
    rec.block = b + 1;

    std::function<bool(int)> allowed;
    if (is_sow(mode)) {
      const auto& mask = rp.sow_restricted[static_cast<std::size_t>(b)];
      allowed = [&mask](int i) { return !mask[static_cast<std::size_t>(i)]; };
    } else {
      auto [lo, hi] = rp.blocks[static_cast<std::size_t>(b)];
      allowed = [lo, hi](int i) { return i < lo || i > hi; };
    }

    WalkHalt halt{cur, 0, false};
    if (mode == Mode::A || mode == Mode::SOW) {
      BitString y_ext = stream.take(extractor->spec().d);
      BitString seed = extractor->extract(source_slice(x, rp, mode, b), y_ext);
      halt = restricted_walk(p, cur, x, allowed, [&](int j) {
        return prg::nisan_bit(seed, static_cast<uint64_t>(j - 1), rp.prg);
      });
    } else if (mode == Mode::H1 || mode == Mode::SOW_H1) {
      BitString seed = stream.take(rp.prg.seed_len());
      halt = restricted_walk(p, cur, x, allowed, [&](int j) {
        return prg::nisan_bit(seed, static_cast<uint64_t>(j - 1), rp.prg);
      });
    } else {
      FreshBits bits{&stream};
      halt = restricted_walk(p, cur, x, allowed, [&bits](int j) { return bits(j); });
    }
    cur = halt.vertex_index;
    rec.steps = halt.steps;
    rec.reason = halt.true_terminal ? PhaseRecord::Halt::true_terminal : PhaseRecord::Halt::restricted_read;
    rec.seed_bits = static_cast<unsigned>(stream.bits_consumed() - phase_start);
    result.phases.push_back(rec);
  }

  if (mode == Mode::H3 && !p.vertex_at(cur).terminal)
    fail(errc::divergence, "run-to-termination exceeded " + std::to_string(max_phases) +
                               " phases without absorbing");

  result.vertex = p.vertex_at(cur).id;
  result.bits_consumed = stream.bits_consumed() - consumed_before;
  return result;
}

dist::VertexDistribution sampled_law(const bp::Program& p, bp::VertexId v0, const BitString& x,
                                     const SimulationConfig& cfg, Mode mode) {
  std::vector<bp::VertexId> ids;
  for (const auto& v : p.vertices()) ids.push_back(v.id);
  return dist::sampled_distribution(
      [&](BitStream& stream) { return simulate(p, v0, x, cfg, mode, stream).vertex; }, cfg.trials,
      cfg.master_seed, ids);
}

// ---------------------------------------------------------------------------
// Exact analysis

std::vector<Rational> restricted_phase_law(const bp::Program& p, std::size_t u_index, const BitString& x,
                                           const std::vector<char>& allowed) {
  const std::size_t V = p.size();
  std::vector<Rational> absorbed(V, Rational(0));
  std::vector<Rational> mass(2 * V, Rational(0));
  const Rational half(BigInt(1), BigInt(2));

  auto halted = [&](const bp::Vertex& v) { return v.terminal || !allowed[static_cast<std::size_t>(v.i)]; };

  const bp::Vertex& u = p.vertex_at(u_index);
  if (halted(u)) {
    absorbed[u_index] = Rational(1);
    return absorbed;
  }
  mass[2 * u_index] = half;
  mass[2 * u_index + 1] = half;

  for (std::size_t idx : p.topo_order()) {
    const bp::Vertex& v = p.vertex_at(idx);
    if (halted(v)) continue;
    for (int b = 0; b < 2; ++b) {
      Rational m = mass[2 * idx + b];
      if (m.is_zero()) continue;
      mass[2 * idx + b] = Rational(0);
      int label = 2 * x[static_cast<std::size_t>(v.i - 1)] + b;
      std::size_t t = p.index_of(v.edges[static_cast<std::size_t>(label)]);
      const bp::Vertex& w = p.vertex_at(t);
      if (halted(w)) {
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
  return absorbed;
}

namespace {

std::vector<char> block_allowed_mask(const bp::Program& p, const ResolvedParams& rp, Mode mode, int b) {
  std::vector<char> allowed(static_cast<std::size_t>(p.n()) + 1, 1);
  allowed[0] = 0;
  if (is_sow(mode)) {
    for (int i = 1; i <= p.n(); ++i)
      if (rp.sow_restricted[static_cast<std::size_t>(b)][static_cast<std::size_t>(i)]) allowed[i] = 0;
  } else {
    auto [lo, hi] = rp.blocks[static_cast<std::size_t>(b)];
    for (int i = lo; i <= hi; ++i) allowed[static_cast<std::size_t>(i)] = 0;
  }
  return allowed;
}

}  // namespace

dist::Matrix<Rational> phase_matrix(const bp::Program& p, const BitString& x, const SimulationConfig& cfg,
                                    Mode mode, uint64_t enumeration_cap) {
  ResolvedParams rp = derive_parameters(p, cfg, mode);
  if (rp.direct) fail(errc::invalid_argument, "phase matrix undefined on the direct branch");
  const std::size_t V = p.size();
  dist::Matrix<Rational> M(V);

  auto sow_block_of = [&](std::size_t u_idx) { return (p.vertex_at(u_idx).i - 1) / rp.sow_h; };

  if (mode == Mode::H2 || mode == Mode::H3 || mode == Mode::SOW_H2) {
    // True-randomness phases: exact restricted-walk laws.
    for (std::size_t u = 0; u < V; ++u) {
      if (p.vertex_at(u).terminal) {
        M.at(u, u) = Rational(1);
        continue;
      }
      if (mode == Mode::SOW_H2) {
        auto allowed = block_allowed_mask(p, rp, mode, sow_block_of(u));
        std::vector<Rational> law = restricted_phase_law(p, u, x, allowed);
        for (std::size_t v = 0; v < V; ++v) M.at(u, v) = law[v];
      } else {
        Rational inv_b(BigInt(1), BigInt(rp.B));
        for (int b = 0; b < rp.B; ++b) {
          auto allowed = block_allowed_mask(p, rp, mode, b);
          std::vector<Rational> law = restricted_phase_law(p, u, x, allowed);
          for (std::size_t v = 0; v < V; ++v)
            if (!law[v].is_zero()) M.at(u, v) += inv_b * law[v];
        }
      }
    }
    return M;
  }

  // PRG-driven phases: enumerate the seed space.
  std::shared_ptr<const ext::Extractor> extractor = make_extractor(cfg, rp, mode);
  const unsigned seed_bits = (mode == Mode::A || mode == Mode::SOW) ? extractor->spec().d : rp.prg.seed_len();
  if (seed_bits >= 40 || (1ull << seed_bits) * std::max(1, rp.B) * V > enumeration_cap)
    fail(errc::resource, "phase matrix: seed enumeration exceeds cap");
  const uint64_t seeds = 1ull << seed_bits;
  const int m = p.m();

  std::vector<std::vector<uint64_t>> counts(V, std::vector<uint64_t>(V, 0));
  const int b_count = is_sow(mode) ? 1 : rp.B;
  for (int b = 0; b < rp.B; ++b) {
    auto allowed_mask = block_allowed_mask(p, rp, mode, b);
    auto allowed = [&allowed_mask](int i) { return allowed_mask[static_cast<std::size_t>(i)] != 0; };
    BitString source = needs_extractor(mode) ? source_slice(x, rp, mode, b) : BitString();
    for (uint64_t sv = 0; sv < seeds; ++sv) {
      BitString seed_raw = BitString::from_uint(sv, seed_bits);
      BitString nis_seed =
          (mode == Mode::A || mode == Mode::SOW) ? extractor->extract(source, seed_raw) : seed_raw;
      BitString y;
      for (int j = 1; j <= m; ++j)
        y.push_back(prg::nisan_bit(nis_seed, static_cast<uint64_t>(j - 1), rp.prg));
      for (std::size_t u = 0; u < V; ++u) {
        if (p.vertex_at(u).terminal) continue;
        if (is_sow(mode) && sow_block_of(u) != b) continue;
        WalkHalt halt = restricted_walk(p, u, x, allowed, [&y](int j) { return y[static_cast<std::size_t>(j - 1)]; });
        counts[u][halt.vertex_index]++;
      }
    }
  }
  BigInt denom = BigInt::from_uint64(seeds * static_cast<uint64_t>(b_count));
  for (std::size_t u = 0; u < V; ++u) {
    if (p.vertex_at(u).terminal) {
      M.at(u, u) = Rational(1);
      continue;
    }
    for (std::size_t v = 0; v < V; ++v)
      if (counts[u][v]) M.at(u, v) = Rational(BigInt::from_uint64(counts[u][v]), denom);
  }
  return M;
}

dist::VertexDistribution exact_mode_law(const bp::Program& p, bp::VertexId v0, const BitString& x,
                                        const SimulationConfig& cfg, Mode mode, uint64_t enumeration_cap) {
  ResolvedParams rp = derive_parameters(p, cfg, mode);
  if (rp.direct) return dist::exact_distribution(p, v0, x, enumeration_cap);

  dist::Matrix<Rational> M = phase_matrix(p, x, cfg, mode, enumeration_cap);
  const std::size_t V = p.size();
  std::vector<bp::VertexId> ids;
  for (const auto& v : p.vertices()) ids.push_back(v.id);

  if (mode == Mode::H3) {
    // Absorption law: the phase chain only moves forward through the DAG, so
    // a backward sweep in topological order solves it exactly.
    std::vector<std::vector<Rational>> law(V);
    const auto& topo = p.topo_order();
    for (std::size_t k = topo.size(); k-- > 0;) {
      std::size_t u = topo[k];
      if (p.vertex_at(u).terminal) {
        law[u].assign(V, Rational(0));
        law[u][u] = Rational(1);
        continue;
      }
      std::vector<Rational> acc(V, Rational(0));
      for (std::size_t w = 0; w < V; ++w) {
        if (w == u || M.at(u, w).is_zero()) continue;
        if (law[w].empty()) fail(errc::internal, "phase matrix not topologically ordered");
        const Rational& weight = M.at(u, w);
        for (std::size_t t = 0; t < V; ++t)
          if (!law[w][t].is_zero()) acc[t] += weight * law[w][t];
      }
      Rational stay = M.at(u, u);
      if (stay == Rational(1)) fail(errc::divergence, "phase chain stalls at a vertex with probability 1");
      Rational scale = Rational(1) / (Rational(1) - stay);
      for (std::size_t t = 0; t < V; ++t)
        if (!acc[t].is_zero()) acc[t] *= scale;
      law[u] = std::move(acc);
    }
    return dist::VertexDistribution{ids, law[p.index_of(v0)]};
  }

  std::vector<Rational> pi(V, Rational(0));
  pi[p.index_of(v0)] = Rational(1);
  for (int64_t phase = 0; phase < rp.r; ++phase) {
    std::vector<Rational> next(V, Rational(0));
    for (std::size_t u = 0; u < V; ++u) {
      if (pi[u].is_zero()) continue;
      for (std::size_t v = 0; v < V; ++v)
        if (!M.at(u, v).is_zero()) next[v] += pi[u] * M.at(u, v);
    }
    pi = std::move(next);
  }
  return dist::VertexDistribution{ids, std::move(pi)};
}

}  // namespace derand::sim
