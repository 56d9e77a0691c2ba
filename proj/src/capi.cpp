// Copyright 2026 the derand authors
// SPDX-License-Identifier: Apache-2.0

#include "derand.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

#include "json.hpp"

#include "derand/branching_program.hpp"
#include "derand/distribution.hpp"
#include "derand/experiment.hpp"
#include "derand/extractors.hpp"
#include "derand/finite_field.hpp"
#include "derand/gip.hpp"
#include "derand/prg.hpp"
#include "derand/simulator.hpp"

using nlohmann::json;
using nlohmann::ordered_json;

struct drd_program {
  derand::bp::Program prog;
};

namespace {

thread_local std::string g_last_error;

drd_status map_errc(derand::errc code) {
  switch (code) {
    case derand::errc::invalid_argument: return DRD_E_INVALID;
    case derand::errc::parse: return DRD_E_PARSE;
    case derand::errc::validation: return DRD_E_VALIDATION;
    case derand::errc::resource: return DRD_E_RESOURCE;
    case derand::errc::config: return DRD_E_CONFIG;
    case derand::errc::divergence: return DRD_E_DIVERGENCE;
    case derand::errc::internal: return DRD_E_INTERNAL;
  }
  return DRD_E_INTERNAL;
}

template <class F>
drd_status guarded(F&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const derand::error& e) {
    g_last_error = e.what();
    return map_errc(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return DRD_E_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

drd_status need(const void* p, const char* what) {
  if (p) return DRD_OK;
  g_last_error = std::string("null argument: ") + what;
  return DRD_E_INVALID;
}

json parse_options(const char* options_json) {
  if (!options_json || !*options_json) return json::object();
  try {
    json j = json::parse(options_json);
    if (!j.is_object()) derand::fail(derand::errc::parse, "options must be a JSON object");
    return j;
  } catch (const json::exception& e) {
    derand::fail(derand::errc::parse, std::string("invalid options JSON: ") + e.what());
  }
}

uint64_t opt_u64(const json& j, const char* key, uint64_t fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (v.is_string()) return std::stoull(v.get<std::string>(), nullptr, 0);
  return v.get<uint64_t>();
}

double opt_real(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    auto slash = s.find('/');
    if (slash != std::string::npos) return std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1));
    return std::stod(s);
  }
  return v.get<double>();
}

derand::sim::SimulationConfig sim_config_from_json(const json& o) {
  derand::sim::SimulationConfig sc;
  sc.c = static_cast<int>(opt_u64(o, "c", 1));
  sc.T = o.contains("T") ? static_cast<int64_t>(opt_u64(o, "T", 0)) : -1;
  if (o.contains("r")) sc.r_override = static_cast<int64_t>(opt_u64(o, "r", 0));
  if (o.contains("block")) sc.block_size_override = static_cast<int>(opt_u64(o, "block", 0));
  if (o.contains("threshold")) sc.threshold_override = static_cast<int64_t>(opt_u64(o, "threshold", 0));
  sc.prg.eps = opt_real(o, "prg_eps", 0.25);
  sc.prg.block_override = static_cast<int>(opt_u64(o, "prg_block", 0));
  sc.default_extractor_seed_len = static_cast<unsigned>(opt_u64(o, "ext_d", 16));
  sc.default_extractor_eps = opt_real(o, "ext_eps", 0.5);
  sc.trials = opt_u64(o, "trials", 10000);
  sc.master_seed = opt_u64(o, "master_seed", 1);
  return sc;
}

ordered_json distribution_json(const derand::dist::VertexDistribution& d, bool as_float) {
  ordered_json out;
  for (std::size_t i = 0; i < d.ids.size(); ++i) {
    if (as_float) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", d.prob[i].to_double());
      out[std::to_string(d.ids[i])] = buf;
    } else {
      out[std::to_string(d.ids[i])] = d.prob[i].to_string();
    }
  }
  return out;
}

}  // namespace

extern "C" {

const char* drd_version(void) { return derand::experiment::kLibraryVersion; }

const char* drd_last_error(void) { return g_last_error.c_str(); }

void drd_string_free(char* s) { std::free(s); }

void drd_program_free(drd_program* p) { delete p; }

drd_status drd_program_parse(const char* text, drd_program** out) {
  if (drd_status s = need(text, "text"); s != DRD_OK) return s;
  if (drd_status s = need(out, "out"); s != DRD_OK) return s;
  return guarded([&] {
    *out = new drd_program{derand::bp::parse_bp(text)};
    return DRD_OK;
  });
}

drd_status drd_program_random(const char* spec_json, uint64_t seed, drd_program** out) {
  if (drd_status s = need(out, "out"); s != DRD_OK) return s;
  return guarded([&] {
    json o = parse_options(spec_json);
    derand::bp::RandomProgramSpec spec;
    spec.n = static_cast<int>(opt_u64(o, "n", 4));
    spec.m = static_cast<int>(opt_u64(o, "m", 4));
    spec.width = static_cast<int>(opt_u64(o, "width", 4));
    spec.depth = static_cast<int>(opt_u64(o, "depth", 4));
    spec.terminals = static_cast<int>(opt_u64(o, "terminals", 2));
    if (o.contains("discipline"))
      spec.discipline = derand::bp::discipline_from_string(o.at("discipline").get<std::string>());
    spec.fresh_randomness = o.value("fresh", false);
    *out = new drd_program{derand::bp::random_program(spec, seed)};
    return DRD_OK;
  });
}

drd_status drd_program_serialize(const drd_program* p, char** out_text) {
  if (drd_status s = need(p, "program"); s != DRD_OK) return s;
  if (drd_status s = need(out_text, "out"); s != DRD_OK) return s;
  return guarded([&] {
    *out_text = dup_string(derand::bp::serialize_bp(p->prog));
    return DRD_OK;
  });
}

drd_status drd_program_to_json(const drd_program* p, char** out_json) {
  if (drd_status s = need(p, "program"); s != DRD_OK) return s;
  if (drd_status s = need(out_json, "out"); s != DRD_OK) return s;
  return guarded([&] {
    *out_json = dup_string(derand::bp::bp_to_json(p->prog));
    return DRD_OK;
  });
}

drd_status drd_program_info(const drd_program* p, char** out_json) {
  if (drd_status s = need(p, "program"); s != DRD_OK) return s;
  if (drd_status s = need(out_json, "out"); s != DRD_OK) return s;
  return guarded([&] {
    ordered_json j;
    j["n"] = p->prog.n();
    j["m"] = p->prog.m();
    j["size"] = p->prog.size();
    j["length"] = p->prog.length();
    j["queries"] = p->prog.queries();
    if (p->prog.start()) j["start"] = *p->prog.start();
    if (p->prog.accept()) j["accept"] = *p->prog.accept();
    *out_json = dup_string(j.dump());
    return DRD_OK;
  });
}

drd_status drd_program_validate(const drd_program* p, const char* discipline, int* out_ok) {
  if (drd_status s = need(p, "program"); s != DRD_OK) return s;
  if (drd_status s = need(discipline, "discipline"); s != DRD_OK) return s;
  if (drd_status s = need(out_ok, "out"); s != DRD_OK) return s;
  return guarded([&] {
    *out_ok = derand::bp::validate_discipline(p->prog, derand::bp::discipline_from_string(discipline)) ? 1 : 0;
    return DRD_OK;
  });
}

drd_status drd_program_eval(const drd_program* p, uint32_t v0, const char* x_bits, const char* y_bits,
                            uint32_t* out_vertex) {
  if (drd_status s = need(p, "program"); s != DRD_OK) return s;
  if (drd_status s = need(x_bits, "x"); s != DRD_OK) return s;
  if (drd_status s = need(y_bits, "y"); s != DRD_OK) return s;
  if (drd_status s = need(out_vertex, "out"); s != DRD_OK) return s;
  return guarded([&] {
    *out_vertex = derand::bp::eval(p->prog, v0, derand::BitString::from_string(x_bits),
                                   derand::BitString::from_string(y_bits));
    return DRD_OK;
  });
}

drd_status drd_program_compute(const drd_program* p, const char* x_bits, const char* y_bits, int* out_bit) {
  if (drd_status s = need(p, "program"); s != DRD_OK) return s;
  if (drd_status s = need(x_bits, "x"); s != DRD_OK) return s;
  if (drd_status s = need(y_bits, "y"); s != DRD_OK) return s;
  if (drd_status s = need(out_bit, "out"); s != DRD_OK) return s;
  return guarded([&] {
    *out_bit = derand::bp::compute_boolean(p->prog, derand::BitString::from_string(x_bits),
                                           derand::BitString::from_string(y_bits));
    return DRD_OK;
  });
}

drd_status drd_program_restrict(const drd_program* p, const int* allowed, size_t count, drd_program** out) {
  if (drd_status s = need(p, "program"); s != DRD_OK) return s;
  if (drd_status s = need(out, "out"); s != DRD_OK) return s;
  if (count > 0) {
    if (drd_status s = need(allowed, "allowed"); s != DRD_OK) return s;
  }
  return guarded([&] {
    std::vector<int> idx(allowed, allowed + count);
    *out = new drd_program{derand::bp::restrict(p->prog, idx)};
    return DRD_OK;
  });
}

drd_status drd_program_failure_probability(const drd_program* p, const char* truth_bits, uint64_t eval_cap,
                                           char** out_rational) {
  if (drd_status s = need(p, "program"); s != DRD_OK) return s;
  if (drd_status s = need(truth_bits, "truth"); s != DRD_OK) return s;
  if (drd_status s = need(out_rational, "out"); s != DRD_OK) return s;
  return guarded([&] {
    derand::Rational r = derand::bp::failure_probability(p->prog, derand::BitString::from_string(truth_bits),
                                                         eval_cap ? eval_cap : (1ull << 22));
    *out_rational = dup_string(r.to_string());
    return DRD_OK;
  });
}

drd_status drd_exact_distribution(const drd_program* p, uint32_t v0, const char* x_bits, uint64_t cap,
                                  int as_float, char** out_json) {
  if (drd_status s = need(p, "program"); s != DRD_OK) return s;
  if (drd_status s = need(x_bits, "x"); s != DRD_OK) return s;
  if (drd_status s = need(out_json, "out"); s != DRD_OK) return s;
  return guarded([&] {
    auto d = derand::dist::exact_distribution(p->prog, v0, derand::BitString::from_string(x_bits),
                                              cap ? cap : (1ull << 22));
    *out_json = dup_string(distribution_json(d, as_float != 0).dump());
    return DRD_OK;
  });
}

drd_status drd_simulate(const drd_program* p, const char* x_bits, const char* mode,
                        const char* options_json, char** out_json) {
  if (drd_status s = need(p, "program"); s != DRD_OK) return s;
  if (drd_status s = need(x_bits, "x"); s != DRD_OK) return s;
  if (drd_status s = need(mode, "mode"); s != DRD_OK) return s;
  if (drd_status s = need(out_json, "out"); s != DRD_OK) return s;
  return guarded([&] {
    json o = parse_options(options_json);
    derand::sim::SimulationConfig sc = sim_config_from_json(o);
    derand::sim::Mode md = derand::sim::mode_from_string(mode);
    derand::BitString x = derand::BitString::from_string(x_bits);
    const derand::bp::Program& prog = p->prog;
    if (!prog.start() && !o.contains("v0"))
      derand::fail(derand::errc::config, "program has no start vertex; pass v0");
    derand::bp::VertexId v0 =
        o.contains("v0") ? static_cast<derand::bp::VertexId>(opt_u64(o, "v0", 0)) : *prog.start();
    const bool as_float = o.value("float", false);

    const uint64_t cap = opt_u64(o, "cap", 1ull << 26);
    ordered_json out;
    if (o.value("exact_law", false)) {
      auto law = derand::sim::exact_mode_law(prog, v0, x, sc, md, cap);
      out["distribution"] = distribution_json(law, as_float);
      out["exact"] = true;
    } else {
      auto law = derand::sim::sampled_law(prog, v0, x, sc, md);
      out["distribution"] = distribution_json(law, as_float);
      out["exact"] = false;
    }

    // One representative run for the trace and the bit accounting.
    derand::SeededBitStream stream(derand::trial_seed(sc.master_seed, 0));
    auto run = derand::sim::simulate(prog, v0, x, sc, md, stream);
    ordered_json trace;
    trace["phases"] = run.phases.size();
    int64_t steps = 0;
    uint64_t restricted = 0, terminal = 0;
    int64_t min_steps = -1;
    for (const auto& ph : run.phases) {
      steps += ph.steps;
      if (ph.reason == derand::sim::PhaseRecord::Halt::restricted_read) ++restricted;
      if (ph.reason == derand::sim::PhaseRecord::Halt::true_terminal) ++terminal;
      if (min_steps < 0 || ph.steps < min_steps) min_steps = ph.steps;
    }
    trace["total_steps"] = steps;
    trace["min_phase_steps"] = min_steps < 0 ? 0 : min_steps;
    trace["restricted_halts"] = restricted;
    trace["terminal_halts"] = terminal;
    out["trace_summary"] = trace;
    out["bits_consumed"] = run.bits_consumed;
    out["direct"] = run.direct_branch;

    auto rp = derand::sim::derive_parameters(prog, sc, md);
    ordered_json resolved;
    resolved["S"] = rp.S;
    resolved["T"] = rp.T;
    resolved["direct"] = rp.direct;
    resolved["B"] = rp.B;
    resolved["r"] = rp.r;
    resolved["block_size"] = rp.block_size;
    out["resolved"] = resolved;
    *out_json = dup_string(out.dump());
    return DRD_OK;
  });
}

drd_status drd_extractor_test(const char* options_json, char** out_json) {
  if (drd_status s = need(out_json, "out"); s != DRD_OK) return s;
  return guarded([&] {
    json o = parse_options(options_json);
    derand::experiment::ExperimentConfig cfg;
    cfg.kind = "extractor-verify";
    cfg.values["kind"] = cfg.kind;
    auto copy = [&](const char* from, const char* to) {
      if (o.contains(from)) {
        const auto& v = o.at(from);
        cfg.values[to] = v.is_string() ? v.get<std::string>() : v.dump();
      }
    };
    copy("kind", "ext.kind");
    copy("ell", "ext.ell");
    copy("d", "ext.d");
    copy("s", "ext.s");
    copy("k", "ext.k");
    copy("eps", "ext.eps");
    copy("alpha", "ext.alpha");
    copy("family_count", "family.count");
    copy("family_seed", "family.seed");
    copy("vsize", "badset.vsize");
    copy("functions", "badset.functions");
    std::string dir = o.value("out_dir", std::string("extractor-test-out"));
    auto outcome = derand::experiment::run_experiment(cfg, dir);
    *out_json = dup_string(outcome.summary_json);
    return outcome.exit_code == 2 ? DRD_E_CHECK : DRD_OK;
  });
}

drd_status drd_extract(const char* options_json, const char* x_bits, const char* y_bits, char** out_bits) {
  if (drd_status s = need(x_bits, "x"); s != DRD_OK) return s;
  if (drd_status s = need(y_bits, "y"); s != DRD_OK) return s;
  if (drd_status s = need(out_bits, "out"); s != DRD_OK) return s;
  return guarded([&] {
    json o = parse_options(options_json);
    derand::BitString x = derand::BitString::from_string(x_bits);
    derand::BitString y = derand::BitString::from_string(y_bits);
    std::string kind = o.value("kind", std::string("hash"));
    std::unique_ptr<derand::ext::Extractor> e;
    const unsigned ell = static_cast<unsigned>(opt_u64(o, "ell", x.size()));
    const int k = static_cast<int>(opt_u64(o, "k", 6));
    const double eps = opt_real(o, "eps", 0.25);
    if (kind == "hash") {
      e = std::make_unique<derand::ext::HashExtractor>(ell, static_cast<unsigned>(opt_u64(o, "d", y.size())),
                                                       static_cast<unsigned>(opt_u64(o, "s", 2)), k, eps);
    } else if (kind == "guv") {
      e = std::make_unique<derand::ext::GuvExtractor>(ell, k, eps, opt_real(o, "alpha", 0.25));
    } else if (kind == "walk") {
      derand::ext::WalkParams wp;
      wp.source_len = ell;
      wp.s = static_cast<unsigned>(opt_u64(o, "walk_s", 2));
      wp.out_len = static_cast<unsigned>(opt_u64(o, "s", 2));
      wp.steps = static_cast<unsigned>(opt_u64(o, "steps", 1));
      e = std::make_unique<derand::ext::WalkExtractor>(wp, k, eps);
    } else if (kind == "condense") {
      *out_bits = dup_string(
          derand::ext::guv_condense(x, y, k, eps, opt_real(o, "alpha", 0.25)).to_string());
      return DRD_OK;
    } else {
      derand::fail(derand::errc::invalid_argument, "unknown extractor kind: " + kind);
    }
    *out_bits = dup_string(e->extract(x, y).to_string());
    return DRD_OK;
  });
}

drd_status drd_prg_stream(const char* kind, const char* options_json, const char* seed_hex,
                          uint64_t out_len, char** out_hex) {
  if (drd_status s = need(kind, "kind"); s != DRD_OK) return s;
  if (drd_status s = need(seed_hex, "seed"); s != DRD_OK) return s;
  if (drd_status s = need(out_hex, "out"); s != DRD_OK) return s;
  return guarded([&] {
    json o = parse_options(options_json);
    std::string k(kind);
    if (k == "nisan") {
      derand::prg::NisanParams np;
      np.space = static_cast<int>(opt_u64(o, "space", 4));
      np.out_len = out_len;
      np.eps = opt_real(o, "eps", 0.25);
      np.block_override = static_cast<int>(opt_u64(o, "block", 0));
      derand::BitString seed = derand::BitString::from_hex(seed_hex, np.seed_len());
      *out_hex = dup_string(derand::prg::nisan_stream(seed, np).to_hex());
    } else if (k == "nz") {
      derand::prg::NzParams np;
      np.source_len = static_cast<unsigned>(opt_u64(o, "source_len", 32));
      np.seed_block = static_cast<unsigned>(opt_u64(o, "seed_block", 16));
      np.out_block = static_cast<unsigned>(opt_u64(o, "out_block", 8));
      np.k = static_cast<int>(opt_u64(o, "k", 16));
      np.eps = opt_real(o, "eps", 1.0 / 16);
      derand::BitString seed = derand::BitString::from_hex(seed_hex, np.seed_len(out_len));
      *out_hex = dup_string(derand::prg::nz_generate(seed, out_len, np).to_hex());
    } else {
      derand::fail(derand::errc::invalid_argument, "unknown generator kind: " + k);
    }
    return DRD_OK;
  });
}

drd_status drd_gip_r(const char* x_bits, int m, char** out_hex) {
  if (drd_status s = need(x_bits, "x"); s != DRD_OK) return s;
  if (drd_status s = need(out_hex, "out"); s != DRD_OK) return s;
  return guarded([&] {
    *out_hex = dup_string(derand::gip::generate_r(derand::BitString::from_string(x_bits), m).to_hex());
    return DRD_OK;
  });
}

drd_status drd_derand_sr(const drd_program* p, const char* truth_bits, char** out_csv,
                         char** out_summary_json) {
  if (drd_status s = need(p, "program"); s != DRD_OK) return s;
  if (drd_status s = need(out_csv, "csv"); s != DRD_OK) return s;
  if (drd_status s = need(out_summary_json, "summary"); s != DRD_OK) return s;
  return guarded([&] {
    const derand::bp::Program& prog = p->prog;
    const int n = prog.n(), m = prog.m();
    if (n > 20) derand::fail(derand::errc::resource, "exhaustive sweep capped at n <= 20");
    derand::BitString truth;
    if (truth_bits) {
      truth = derand::BitString::from_string(truth_bits);
      if (truth.size() != (1ull << n))
        derand::fail(derand::errc::invalid_argument, "truth table length mismatch");
    } else {
      for (uint64_t xv = 0; xv < (1ull << n); ++xv) {
        derand::BitString x = derand::BitString::from_uint(xv, n);
        uint64_t ones = 0;
        for (uint64_t yv = 0; yv < (1ull << m); ++yv)
          ones += static_cast<uint64_t>(
              derand::bp::compute_boolean(prog, x, derand::BitString::from_uint(yv, m)));
        truth.push_back(ones * 2 >= (1ull << m) ? 1 : 0);
      }
    }
    std::string csv = "x,f,output,mismatch\n";
    uint64_t mistakes = 0;
    for (uint64_t xv = 0; xv < (1ull << n); ++xv) {
      derand::BitString x = derand::BitString::from_uint(xv, n);
      int out = derand::gip::derandomize_sr(prog, x);
      int f = truth[xv];
      bool mm = out != f;
      if (mm) ++mistakes;
      csv += x.to_string() + "," + std::to_string(f) + "," + std::to_string(out) + "," + (mm ? "1" : "0") +
             "\n";
    }
    derand::Rational density(derand::BigInt::from_uint64(mistakes),
                             derand::BigInt::pow2(static_cast<unsigned>(n)));
    ordered_json summary;
    summary["mistake_density"] = density.to_string();
    summary["delta_measured"] = derand::bp::failure_probability(prog, truth).to_string();
    summary["bound_template"] = "3*delta + m*2^(-alpha*n/m) with m=" + std::to_string(m) +
                                ", n=" + std::to_string(n) + ", alpha symbolic";
    *out_csv = dup_string(csv);
    *out_summary_json = dup_string(summary.dump());
    return DRD_OK;
  });
}

drd_status drd_protocol_cost(const drd_program* p, const char* x_bits, const char* y_bits,
                             char** out_json) {
  if (drd_status s = need(p, "program"); s != DRD_OK) return s;
  if (drd_status s = need(x_bits, "x"); s != DRD_OK) return s;
  if (drd_status s = need(y_bits, "y"); s != DRD_OK) return s;
  if (drd_status s = need(out_json, "out"); s != DRD_OK) return s;
  return guarded([&] {
    auto layout = derand::gip::GipLayout::derive(p->prog.n(), std::max(1, p->prog.m()));
    auto cost = derand::gip::protocol_cost(p->prog, layout, derand::BitString::from_string(x_bits),
                                           derand::BitString::from_string(y_bits));
    ordered_json j;
    j["handoffs"] = cost.handoffs;
    j["state_bits"] = cost.state_bits;
    j["frame_bits"] = cost.frame_bits;
    j["total_bits"] = cost.total_bits;
    j["handoff_steps"] = cost.handoff_steps;
    *out_json = dup_string(j.dump());
    return DRD_OK;
  });
}

drd_status drd_amplify(const drd_program* p, const char* options_json, drd_program** out_program,
                       char** out_stats_json) {
  if (drd_status s = need(p, "program"); s != DRD_OK) return s;
  if (drd_status s = need(out_program, "out"); s != DRD_OK) return s;
  if (drd_status s = need(out_stats_json, "stats"); s != DRD_OK) return s;
  return guarded([&] {
    json o = parse_options(options_json);
    derand::gip::AmplifyOptions opt;
    opt.delta = opt_real(o, "delta", 0.05);
    if (o.contains("r")) opt.r_override = static_cast<int>(opt_u64(o, "r", 9));
    opt.prg.block_override = static_cast<int>(opt_u64(o, "prg_block", 0));
    opt.prg.eps = opt_real(o, "prg_eps", 0.1);
    auto res = derand::gip::amplify_sow_to_sr(p->prog, opt);
    ordered_json j;
    j["r"] = res.r;
    j["walk_s"] = res.walk_s;
    j["label_bits"] = res.label_bits;
    j["coins"] = res.m_bits;
    j["size"] = res.program.size();
    j["predicted_size"] = res.predicted_size;
    *out_stats_json = dup_string(j.dump());
    *out_program = new drd_program{std::move(res.program)};
    return DRD_OK;
  });
}

drd_status drd_ff_test(char** out_json) {
  if (drd_status s = need(out_json, "out"); s != DRD_OK) return s;
  return guarded([&] {
    derand::experiment::ExperimentConfig cfg;
    cfg.kind = "ff-verify";
    cfg.values["kind"] = cfg.kind;
    auto outcome = derand::experiment::run_experiment(cfg, "ff-test-out");
    *out_json = dup_string(outcome.summary_json);
    return outcome.exit_code == 2 ? DRD_E_CHECK : DRD_OK;
  });
}

drd_status drd_experiment_run(const char* config_text, const char* out_dir, char** out_summary_json) {
  if (drd_status s = need(config_text, "config"); s != DRD_OK) return s;
  if (drd_status s = need(out_dir, "out_dir"); s != DRD_OK) return s;
  if (drd_status s = need(out_summary_json, "summary"); s != DRD_OK) return s;
  return guarded([&] {
    auto cfg = derand::experiment::load_config(config_text);
    auto outcome = derand::experiment::run_experiment(cfg, out_dir);
    *out_summary_json = dup_string(outcome.summary_json);
    return outcome.exit_code == 2 ? DRD_E_CHECK : DRD_OK;
  });
}

drd_status drd_config_canonicalize(const char* config_text, char** out_canonical) {
  if (drd_status s = need(config_text, "config"); s != DRD_OK) return s;
  if (drd_status s = need(out_canonical, "out"); s != DRD_OK) return s;
  return guarded([&] {
    *out_canonical = dup_string(derand::experiment::dump_config(derand::experiment::load_config(config_text)));
    return DRD_OK;
  });
}

}  // extern "C"
