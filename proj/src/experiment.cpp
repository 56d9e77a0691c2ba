// Copyright 2026 the derand authors
// SPDX-License-Identifier: Apache-2.0

#include "derand/experiment.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "derand/branching_program.hpp"
#include "derand/distribution.hpp"
#include "derand/extractors.hpp"
#include "derand/finite_field.hpp"
#include "derand/gip.hpp"
#include "derand/prg.hpp"
#include "derand/simulator.hpp"

namespace derand::experiment {

namespace {

const std::set<std::string> kGlobalKeys = {
    "kind", "trials", "master.seed", "exact", "cap", "format",
    "bp.file", "bp.n", "bp.m", "bp.width", "bp.depth", "bp.discipline", "bp.terminals",
    "bp.fresh", "bp.seed",
};

const std::map<std::string, std::set<std::string>> kKindKeys = {
    {"hybrid-compare",
     {"modes", "x", "threshold", "override.r", "override.block", "override.T", "override.c",
      "prg.eps", "prg.block", "ext.d", "ext.eps"}},
    {"mistake-rate", {"truth.file"}},
    {"extractor-verify",
     {"ext.kind", "ext.ell", "ext.d", "ext.s", "ext.k", "ext.eps", "ext.alpha", "family.count",
      "family.seed", "badset.vsize", "badset.functions"}},
    {"ff-verify", {}},
    {"prg-fool", {"prg.eps", "prg.block", "prg.space", "family.count", "family.seed"}},
    {"amplify-check", {"delta", "amplify.r", "prg.block", "prg.eps"}},
};

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

void validate_keys(const ExperimentConfig& cfg) {
  auto it = kKindKeys.find(cfg.kind);
  if (it == kKindKeys.end()) fail(errc::config, "unknown experiment kind: " + cfg.kind);
  for (const auto& [key, value] : cfg.values) {
    (void)value;
    if (key == "kind") continue;
    if (kGlobalKeys.count(key) || it->second.count(key)) continue;
    fail(errc::config, "unknown configuration key: " + key);
  }
}

}  // namespace

std::string ExperimentConfig::get(const std::string& key, const std::string& fallback) const {
  auto it = values.find(key);
  return it == values.end() ? fallback : it->second;
}

int64_t ExperimentConfig::get_int(const std::string& key, int64_t fallback) const {
  auto it = values.find(key);
  if (it == values.end()) return fallback;
  try {
    return std::stoll(it->second);
  } catch (...) {
    fail(errc::config, "key '" + key + "' is not an integer: " + it->second);
  }
}

uint64_t ExperimentConfig::get_seed(const std::string& key, uint64_t fallback) const {
  auto it = values.find(key);
  if (it == values.end()) return fallback;
  try {
    return std::stoull(it->second, nullptr, 0);
  } catch (...) {
    fail(errc::config, "key '" + key + "' is not a seed value: " + it->second);
  }
}

double ExperimentConfig::get_real(const std::string& key, double fallback) const {
  auto it = values.find(key);
  if (it == values.end()) return fallback;
  // Accept "1/8" style rationals as well as decimals.
  const std::string& v = it->second;
  auto slash = v.find('/');
  try {
    if (slash != std::string::npos)
      return std::stod(v.substr(0, slash)) / std::stod(v.substr(slash + 1));
    return std::stod(v);
  } catch (...) {
    fail(errc::config, "key '" + key + "' is not a number: " + v);
  }
}

bool ExperimentConfig::get_bool(const std::string& key, bool fallback) const {
  auto it = values.find(key);
  if (it == values.end()) return fallback;
  if (it->second == "true" || it->second == "1") return true;
  if (it->second == "false" || it->second == "0") return false;
  fail(errc::config, "key '" + key + "' is not a boolean: " + it->second);
}

ExperimentConfig load_config(const std::string& text) {
  ExperimentConfig cfg;
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      fail(errc::parse, std::string("invalid JSON config: ") + e.what());
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
      std::string v = it.value().is_string() ? it.value().get<std::string>() : it.value().dump();
      cfg.values[it.key()] = v;
    }
  } else {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      auto eq = line.find('=');
      if (eq == std::string::npos)
        fail(errc::parse, "config line " + std::to_string(lineno) + ": expected 'key = value'");
      std::string key = trim(line.substr(0, eq));
      std::string value = trim(line.substr(eq + 1));
      if (key.empty() || value.empty())
        fail(errc::parse, "config line " + std::to_string(lineno) + ": empty key or value");
      if (cfg.values.count(key)) fail(errc::parse, "duplicate configuration key: " + key);
      cfg.values[key] = value;
    }
  }
  if (!cfg.values.count("kind")) fail(errc::config, "missing configuration key: kind");
  cfg.kind = cfg.values["kind"];
  validate_keys(cfg);
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::config, "cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_config(ss.str());
}

std::string dump_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  for (const auto& [key, value] : cfg.values) out << key << " = " << value << "\n";
  return out.str();
}

std::string config_hash(const ExperimentConfig& cfg) {
  std::string dump = dump_config(cfg);
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

// ---------------------------------------------------------------------------

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bp::Program load_program(const ExperimentConfig& cfg) {
  if (cfg.has("bp.file")) {
    std::ifstream in(cfg.get("bp.file"), std::ios::binary);
    if (!in) fail(errc::config, "cannot open program file: " + cfg.get("bp.file"));
    std::ostringstream ss;
    ss << in.rdbuf();
    return bp::parse_bp(ss.str());
  }
  if (!cfg.has("bp.n")) fail(errc::config, "no program instance: set bp.file or bp.n/bp.m/...");
  bp::RandomProgramSpec spec;
  spec.n = static_cast<int>(cfg.get_int("bp.n", 8));
  spec.m = static_cast<int>(cfg.get_int("bp.m", 8));
  spec.width = static_cast<int>(cfg.get_int("bp.width", 4));
  spec.depth = static_cast<int>(cfg.get_int("bp.depth", 4));
  spec.terminals = static_cast<int>(cfg.get_int("bp.terminals", 2));
  spec.discipline = bp::discipline_from_string(cfg.get("bp.discipline", "R-OW"));
  spec.fresh_randomness = cfg.get_bool("bp.fresh", false);
  return bp::random_program(spec, cfg.get_seed("bp.seed", 1));
}

sim::SimulationConfig sim_config_from(const ExperimentConfig& cfg) {
  sim::SimulationConfig sc;
  sc.c = static_cast<int>(cfg.get_int("override.c", 1));
  sc.T = cfg.get_int("override.T", -1);
  if (cfg.has("override.r")) sc.r_override = cfg.get_int("override.r", 0);
  if (cfg.has("override.block")) sc.block_size_override = static_cast<int>(cfg.get_int("override.block", 0));
  sc.prg.eps = cfg.get_real("prg.eps", 0.25);
  sc.prg.block_override = static_cast<int>(cfg.get_int("prg.block", 0));
  sc.default_extractor_seed_len = static_cast<unsigned>(cfg.get_int("ext.d", 16));
  sc.default_extractor_eps = cfg.get_real("ext.eps", 0.5);
  sc.trials = static_cast<uint64_t>(cfg.get_int("trials", 10000));
  sc.master_seed = cfg.get_seed("master.seed", 1);
  return sc;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::config, "cannot write: " + path);
  out << content;
}

void write_manifest(const ExperimentConfig& cfg, const std::string& out_dir, nlohmann::ordered_json resolved) {
  nlohmann::ordered_json m;
  m["schema"] = 1;
  m["library"] = kLibraryVersion;
  m["kind"] = cfg.kind;
  m["config_hash"] = config_hash(cfg);
  m["master_seed"] = cfg.get_seed("master.seed", 1);
  nlohmann::ordered_json cj;
  for (const auto& [k, v] : cfg.values) cj[k] = v;
  m["config"] = cj;
  m["resolved"] = std::move(resolved);
  write_file(out_dir + "/manifest.json", m.dump(2) + "\n");
}

nlohmann::ordered_json resolved_json(const bp::Program& p, const sim::ResolvedParams& rp) {
  nlohmann::ordered_json r;
  r["S"] = rp.S;
  r["c"] = rp.c;
  r["T"] = rp.T;
  r["direct"] = rp.direct;
  r["block_size"] = rp.block_size;
  r["B"] = rp.B;
  nlohmann::ordered_json blocks = nlohmann::ordered_json::array();
  for (auto [lo, hi] : rp.blocks) blocks.push_back({lo, hi});
  r["blocks"] = blocks;
  r["r"] = rp.r;
  r["eps_formula"] = fmt_double(static_cast<double>(rp.eps_formula));
  r["eps_prime_formula"] = fmt_double(static_cast<double>(rp.eps_prime_formula));
  r["k_formula"] = fmt_double(static_cast<double>(rp.k_formula));
  r["prg_space"] = rp.prg.space;
  r["prg_out_len"] = rp.prg.out_len;
  r["prg_eps"] = fmt_double(rp.prg.eps);
  r["prg_block"] = rp.prg.block_len();
  r["prg_seed_len"] = rp.prg.seed_len();
  r["ext_source_len"] = rp.ext_source_len;
  r["ext_seed_len"] = rp.ext_seed_len;
  r["program_size"] = p.size();
  r["program_length"] = p.length();
  r["program_queries"] = p.queries();
  return r;
}

// --- hybrid-compare --------------------------------------------------------

RunOutcome run_hybrid_compare(const ExperimentConfig& cfg, const std::string& out_dir) {
  bp::Program p = load_program(cfg);
  if (!p.start()) fail(errc::config, "program needs a start vertex");
  std::string modes_str = cfg.get("modes", "A,H1");
  auto comma = modes_str.find(',');
  if (comma == std::string::npos) fail(errc::config, "modes must name two comma-separated modes");
  sim::Mode mode_a = sim::mode_from_string(modes_str.substr(0, comma));
  sim::Mode mode_b = sim::mode_from_string(modes_str.substr(comma + 1));
  sim::SimulationConfig sc = sim_config_from(cfg);
  double threshold = cfg.get_real("threshold", 0.25);

  std::vector<BitString> xs;
  if (cfg.has("x")) {
    xs.push_back(BitString::from_string(cfg.get("x")));
  } else {
    if (p.n() > 14) fail(errc::config, "exhaustive input sweep capped at n <= 14; supply x");
    for (uint64_t xv = 0; xv < (1ull << p.n()); ++xv) xs.push_back(BitString::from_uint(xv, p.n()));
  }

  std::ostringstream csv;
  csv << "x,tvd,bad_flag\n";
  double max_tvd = 0, sum_tvd = 0;
  uint64_t bad = 0;
  for (const BitString& x : xs) {
    auto law_a = sim::exact_mode_law(p, *p.start(), x, sc, mode_a);
    auto law_b = sim::exact_mode_law(p, *p.start(), x, sc, mode_b);
    double t = dist::tvd(law_a, law_b).to_double();
    bool flag = t > threshold;
    if (flag) ++bad;
    max_tvd = std::max(max_tvd, t);
    sum_tvd += t;
    csv << x.to_string() << "," << fmt_double(t) << "," << (flag ? 1 : 0) << "\n";
  }
  write_file(out_dir + "/results.csv", csv.str());

  nlohmann::ordered_json summary;
  summary["schema"] = 1;
  summary["kind"] = cfg.kind;
  summary["modes"] = modes_str;
  summary["inputs"] = xs.size();
  summary["max_tvd"] = fmt_double(max_tvd);
  summary["mean_tvd"] = fmt_double(sum_tvd / static_cast<double>(xs.size()));
  summary["bad_count"] = bad;
  summary["threshold"] = fmt_double(threshold);
  write_file(out_dir + "/results.json", summary.dump(2) + "\n");
  write_manifest(cfg, out_dir, resolved_json(p, sim::derive_parameters(p, sc, mode_a)));
  return {0, summary.dump()};
}

// --- mistake-rate ----------------------------------------------------------

RunOutcome run_mistake_rate(const ExperimentConfig& cfg, const std::string& out_dir) {
  bp::Program p = load_program(cfg);
  if (!p.start()) fail(errc::config, "program needs a start vertex");
  if (p.n() > 20) fail(errc::config, "exhaustive mistake-rate sweep capped at n <= 20");
  const int n = p.n(), m = p.m();

  // Truth table: majority answer over the coin space unless a file pins one.
  BitString truth;
  if (cfg.has("truth.file")) {
    std::ifstream in(cfg.get("truth.file"), std::ios::binary);
    if (!in) fail(errc::config, "cannot open truth file: " + cfg.get("truth.file"));
    std::string bits;
    in >> bits;
    truth = BitString::from_string(bits);
    if (truth.size() != (1ull << n)) fail(errc::config, "truth table length mismatch");
  } else {
    for (uint64_t xv = 0; xv < (1ull << n); ++xv) {
      BitString x = BitString::from_uint(xv, n);
      uint64_t ones = 0;
      for (uint64_t yv = 0; yv < (1ull << m); ++yv)
        ones += static_cast<uint64_t>(bp::compute_boolean(p, x, BitString::from_uint(yv, m)));
      truth.push_back(ones * 2 >= (1ull << m) ? 1 : 0);
    }
  }

  Rational delta_measured = bp::failure_probability(p, truth);
  std::ostringstream csv;
  csv << "x,f,output,mismatch\n";
  uint64_t mistakes = 0;
  for (uint64_t xv = 0; xv < (1ull << n); ++xv) {
    BitString x = BitString::from_uint(xv, n);
    int out = gip::derandomize_sr(p, x);
    int f = truth[xv];
    bool mismatch = out != f;
    if (mismatch) ++mistakes;
    csv << x.to_string() << "," << f << "," << out << "," << (mismatch ? 1 : 0) << "\n";
  }
  write_file(out_dir + "/results.csv", csv.str());

  Rational density(BigInt::from_uint64(mistakes), BigInt::pow2(static_cast<unsigned>(n)));
  nlohmann::ordered_json summary;
  summary["schema"] = 1;
  summary["kind"] = cfg.kind;
  summary["inputs"] = 1ull << n;
  summary["mistakes"] = mistakes;
  summary["mistake_density"] = density.to_string();
  summary["delta_measured"] = delta_measured.to_string();
  summary["bound_template"] =
      "3*delta + m*2^(-alpha*n/m) with m=" + std::to_string(m) + ", n=" + std::to_string(n) +
      ", alpha symbolic";
  write_file(out_dir + "/results.json", summary.dump(2) + "\n");

  nlohmann::ordered_json resolved;
  resolved["n"] = n;
  resolved["m"] = m;
  gip::GipLayout L = gip::GipLayout::derive(n, m);
  resolved["layout"] = {{"n1", L.n1}, {"n2", L.n2}, {"n3", L.n3}, {"ell", L.ell}};
  write_manifest(cfg, out_dir, resolved);
  return {0, summary.dump()};
}

// --- extractor-verify ------------------------------------------------------

RunOutcome run_extractor_verify(const ExperimentConfig& cfg, const std::string& out_dir) {
  const std::string kind = cfg.get("ext.kind", "hash");
  const unsigned ell = static_cast<unsigned>(cfg.get_int("ext.ell", 10));
  const unsigned d = static_cast<unsigned>(cfg.get_int("ext.d", 4));
  const unsigned s = static_cast<unsigned>(cfg.get_int("ext.s", 2));
  const int k = static_cast<int>(cfg.get_int("ext.k", 6));
  const double eps = cfg.get_real("ext.eps", 0.25);

  std::unique_ptr<ext::Extractor> extractor;
  if (kind == "hash") {
    extractor = std::make_unique<ext::HashExtractor>(ell, d, s, k, eps);
  } else if (kind == "walk") {
    ext::WalkParams wp;
    wp.source_len = ell;
    wp.s = 2;
    wp.out_len = s;
    wp.steps = static_cast<unsigned>(ceil_div(s, wp.block_len())) - 1;
    extractor = std::make_unique<ext::WalkExtractor>(wp, k, eps);
  } else if (kind == "guv") {
    extractor = std::make_unique<ext::GuvExtractor>(ell, k, eps, cfg.get_real("ext.alpha", 0.25));
  } else {
    fail(errc::config, "unknown extractor kind: " + kind);
  }

  const int family_count = static_cast<int>(cfg.get_int("family.count", 20));
  auto family = ext::flat_source_family(ell, k, family_count, cfg.get_seed("family.seed", 42));
  Rational worst(0);
  for (const auto& support : family) {
    Rational t = ext::flat_source_tvd(*extractor, support);
    if (worst < t) worst = t;
  }
  bool verified = worst.to_double() <= eps + 1e-12;

  // Sampler property: random functions into small ranges.
  const int v_size = static_cast<int>(cfg.get_int("badset.vsize", 2));
  const int functions = static_cast<int>(cfg.get_int("badset.functions", 10));
  const uint64_t bound = (1ull << (k + 1)) * static_cast<uint64_t>(v_size);
  Rational delta = Rational::from_string(std::to_string(v_size)) * Rational(BigInt(1), BigInt(2)) *
                   Rational::from_string(cfg.get("ext.eps", "1/4"));
  SplitMix64 fgen(cfg.get_seed("family.seed", 42) ^ 0x9E3779B97F4A7C15ull);
  uint64_t worst_count = 0;
  bool bound_ok = true;
  for (int i = 0; i < functions; ++i) {
    std::vector<int> f(1ull << extractor->spec().s);
    for (auto& v : f) v = static_cast<int>(fgen.below(static_cast<uint64_t>(v_size)));
    uint64_t count = ext::sampler_badset_count(*extractor, f, v_size, delta);
    worst_count = std::max(worst_count, count);
    if (count > bound) bound_ok = false;
  }

  nlohmann::ordered_json summary;
  summary["schema"] = 1;
  summary["kind"] = cfg.kind;
  summary["params"] = {{"kind", kind}, {"ell", ell}, {"d", extractor->spec().d},
                       {"s", extractor->spec().s}, {"k", k}, {"eps", fmt_double(eps)}};
  summary["verified"] = verified;
  summary["max_flat_tvd"] = worst.to_string();
  summary["badset_count"] = worst_count;
  summary["bound"] = bound;
  summary["bound_ok"] = bound_ok;
  write_file(out_dir + "/results.json", summary.dump(2) + "\n");
  write_manifest(cfg, out_dir, summary["params"]);
  return {verified && bound_ok ? 0 : 2, summary.dump()};
}

// --- ff-verify ---------------------------------------------------------------

RunOutcome run_ff_verify(const ExperimentConfig& cfg, const std::string& out_dir) {
  nlohmann::ordered_json report;
  report["schema"] = 1;
  report["kind"] = cfg.kind;

  // Generator order table.
  nlohmann::ordered_json powers = nlohmann::ordered_json::array();
  ff::F16 g = ff::kGen;
  ff::F16 acc = 1;
  int order = 0;
  for (int e = 1; e <= 15; ++e) {
    acc = ff::f16_mul(acc, g);
    char buf[8];
    std::snprintf(buf, sizeof buf, "%x", acc);
    powers.push_back(buf);
    if (acc == 1 && order == 0) order = e;
  }
  report["generator_powers"] = powers;
  report["generator_order"] = order;

  nlohmann::ordered_json irr = nlohmann::ordered_json::array();
  for (int a = 0; a <= 2; ++a) {
    irr.push_back({{"poly", "z^(5^" + std::to_string(a) + ") - g^3 over F16"},
                   {"irreducible", ff::irreducible_over_f16(ff::tower_modulus_f16(a))}});
  }
  for (int b = 0; b <= 2; ++b) {
    std::vector<ff::F16> f16coeffs;
    f16coeffs.push_back(ff::kGen5);
    for (uint64_t i = 1; i < ff::EParams{0, b}.n(); ++i) f16coeffs.push_back(0);
    f16coeffs.push_back(1);
    irr.push_back({{"poly", "x^(3^" + std::to_string(b) + ") - g^5 over F16"},
                   {"irreducible", ff::irreducible_over_f16(f16coeffs)}});
    irr.push_back({{"poly", "x^(3^" + std::to_string(b) + ") - g^5 over F(16^5)"},
                   {"irreducible", ff::irreducible_over_fq(ff::guv_modulus_fq(1, b), 1)}});
  }
  report["irreducibility"] = irr;

  // Frobenius powering spot checks against naive squaring.
  SplitMix64 gen(cfg.get_seed("master.seed", 1));
  bool frob_ok = true;
  int checks = 0;
  for (int a = 0; a <= 1 && frob_ok; ++a) {
    for (int b = 1; b <= 2 && frob_ok; ++b) {
      ff::EParams e{a, b};
      for (int rep = 0; rep < 10; ++rep) {
        ff::PolyFq f = ff::poly_zero(a, e.n());
        for (auto& c : f.c)
          for (auto& nib : c.c) nib = static_cast<ff::F16>(gen.below(16));
        uint64_t t = 1 + gen.below(8);
        if (ff::frobenius_power(f, t, e) != ff::naive_pow2k_mod_e(f, t, e)) frob_ok = false;
        ++checks;
      }
    }
  }
  report["frobenius_checks"] = checks;
  report["frobenius_ok"] = frob_ok;

  bool all_ok = frob_ok && order == 15;
  for (const auto& entry : irr)
    if (!entry["irreducible"].get<bool>()) all_ok = false;
  report["ok"] = all_ok;
  write_file(out_dir + "/results.json", report.dump(2) + "\n");
  write_manifest(cfg, out_dir, nlohmann::ordered_json{{"modulus", "w^4+w+1"}, {"generator", "w"}});
  return {all_ok ? 0 : 2, report.dump()};
}

// --- prg-fool ----------------------------------------------------------------

RunOutcome run_prg_fool(const ExperimentConfig& cfg, const std::string& out_dir) {
  const int count = static_cast<int>(cfg.get_int("family.count", 5));
  const uint64_t fseed = cfg.get_seed("family.seed", 7);
  prg::NisanParams np;
  np.space = static_cast<int>(cfg.get_int("prg.space", 4));
  np.eps = cfg.get_real("prg.eps", 0.25);
  np.block_override = static_cast<int>(cfg.get_int("prg.block", 4));

  bp::RandomProgramSpec spec;
  spec.n = static_cast<int>(cfg.get_int("bp.n", 6));
  spec.m = static_cast<int>(cfg.get_int("bp.m", 8));
  spec.width = static_cast<int>(cfg.get_int("bp.width", 4));
  spec.depth = static_cast<int>(cfg.get_int("bp.depth", 8));
  spec.discipline = bp::Discipline::R_OW;
  spec.fresh_randomness = cfg.get_bool("bp.fresh", true);

  np.out_len = static_cast<uint64_t>(spec.m);
  np.validate();

  std::ostringstream csv;
  csv << "program_seed,x,tvd\n";
  double worst = 0;
  SplitMix64 xgen(cfg.get_seed("master.seed", 1));
  for (int i = 0; i < count; ++i) {
    bp::Program p = bp::random_program(spec, fseed + static_cast<uint64_t>(i));
    BitString x = BitString::from_uint(xgen.below(1ull << spec.n), spec.n);
    Rational tv = prg::nisan_fooling_tvd(p, *p.start(), x, np);
    worst = std::max(worst, tv.to_double());
    csv << (fseed + static_cast<uint64_t>(i)) << "," << x.to_string() << "," << fmt_double(tv.to_double())
        << "\n";
  }
  write_file(out_dir + "/results.csv", csv.str());

  bool ok = worst <= np.eps + 1e-12;
  nlohmann::ordered_json summary;
  summary["schema"] = 1;
  summary["kind"] = cfg.kind;
  summary["family"] = count;
  summary["max_tvd"] = fmt_double(worst);
  summary["eps"] = fmt_double(np.eps);
  summary["ok"] = ok;
  write_file(out_dir + "/results.json", summary.dump(2) + "\n");
  write_manifest(cfg, out_dir,
                 nlohmann::ordered_json{{"block_len", np.block_len()},
                                        {"levels", np.levels()},
                                        {"seed_len", np.seed_len()},
                                        {"out_len", np.out_len}});
  return {ok ? 0 : 2, summary.dump()};
}

// --- amplify-check -----------------------------------------------------------

RunOutcome run_amplify_check(const ExperimentConfig& cfg, const std::string& out_dir) {
  bp::RandomProgramSpec spec;
  spec.n = static_cast<int>(cfg.get_int("bp.n", 4));
  spec.m = static_cast<int>(cfg.get_int("bp.m", 2));
  spec.width = static_cast<int>(cfg.get_int("bp.width", 2));
  spec.depth = static_cast<int>(cfg.get_int("bp.depth", 2));
  spec.discipline = bp::Discipline::S_OW;
  bp::Program inner =
      cfg.has("bp.file") ? load_program(cfg) : bp::random_program(spec, cfg.get_seed("bp.seed", 1));

  gip::AmplifyOptions opt;
  opt.delta = cfg.get_real("delta", 0.05);
  if (cfg.has("amplify.r")) opt.r_override = static_cast<int>(cfg.get_int("amplify.r", 9));
  opt.prg.block_override = static_cast<int>(cfg.get_int("prg.block", inner.m()));
  opt.prg.eps = cfg.get_real("prg.eps", 0.1);
  gip::AmplifyResult amp = gip::amplify_sow_to_sr(inner, opt);

  // Inner truth: majority vote over the inner coin space.
  BitString truth;
  for (uint64_t xv = 0; xv < (1ull << inner.n()); ++xv) {
    BitString x = BitString::from_uint(xv, inner.n());
    uint64_t ones = 0;
    for (uint64_t yv = 0; yv < (1ull << inner.m()); ++yv)
      ones += static_cast<uint64_t>(bp::compute_boolean(inner, x, BitString::from_uint(yv, inner.m())));
    truth.push_back(ones * 2 >= (1ull << inner.m()) ? 1 : 0);
  }
  Rational inner_failure = bp::failure_probability(inner, truth);
  Rational amp_failure = bp::failure_probability(amp.program, truth, 1ull << 30);
  bool ok = amp_failure.to_double() <= opt.delta + 1e-12;
  bool sr_ok = bp::validate_discipline(amp.program, bp::Discipline::S_R);

  nlohmann::ordered_json summary;
  summary["schema"] = 1;
  summary["kind"] = cfg.kind;
  summary["r"] = amp.r;
  summary["delta"] = fmt_double(opt.delta);
  summary["inner_failure"] = inner_failure.to_string();
  summary["amplified_failure"] = amp_failure.to_string();
  summary["coins"] = amp.m_bits;
  summary["size"] = amp.program.size();
  summary["predicted_size"] = amp.predicted_size;
  summary["sr_valid"] = sr_ok;
  summary["ok"] = ok && sr_ok;
  write_file(out_dir + "/results.json", summary.dump(2) + "\n");
  write_manifest(cfg, out_dir,
                 nlohmann::ordered_json{{"walk_s", amp.walk_s},
                                        {"label_bits", amp.label_bits},
                                        {"inner_size", inner.size()},
                                        {"inner_queries", inner.queries()}});
  return {ok && sr_ok ? 0 : 2, summary.dump()};
}

}  // namespace

RunOutcome run_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  if (cfg.kind == "hybrid-compare") return run_hybrid_compare(cfg, out_dir);
  if (cfg.kind == "mistake-rate") return run_mistake_rate(cfg, out_dir);
  if (cfg.kind == "extractor-verify") return run_extractor_verify(cfg, out_dir);
  if (cfg.kind == "ff-verify") return run_ff_verify(cfg, out_dir);
  if (cfg.kind == "prg-fool") return run_prg_fool(cfg, out_dir);
  if (cfg.kind == "amplify-check") return run_amplify_check(cfg, out_dir);
  fail(errc::config, "unknown experiment kind: " + cfg.kind);
}

}  // namespace derand::experiment
