// Copyright 2026 the derand authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end; all functionality comes from the shared library's
// C interface.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "derand.h"

namespace {

struct Global {
  uint64_t seed = 1;
  std::string format = "json";
  bool exact = true;
  uint64_t cap = 1ull << 22;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open " << path << "\n";
    std::exit(1);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

[[noreturn]] void die(drd_status status) {
  std::cerr << "error: " << drd_last_error() << "\n";
  std::exit(status == DRD_E_CHECK ? 2 : 1);
}

void check(drd_status status) {
  if (status != DRD_OK) die(status);
}

struct ProgramHandle {
  drd_program* p = nullptr;
  ~ProgramHandle() { drd_program_free(p); }
};

void load_program(const std::string& path, ProgramHandle& h) {
  check(drd_program_parse(read_file(path).c_str(), &h.p));
}

std::string take_string(char* s) {
  std::string out = s ? s : "";
  drd_string_free(s);
  return out;
}

// Parses "r=6,block=16,eps=0.25" style override lists into JSON fields.
std::string overrides_to_json(const std::string& overrides, const Global& g, uint64_t trials,
                              const std::string& master_seed) {
  std::ostringstream json;
  json << "{";
  json << "\"trials\":" << trials;
  json << ",\"cap\":" << g.cap;
  json << ",\"master_seed\":\"" << (master_seed.empty() ? std::to_string(g.seed) : master_seed) << "\"";
  if (!g.exact) json << ",\"float\":true";
  std::stringstream ss(overrides);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) {
      std::cerr << "error: override '" << item << "' is not key=value\n";
      std::exit(1);
    }
    std::string key = item.substr(0, eq), value = item.substr(eq + 1);
    static const std::vector<std::pair<std::string, std::string>> keymap = {
        {"r", "r"},           {"block", "block"},     {"threshold", "threshold"},
        {"T", "T"},           {"c", "c"},             {"eps", "prg_eps"},
        {"prg-eps", "prg_eps"}, {"prg-block", "prg_block"}, {"ext-d", "ext_d"},
        {"ext-eps", "ext_eps"}, {"v0", "v0"},
    };
    bool found = false;
    for (const auto& [from, to] : keymap) {
      if (key == from) {
        bool numeric = value.find_first_not_of("0123456789.-/") == std::string::npos;
        json << ",\"" << to << "\":" << (numeric ? value : "\"" + value + "\"");
        found = true;
        break;
      }
    }
    if (!found) {
      std::cerr << "error: unknown override key '" << key << "'\n";
      std::exit(1);
    }
  }
  json << "}";
  return json.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"branching-program derandomization toolkit"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--seed", g.seed, "master seed for randomized experiments");
  std::string fmt = "json";
  app.add_option("--format", fmt, "output format: json|csv")->check(CLI::IsMember({"json", "csv"}));
  bool flag_float = false;
  app.add_flag("--float", flag_float, "print probabilities as decimals");
  bool flag_exact = false;
  app.add_flag("--exact", flag_exact, "print probabilities as exact rationals (default)");
  app.add_option("--cap", g.cap, "enumeration cap");

  // validate
  auto* validate = app.add_subcommand("validate", "parse a program and report its structure");
  std::string v_bp, v_disc = "R-OW";
  validate->add_option("--bp", v_bp, "program file")->required();
  validate->add_option("--discipline", v_disc, "discipline to check");

  // eval
  auto* eval = app.add_subcommand("eval", "walk a program on explicit (x, y)");
  std::string e_bp, e_x, e_y;
  uint64_t e_v0 = UINT64_MAX;
  eval->add_option("--bp", e_bp)->required();
  eval->add_option("--x", e_x, "input bits")->required();
  eval->add_option("--y", e_y, "random bits")->required();
  eval->add_option("--v0", e_v0, "start vertex (default: program start)");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "run the low-randomness simulation");
  std::string s_bp, s_x, s_mode = "A", s_overrides, s_master;
  uint64_t s_trials = 10000;
  bool s_exact_law = false;
  simulate->add_option("--bp", s_bp)->required();
  simulate->add_option("--x", s_x, "input bits")->required();
  simulate->add_option("--mode", s_mode, "A|H1|H2|H3|SOW|SOW-H1|SOW-H2");
  simulate->add_option("--trials", s_trials, "Monte-Carlo trials");
  simulate->add_option("--master-seed", s_master, "hex or decimal master seed");
  simulate->add_option("--override", s_overrides, "comma list: r=..,block=..,T=..,c=..,eps=..");
  simulate->add_flag("--exact-law", s_exact_law, "compute the exact law by enumeration");

  // hybrid-compare
  auto* hybrid = app.add_subcommand("hybrid-compare", "per-input TVD table between two modes");
  std::string h_bp, h_modes = "A,H1", h_out = "hybrid-compare-out", h_overrides;
  double h_threshold = 0.25;
  hybrid->add_option("--bp", h_bp)->required();
  hybrid->add_option("--modes", h_modes, "two comma-separated modes");
  hybrid->add_option("--threshold", h_threshold, "bad_flag threshold");
  hybrid->add_option("--out", h_out, "output directory");
  hybrid->add_option("--override", h_overrides, "comma list: r=..,block=..,T=..,c=..,eps=..");

  // extractor-test
  auto* exttest = app.add_subcommand("extractor-test", "verify an extractor and its sampler bound");
  std::string x_kind = "hash";
  uint64_t x_ell = 10, x_d = 4, x_s = 2, x_k = 6;
  std::string x_eps = "1/4";
  bool x_exhaustive = false;
  exttest->add_option("--kind", x_kind, "hash|walk|guv");
  exttest->add_option("--ell", x_ell);
  exttest->add_option("--seed-len", x_d);
  exttest->add_option("--out-len", x_s);
  exttest->add_option("--k", x_k);
  exttest->add_option("--eps", x_eps);
  exttest->add_flag("--exhaustive", x_exhaustive, "run the exhaustive flat-source verification");

  // prg
  auto* prg = app.add_subcommand("prg", "emit a pseudorandom stream in hex");
  std::string p_kind = "nisan", p_seed_hex;
  uint64_t p_len = 16, p_space = 4, p_block = 0;
  std::string p_eps = "0.25";
  prg->add_option("--kind", p_kind, "nisan|nz");
  prg->add_option("--seed-hex", p_seed_hex)->required();
  prg->add_option("--len", p_len, "output bits");
  prg->add_option("--space", p_space, "space bound S");
  prg->add_option("--eps", p_eps);
  prg->add_option("--block", p_block, "base block override");

  // gip
  auto* gipcmd = app.add_subcommand("gip", "deterministic coins R(x) in hex");
  std::string g_x;
  int g_m = 1;
  gipcmd->add_option("--x", g_x, "input bits")->required();
  gipcmd->add_option("--m", g_m, "coin count")->required();

  // derand-sr
  auto* dsr = app.add_subcommand("derand-sr", "exhaustive input-as-coins evaluation");
  std::string d_bp, d_truth;
  bool d_exhaustive = false;
  dsr->add_option("--bp", d_bp)->required();
  dsr->add_option("--truth", d_truth, "truth-table file (2^n bits); default: majority vote");
  dsr->add_flag("--exhaustive", d_exhaustive, "sweep all inputs (always on)");

  // ff-test
  app.add_subcommand("ff-test", "finite-field verification tables");

  // experiment
  auto* exp = app.add_subcommand("experiment", "run a configured experiment");
  std::string exp_config, exp_out = "experiment-out";
  exp->add_option("--config", exp_config, "config file")->required();
  exp->add_option("--out", exp_out, "output directory");

  CLI11_PARSE(app, argc, argv);
  if (flag_float) g.exact = false;
  if (flag_exact) g.exact = true;
  g.format = fmt;

  if (validate->parsed()) {
    ProgramHandle h;
    load_program(v_bp, h);
    char* info = nullptr;
    check(drd_program_info(h.p, &info));
    int ok = 0;
    check(drd_program_validate(h.p, v_disc.c_str(), &ok));
    std::string info_s = take_string(info);
    info_s.pop_back();  // strip the closing brace to append the verdict
    std::cout << info_s << ",\"discipline\":\"" << v_disc << "\",\"valid\":" << (ok ? "true" : "false")
              << "}\n";
    return ok ? 0 : 2;
  }

  if (eval->parsed()) {
    ProgramHandle h;
    load_program(e_bp, h);
    uint32_t v0;
    if (e_v0 == UINT64_MAX) {
      char* info = nullptr;
      check(drd_program_info(h.p, &info));
      std::string s = take_string(info);
      auto pos = s.find("\"start\":");
      if (pos == std::string::npos) {
        std::cerr << "error: program has no start vertex; pass --v0\n";
        return 1;
      }
      v0 = static_cast<uint32_t>(std::stoul(s.substr(pos + 8)));
    } else {
      v0 = static_cast<uint32_t>(e_v0);
    }
    uint32_t out = 0;
    check(drd_program_eval(h.p, v0, e_x.c_str(), e_y.c_str(), &out));
    std::cout << "{\"vertex\":" << out << "}\n";
    return 0;
  }

  if (simulate->parsed()) {
    ProgramHandle h;
    load_program(s_bp, h);
    std::string opts = overrides_to_json(s_overrides, g, s_trials, s_master);
    if (s_exact_law) opts.insert(opts.size() - 1, ",\"exact_law\":true");
    char* out = nullptr;
    check(drd_simulate(h.p, s_x.c_str(), s_mode.c_str(), opts.c_str(), &out));
    std::cout << take_string(out) << "\n";
    return 0;
  }

  if (hybrid->parsed()) {
    std::ostringstream cfg;
    cfg << "kind = hybrid-compare\n";
    cfg << "bp.file = " << h_bp << "\n";
    cfg << "modes = " << h_modes << "\n";
    cfg << "threshold = " << h_threshold << "\n";
    cfg << "master.seed = " << g.seed << "\n";
    std::stringstream ss(h_overrides);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      auto eq = item.find('=');
      if (eq == std::string::npos) continue;
      std::string key = item.substr(0, eq), value = item.substr(eq + 1);
      if (key == "r" || key == "block" || key == "T" || key == "c")
        cfg << "override." << key << " = " << value << "\n";
      else if (key == "eps")
        cfg << "prg.eps = " << value << "\n";
      else if (key == "prg-block")
        cfg << "prg.block = " << value << "\n";
      else if (key == "ext-d")
        cfg << "ext.d = " << value << "\n";
      else if (key == "ext-eps")
        cfg << "ext.eps = " << value << "\n";
    }
    char* summary = nullptr;
    drd_status st = drd_experiment_run(cfg.str().c_str(), h_out.c_str(), &summary);
    if (st != DRD_OK && st != DRD_E_CHECK) die(st);
    if (g.format == "csv")
      std::cout << read_file(h_out + "/results.csv");
    else
      std::cout << take_string(summary) << "\n";
    return st == DRD_E_CHECK ? 2 : 0;
  }

  if (exttest->parsed()) {
    std::ostringstream opts;
    opts << "{\"kind\":\"" << x_kind << "\",\"ell\":" << x_ell << ",\"d\":" << x_d << ",\"s\":" << x_s
         << ",\"k\":" << x_k << ",\"eps\":\"" << x_eps << "\",\"family_seed\":" << g.seed;
    if (!x_exhaustive) opts << ",\"family_count\":4,\"functions\":2";
    opts << "}";
    char* out = nullptr;
    drd_status st = drd_extractor_test(opts.str().c_str(), &out);
    if (st != DRD_OK && st != DRD_E_CHECK) die(st);
    std::cout << take_string(out) << "\n";
    return st == DRD_E_CHECK ? 2 : 0;
  }

  if (prg->parsed()) {
    std::ostringstream opts;
    opts << "{\"space\":" << p_space << ",\"eps\":\"" << p_eps << "\"";
    if (p_block) opts << ",\"block\":" << p_block;
    opts << "}";
    char* out = nullptr;
    check(drd_prg_stream(p_kind.c_str(), opts.str().c_str(), p_seed_hex.c_str(), p_len, &out));
    std::cout << take_string(out) << "\n";
    return 0;
  }

  if (gipcmd->parsed()) {
    char* out = nullptr;
    check(drd_gip_r(g_x.c_str(), g_m, &out));
    std::cout << take_string(out) << "\n";
    return 0;
  }

  if (dsr->parsed()) {
    ProgramHandle h;
    load_program(d_bp, h);
    std::string truth;
    if (!d_truth.empty()) {
      std::istringstream in(read_file(d_truth));
      in >> truth;
    }
    char* csv = nullptr;
    char* summary = nullptr;
    check(drd_derand_sr(h.p, truth.empty() ? nullptr : truth.c_str(), &csv, &summary));
    if (g.format == "csv")
      std::cout << take_string(csv);
    else
      std::cout << take_string(summary) << "\n";
    if (g.format == "csv") drd_string_free(summary);
    return 0;
  }

  if (app.get_subcommand("ff-test")->parsed()) {
    char* out = nullptr;
    drd_status st = drd_ff_test(&out);
    if (st != DRD_OK && st != DRD_E_CHECK) die(st);
    std::cout << take_string(out) << "\n";
    return st == DRD_E_CHECK ? 2 : 0;
  }

  if (exp->parsed()) {
    char* summary = nullptr;
    drd_status st = drd_experiment_run(read_file(exp_config).c_str(), exp_out.c_str(), &summary);
    if (st != DRD_OK && st != DRD_E_CHECK) die(st);
    std::cout << take_string(summary) << "\n";
    return st == DRD_E_CHECK ? 2 : 0;
  }

  return 0;
}
