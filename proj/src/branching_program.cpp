// Copyright 2026 the derand authors
// SPDX-License-Identifier: Apache-2.0

#include "derand/branching_program.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "json.hpp"

namespace derand::bp {

std::string to_string(Discipline d) {
  switch (d) {
    case Discipline::R_OW: return "R-OW";
    case Discipline::S_OW: return "S-OW";
    case Discipline::S_R: return "S-R";
    case Discipline::Unrestricted: return "unrestricted";
  }
  return "?";
}

Discipline discipline_from_string(const std::string& s) {
  if (s == "R-OW" || s == "ROW" || s == "r-ow") return Discipline::R_OW;
  if (s == "S-OW" || s == "SOW" || s == "s-ow") return Discipline::S_OW;
  if (s == "S-R" || s == "SR" || s == "s-r") return Discipline::S_R;
  if (s == "unrestricted" || s == "any") return Discipline::Unrestricted;
  fail(errc::invalid_argument, "unknown discipline: " + s);
}

Program Program::build(int n, int m, std::vector<Vertex> vertices, std::optional<VertexId> start,
                       std::optional<VertexId> accept) {
  if (n < 0 || m < 0) fail(errc::invalid_argument, "negative tape length");
  if (vertices.empty()) fail(errc::invalid_argument, "program needs at least one vertex");
  Program p;
  p.n_ = n;
  p.m_ = m;
  p.verts_ = std::move(vertices);
  std::sort(p.verts_.begin(), p.verts_.end(), [](const Vertex& a, const Vertex& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < p.verts_.size(); ++i) {
    if (p.verts_[i].id == p.verts_[i - 1].id)
      fail(errc::validation, "duplicate vertex id " + std::to_string(p.verts_[i].id));
  }
  for (const Vertex& v : p.verts_) {
    if (v.terminal) continue;
    if (v.i < 1 || v.i > n) fail(errc::validation, "vertex " + std::to_string(v.id) + ": input index out of range");
    if (v.j < 1 || v.j > m) fail(errc::validation, "vertex " + std::to_string(v.id) + ": random index out of range");
    for (VertexId t : v.edges) {
      if (!p.has_vertex(t))
        fail(errc::validation, "vertex " + std::to_string(v.id) + ": dangling edge target " + std::to_string(t));
    }
  }
  if (start && !p.has_vertex(*start)) fail(errc::validation, "start vertex does not exist");
  if (accept && !p.has_vertex(*accept)) fail(errc::validation, "accept vertex does not exist");
  p.start_ = start;
  p.accept_ = accept;

  // Kahn topological sort; leftover vertices mean a cycle.
  std::vector<int> indeg(p.verts_.size(), 0);
  for (const Vertex& v : p.verts_) {
    if (v.terminal) continue;
    for (VertexId t : v.edges) indeg[p.index_of(t)]++;
  }
  std::vector<std::size_t> queue;
  for (std::size_t i = 0; i < p.verts_.size(); ++i)
    if (indeg[i] == 0) queue.push_back(i);
  std::vector<std::size_t> order;
  while (!queue.empty()) {
    std::size_t u = queue.back();
    queue.pop_back();
    order.push_back(u);
    const Vertex& v = p.verts_[u];
    if (v.terminal) continue;
    for (VertexId t : v.edges) {
      std::size_t ti = p.index_of(t);
      if (--indeg[ti] == 0) queue.push_back(ti);
    }
  }
  if (order.size() != p.verts_.size()) fail(errc::validation, "edge relation has a cycle");
  p.topo_ = std::move(order);
  return p;
}

bool Program::has_vertex(VertexId id) const {
  auto it = std::lower_bound(verts_.begin(), verts_.end(), id,
                             [](const Vertex& v, VertexId x) { return v.id < x; });
  return it != verts_.end() && it->id == id;
}

std::size_t Program::index_of(VertexId id) const {
  auto it = std::lower_bound(verts_.begin(), verts_.end(), id,
                             [](const Vertex& v, VertexId x) { return v.id < x; });
  if (it == verts_.end() || it->id != id) fail(errc::invalid_argument, "no vertex with id " + std::to_string(id));
  return static_cast<std::size_t>(it - verts_.begin());
}

const Vertex& Program::vertex(VertexId id) const { return verts_[index_of(id)]; }

int Program::length() const {
  if (length_cache_ >= 0) return length_cache_;
  std::vector<int> depth(verts_.size(), 0);
  int best = 0;
  for (std::size_t k = topo_.size(); k-- > 0;) {
    std::size_t u = topo_[k];
    const Vertex& v = verts_[u];
    if (v.terminal) continue;
    int d = 0;
    for (VertexId t : v.edges) d = std::max(d, depth[index_of(t)]);
    depth[u] = 1 + d;
    best = std::max(best, depth[u]);
  }
  length_cache_ = best;
  return best;
}

int Program::queries() const {
  if (queries_cache_ >= 0) return queries_cache_;
  // g(u) = longest continuation among nonterminal successors, counting steps
  // that move the input head to a new index.
  std::vector<int> g(verts_.size(), 0);
  bool any_nonterminal = false;
  int best = -1;
  for (std::size_t k = topo_.size(); k-- > 0;) {
    std::size_t u = topo_[k];
    const Vertex& v = verts_[u];
    if (v.terminal) continue;
    any_nonterminal = true;
    int val = 0;
    for (VertexId t : v.edges) {
      const Vertex& w = vertex(t);
      if (w.terminal) continue;
      val = std::max(val, (w.i != v.i ? 1 : 0) + g[index_of(t)]);
    }
    g[u] = val;
    best = std::max(best, 1 + val);
  }
  queries_cache_ = any_nonterminal ? best : 0;
  return queries_cache_;
}

// ---------------------------------------------------------------------------

VertexId eval(const Program& p, VertexId v, const BitString& x, const BitString& y) {
  if (static_cast<int>(x.size()) != p.n()) fail(errc::invalid_argument, "input length mismatch");
  if (static_cast<int>(y.size()) != p.m()) fail(errc::invalid_argument, "randomness length mismatch");
  const Vertex* cur = &p.vertex(v);
  std::size_t guard = p.size() + 1;
  while (!cur->terminal) {
    if (guard-- == 0) fail(errc::internal, "walk exceeded vertex count");
    int label = 2 * x[cur->i - 1] + y[cur->j - 1];
    cur = &p.vertex(cur->edges[label]);
  }
  return cur->id;
}

Program restrict(const Program& p, const std::vector<int>& allowed_indices) {
  std::vector<char> allowed(static_cast<std::size_t>(p.n()) + 1, 0);
  for (int i : allowed_indices) {
    if (i < 1 || i > p.n()) fail(errc::invalid_argument, "restriction index out of range: " + std::to_string(i));
    allowed[i] = 1;
  }
  std::vector<Vertex> verts = p.vertices();
  for (Vertex& v : verts) {
    if (!v.terminal && !allowed[v.i]) {
      v.terminal = true;
      v.edges = {};
    }
  }
  return Program::build(p.n(), p.m(), std::move(verts), p.start(), p.accept());
}

bool validate_discipline(const Program& p, Discipline d) {
  if (d == Discipline::Unrestricted) return true;
  for (const Vertex& v : p.vertices()) {
    if (v.terminal) continue;
    for (VertexId t : v.edges) {
      const Vertex& w = p.vertex(t);
      if (w.terminal) continue;
      bool j_ok = (w.j == v.j || w.j == v.j + 1);
      bool i_ok = (w.i >= v.i - 1 && w.i <= v.i + 1);
      switch (d) {
        case Discipline::R_OW:
          if (!j_ok) return false;
          break;
        case Discipline::S_OW:
          if (!j_ok || !i_ok) return false;
          break;
        case Discipline::S_R:
          if (!i_ok) return false;
          break;
        default: break;
      }
    }
  }
  return true;
}

int compute_boolean(const Program& p, const BitString& x, const BitString& y) {
  if (!p.start()) fail(errc::config, "program has no start vertex");
  VertexId t = eval(p, *p.start(), x, y);
  const Vertex& v = p.vertex(t);
  if (v.out < 0) fail(errc::config, "terminal vertex " + std::to_string(t) + " has no output label");
  return v.out;
}

Rational failure_probability(const Program& p, const BitString& truth, uint64_t eval_cap) {
  const int n = p.n(), m = p.m();
  if (n >= 63 || m >= 63) fail(errc::resource, "tape too long for exact enumeration");
  if (truth.size() != (1ull << n)) fail(errc::invalid_argument, "truth table has wrong length");
  uint64_t total = (1ull << n) * (1ull << m);
  if (total > eval_cap)
    fail(errc::resource, "exact enumeration needs " + std::to_string(total) +
                             " evaluations (cap " + std::to_string(eval_cap) + "); use Monte-Carlo sampling instead");
  Rational worst(0);
  for (uint64_t xi = 0; xi < (1ull << n); ++xi) {
    BitString x = BitString::from_uint(xi, n);
    int want = truth[xi];
    uint64_t bad = 0;
    for (uint64_t yi = 0; yi < (1ull << m); ++yi) {
      BitString y = BitString::from_uint(yi, m);
      if (compute_boolean(p, x, y) != want) ++bad;
    }
    Rational fp(BigInt::from_uint64(bad), BigInt::pow2(static_cast<unsigned>(m)));
    if (worst < fp) worst = fp;
  }
  return worst;
}

// ---------------------------------------------------------------------------
// BP text format v1

static Program parse_bp_json(const std::string& text);

Program parse_bp(const std::string& text) {
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return parse_bp_json(text);

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto syntax = [&](const std::string& msg) -> void {
    fail(errc::parse, "line " + std::to_string(lineno) + ": " + msg);
  };

  bool saw_header = false;
  int n = -1, m = -1;
  std::optional<VertexId> start, accept;
  std::vector<Vertex> verts;

  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok == "#") continue;
    if (tok == "bp") {
      int ver = 0;
      if (!(ls >> ver) || ver != 1) syntax("expected format version 1");
      saw_header = true;
    } else if (tok == "n") {
      if (!(ls >> n)) syntax("expected integer after 'n'");
      std::string mk;
      if (!(ls >> mk) || mk != "m" || !(ls >> m)) syntax("expected 'm <int>' after n");
    } else if (tok == "start") {
      VertexId id;
      if (!(ls >> id)) syntax("expected vertex id after 'start'");
      start = id;
    } else if (tok == "accept") {
      VertexId id;
      if (!(ls >> id)) syntax("expected vertex id after 'accept'");
      accept = id;
    } else if (tok == "v") {
      Vertex v;
      if (!(ls >> v.id)) syntax("expected vertex id after 'v'");
      std::string kind;
      if (!(ls >> kind)) syntax("expected 'term' or 'i' after vertex id");
      if (kind == "term") {
        v.terminal = true;
        std::string outk;
        if (ls >> outk) {
          if (outk != "out") syntax("expected 'out' after 'term'");
          if (!(ls >> v.out) || (v.out != 0 && v.out != 1)) syntax("terminal output must be 0 or 1");
        }
      } else if (kind == "i") {
        v.terminal = false;
        if (!(ls >> v.i)) syntax("expected input index after 'i'");
        std::string jk;
        if (!(ls >> jk) || jk != "j" || !(ls >> v.j)) syntax("expected 'j <int>'");
        static const char* names[4] = {"e00", "e01", "e10", "e11"};
        for (int e = 0; e < 4; ++e) {
          std::string ek;
          if (!(ls >> ek) || ek != names[e] || !(ls >> v.edges[e]))
            syntax(std::string("expected '") + names[e] + " <id>'");
        }
      } else {
        syntax("unknown vertex kind '" + kind + "'");
      }
      verts.push_back(v);
    } else {
      syntax("unknown directive '" + tok + "'");
    }
  }
  if (!saw_header) fail(errc::parse, "missing 'bp 1' header");
  if (n < 0 || m < 0) fail(errc::parse, "missing 'n <int> m <int>' line");
  return Program::build(n, m, std::move(verts), start, accept);
}

static Program parse_bp_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(errc::parse, std::string("invalid JSON: ") + e.what());
  }
  if (!j.contains("bp") || j["bp"] != 1) fail(errc::parse, "missing or unsupported 'bp' version");
  int n = j.at("n").get<int>();
  int m = j.at("m").get<int>();
  std::optional<VertexId> start, accept;
  if (j.contains("start")) start = j["start"].get<VertexId>();
  if (j.contains("accept")) accept = j["accept"].get<VertexId>();
  std::vector<Vertex> verts;
  for (const auto& jv : j.at("vertices")) {
    Vertex v;
    v.id = jv.at("id").get<VertexId>();
    if (jv.value("term", false)) {
      v.terminal = true;
      if (jv.contains("out")) v.out = jv["out"].get<int>();
    } else {
      v.terminal = false;
      v.i = jv.at("i").get<int>();
      v.j = jv.at("j").get<int>();
      v.edges[0] = jv.at("e00").get<VertexId>();
      v.edges[1] = jv.at("e01").get<VertexId>();
      v.edges[2] = jv.at("e10").get<VertexId>();
      v.edges[3] = jv.at("e11").get<VertexId>();
    }
    verts.push_back(v);
  }
  return Program::build(n, m, std::move(verts), start, accept);
}

std::string serialize_bp(const Program& p) {
  std::ostringstream out;
  out << "bp 1\n";
  out << "n " << p.n() << " m " << p.m() << "\n";
  if (p.start()) out << "start " << *p.start() << "\n";
  if (p.accept()) out << "accept " << *p.accept() << "\n";
  for (const Vertex& v : p.vertices()) {
    if (v.terminal) {
      out << "v " << v.id << " term";
      if (v.out >= 0) out << " out " << v.out;
      out << "\n";
    } else {
      out << "v " << v.id << " i " << v.i << " j " << v.j << " e00 " << v.edges[0] << " e01 " << v.edges[1]
          << " e10 " << v.edges[2] << " e11 " << v.edges[3] << "\n";
    }
  }
  return out.str();
}

std::string bp_to_json(const Program& p) {
  nlohmann::ordered_json j;
  j["bp"] = 1;
  j["n"] = p.n();
  j["m"] = p.m();
  if (p.start()) j["start"] = *p.start();
  if (p.accept()) j["accept"] = *p.accept();
  j["vertices"] = nlohmann::ordered_json::array();
  for (const Vertex& v : p.vertices()) {
    nlohmann::ordered_json jv;
    jv["id"] = v.id;
    if (v.terminal) {
      jv["term"] = true;
      if (v.out >= 0) jv["out"] = v.out;
    } else {
      jv["i"] = v.i;
      jv["j"] = v.j;
      jv["e00"] = v.edges[0];
      jv["e01"] = v.edges[1];
      jv["e10"] = v.edges[2];
      jv["e11"] = v.edges[3];
    }
    j["vertices"].push_back(jv);
  }
  return j.dump(2);
}

// ---------------------------------------------------------------------------

Program random_program(const RandomProgramSpec& spec, uint64_t seed) {
  if (spec.n < 1 || spec.m < 1) fail(errc::invalid_argument, "random_program: n and m must be positive");
  if (spec.depth < 0 || spec.width < 1 || spec.terminals < 1)
    fail(errc::invalid_argument, "random_program: bad shape");
  uint64_t vertex_count = static_cast<uint64_t>(spec.width) * static_cast<uint64_t>(std::max(spec.depth, 1));
  if (vertex_count > spec.vertex_cap) fail(errc::resource, "random_program: width*depth exceeds cap");
  if (spec.fresh_randomness && spec.depth > spec.m)
    fail(errc::config, "random_program: fresh randomness needs depth <= m");

  SplitMix64 rng(seed);
  std::vector<Vertex> verts;

  if (spec.depth == 0) {
    Vertex t;
    t.id = 0;
    t.terminal = true;
    if (spec.labeled) t.out = 0;
    verts.push_back(t);
    return Program::build(spec.n, spec.m, std::move(verts), 0, std::nullopt);
  }

  // Per-layer access indices keep discipline enforcement trivial.
  std::vector<int> layer_i(spec.depth + 1), layer_j(spec.depth + 1);
  bool sequential_input = spec.discipline == Discipline::S_OW || spec.discipline == Discipline::S_R;
  bool oneway_random = spec.discipline == Discipline::R_OW || spec.discipline == Discipline::S_OW;
  for (int d = 1; d <= spec.depth; ++d) {
    if (d == 1) {
      layer_i[d] = sequential_input ? 1 + static_cast<int>(rng.below(spec.n)) : 0;
      layer_j[d] = 1;
    } else {
      if (sequential_input) {
        int step = static_cast<int>(rng.below(3)) - 1;
        layer_i[d] = std::clamp(layer_i[d - 1] + step, 1, spec.n);
      }
      if (oneway_random || spec.fresh_randomness) {
        int inc = spec.fresh_randomness ? 1 : static_cast<int>(rng.below(2));
        layer_j[d] = std::min(layer_j[d - 1] + inc, spec.m);
      }
    }
  }

  VertexId terminal_base = static_cast<VertexId>(spec.width) * static_cast<VertexId>(spec.depth);
  for (int d = 1; d <= spec.depth; ++d) {
    for (int w = 0; w < spec.width; ++w) {
      Vertex v;
      v.id = static_cast<VertexId>((d - 1) * spec.width + w);
      v.terminal = false;
      v.i = sequential_input ? layer_i[d] : 1 + static_cast<int>(rng.below(spec.n));
      if (oneway_random || spec.fresh_randomness)
        v.j = layer_j[d];
      else
        v.j = 1 + static_cast<int>(rng.below(spec.m));
      bool last = d == spec.depth;
      int fanout = last ? spec.terminals : spec.width;
      VertexId base = last ? terminal_base : static_cast<VertexId>(d) * static_cast<VertexId>(spec.width);
      for (int e = 0; e < 4; ++e) v.edges[e] = base + static_cast<VertexId>(rng.below(fanout));
      verts.push_back(v);
    }
  }
  for (int t = 0; t < spec.terminals; ++t) {
    Vertex v;
    v.id = terminal_base + static_cast<VertexId>(t);
    v.terminal = true;
    if (spec.labeled) v.out = t % 2;
    verts.push_back(v);
  }
  Program p = Program::build(spec.n, spec.m, std::move(verts), 0, std::nullopt);
  if (!validate_discipline(p, spec.discipline))
    fail(errc::internal, "generated program violates requested discipline");
  return p;
}

}  // namespace derand::bp
