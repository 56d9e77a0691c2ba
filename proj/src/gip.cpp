// Copyright 2026 the derand authors
// SPDX-License-Identifier: Apache-2.0

#include "derand/gip.hpp"

#include <algorithm>
#include <cmath>

#include "derand/extractors.hpp"

namespace derand::gip {

GipLayout GipLayout::derive(int n, int m) {
  if (n < 3 || m < 1) fail(errc::invalid_argument, "layout needs n >= 3 and m >= 1");
  if (3 * m > n) fail(errc::invalid_argument, "requires m <= n/3");
  GipLayout L;
  L.n = n;
  L.m = m;
  const int base = n / 3, rem = n % 3;
  L.n1 = base + (rem >= 1 ? 1 : 0);
  L.n2 = base + (rem >= 2 ? 1 : 0);
  L.n3 = base;
  L.ell = base / m;
  if (L.ell < 1) fail(errc::invalid_argument, "block length would be zero");
  return L;
}

int GipLayout::block_start(int third, int j) const {
  if (third < 1 || third > 3 || j < 1 || j > m) fail(errc::invalid_argument, "block index out of range");
  int offset = third >= 2 ? n1 : 0;
  if (third == 3) offset += n2;
  return offset + (j - 1) * ell;
}

int GipLayout::unused_bits(int third) const {
  int len = third == 1 ? n1 : (third == 2 ? n2 : n3);
  return len - m * ell;
}

int gip(const BitString& x, const BitString& y, const BitString& z) {
  if (x.size() != y.size() || y.size() != z.size()) fail(errc::invalid_argument, "gip: length mismatch");
  int acc = 0;
  for (std::size_t i = 0; i < x.size(); ++i) acc ^= (x[i] & y[i] & z[i]);
  return acc;
}

BitString generate_r(const BitString& x, int m) {
  GipLayout L = GipLayout::derive(static_cast<int>(x.size()), m);
  BitString out;
  for (int j = 1; j <= m; ++j) {
    BitString a = x.slice(static_cast<std::size_t>(L.block_start(1, j)), static_cast<std::size_t>(L.ell));
    BitString b = x.slice(static_cast<std::size_t>(L.block_start(2, j)), static_cast<std::size_t>(L.ell));
    BitString c = x.slice(static_cast<std::size_t>(L.block_start(3, j)), static_cast<std::size_t>(L.ell));
    out.push_back(gip(a, b, c));
  }
  return out;
}

int derandomize_sr(const bp::Program& p, const BitString& x) {
  if (!bp::validate_discipline(p, bp::Discipline::S_R))
    fail(errc::invalid_argument, "program violates the S-R discipline");
  if (3 * p.m() > p.n()) fail(errc::invalid_argument, "requires m <= n/3");
  return bp::compute_boolean(p, x, generate_r(x, p.m()));
}

// ---------------------------------------------------------------------------

ProtocolCost protocol_cost(const bp::Program& p, const GipLayout& layout, const BitString& x,
                           const BitString& y) {
  if (!p.start()) fail(errc::config, "program has no start vertex");
  if (layout.n != p.n()) fail(errc::invalid_argument, "layout does not match the program");
  ProtocolCost cost;
  cost.state_bits = ceil_log2(p.size());

  // Party 1 sees thirds 2 and 3, party 3 sees thirds 1 and 2. A read from
  // third 1 therefore forces party 3 to simulate, a read from third 3 forces
  // party 1; middle-third reads keep the current simulator.
  int current = 0;  // 0 = not yet forced
  int64_t step = 0;
  const bp::Vertex* cur = &p.vertex(*p.start());
  while (!cur->terminal) {
    int required = 0;
    if (cur->i <= layout.n1)
      required = 3;
    else if (cur->i > layout.n1 + layout.n2)
      required = 1;
    if (required != 0 && current != required) {
      if (current != 0) {
        cost.handoffs++;
        cost.handoff_steps.push_back(step);
      }
      current = required;
    }
    int label = 2 * x[static_cast<std::size_t>(cur->i - 1)] + y[static_cast<std::size_t>(cur->j - 1)];
    cur = &p.vertex(cur->edges[static_cast<std::size_t>(label)]);
    ++step;
  }
  cost.total_bits = static_cast<int64_t>(cost.handoffs) * (cost.state_bits + cost.frame_bits);
  return cost;
}

// ---------------------------------------------------------------------------
// Amplification

namespace {

struct LayerInfo {
  std::vector<std::size_t> nonterminals;      // indices into pruned program
  std::vector<int> depth;                     // per vertex index
  int terminal_depth = 0;
  int i_start = 0, i_end = 0;
};

// Restricts P to the subgraph reachable from its start vertex and checks the
// layered shape the construction needs: consistent depths, one input index
// per depth, labeled terminals all at the final depth.
bp::Program prune_reachable(const bp::Program& p) {
  if (!p.start()) fail(errc::config, "amplify: program has no start vertex");
  std::vector<char> keep(p.size(), 0);
  std::vector<std::size_t> stack = {p.index_of(*p.start())};
  keep[stack[0]] = 1;
  while (!stack.empty()) {
    std::size_t u = stack.back();
    stack.pop_back();
    const bp::Vertex& v = p.vertex_at(u);
    if (v.terminal) continue;
    for (bp::VertexId t : v.edges) {
      std::size_t ti = p.index_of(t);
      if (!keep[ti]) {
        keep[ti] = 1;
        stack.push_back(ti);
      }
    }
  }
  std::vector<bp::Vertex> verts;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (keep[i]) verts.push_back(p.vertex_at(i));
  return bp::Program::build(p.n(), p.m(), std::move(verts), p.start(), p.accept());
}

LayerInfo analyze_layers(const bp::Program& p) {
  LayerInfo info;
  info.depth.assign(p.size(), -1);
  std::size_t start = p.index_of(*p.start());
  if (p.vertex_at(start).terminal) fail(errc::config, "amplify: start vertex is terminal");
  info.depth[start] = 0;
  for (std::size_t idx : p.topo_order()) {
    if (info.depth[idx] < 0) fail(errc::internal, "amplify: unreachable vertex after pruning");
    const bp::Vertex& v = p.vertex_at(idx);
    if (v.terminal) continue;
    for (bp::VertexId t : v.edges) {
      std::size_t ti = p.index_of(t);
      if (info.depth[ti] < 0)
        info.depth[ti] = info.depth[idx] + 1;
      else if (info.depth[ti] != info.depth[idx] + 1)
        fail(errc::config, "amplify: program is not layered (inconsistent depths)");
    }
  }
  std::vector<int> depth_i;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const bp::Vertex& v = p.vertex_at(i);
    if (v.terminal) {
      if (v.out < 0) fail(errc::config, "amplify: unlabeled terminal");
      if (info.terminal_depth == 0)
        info.terminal_depth = info.depth[i];
      else if (info.terminal_depth != info.depth[i])
        fail(errc::config, "amplify: terminals at mixed depths");
      continue;
    }
    info.nonterminals.push_back(i);
    if (static_cast<int>(depth_i.size()) <= info.depth[i]) depth_i.resize(info.depth[i] + 1, 0);
    if (depth_i[info.depth[i]] == 0)
      depth_i[info.depth[i]] = v.i;
    else if (depth_i[info.depth[i]] != v.i)
      fail(errc::config, "amplify: program needs one input index per depth");
  }
  info.i_start = depth_i.front();
  info.i_end = depth_i.back();
  return info;
}

}  // namespace

AmplifyResult amplify_sow_to_sr(const bp::Program& input, const AmplifyOptions& opt) {
  if (!(opt.delta > 0 && opt.delta < 1.0 / 3.0))
    fail(errc::invalid_argument, "amplify: delta must lie in (0, 1/3)");
  if (!bp::validate_discipline(input, bp::Discipline::S_OW))
    fail(errc::invalid_argument, "amplify: program violates the S-OW discipline");

  bp::Program p = prune_reachable(input);
  LayerInfo layers = analyze_layers(p);

  AmplifyResult res{bp::Program::build(1, 1, {bp::Vertex{}}, std::nullopt, std::nullopt)};
  // r: smallest odd integer >= 8 ln(1/delta); odd to avoid majority ties.
  if (opt.r_override) {
    res.r = *opt.r_override;
    if (res.r < 1 || res.r % 2 == 0) fail(errc::invalid_argument, "amplify: r must be a positive odd integer");
  } else {
    int r = static_cast<int>(std::ceil(8.0 * std::log(1.0 / opt.delta)));
    if (r % 2 == 0) ++r;
    res.r = r;
  }

  prg::NisanParams prg = opt.prg;
  if (prg.space <= 0) prg.space = std::max(1, ceil_log2(p.size()));
  if (prg.out_len == 0) prg.out_len = static_cast<uint64_t>(p.m());
  if (!(prg.eps > 0)) prg.eps = 0.1;
  prg.validate();
  if (prg.out_len < static_cast<uint64_t>(p.m()))
    fail(errc::config, "amplify: generator output shorter than the inner tape");

  const unsigned s = prg.seed_len();
  if (s > 20) fail(errc::resource, "amplify: walk vertex space 2^" + std::to_string(s) + " exceeds cap");
  ext::Expander expander{s};
  const unsigned lb = expander.label_bits();
  res.walk_s = s;
  res.label_bits = lb;
  res.m_bits = s + static_cast<unsigned>(res.r - 1) * lb;

  const uint64_t W = 1ull << s;
  const uint64_t NT = layers.nonterminals.size();
  const int chainlen = std::max(0, std::abs(layers.i_end - layers.i_start) - 1);
  const uint64_t r64 = static_cast<uint64_t>(res.r);
  const uint64_t label_tree = (1ull << lb) - 1;

  // Vertex budget, exact: the start-vertex read tree, per-run inner copies,
  // the head-repositioning chains, the label read trees, two terminals.
  res.predicted_size = (W - 1) + W * NT * (r64 * (r64 + 1) / 2) +
                       W * (static_cast<uint64_t>(chainlen) + label_tree) * ((r64 - 1) * (r64 + 2) / 2) + 2;
  if (res.predicted_size > opt.size_cap)
    fail(errc::resource, "amplify: resulting program would have " + std::to_string(res.predicted_size) +
                             " vertices (cap " + std::to_string(opt.size_cap) + ")");

  // --- id layout -----------------------------------------------------------
  const uint64_t base_start = 0;             // (p, val): offset 2^p - 1 + val
  const uint64_t base_inner = W - 1;         // (t, a, w, nt): t in [1..r], a in [0..t-1]
  auto inner_id = [&](int t, int a, uint64_t w, uint64_t nt) {
    uint64_t t_base = W * NT * (static_cast<uint64_t>(t - 1) * static_cast<uint64_t>(t) / 2);
    return base_inner + t_base + ((static_cast<uint64_t>(a) * W + w) * NT + nt);
  };
  const uint64_t base_bridge = base_inner + W * NT * (r64 * (r64 + 1) / 2);
  const uint64_t bridge_width = static_cast<uint64_t>(chainlen) + label_tree;  // per (t, a', w)
  auto bridge_base = [&](int t, int a, uint64_t w) {
    // t in [1..r-1], a' in [0..t]
    uint64_t t_base = bridge_width * W * ((static_cast<uint64_t>(t) - 1) * (static_cast<uint64_t>(t) + 2) / 2);
    return base_bridge + t_base + (static_cast<uint64_t>(a) * W + w) * bridge_width;
  };
  auto chain_id = [&](int t, int a, uint64_t w, int pos) {
    return bridge_base(t, a, w) + static_cast<uint64_t>(pos);
  };
  auto label_id = [&](int t, int a, uint64_t w, unsigned p, uint64_t val) {
    return bridge_base(t, a, w) + static_cast<uint64_t>(chainlen) + ((1ull << p) - 1) + val;
  };
  const uint64_t terminal0 = base_bridge + bridge_width * W * ((r64 - 1) * (r64 + 2) / 2);
  const uint64_t terminal1 = terminal0 + 1;

  std::vector<uint64_t> nt_index(p.size(), 0);
  for (uint64_t k = 0; k < NT; ++k) nt_index[layers.nonterminals[k]] = k;
  std::size_t inner_start = p.index_of(*p.start());

  auto after_run_target = [&](int t, int a_after, uint64_t w) -> uint64_t {
    if (t == res.r) return a_after > res.r / 2 ? terminal1 : terminal0;
    if (chainlen > 0) return chain_id(t, a_after, w, 0);
    return label_id(t, a_after, w, 0, 0);
  };

  std::vector<bp::Vertex> verts;
  verts.reserve(res.predicted_size);

  // Start-vertex read tree: collects the s bits of the walk start vertex.
  for (unsigned pbits = 0; pbits < s; ++pbits) {
    for (uint64_t val = 0; val < (1ull << pbits); ++val) {
      bp::Vertex v;
      v.id = static_cast<bp::VertexId>(base_start + (1ull << pbits) - 1 + val);
      v.terminal = false;
      v.i = layers.i_start;
      v.j = static_cast<int>(pbits) + 1;
      for (int e = 0; e < 4; ++e) {
        int ybit = e & 1;
        uint64_t nval = (val << 1) | static_cast<uint64_t>(ybit);
        uint64_t target = pbits + 1 < s ? (1ull << (pbits + 1)) - 1 + nval
                                        : inner_id(1, 0, nval, nt_index[inner_start]);
        v.edges[static_cast<std::size_t>(e)] = static_cast<bp::VertexId>(target);
      }
      verts.push_back(v);
    }
  }

  // Inner runs. The tape of run t is the generator output on walk vertex w,
  // materialized statically, so these vertices branch on the input bit alone.
  for (int t = 1; t <= res.r; ++t) {
    for (int a = 0; a < t; ++a) {
      for (uint64_t w = 0; w < W; ++w) {
        BitString tape = prg::nisan_stream(BitString::from_uint(w, s), prg);
        for (uint64_t k = 0; k < NT; ++k) {
          const bp::Vertex& pv = p.vertex_at(layers.nonterminals[k]);
          bp::Vertex v;
          v.id = static_cast<bp::VertexId>(inner_id(t, a, w, k));
          v.terminal = false;
          v.i = pv.i;
          v.j = 1;  // coin reads happen only in the start/label trees
          for (int e = 0; e < 4; ++e) {
            int xbit = (e >> 1) & 1;
            int ybit = tape[static_cast<std::size_t>(pv.j - 1)];
            bp::VertexId pt = pv.edges[static_cast<std::size_t>(2 * xbit + ybit)];
            std::size_t pti = p.index_of(pt);
            const bp::Vertex& pw = p.vertex_at(pti);
            uint64_t target;
            if (!pw.terminal) {
              target = inner_id(t, a, w, nt_index[pti]);
            } else {
              target = after_run_target(t, a + pw.out, w);
            }
            v.edges[static_cast<std::size_t>(e)] = static_cast<bp::VertexId>(target);
          }
          verts.push_back(v);
        }
      }
    }
  }

  // Bridges: head repositioning toward i_start, then the label read tree.
  const int dir = layers.i_end <= layers.i_start ? 1 : -1;
  for (int t = 1; t < res.r; ++t) {
    for (int a = 0; a <= t; ++a) {
      for (uint64_t w = 0; w < W; ++w) {
        for (int pos = 0; pos < chainlen; ++pos) {
          bp::Vertex v;
          v.id = static_cast<bp::VertexId>(chain_id(t, a, w, pos));
          v.terminal = false;
          v.i = layers.i_end + dir * (pos + 1);
          v.j = 1;
          uint64_t target = pos + 1 < chainlen ? chain_id(t, a, w, pos + 1) : label_id(t, a, w, 0, 0);
          for (int e = 0; e < 4; ++e) v.edges[static_cast<std::size_t>(e)] = static_cast<bp::VertexId>(target);
          verts.push_back(v);
        }
        for (unsigned pbits = 0; pbits < lb; ++pbits) {
          for (uint64_t val = 0; val < (1ull << pbits); ++val) {
            bp::Vertex v;
            v.id = static_cast<bp::VertexId>(label_id(t, a, w, pbits, val));
            v.terminal = false;
            v.i = layers.i_start;
            v.j = static_cast<int>(s + static_cast<unsigned>(t - 1) * lb + pbits) + 1;
            for (int e = 0; e < 4; ++e) {
              int ybit = e & 1;
              uint64_t nval = (val << 1) | static_cast<uint64_t>(ybit);
              uint64_t target;
              if (pbits + 1 < lb) {
                target = label_id(t, a, w, pbits + 1, nval);
              } else {
                uint64_t wn = expander.step(w, nval);
                target = inner_id(t + 1, a, wn, nt_index[inner_start]);
              }
              v.edges[static_cast<std::size_t>(e)] = static_cast<bp::VertexId>(target);
            }
            verts.push_back(v);
          }
        }
      }
    }
  }

  for (int out = 0; out < 2; ++out) {
    bp::Vertex v;
    v.id = static_cast<bp::VertexId>(out == 0 ? terminal0 : terminal1);
    v.terminal = true;
    v.out = out;
    verts.push_back(v);
  }

  if (verts.size() != res.predicted_size)
    fail(errc::internal, "amplify: built " + std::to_string(verts.size()) + " vertices, predicted " +
                             std::to_string(res.predicted_size));

  bp::VertexId start_id = s > 0 ? static_cast<bp::VertexId>(base_start)
                                : static_cast<bp::VertexId>(inner_id(1, 0, 0, nt_index[inner_start]));
  res.program = bp::Program::build(p.n(), static_cast<int>(res.m_bits), std::move(verts), start_id,
                                   static_cast<bp::VertexId>(terminal1));
  if (!bp::validate_discipline(res.program, bp::Discipline::S_R))
    fail(errc::internal, "amplify: product program violates the S-R discipline");
  return res;
}

}  // namespace derand::gip
