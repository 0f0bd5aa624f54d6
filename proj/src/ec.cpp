/*
Copyright 2026 the mmsched authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include "mmsched/ec.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <chrono>
#include <cmath>
#include <set>
#include <utility>
#include <vector>

#include "mmsched/expansion.hpp"
#include "mmsched/simplex.hpp"

namespace mmsched {

namespace {

// Link ids grouped by what they connect; drives the constraint assembly.
struct LinkClasses {
  std::vector<int> enb;  // eNB -> x
  std::vector<int> mm;   // mmBS -> mmBS: these pair up two relay chains
  int num_mmbs = 0;
  int enb_targets = 0;  // distinct first-hop neighbours
};

LinkClasses classify(const Network& net) {
  LinkClasses lc;
  std::set<int> targets;
  for (int e = 0; e < static_cast<int>(net.links.size()); ++e) {
    const Link& l = net.links[e];
    const NodeRole rs = net.nodes[l.src].role;
    const NodeRole rd = net.nodes[l.dst].role;
    if (rs == NodeRole::Enb) {
      lc.enb.push_back(e);
      targets.insert(l.dst);
    } else if (rs == NodeRole::Mmbs && rd == NodeRole::Mmbs) {
      lc.mm.push_back(e);
    }
  }
  lc.num_mmbs = static_cast<int>(net.mmbs_ids().size());
  lc.enb_targets = static_cast<int>(targets.size());
  return lc;
}

void check_input(const Network& net, const EcConfig& cfg) {
  validate(net);
  if (net.expanded)
    throw Error(ErrorCode::AlreadyExpanded,
                "pass the pre-expansion network to the approximate solver");
  if (!(cfg.granularity > 0.0 && cfg.granularity <= 1.0))
    throw Error(ErrorCode::BadInput, "granularity must be in (0, 1]");
  if (cfg.variant == EcVariant::Access) {
    if (!net.has_ues()) throw Error(ErrorCode::NoUes, "");
    if (!all_reachable(net)) throw Error(ErrorCode::UnreachableUe, "");
  } else {
    if (net.has_ues())
      throw Error(ErrorCode::BadInput,
                  "backhaul variants expect no UE nodes; use the access "
                  "variant for them");
    if (net.mmbs_ids().empty())
      throw Error(ErrorCode::BadInput, "no mmBS to schedule for");
    if (!check_connectivity(net)) throw Error(ErrorCode::Disconnected, "");
  }
}

// Number of t'_k variables: one per possible count of concurrently active
// mmBS-mmBS links. Zero for the per-node-budget variant, which does not
// track pairing.
int num_pair_vars(const EcConfig& cfg, const LinkClasses& lc) {
  if (cfg.variant == EcVariant::MultiRf) return 0;
  return lc.num_mmbs / 2;
}

// eNB chain budget: chains beyond the number of distinct first-hop
// neighbours can never carry traffic, so they are excluded up front.
int enb_budget(const Network& net, const LinkClasses& lc, bool* clamped) {
  const int r = net.nodes[net.enb_id()].rf_chains;
  const int rc = std::min(r, lc.enb_targets);
  if (clamped != nullptr) *clamped = rc < r;
  return rc;
}

// Appends the shared feasibility rows. Variables are laid out as
// [t_e per link][t'_k, k = 1..nu][theta if theta_col >= 0]. When theta_col
// is negative the per-destination floor rows use theta_rhs instead.
void append_rows(const Network& net, const EcConfig& cfg,
                 const LinkClasses& lc, int nvars, int theta_col,
                 double theta_rhs, int nu, int rc, DenseLp* lp) {
  const int nlinks = static_cast<int>(net.links.size());
  const auto in = net.in_links();
  const auto out = net.out_links();
  const auto blank = [nvars]() { return std::vector<double>(nvars, 0.0); };
  const auto flow_row = [&](int v) {
    auto row = blank();
    for (int e : in[v]) row[e] += net.links[e].cap_gbps;
    for (int e : out[v]) row[e] -= net.links[e].cap_gbps;
    return row;
  };

  const bool access = cfg.variant == EcVariant::Access;
  for (int v : access ? net.ue_ids() : net.mmbs_ids()) {
    auto row = flow_row(v);
    if (theta_col >= 0) row[theta_col] = -1.0;
    lp->rows.push_back(std::move(row));
    lp->senses.push_back(RowSense::Ge);
    lp->rhs.push_back(theta_col >= 0 ? 0.0 : theta_rhs);
  }
  if (access) {
    // mmBSs relay only: whatever flows in flows out.
    for (int v : net.mmbs_ids()) {
      lp->rows.push_back(flow_row(v));
      lp->senses.push_back(RowSense::Eq);
      lp->rhs.push_back(0.0);
    }
  }

  if (cfg.variant == EcVariant::MultiRf) {
    // One beam per chain at every node, eNB included.
    for (const Node& nd : net.nodes) {
      auto row = blank();
      for (int e : in[nd.id]) row[e] += 1.0;
      for (int e : out[nd.id]) row[e] += 1.0;
      lp->rows.push_back(std::move(row));
      lp->senses.push_back(RowSense::Le);
      lp->rhs.push_back(static_cast<double>(nd.rf_chains));
    }
    return;
  }

  // Single-chain relays. t'_k is the fraction of the frame during which
  // exactly k mmBS-mmBS links are active at once; such links tie up two
  // relay chains each, which is what limits how much the eNB can push.
  const int w = lc.num_mmbs;
  if (nu > 0) {
    auto row_a = blank();  // the t'_k are fractions of one frame
    auto row_b = blank();  // total pair time = sum over links of t_e
    for (int k = 1; k <= nu; ++k) {
      row_a[nlinks + (k - 1)] = 1.0;
      row_b[nlinks + (k - 1)] = static_cast<double>(k);
    }
    for (int e : lc.mm) row_b[e] -= 1.0;
    lp->rows.push_back(std::move(row_a));
    lp->senses.push_back(RowSense::Le);
    lp->rhs.push_back(1.0);
    lp->rows.push_back(std::move(row_b));
    lp->senses.push_back(RowSense::Eq);
    lp->rhs.push_back(0.0);
  } else {
    // nu == 0 means at most one mmBS, hence no mmBS-mmBS links to pair.
    assert(lc.mm.empty());
  }
  {
    // While k pairs are busy only w - 2k relays can face the eNB, so
    // chains beyond that are idled for the duration.
    auto row = blank();
    for (int e : lc.enb) row[e] += 1.0;
    for (int k = 1; k <= nu; ++k)
      row[nlinks + (k - 1)] = std::max(0.0, static_cast<double>(rc - w + 2 * k));
    lp->rows.push_back(std::move(row));
    lp->senses.push_back(RowSense::Le);
    lp->rhs.push_back(static_cast<double>(rc));
  }
  for (const Node& nd : net.nodes) {
    if (nd.role == NodeRole::Enb) continue;
    auto row = blank();
    for (int e : in[nd.id]) row[e] += 1.0;
    for (int e : out[nd.id]) row[e] += 1.0;
    lp->rows.push_back(std::move(row));
    lp->senses.push_back(RowSense::Le);
    lp->rhs.push_back(1.0);
  }
}

LpSolution run_lp(const DenseLp& lp, const char* what) {
  LpSolution sol = solve_dense_lp(lp);
  if (sol.status == LpStatus::Infeasible)
    throw Error(ErrorCode::Infeasible, what);
  if (sol.status == LpStatus::Unbounded)
    throw Error(ErrorCode::Unbounded, what);
  return sol;
}

std::vector<double> link_part(const LpSolution& sol, int nlinks,
                              double drop_tol) {
  std::vector<double> t(sol.x.begin(), sol.x.begin() + nlinks);
  for (double& v : t) {
    if (v < drop_tol) v = 0.0;  // also clears tiny negative LP noise
  }
  return t;
}

}  // namespace

EcLinkTime ec_maxmin_link_time(const Network& net, const EcConfig& cfg) {
  check_input(net, cfg);
  const LinkClasses lc = classify(net);
  const int nlinks = static_cast<int>(net.links.size());
  const int nu = num_pair_vars(cfg, lc);
  bool clamped = false;
  const int rc = enb_budget(net, lc, &clamped);
  const int nvars = nlinks + nu + 1;
  const int theta_col = nvars - 1;

  DenseLp lp;
  lp.maximize = true;
  lp.objective.assign(nvars, 0.0);
  lp.objective[theta_col] = 1.0;
  append_rows(net, cfg, lc, nvars, theta_col, 0.0, nu, rc, &lp);
  const LpSolution sol = run_lp(lp, "worst-rate relaxation");

  EcLinkTime out;
  out.theta = std::max(0.0, sol.objective);
  out.t = link_part(sol, nlinks, cfg.drop_tol);
  out.rf_clamped = cfg.variant != EcVariant::MultiRf && clamped;
  return out;
}

EcLinkTime ec_tput_link_time(const Network& net, double theta,
                             const EcConfig& cfg) {
  check_input(net, cfg);
  if (theta < 0.0)
    throw Error(ErrorCode::BadInput, "worst rate must be non-negative");
  const LinkClasses lc = classify(net);
  const int nlinks = static_cast<int>(net.links.size());
  const int nu = num_pair_vars(cfg, lc);
  bool clamped = false;
  const int rc = enb_budget(net, lc, &clamped);
  const int nvars = nlinks + nu;
  // Back the floor off by a relative hair so the relaxation optimum itself
  // stays numerically feasible as a right-hand side.
  const double floor = theta - 1e-9 * std::max(1.0, theta);

  DenseLp lp;
  lp.maximize = true;
  lp.objective.assign(nvars, 0.0);
  for (int e : lc.enb) lp.objective[e] = net.links[e].cap_gbps;
  append_rows(net, cfg, lc, nvars, -1, floor, nu, rc, &lp);
  const LpSolution sol = run_lp(lp, "network throughput at fixed worst rate");
  const double tput = sol.objective;

  // Second pass: hold the throughput and minimize total busy time. Any
  // directed cycle of active links could be drained without changing a
  // single net rate, so the minimum has none -- the structural bounds on
  // the quantized multigraph rely on that.
  DenseLp cleanup;
  cleanup.maximize = false;
  cleanup.objective.assign(nvars, 0.0);
  for (int e = 0; e < nlinks; ++e) cleanup.objective[e] = 1.0;
  append_rows(net, cfg, lc, nvars, -1, floor, nu, rc, &cleanup);
  {
    std::vector<double> row(nvars, 0.0);
    for (int e : lc.enb) row[e] = net.links[e].cap_gbps;
    cleanup.rows.push_back(std::move(row));
    cleanup.senses.push_back(RowSense::Ge);
    cleanup.rhs.push_back(tput - 1e-9 * std::max(1.0, std::fabs(tput)));
  }
  const LpSolution min_sol = run_lp(cleanup, "busy-time minimization");

  EcLinkTime out;
  out.theta = theta;
  out.t = link_part(min_sol, nlinks, cfg.drop_tol);
  out.rf_clamped = cfg.variant != EcVariant::MultiRf && clamped;
  return out;
}

int ColoringMultigraph::max_degree() const {
  std::vector<int> deg(num_vertices, 0);
  for (const MultigraphEdge& e : edges) {
    ++deg[e.u];
    ++deg[e.v];
  }
  int d = 0;
  for (int x : deg) d = std::max(d, x);
  return d;
}

Coloring color_multigraph(const ColoringMultigraph& g) {
  const int n = g.num_vertices;
  const int m = static_cast<int>(g.edges.size());
  Coloring out;
  out.color.assign(m, -1);
  if (m == 0) return out;
  for (const MultigraphEdge& e : g.edges) {
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n || e.u == e.v)
      throw Error(ErrorCode::BadInput, "multigraph edge endpoints");
  }

  // Stage 1: orient the edges along an Euler circuit so that every vertex
  // ends up with in- and out-degree at most ceil(deg/2). A dummy vertex
  // soaks up one stub from each odd-degree vertex to make all degrees even.
  std::vector<std::array<int, 2>> ends;
  ends.reserve(m + n);
  for (const MultigraphEdge& e : g.edges) ends.push_back({e.u, e.v});
  std::vector<int> deg(n + 1, 0);
  for (const auto& p : ends) {
    ++deg[p[0]];
    ++deg[p[1]];
  }
  for (int v = 0; v < n; ++v) {
    if (deg[v] & 1) {
      ends.push_back({v, n});
      ++deg[v];
      ++deg[n];
    }
  }
  const int me = static_cast<int>(ends.size());
  std::vector<std::vector<int>> inc(n + 1);
  for (int k = 0; k < me; ++k) {
    inc[ends[k][0]].push_back(k);
    inc[ends[k][1]].push_back(k);
  }
  std::vector<int> next(n + 1, 0);
  std::vector<char> used(me, 0);
  std::vector<int> tail(me, -1);
  std::vector<int> stack;
  for (int s = 0; s <= n; ++s) {
    // Walks the whole component the first time it sees a vertex with an
    // unused edge; later starts pop immediately.
    stack.assign(1, s);
    while (!stack.empty()) {
      const int v = stack.back();
      while (next[v] < static_cast<int>(inc[v].size()) &&
             used[inc[v][next[v]]]) {
        ++next[v];
      }
      if (next[v] == static_cast<int>(inc[v].size())) {
        stack.pop_back();
      } else {
        const int k = inc[v][next[v]];
        used[k] = 1;
        tail[k] = v;
        stack.push_back(ends[k][0] == v ? ends[k][1] : ends[k][0]);
      }
    }
  }
  const auto head = [&](int k) {
    return ends[k][0] == tail[k] ? ends[k][1] : ends[k][0];
  };

  // Stage 2: color the bipartite tail/head graph with exactly Delta_B
  // colors by alternating-path flips. Delta_B <= ceil(Delta/2) thanks to
  // the orientation.
  std::vector<int> deg_l(n, 0), deg_r(n, 0);
  for (int k = 0; k < m; ++k) {
    ++deg_l[tail[k]];
    ++deg_r[head(k)];
  }
  int db = 0;
  for (int v = 0; v < n; ++v) db = std::max({db, deg_l[v], deg_r[v]});
  // col_l[v][c] / col_r[v][c]: edge occupying color c at v's tail/head side.
  std::vector<std::vector<int>> col_l(n, std::vector<int>(db, -1));
  std::vector<std::vector<int>> col_r(n, std::vector<int>(db, -1));
  std::vector<int> cb(m, -1);
  const auto first_free = [db](const std::vector<int>& slots) {
    for (int c = 0; c < db; ++c) {
      if (slots[c] < 0) return c;
    }
    assert(false && "a free color always exists below the degree bound");
    return -1;
  };
  std::vector<int> path;
  for (int k = 0; k < m; ++k) {
    const int lv = tail[k];
    const int rv = head(k);
    const int a = first_free(col_l[lv]);
    const int b = first_free(col_r[rv]);
    if (a != b) {
      // Swap colors a and b along the maximal alternating path leaving rv;
      // it can never loop back to rv or reach lv (both miss one of the two
      // colors), so afterwards a is free at both ends.
      path.clear();
      int cur = rv;
      bool right = true;
      int want = a;
      while (true) {
        const int e = right ? col_r[cur][want] : col_l[cur][want];
        if (e < 0) break;
        path.push_back(e);
        cur = right ? tail[e] : head(e);
        right = !right;
        want = want == a ? b : a;
      }
      for (int e : path) {
        col_l[tail[e]][cb[e]] = -1;
        col_r[head(e)][cb[e]] = -1;
      }
      for (int e : path) {
        cb[e] = cb[e] == a ? b : a;
        col_l[tail[e]][cb[e]] = e;
        col_r[head(e)][cb[e]] = e;
      }
    }
    cb[k] = a;
    col_l[lv][a] = k;
    col_r[rv][a] = k;
  }

  // Stage 3: each bipartite class has at most one tail-edge and one
  // head-edge per vertex, i.e. it is a union of paths and cycles in the
  // undirected sense. Alternate two colors along each, with a third for the
  // closing edge of odd cycles.
  std::vector<int> sub(m, -1);
  std::vector<std::vector<int>> by_class(db);
  for (int k = 0; k < m; ++k) by_class[cb[k]].push_back(k);
  std::vector<std::vector<int>> adj(n);
  std::vector<char> done(m, 0);
  const auto other = [&](int k, int v) {
    return ends[k][0] == v ? ends[k][1] : ends[k][0];
  };
  for (const std::vector<int>& cls : by_class) {
    std::vector<int> touched;
    for (int k : cls) {
      adj[ends[k][0]].push_back(k);
      adj[ends[k][1]].push_back(k);
      touched.push_back(ends[k][0]);
      touched.push_back(ends[k][1]);
    }
    const auto walk = [&](int start_edge, int start_vertex) {
      // Colors the whole path/cycle containing start_edge; returns the edge
      // colored last and how many edges the walk covered.
      int v = start_vertex;
      int e = start_edge;
      int parity = 0;
      int count = 0;
      int last = e;
      while (e >= 0 && !done[e]) {
        done[e] = 1;
        sub[e] = parity;
        parity ^= 1;
        ++count;
        last = e;
        v = other(e, v);
        int nxt = -1;
        for (int cand : adj[v]) {
          if (!done[cand]) {
            nxt = cand;
            break;
          }
        }
        e = nxt;
      }
      return std::pair<int, int>(last, count);
    };
    for (int k : cls) {  // paths: launch from endpoints of degree one
      for (const int v : {ends[k][0], ends[k][1]}) {
        if (!done[k] && adj[v].size() == 1) walk(k, v);
      }
    }
    for (int k : cls) {  // what remains are cycles
      if (done[k]) continue;
      const auto [last, count] = walk(k, ends[k][0]);
      if (count & 1) sub[last] = 2;  // odd cycle: closing edge clashes
    }
    for (int v : touched) adj[v].clear();
  }

  // Compact (class, subcolor) pairs into dense color ids.
  std::vector<int> remap(3 * db, -1);
  for (int k = 0; k < m; ++k) remap[3 * cb[k] + sub[k]] = 0;
  int kappa = 0;
  for (int& r : remap) {
    if (r == 0) r = kappa++;
  }
  for (int k = 0; k < m; ++k) out.color[k] = remap[3 * cb[k] + sub[k]];
  out.kappa = kappa;
  return out;
}

EcSchedule ec_schedule(const Network& net, const std::vector<double>& t,
                       const EcConfig& cfg) {
  check_input(net, cfg);
  if (t.size() != net.links.size())
    throw Error(ErrorCode::BadInput, "one active time per link expected");
  for (double v : t) {
    if (!(v >= -kFeasTol))
      throw Error(ErrorCode::BadInput, "negative link active time");
  }
  const double tg = cfg.granularity;

  EcSchedule out;
  out.expanded = cfg.variant == EcVariant::MultiRf ? expand_nodes(net)
                                                   : expand_enb(net);
  const int nexp = static_cast<int>(out.expanded.links.size());
  std::vector<int> copies(net.links.size(), 0);
  for (int e = 0; e < nexp; ++e) ++copies[out.expanded.origin_link[e]];

  // Quantize: each expanded link carries an equal share of its original
  // link's time, cut into full quanta plus one remainder copy so the copy
  // durations sum exactly to the share.
  ColoringMultigraph& mg = out.multigraph;
  mg.num_vertices = static_cast<int>(out.expanded.nodes.size());
  for (int e = 0; e < nexp; ++e) {
    const int orig = out.expanded.origin_link[e];
    if (t[orig] <= cfg.drop_tol) continue;
    const double share = t[orig] / copies[orig];
    int ncopies = static_cast<int>(std::ceil(share / tg - 1e-9));
    if (ncopies < 1) ncopies = 1;
    for (int i = 0; i + 1 < ncopies; ++i) {
      mg.edges.push_back(
          {out.expanded.links[e].src, out.expanded.links[e].dst, tg, e});
    }
    mg.edges.push_back({out.expanded.links[e].src, out.expanded.links[e].dst,
                        share - (ncopies - 1) * tg, e});
  }

  const Coloring coloring = color_multigraph(mg);
  out.kappa = coloring.kappa;
  out.scale = out.kappa * tg > 1.0 + 1e-12 ? 1.0 / (out.kappa * tg) : 1.0;

  // One run of sub-slots per color: within a class the copies are pairwise
  // non-adjacent, so any subset is a matching. Peeling at each distinct
  // duration keeps every copy active for exactly its duration.
  for (int c = 0; c < out.kappa; ++c) {
    std::vector<std::pair<double, int>> cls;  // (duration, expanded link)
    for (int k = 0; k < static_cast<int>(mg.edges.size()); ++k) {
      if (coloring.color[k] == c) cls.push_back({mg.edges[k].duration,
                                                 mg.edges[k].link});
    }
    std::sort(cls.begin(), cls.end());
    double prev = 0.0;
    for (size_t i = 0; i < cls.size(); ++i) {
      if (i > 0 && cls[i].first == cls[i - 1].first) continue;
      const double dur = (cls[i].first - prev) * out.scale;
      prev = cls[i].first;
      if (dur <= 0.0) continue;
      Slot slot;
      slot.duration = dur;
      for (size_t j = i; j < cls.size(); ++j) slot.links.push_back(cls[j].second);
      std::sort(slot.links.begin(), slot.links.end());
      out.schedule.slots.push_back(std::move(slot));
    }
  }

  double total = out.schedule.total_duration();
  if (total > 1.0) {  // only ever by rounding slack; renormalize
    for (Slot& s : out.schedule.slots) s.duration /= total;
    total = 1.0;
  }
  if (total < 1.0 - 1e-12)
    out.schedule.slots.push_back(Slot{{}, 1.0 - total});
  return out;
}

EcRun run_ec(const Network& net, const EcConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const EcLinkTime maxmin = ec_maxmin_link_time(net, cfg);
  const EcLinkTime busy = ec_tput_link_time(net, maxmin.theta, cfg);
  EcSchedule sched = ec_schedule(net, busy.t, cfg);

  EcRun r;
  r.theta_relaxed = maxmin.theta;
  r.rf_clamped = maxmin.rf_clamped;
  r.kappa = sched.kappa;
  r.delta_gm = sched.multigraph.max_degree();
  r.edges_gm = static_cast<long long>(sched.multigraph.edges.size());
  r.throughput = throughput_of_schedule(sched.expanded, sched.schedule);
  r.theta_realized = r.throughput.min();
  r.network_tput = r.throughput.total();
  r.schedule = std::move(sched.schedule);
  r.expanded = std::move(sched.expanded);
  r.wall_ms = std::chrono::duration<double, std::milli>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
  return r;
}

EcBounds ec_bounds(const Network& net, double theta_ref, const EcConfig& cfg) {
  const double w = static_cast<double>(net.mmbs_ids().size());
  const double rr = static_cast<double>(net.nodes[net.enb_id()].rf_chains);
  const double tg = cfg.granularity;
  EcBounds b;
  b.delta_bound = w + rr + 1.0 / tg - 1.0;
  b.edges_bound = 0.5 * (w * w + (2.0 * rr - 1.0) * w + (w + rr) / tg);
  b.vm_bound = static_cast<int>(w + rr);
  b.theta_floor = (2.0 / 3.0) * theta_ref / ((w + rr + 1.0) * tg + 1.0);
  return b;
}

}  // namespace mmsched
