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

#include "mmsched/mtfs.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>

#include "mmsched/expansion.hpp"
#include "mmsched/matching.hpp"

namespace mmsched {

std::vector<double> column_of_matching(const Network& net, const Matching& m,
                                       const std::vector<int>& rows) {
  if (!is_matching(net, m))
    throw Error(ErrorCode::NonMatchingSlot, "column_of_matching");
  const int base =
      net.expanded ? net.base_node_count : (int)net.nodes.size();
  std::vector<int> row_of(base, -1);
  for (size_t r = 0; r < rows.size(); ++r) {
    if (rows[r] < 0 || rows[r] >= base)
      throw Error(ErrorCode::BadInput, "row node out of range");
    row_of[rows[r]] = (int)r;
  }
  std::vector<double> col(rows.size(), 0.0);
  for (int e : m) {
    const Link& l = net.links[e];
    int s = net.expanded ? net.super_of[l.src] : l.src;
    int d = net.expanded ? net.super_of[l.dst] : l.dst;
    if (row_of[d] >= 0) col[row_of[d]] += l.cap_gbps;
    if (row_of[s] >= 0) col[row_of[s]] -= l.cap_gbps;
  }
  return col;
}

InitialSchedule initial_schedule(const Network& expanded) {
  if (!expanded.expanded) throw Error(ErrorCode::NotExpanded, "");
  const int bn = expanded.base_node_count;
  const int bm = expanded.base_link_count;

  // Reconstruct the pre-expansion links; remember one representative copy
  // (the lowest expanded link id) per original link.
  struct OrigLink {
    int src = -1, dst = -1, first_copy = -1;
    double cap = 0;
  };
  std::vector<OrigLink> olink(bm);
  for (int e = 0; e < (int)expanded.links.size(); ++e) {
    int o = expanded.origin_link[e];
    if (olink[o].first_copy >= 0) continue;
    olink[o] = {expanded.super_of[expanded.links[e].src],
                expanded.super_of[expanded.links[e].dst], e,
                expanded.links[e].cap_gbps};
  }
  std::vector<NodeRole> role(bn, NodeRole::Enb);
  for (const Node& n : expanded.nodes) role[expanded.super_of[n.id]] = n.role;
  bool ues = std::any_of(role.begin(), role.end(),
                         [](NodeRole r) { return r == NodeRole::Ue; });
  auto is_dest = [&](int v) {
    return ues ? role[v] == NodeRole::Ue : role[v] == NodeRole::Mmbs;
  };
  if (std::none_of(role.begin(), role.end(), [&](NodeRole r) {
        return ues ? r == NodeRole::Ue : r == NodeRole::Mmbs;
      }))
    throw Error(ErrorCode::BadInput, "no destinations to schedule for");

  // BFS over pre-expansion nodes from the eNB, ascending neighbour ids.
  std::vector<std::vector<int>> adj(bn);
  for (int o = 0; o < bm; ++o)
    if (olink[o].first_copy >= 0) adj[olink[o].src].push_back(o);
  for (auto& list : adj)
    std::sort(list.begin(), list.end(),
              [&](int a, int b) { return olink[a].dst < olink[b].dst; });
  std::vector<int> tree_link(bn, -1), order;
  std::vector<char> seen(bn, 0);
  seen[0] = 1;
  order.push_back(0);
  for (size_t head = 0; head < order.size(); ++head) {
    int v = order[head];
    for (int o : adj[v]) {
      if (seen[olink[o].dst]) continue;
      seen[olink[o].dst] = 1;
      tree_link[olink[o].dst] = o;
      order.push_back(olink[o].dst);
    }
  }
  for (int v = 0; v < bn; ++v)
    if (!seen[v])
      throw Error(ues ? ErrorCode::UnreachableUe : ErrorCode::Disconnected,
                  "node " + std::to_string(v));

  // Destinations below each node, accumulated leaves-first.
  std::vector<int> below(bn, 0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int v = *it;
    if (is_dest(v)) below[v] += 1;
    if (tree_link[v] >= 0) below[olink[tree_link[v]].src] += below[v];
  }

  double denom = 0;
  for (int v = 1; v < bn; ++v)
    denom += below[v] / olink[tree_link[v]].cap;
  if (!(denom > 0))
    throw Error(ErrorCode::BadInput, "tree serves no destinations");

  InitialSchedule init;
  init.theta0 = 1.0 / denom;
  for (int v = 1; v < bn; ++v) {
    int o = tree_link[v];
    init.slots.push_back({olink[o].first_copy});
    init.durations.push_back(init.theta0 * below[v] / olink[o].cap);
  }
  return init;
}

namespace {

using Clock = std::chrono::steady_clock;

enum class Mode { Backhaul, Access };

class Engine {
 public:
  Engine(const Network& net, Mode mode) : mode_(mode) {
    validate(net);
    if (net.expanded)
      throw Error(ErrorCode::BadInput,
                  "solver expects a pre-expansion network");
    if (mode_ == Mode::Backhaul) {
      if (net.has_ues())
        throw Error(ErrorCode::BadInput,
                    "network has UEs; use solve_access");
      if (net.mmbs_ids().empty())
        throw Error(ErrorCode::BadInput, "no mmBS to schedule for");
      if (!check_connectivity(net)) throw Error(ErrorCode::Disconnected, "");
    } else {
      if (!net.has_ues()) throw Error(ErrorCode::NoUes, "");
      if (!all_reachable(net)) throw Error(ErrorCode::UnreachableUe, "");
    }
    expanded_ = expand_nodes(net);
    if (mode_ == Mode::Backhaul) {
      dest_ = net.mmbs_ids();
    } else {
      dest_ = net.ue_ids();
      relay_ = net.mmbs_ids();
    }
    row_nodes_ = dest_;
    row_nodes_.insert(row_nodes_.end(), relay_.begin(), relay_.end());
    m_ = (int)row_nodes_.size() + 1;
    row_of_.assign(net.nodes.size(), -1);
    for (size_t r = 0; r < row_nodes_.size(); ++r)
      row_of_[row_nodes_[r]] = (int)r;
  }

  MtfsResult run(bool tput_phase, const double* expect_theta) {
    auto t0 = Clock::now();
    build_initial_state();
    price_loop(/*tput=*/false);
    double theta = basic_theta();
    if (expect_theta && std::abs(*expect_theta - theta) > 1e-6)
      throw Error(ErrorCode::BadInput,
                  "theta " + std::to_string(*expect_theta) +
                      " does not match the fairness optimum " +
                      std::to_string(theta));
    if (tput_phase) {
      begin_tput_phase(theta);
      price_loop(/*tput=*/true);
    }

    MtfsResult res;
    res.theta = theta;
    res.schedule = extract_schedule();
    res.expanded = expanded_;
    res.throughput = throughput_of_schedule(expanded_, res.schedule);
    res.network_tput = res.throughput.total();
    log_.pivots = state_->pivots();
    log_.refactorizations = state_->refactorizations();
    log_.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0)
                       .count();
    res.log = log_;
    return res;
  }

 private:
  // Column vector of one LP column: destination/relay rows then the frame-
  // length row.
  std::vector<double> matching_column(const Matching& m) const {
    std::vector<double> col = column_of_matching(expanded_, m, row_nodes_);
    col.push_back(1.0);
    return col;
  }

  std::vector<double> theta_column() const {
    std::vector<double> col(m_, 0.0);
    for (size_t r = 0; r < dest_.size(); ++r) col[r] = -1.0;
    return col;
  }

  std::vector<double> surplus_column(int row) const {
    std::vector<double> col(m_, 0.0);
    col[row] = -1.0;
    return col;
  }

  // Total eNB egress capacity of a matching (ascending link order).
  double egress(const Matching& m) const {
    double s = 0;
    for (int e : m)
      if (expanded_.super_of[expanded_.links[e].src] == 0)
        s += expanded_.links[e].cap_gbps;
    return s;
  }

  void build_initial_state() {
    InitialSchedule init = initial_schedule(expanded_);
    std::vector<ColumnDescriptor> cols;
    std::vector<std::vector<double>> basis;
    std::vector<double> costs;
    for (const Matching& m : init.slots) {
      ColumnDescriptor d;
      d.kind = ColumnDescriptor::Kind::MatchingCol;
      d.matching = m;
      cols.push_back(d);
      basis.push_back(matching_column(m));
      costs.push_back(0.0);
    }
    ColumnDescriptor th;
    th.kind = ColumnDescriptor::Kind::Theta;
    cols.push_back(th);
    basis.push_back(theta_column());
    costs.push_back(-1.0);
    std::vector<double> rhs(m_, 0.0);
    rhs[m_ - 1] = 1.0;
    SimplexTolerances tol;
    tol.bland_after = 3 * m_;
    state_.emplace(std::move(cols), std::move(basis), std::move(costs),
                   std::move(rhs), tol);
  }

  double row_dual(const std::vector<double>& p, int expanded_node) const {
    int r = row_of_[expanded_.super_of[expanded_node]];
    return r >= 0 ? p[r] : 0.0;  // the eNB has no row
  }

  double basic_theta() const {
    const auto& cols = state_->columns();
    for (int i = 0; i < m_; ++i)
      if (cols[i].kind == ColumnDescriptor::Kind::Theta)
        return std::max(0.0, state_->primal()[i]);
    return 0.0;
  }

  void begin_tput_phase(double theta) {
    // The rate column turns into a zero-cost artificial pinned at 0 (same
    // numeric column), theta moves into the rhs, and costs become negated
    // eNB egress so that minimization maximizes network throughput.
    const auto& cols = state_->columns();
    for (int i = 0; i < m_; ++i)
      if (cols[i].kind == ColumnDescriptor::Kind::Theta) {
        ColumnDescriptor art;
        art.kind = ColumnDescriptor::Kind::Artificial;
        state_->retag(i, art, 0.0);
        break;
      }
    std::vector<double> costs(m_, 0.0);
    for (int i = 0; i < m_; ++i)
      if (state_->columns()[i].kind == ColumnDescriptor::Kind::MatchingCol)
        costs[i] = -egress(state_->columns()[i].matching);
    state_->set_costs(std::move(costs));
    std::vector<double> rhs(m_, 0.0);
    for (size_t r = 0; r < dest_.size(); ++r) rhs[r] = theta;
    rhs[m_ - 1] = 1.0;
    state_->set_rhs(std::move(rhs));
  }

  // Column generation: price over all matchings (exact blossom search on
  // dual-derived weights), the rate/artificial column, and the surplus
  // columns; stop when no reduced cost is below -opt.
  void price_loop(bool tput) {
    const double opt_tol = 1e-9;
    for (;;) {
      std::vector<double> p = state_->dual_variables();

      WeightedGraph g;
      g.num_vertices = (int)expanded_.nodes.size();
      // Precompute per-node duals once per iteration.
      std::vector<double> nd(expanded_.nodes.size());
      for (size_t v = 0; v < expanded_.nodes.size(); ++v)
        nd[v] = row_dual(p, (int)v);
      for (int e = 0; e < (int)expanded_.links.size(); ++e) {
        const Link& l = expanded_.links[e];
        double w = l.cap_gbps * (nd[l.dst] - nd[l.src]);
        if (tput && expanded_.super_of[l.src] == 0) w += l.cap_gbps;
        if (w > 0) g.edges.push_back({l.src, l.dst, w, e});
      }
      MatchingResult best = max_weight_matching(g);
      Matching entering;
      for (int idx : best.edges) entering.push_back(g.edges[idx].link);
      std::sort(entering.begin(), entering.end());

      double eta1 = -best.weight - p[m_ - 1];
      double sum_dest = 0, min_dest = p[0];
      for (size_t r = 0; r < dest_.size(); ++r) {
        sum_dest += p[r];
        min_dest = std::min(min_dest, p[r]);
      }
      double eta2 = tput ? sum_dest : (sum_dest - 1.0);
      double eta3 = min_dest;
      log_.eta1 = eta1;
      log_.eta2 = eta2;
      log_.eta3 = eta3;
      double eta = std::min(eta1, std::min(eta2, eta3));
      if (eta >= -opt_tol) return;

      ColumnDescriptor desc;
      std::vector<double> col;
      double cost = 0;
      if (eta1 <= eta2 && eta1 <= eta3) {
        desc.kind = ColumnDescriptor::Kind::MatchingCol;
        desc.matching = entering;
        col = matching_column(entering);
        cost = tput ? -egress(entering) : 0.0;
        ++log_.columns_generated;
      } else if (eta2 <= eta3) {
        desc.kind = tput ? ColumnDescriptor::Kind::Artificial
                         : ColumnDescriptor::Kind::Theta;
        col = theta_column();
        cost = tput ? 0.0 : -1.0;
      } else {
        int arg = 0;
        for (size_t r = 1; r < dest_.size(); ++r)
          if (p[r] < p[arg]) arg = (int)r;
        desc.kind = ColumnDescriptor::Kind::Surplus;
        desc.surplus_row = arg;
        col = surplus_column(arg);
        cost = 0.0;
      }

      // A column already in the basis has true reduced cost zero; pricing
      // it again means we're chasing rounding noise. Declare convergence.
      bool duplicate = false;
      for (const ColumnDescriptor& c : state_->columns())
        if (c == desc) {
          duplicate = true;
          break;
        }
      if (duplicate) return;

      state_->pivot(desc, col, cost);
    }
  }

  Schedule extract_schedule() const {
    Schedule s;
    const auto& cols = state_->columns();
    const auto& x = state_->primal();
    double covered = 0;
    for (int i = 0; i < m_; ++i) {
      if (cols[i].kind != ColumnDescriptor::Kind::MatchingCol) continue;
      if (x[i] <= kFeasTol) continue;  // dropped to idle
      s.slots.push_back({cols[i].matching, x[i]});
      covered += x[i];
    }
    double idle = 1.0 - covered;
    if (idle > 1e-12) s.slots.push_back({{}, idle});
    return s;
  }

  Mode mode_;
  Network expanded_;
  std::vector<int> dest_, relay_, row_nodes_;
  std::vector<int> row_of_;  // pre-expansion node id -> row index or -1
  int m_ = 0;
  std::optional<SimplexState> state_;
  SolveLog log_;
};

}  // namespace

MtfsResult solve_maxmin(const Network& net) {
  return Engine(net, Mode::Backhaul).run(false, nullptr);
}

MtfsResult solve_mtfs(const Network& net) {
  return Engine(net, Mode::Backhaul).run(true, nullptr);
}

MtfsResult solve_mtfs(const Network& net, double theta) {
  return Engine(net, Mode::Backhaul).run(true, &theta);
}

MtfsResult solve_access(const Network& net) {
  return Engine(net, Mode::Access).run(false, nullptr);
}

MtfsResult solve_access_mtfs(const Network& net) {
  return Engine(net, Mode::Access).run(true, nullptr);
}

}  // namespace mmsched
