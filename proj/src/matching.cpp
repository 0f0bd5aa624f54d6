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

#include "mmsched/matching.hpp"

#include <algorithm>
#include <cassert>
#include <map>

namespace mmsched {

namespace {

// Galil-style primal-dual blossom search for maximum-weight matching,
// following the well-known O(V^3) formulation with vertex/blossom duals and
// four delta cases. Indices [0, n) are vertices, [n, 2n) blossom slots.
//
// Edge endpoints are encoded as "endpoint ids": edge k owns endpoints 2k
// (its u side) and 2k+1 (its v side); p ^ 1 is the opposite side of the same
// edge. mate[v] is an endpoint id or -1.
//
// Floating-point note: tight edges are detected with an exact `slack <= 0`
// test, which is safe because after every dual update the edge that
// determined the step is marked allowed explicitly rather than re-tested.
class BlossomMatcher {
 public:
  BlossomMatcher(int n, const std::vector<WeightedEdge>& edges)
      : n_(n), edges_(edges) {
    const int m = (int)edges_.size();
    endpoint_.resize(2 * m);
    neighbend_.resize(n_);
    double maxweight = 0;
    for (int k = 0; k < m; ++k) {
      endpoint_[2 * k] = edges_[k].u;
      endpoint_[2 * k + 1] = edges_[k].v;
      neighbend_[edges_[k].u].push_back(2 * k + 1);
      neighbend_[edges_[k].v].push_back(2 * k);
      maxweight = std::max(maxweight, edges_[k].weight);
    }
    mate_.assign(n_, -1);
    label_.assign(2 * n_, 0);
    labelend_.assign(2 * n_, -1);
    inblossom_.resize(n_);
    for (int v = 0; v < n_; ++v) inblossom_[v] = v;
    blossomparent_.assign(2 * n_, -1);
    blossomchilds_.assign(2 * n_, {});
    blossombase_.assign(2 * n_, -1);
    for (int v = 0; v < n_; ++v) blossombase_[v] = v;
    blossomendps_.assign(2 * n_, {});
    bestedge_.assign(2 * n_, -1);
    blossombestedges_.assign(2 * n_, {});
    hasbestlist_.assign(2 * n_, 0);
    for (int b = 2 * n_ - 1; b >= n_; --b) unusedblossoms_.push_back(b);
    dualvar_.assign(2 * n_, 0.0);
    for (int v = 0; v < n_; ++v) dualvar_[v] = maxweight;
    allowedge_.assign(m, 0);
  }

  // Runs the search; afterwards mate() gives the matched endpoint per vertex.
  void solve() {
    for (int stage = 0; stage < n_; ++stage) {
      std::fill(label_.begin(), label_.end(), 0);
      std::fill(bestedge_.begin(), bestedge_.end(), -1);
      for (int b = n_; b < 2 * n_; ++b) hasbestlist_[b] = 0;
      std::fill(allowedge_.begin(), allowedge_.end(), 0);
      queue_.clear();
      for (int v = 0; v < n_; ++v)
        if (mate_[v] == -1 && label_[inblossom_[v]] == 0)
          assign_label(v, 1, -1);

      bool augmented = false;
      for (;;) {
        while (!queue_.empty() && !augmented) {
          int v = queue_.back();
          queue_.pop_back();
          assert(label_[inblossom_[v]] == 1);
          for (int p : neighbend_[v]) {
            int k = p / 2;
            int w = endpoint_[p];
            if (inblossom_[v] == inblossom_[w]) continue;
            double kslack = 0;
            if (!allowedge_[k]) {
              kslack = slack(k);
              if (kslack <= 0) allowedge_[k] = 1;
            }
            if (allowedge_[k]) {
              if (label_[inblossom_[w]] == 0) {
                assign_label(w, 2, p ^ 1);
              } else if (label_[inblossom_[w]] == 1) {
                int base = scan_blossom(v, w);
                if (base >= 0) {
                  add_blossom(base, k);
                } else {
                  augment_matching(k);
                  augmented = true;
                  break;
                }
              } else if (label_[w] == 0) {
                assert(label_[inblossom_[w]] == 2);
                label_[w] = 2;
                labelend_[w] = p ^ 1;
              }
            } else if (label_[inblossom_[w]] == 1) {
              int b = inblossom_[v];
              if (bestedge_[b] == -1 || kslack < slack(bestedge_[b]))
                bestedge_[b] = k;
            } else if (label_[w] == 0) {
              if (bestedge_[w] == -1 || kslack < slack(bestedge_[w]))
                bestedge_[w] = k;
            }
          }
        }
        if (augmented) break;

        // Dual update: pick the smallest of the four classic step sizes.
        int deltatype = 1;
        int deltaedge = -1, deltablossom = -1;
        double delta = dualvar_[0];
        for (int v = 1; v < n_; ++v) delta = std::min(delta, dualvar_[v]);
        for (int v = 0; v < n_; ++v) {
          if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
            double d = slack(bestedge_[v]);
            if (d < delta) {
              delta = d;
              deltatype = 2;
              deltaedge = bestedge_[v];
            }
          }
        }
        for (int b = 0; b < 2 * n_; ++b) {
          if (blossomparent_[b] == -1 && label_[b] == 1 &&
              bestedge_[b] != -1) {
            double d = slack(bestedge_[b]) / 2;
            if (d < delta) {
              delta = d;
              deltatype = 3;
              deltaedge = bestedge_[b];
            }
          }
        }
        for (int b = n_; b < 2 * n_; ++b) {
          if (blossombase_[b] >= 0 && blossomparent_[b] == -1 &&
              label_[b] == 2 && dualvar_[b] < delta) {
            delta = dualvar_[b];
            deltatype = 4;
            deltablossom = b;
          }
        }
        delta = std::max(delta, 0.0);

        for (int v = 0; v < n_; ++v) {
          int lb = label_[inblossom_[v]];
          if (lb == 1)
            dualvar_[v] -= delta;
          else if (lb == 2)
            dualvar_[v] += delta;
        }
        for (int b = n_; b < 2 * n_; ++b) {
          if (blossombase_[b] >= 0 && blossomparent_[b] == -1) {
            if (label_[b] == 1)
              dualvar_[b] += delta;
            else if (label_[b] == 2)
              dualvar_[b] -= delta;
          }
        }

        if (deltatype == 1) return;  // no tight structure left: optimum
        if (deltatype == 2) {
          allowedge_[deltaedge] = 1;
          int i = edges_[deltaedge].u;
          if (label_[inblossom_[i]] == 0) i = edges_[deltaedge].v;
          assert(label_[inblossom_[i]] == 1);
          queue_.push_back(i);
        } else if (deltatype == 3) {
          allowedge_[deltaedge] = 1;
          assert(label_[inblossom_[edges_[deltaedge].u]] == 1);
          queue_.push_back(edges_[deltaedge].u);
        } else {
          expand_blossom(deltablossom, false);
        }
      }
      // End of a successful stage: discard exhausted S-blossoms.
      for (int b = n_; b < 2 * n_; ++b)
        if (blossomparent_[b] == -1 && blossombase_[b] >= 0 &&
            label_[b] == 1 && dualvar_[b] == 0)
          expand_blossom(b, true);
    }
  }

  const std::vector<int>& mate() const { return mate_; }
  const std::vector<int>& endpoint() const { return endpoint_; }

 private:
  double slack(int k) const {
    return dualvar_[edges_[k].u] + dualvar_[edges_[k].v] -
           2 * edges_[k].weight;
  }

  void leaves_into(int b, std::vector<int>& out) const {
    if (b < n_) {
      out.push_back(b);
      return;
    }
    for (int s : blossomchilds_[b]) leaves_into(s, out);
  }

  void assign_label(int w, int t, int p) {
    int b = inblossom_[w];
    assert(label_[w] == 0 && label_[b] == 0);
    label_[w] = label_[b] = t;
    labelend_[w] = labelend_[b] = p;
    bestedge_[w] = bestedge_[b] = -1;
    if (t == 1) {
      std::vector<int> leaves;
      leaves_into(b, leaves);
      for (int v : leaves) queue_.push_back(v);
    } else {
      int base = blossombase_[b];
      assert(mate_[base] >= 0);
      assign_label(endpoint_[mate_[base]], 1, mate_[base] ^ 1);
    }
  }

  // Trace back from both edge ends simultaneously, dropping breadcrumbs, to
  // find the lowest common S-ancestor (base of a new blossom) or -1 when the
  // paths reach two different roots (an augmenting path).
  int scan_blossom(int v, int w) {
    std::vector<int> path;
    int base = -1;
    while (v != -1 || w != -1) {
      int b = inblossom_[v];
      if (label_[b] & 4) {
        base = blossombase_[b];
        break;
      }
      assert(label_[b] == 1);
      path.push_back(b);
      label_[b] = 5;
      assert(labelend_[b] == mate_[blossombase_[b]]);
      if (labelend_[b] == -1) {
        v = -1;  // reached a root
      } else {
        v = endpoint_[labelend_[b]];
        b = inblossom_[v];
        assert(label_[b] == 2);
        assert(labelend_[b] >= 0);
        v = endpoint_[labelend_[b]];
      }
      if (w != -1) std::swap(v, w);
    }
    for (int b : path) label_[b] = 1;
    return base;
  }

  void add_blossom(int base, int k) {
    int v = edges_[k].u;
    int w = edges_[k].v;
    int bb = inblossom_[base];
    int bv = inblossom_[v];
    int bw = inblossom_[w];
    int b = unusedblossoms_.back();
    unusedblossoms_.pop_back();
    blossombase_[b] = base;
    blossomparent_[b] = -1;
    blossomparent_[bb] = b;
    std::vector<int>& path = blossomchilds_[b];
    std::vector<int>& endps = blossomendps_[b];
    path.clear();
    endps.clear();
    while (bv != bb) {
      blossomparent_[bv] = b;
      path.push_back(bv);
      endps.push_back(labelend_[bv]);
      assert(label_[bv] == 2 || (label_[bv] == 1 &&
                                 labelend_[bv] == mate_[blossombase_[bv]]));
      assert(labelend_[bv] >= 0);
      v = endpoint_[labelend_[bv]];
      bv = inblossom_[v];
    }
    path.push_back(bb);
    std::reverse(path.begin(), path.end());
    std::reverse(endps.begin(), endps.end());
    endps.push_back(2 * k);
    while (bw != bb) {
      blossomparent_[bw] = b;
      path.push_back(bw);
      endps.push_back(labelend_[bw] ^ 1);
      assert(label_[bw] == 2 || (label_[bw] == 1 &&
                                 labelend_[bw] == mate_[blossombase_[bw]]));
      assert(labelend_[bw] >= 0);
      w = endpoint_[labelend_[bw]];
      bw = inblossom_[w];
    }
    assert(label_[bb] == 1);
    label_[b] = 1;
    labelend_[b] = labelend_[bb];
    dualvar_[b] = 0;
    std::vector<int> leaves;
    leaves_into(b, leaves);
    for (int lv : leaves) {
      if (label_[inblossom_[lv]] == 2) queue_.push_back(lv);
      inblossom_[lv] = b;
    }
    // Merge least-slack edge lists of the children.
    std::vector<int> bestedgeto(2 * n_, -1);
    for (int child : path) {
      std::vector<std::vector<int>> nblists;
      if (!hasbestlist_[child]) {
        std::vector<int> cl;
        leaves_into(child, cl);
        for (int lv : cl) {
          std::vector<int> ks;
          ks.reserve(neighbend_[lv].size());
          for (int p : neighbend_[lv]) ks.push_back(p / 2);
          nblists.push_back(std::move(ks));
        }
      } else {
        nblists.push_back(blossombestedges_[child]);
      }
      for (const std::vector<int>& nblist : nblists) {
        for (int ek : nblist) {
          int i = edges_[ek].u, j = edges_[ek].v;
          if (inblossom_[j] == b) std::swap(i, j);
          int bj = inblossom_[j];
          if (bj != b && label_[bj] == 1 &&
              (bestedgeto[bj] == -1 || slack(ek) < slack(bestedgeto[bj])))
            bestedgeto[bj] = ek;
        }
      }
      blossombestedges_[child].clear();
      hasbestlist_[child] = 0;
      bestedge_[child] = -1;
    }
    blossombestedges_[b].clear();
    for (int ek : bestedgeto)
      if (ek != -1) blossombestedges_[b].push_back(ek);
    hasbestlist_[b] = 1;
    bestedge_[b] = -1;
    for (int ek : blossombestedges_[b])
      if (bestedge_[b] == -1 || slack(ek) < slack(bestedge_[b]))
        bestedge_[b] = ek;
  }

  void expand_blossom(int b, bool endstage) {
    for (size_t ci = 0; ci < blossomchilds_[b].size(); ++ci) {
      int s = blossomchilds_[b][ci];
      blossomparent_[s] = -1;
      if (s < n_) {
        inblossom_[s] = s;
      } else if (endstage && dualvar_[s] == 0) {
        expand_blossom(s, endstage);
      } else {
        std::vector<int> leaves;
        leaves_into(s, leaves);
        for (int v : leaves) inblossom_[v] = s;
      }
    }
    if (!endstage && label_[b] == 2) {
      // The expanding blossom was a T-blossom mid-stage: relabel the chain
      // of children between the entry child and the base, and keep the rest
      // reachable.
      assert(labelend_[b] >= 0);
      int entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
      int j = 0;
      const int nch = (int)blossomchilds_[b].size();
      for (; j < nch; ++j)
        if (blossomchilds_[b][j] == entrychild) break;
      int jstep, endptrick;
      if (j & 1) {
        j -= nch;
        jstep = 1;
        endptrick = 0;
      } else {
        jstep = -1;
        endptrick = 1;
      }
      auto child_at = [&](int idx) {
        return blossomchilds_[b][(idx % nch + nch) % nch];
      };
      auto endp_at = [&](int idx) {
        return blossomendps_[b][(idx % nch + nch) % nch];
      };
      int p = labelend_[b];
      while (j != 0) {
        label_[endpoint_[p ^ 1]] = 0;
        label_[endpoint_[endp_at(j - endptrick) ^ endptrick ^ 1]] = 0;
        assign_label(endpoint_[p ^ 1], 2, p);
        allowedge_[endp_at(j - endptrick) / 2] = 1;
        j += jstep;
        p = endp_at(j - endptrick) ^ endptrick;
        allowedge_[p / 2] = 1;
        j += jstep;
      }
      int bv = child_at(j);
      label_[endpoint_[p ^ 1]] = label_[bv] = 2;
      labelend_[endpoint_[p ^ 1]] = labelend_[bv] = p;
      bestedge_[bv] = -1;
      j += jstep;
      while (child_at(j) != entrychild) {
        bv = child_at(j);
        if (label_[bv] == 1) {
          j += jstep;
          continue;
        }
        std::vector<int> leaves;
        leaves_into(bv, leaves);
        int reached = -1;
        for (int v : leaves)
          if (label_[v] != 0) {
            reached = v;
            break;
          }
        if (reached != -1) {
          assert(label_[reached] == 2);
          assert(inblossom_[reached] == bv);
          label_[reached] = 0;
          label_[endpoint_[mate_[blossombase_[bv]]]] = 0;
          assign_label(reached, 2, labelend_[reached]);
        }
        j += jstep;
      }
    }
    label_[b] = -1;
    labelend_[b] = -1;
    blossomchilds_[b].clear();
    blossomendps_[b].clear();
    blossombase_[b] = -1;
    blossombestedges_[b].clear();
    hasbestlist_[b] = 0;
    bestedge_[b] = -1;
    unusedblossoms_.push_back(b);
  }

  // Swap matched/unmatched edges along the path from vertex v down to the
  // base of blossom b, then rotate the child list so v's child becomes base.
  void augment_blossom(int b, int v) {
    int t = v;
    while (blossomparent_[t] != b) t = blossomparent_[t];
    if (t >= n_) augment_blossom(t, v);
    const int nch = (int)blossomchilds_[b].size();
    int i, j, jstep, endptrick;
    i = j = 0;
    for (; j < nch; ++j)
      if (blossomchilds_[b][j] == t) break;
    i = j;
    if (j & 1) {
      j -= nch;
      jstep = 1;
      endptrick = 0;
    } else {
      jstep = -1;
      endptrick = 1;
    }
    auto child_at = [&](int idx) {
      return blossomchilds_[b][(idx % nch + nch) % nch];
    };
    auto endp_at = [&](int idx) {
      return blossomendps_[b][(idx % nch + nch) % nch];
    };
    while (j != 0) {
      j += jstep;
      t = child_at(j);
      int p = endp_at(j - endptrick) ^ endptrick;
      if (t >= n_) augment_blossom(t, endpoint_[p]);
      j += jstep;
      t = child_at(j);
      if (t >= n_) augment_blossom(t, endpoint_[p ^ 1]);
      mate_[endpoint_[p]] = p ^ 1;
      mate_[endpoint_[p ^ 1]] = p;
    }
    std::rotate(blossomchilds_[b].begin(), blossomchilds_[b].begin() + i,
                blossomchilds_[b].end());
    std::rotate(blossomendps_[b].begin(), blossomendps_[b].begin() + i,
                blossomendps_[b].end());
    blossombase_[b] = blossombase_[blossomchilds_[b][0]];
    assert(blossombase_[b] == v);
  }

  void augment_matching(int k) {
    for (int side = 0; side < 2; ++side) {
      int s = side == 0 ? edges_[k].u : edges_[k].v;
      int p = side == 0 ? 2 * k + 1 : 2 * k;
      for (;;) {
        int bs = inblossom_[s];
        assert(label_[bs] == 1);
        assert(labelend_[bs] == mate_[blossombase_[bs]]);
        if (bs >= n_) augment_blossom(bs, s);
        mate_[s] = p;
        if (labelend_[bs] == -1) break;  // reached a root
        int t = endpoint_[labelend_[bs]];
        int bt = inblossom_[t];
        assert(label_[bt] == 2);
        assert(labelend_[bt] >= 0);
        s = endpoint_[labelend_[bt]];
        int j = endpoint_[labelend_[bt] ^ 1];
        assert(blossombase_[bt] == t);
        if (bt >= n_) augment_blossom(bt, j);
        mate_[j] = labelend_[bt];
        p = labelend_[bt] ^ 1;
      }
    }
  }

  int n_;
  std::vector<WeightedEdge> edges_;
  std::vector<int> endpoint_;
  std::vector<std::vector<int>> neighbend_;
  std::vector<int> mate_;
  std::vector<int> label_;
  std::vector<int> labelend_;
  std::vector<int> inblossom_;
  std::vector<int> blossomparent_;
  std::vector<std::vector<int>> blossomchilds_;
  std::vector<int> blossombase_;
  std::vector<std::vector<int>> blossomendps_;
  std::vector<int> bestedge_;
  std::vector<std::vector<int>> blossombestedges_;
  std::vector<char> hasbestlist_;
  std::vector<int> unusedblossoms_;
  std::vector<double> dualvar_;
  std::vector<char> allowedge_;
  std::vector<int> queue_;
};

}  // namespace

double matching_weight(const WeightedGraph& g, const std::vector<int>& edges) {
  std::vector<int> sorted = edges;
  std::sort(sorted.begin(), sorted.end());
  double w = 0;
  for (int e : sorted) w += g.edges[e].weight;
  return w;
}

MatchingResult max_weight_matching(const WeightedGraph& g) {
  // Collapse parallel edges to the heaviest copy (ties: lowest index) and
  // drop non-positive weights; neither can appear in a maximum matching.
  std::map<std::pair<int, int>, int> best;
  for (int k = 0; k < (int)g.edges.size(); ++k) {
    const WeightedEdge& e = g.edges[k];
    if (e.u < 0 || e.v < 0 || e.u >= g.num_vertices || e.v >= g.num_vertices)
      throw Error(ErrorCode::BadInput, "edge endpoint out of range");
    if (e.u == e.v) throw Error(ErrorCode::BadInput, "self-loop edge");
    if (!(e.weight > 0)) continue;
    auto key = std::minmax(e.u, e.v);
    auto [it, inserted] = best.try_emplace({key.first, key.second}, k);
    if (!inserted && e.weight > g.edges[it->second].weight) it->second = k;
  }
  std::vector<WeightedEdge> kept;
  std::vector<int> kept_ids;
  for (const auto& [key, k] : best) {
    kept.push_back(g.edges[k]);
    kept_ids.push_back(k);
  }

  MatchingResult result;
  if (!kept.empty()) {
    BlossomMatcher matcher(g.num_vertices, kept);
    matcher.solve();
    const std::vector<int>& mate = matcher.mate();
    for (int k = 0; k < (int)kept.size(); ++k) {
      if (mate[kept[k].u] == 2 * k + 1 && mate[kept[k].v] == 2 * k)
        result.edges.push_back(kept_ids[k]);
    }
    std::sort(result.edges.begin(), result.edges.end());
  }
  result.weight = matching_weight(g, result.edges);
  return result;
}

std::vector<std::vector<int>> enumerate_matchings(const WeightedGraph& g) {
  if (g.num_vertices > 16)
    throw Error(ErrorCode::TooLarge,
                "matching enumeration limited to 16 vertices");
  constexpr size_t kMaxCount = 1u << 20;
  std::vector<std::vector<int>> out;
  std::vector<int> current;
  std::uint32_t used = 0;

  // Depth-first include/exclude over edges in index order.
  auto rec = [&](auto&& self, int k) -> void {
    if (k == (int)g.edges.size()) {
      if (out.size() >= kMaxCount)
        throw Error(ErrorCode::TooLarge, "more than 2^20 matchings");
      out.push_back(current);
      return;
    }
    const WeightedEdge& e = g.edges[k];
    std::uint32_t mask = (1u << e.u) | (1u << e.v);
    if (e.u != e.v && !(used & mask)) {
      used |= mask;
      current.push_back(k);
      self(self, k + 1);
      current.pop_back();
      used &= ~mask;
    }
    self(self, k + 1);
  };
  rec(rec, 0);

  std::sort(out.begin(), out.end(),
            [](const std::vector<int>& a, const std::vector<int>& b) {
              if (a.size() != b.size()) return a.size() < b.size();
              return a < b;
            });
  return out;
}

MatchingResult max_weight_matching_brute(const WeightedGraph& g) {
  MatchingResult result;
  bool first = true;
  for (const std::vector<int>& m : enumerate_matchings(g)) {
    double w = matching_weight(g, m);
    if (first || w > result.weight ||
        (w == result.weight && m < result.edges)) {
      result.edges = m;
      result.weight = w;
      first = false;
    }
  }
  return result;
}

}  // namespace mmsched
