// Copyright 2026 The toricnbm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "toricnbm/blossom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "toricnbm/errors.hpp"

namespace toricnbm {
namespace {

// Primal-dual weighted blossom algorithm (Edmonds; Galil's formulation).
//
// Vertices are 0..n-1, non-trivial blossoms n..2n-1. Edge k has endpoints
// 2k and 2k+1; endpoint p belongs to vertex endpoint_[p], and p ^ 1 is the
// other end. Labels: 1 = S (outer), 2 = T (inner), 0 = free. Dual variables
// of vertices are u_v, those of blossoms z_b; the slack of edge (i, j) is
// u_i + u_j - 2 w_ij.
class Blossom {
 public:
  Blossom(int n, const std::vector<WeightedEdge>& edges, bool max_cardinality)
      : n_(n), edges_(edges), max_cardinality_(max_cardinality) {}

  std::vector<int> solve();

 private:
  int wrap_index(int j, std::size_t size) const {
    const int s = static_cast<int>(size);
    return ((j % s) + s) % s;
  }
  double slack(int k) const {
    const auto& e = edges_[k];
    return dual_[e.u] + dual_[e.v] - 2.0 * e.weight;
  }
  void leaves(int b, std::vector<int>& out) const {
    if (b < n_) {
      out.push_back(b);
      return;
    }
    for (int t : childs_[b]) leaves(t, out);
  }
  std::vector<int> leaves(int b) const {
    std::vector<int> out;
    leaves(b, out);
    return out;
  }

  void assign_label(int w, int t, int p);
  int scan_blossom(int v, int w);
  void add_blossom(int base, int k);
  void expand_blossom(int b, bool endstage);
  void augment_blossom(int b, int v);
  void augment_matching(int k);

  int n_;
  const std::vector<WeightedEdge>& edges_;
  bool max_cardinality_;

  std::vector<int> endpoint_;
  std::vector<std::vector<int>> neighbend_;
  std::vector<int> mate_;
  std::vector<int> label_;
  std::vector<int> labelend_;
  std::vector<int> inblossom_;
  std::vector<int> parent_;
  std::vector<std::vector<int>> childs_;
  std::vector<int> base_;
  std::vector<std::vector<int>> endps_;
  std::vector<int> bestedge_;
  std::vector<std::vector<int>> blossom_bestedges_;
  std::vector<char> has_bestedges_;
  std::vector<int> unused_;
  std::vector<double> dual_;
  std::vector<char> allowedge_;
  std::vector<int> queue_;
};

void Blossom::assign_label(int w, int t, int p) {
  const int b = inblossom_[w];
  label_[w] = label_[b] = t;
  labelend_[w] = labelend_[b] = p;
  bestedge_[w] = bestedge_[b] = -1;
  if (t == 1) {
    leaves(b, queue_);
  } else if (t == 2) {
    const int base = base_[b];
    assign_label(endpoint_[mate_[base]], 1, mate_[base] ^ 1);
  }
}

// Traces back from v and w to find either a new blossom's base or an
// augmenting path. Returns the base vertex or -1.
int Blossom::scan_blossom(int v, int w) {
  std::vector<int> path;
  int base = -1;
  while (v != -1 || w != -1) {
    int b = inblossom_[v];
    if (label_[b] & 4) {
      base = base_[b];
      break;
    }
    path.push_back(b);
    label_[b] = 5;
    if (labelend_[b] == -1) {
      v = -1;
    } else {
      v = endpoint_[labelend_[b]];
      b = inblossom_[v];
      v = endpoint_[labelend_[b]];
    }
    if (w != -1) std::swap(v, w);
  }
  for (int b : path) label_[b] = 1;
  return base;
}

void Blossom::add_blossom(int base, int k) {
  int v = edges_[k].u, w = edges_[k].v;
  const int bb = inblossom_[base];
  int bv = inblossom_[v];
  int bw = inblossom_[w];
  const int b = unused_.back();
  unused_.pop_back();
  base_[b] = base;
  parent_[b] = -1;
  parent_[bb] = b;
  std::vector<int> path, endps;
  while (bv != bb) {
    parent_[bv] = b;
    path.push_back(bv);
    endps.push_back(labelend_[bv]);
    v = endpoint_[labelend_[bv]];
    bv = inblossom_[v];
  }
  path.push_back(bb);
  std::reverse(path.begin(), path.end());
  std::reverse(endps.begin(), endps.end());
  endps.push_back(2 * k);
  while (bw != bb) {
    parent_[bw] = b;
    path.push_back(bw);
    endps.push_back(labelend_[bw] ^ 1);
    w = endpoint_[labelend_[bw]];
    bw = inblossom_[w];
  }
  childs_[b] = path;
  endps_[b] = endps;
  label_[b] = 1;
  labelend_[b] = labelend_[bb];
  dual_[b] = 0.0;
  for (int leaf : leaves(b)) {
    if (label_[inblossom_[leaf]] == 2) queue_.push_back(leaf);
    inblossom_[leaf] = b;
  }

  std::vector<int> bestedgeto(2 * n_, -1);
  for (int sub : path) {
    std::vector<std::vector<int>> nblists;
    if (!has_bestedges_[sub]) {
      for (int leaf : leaves(sub)) {
        std::vector<int> lst;
        for (int p : neighbend_[leaf]) lst.push_back(p / 2);
        nblists.push_back(std::move(lst));
      }
    } else {
      nblists.push_back(blossom_bestedges_[sub]);
    }
    for (const auto& lst : nblists) {
      for (int kk : lst) {
        int i = edges_[kk].u, j = edges_[kk].v;
        if (inblossom_[j] == b) std::swap(i, j);
        const int bj = inblossom_[j];
        if (bj != b && label_[bj] == 1 && (bestedgeto[bj] == -1 || slack(kk) < slack(bestedgeto[bj])))
          bestedgeto[bj] = kk;
      }
    }
    blossom_bestedges_[sub].clear();
    has_bestedges_[sub] = 0;
    bestedge_[sub] = -1;
  }
  blossom_bestedges_[b].clear();
  for (int kk : bestedgeto)
    if (kk != -1) blossom_bestedges_[b].push_back(kk);
  has_bestedges_[b] = 1;
  bestedge_[b] = -1;
  for (int kk : blossom_bestedges_[b])
    if (bestedge_[b] == -1 || slack(kk) < slack(bestedge_[b])) bestedge_[b] = kk;
}

void Blossom::expand_blossom(int b, bool endstage) {
  for (int s : childs_[b]) {
    parent_[s] = -1;
    if (s < n_) {
      inblossom_[s] = s;
    } else if (endstage && dual_[s] == 0.0) {
      expand_blossom(s, endstage);
    } else {
      for (int leaf : leaves(s)) inblossom_[leaf] = s;
    }
  }
  if (!endstage && label_[b] == 2) {
    auto& ch = childs_[b];
    auto& ep = endps_[b];
    const int entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
    int j = static_cast<int>(std::find(ch.begin(), ch.end(), entrychild) - ch.begin());
    int jstep, endptrick;
    if (j & 1) {
      j -= static_cast<int>(ch.size());
      jstep = 1;
      endptrick = 0;
    } else {
      jstep = -1;
      endptrick = 1;
    }
    int p = labelend_[b];
    while (j != 0) {
      label_[endpoint_[p ^ 1]] = 0;
      label_[endpoint_[ep[wrap_index(j - endptrick, ep.size())] ^ endptrick ^ 1]] = 0;
      assign_label(endpoint_[p ^ 1], 2, p);
      allowedge_[ep[wrap_index(j - endptrick, ep.size())] / 2] = 1;
      j += jstep;
      p = ep[wrap_index(j - endptrick, ep.size())] ^ endptrick;
      allowedge_[p / 2] = 1;
      j += jstep;
    }
    int bv = ch[wrap_index(j, ch.size())];
    label_[endpoint_[p ^ 1]] = label_[bv] = 2;
    labelend_[endpoint_[p ^ 1]] = labelend_[bv] = p;
    bestedge_[bv] = -1;
    j += jstep;
    while (ch[wrap_index(j, ch.size())] != entrychild) {
      bv = ch[wrap_index(j, ch.size())];
      if (label_[bv] == 1) {
        j += jstep;
        continue;
      }
      int found = -1;
      for (int leaf : leaves(bv)) {
        if (label_[leaf] != 0) {
          found = leaf;
          break;
        }
      }
      if (found >= 0) {
        label_[found] = 0;
        label_[endpoint_[mate_[base_[bv]]]] = 0;
        assign_label(found, 2, labelend_[found]);
      }
      j += jstep;
    }
  }
  label_[b] = labelend_[b] = -1;
  childs_[b].clear();
  endps_[b].clear();
  base_[b] = -1;
  blossom_bestedges_[b].clear();
  has_bestedges_[b] = 0;
  bestedge_[b] = -1;
  unused_.push_back(b);
}

void Blossom::augment_blossom(int b, int v) {
  int t = v;
  while (parent_[t] != b) t = parent_[t];
  if (t >= n_) augment_blossom(t, v);
  auto& ch = childs_[b];
  auto& ep = endps_[b];
  const int i = static_cast<int>(std::find(ch.begin(), ch.end(), t) - ch.begin());
  int j = i;
  int jstep, endptrick;
  if (i & 1) {
    j -= static_cast<int>(ch.size());
    jstep = 1;
    endptrick = 0;
  } else {
    jstep = -1;
    endptrick = 1;
  }
  while (j != 0) {
    j += jstep;
    t = ch[wrap_index(j, ch.size())];
    const int p = ep[wrap_index(j - endptrick, ep.size())] ^ endptrick;
    if (t >= n_) augment_blossom(t, endpoint_[p]);
    j += jstep;
    t = ch[wrap_index(j, ch.size())];
    if (t >= n_) augment_blossom(t, endpoint_[p ^ 1]);
    mate_[endpoint_[p]] = p ^ 1;
    mate_[endpoint_[p ^ 1]] = p;
  }
  std::rotate(ch.begin(), ch.begin() + i, ch.end());
  std::rotate(ep.begin(), ep.begin() + i, ep.end());
  base_[b] = base_[ch[0]];
}

void Blossom::augment_matching(int k) {
  const int v = edges_[k].u, w = edges_[k].v;
  const int starts[2][2] = {{v, 2 * k + 1}, {w, 2 * k}};
  for (const auto& sp : starts) {
    int s = sp[0], p = sp[1];
    while (true) {
      const int bs = inblossom_[s];
      if (bs >= n_) augment_blossom(bs, s);
      mate_[s] = p;
      if (labelend_[bs] == -1) break;
      const int t = endpoint_[labelend_[bs]];
      const int bt = inblossom_[t];
      s = endpoint_[labelend_[bt]];
      const int j = endpoint_[labelend_[bt] ^ 1];
      if (bt >= n_) augment_blossom(bt, j);
      mate_[j] = labelend_[bt];
      p = labelend_[bt] ^ 1;
    }
  }
}

std::vector<int> Blossom::solve() {
  const int nedge = static_cast<int>(edges_.size());
  if (n_ == 0) return {};
  double maxweight = 0.0;
  for (const auto& e : edges_) {
    if (e.u < 0 || e.v < 0 || e.u >= n_ || e.v >= n_ || e.u == e.v) throw ConfigError("blossom: invalid edge");
    if (!std::isfinite(e.weight)) throw ConfigError("blossom: non-finite edge weight");
    maxweight = std::max(maxweight, e.weight);
  }
  endpoint_.resize(2 * nedge);
  neighbend_.assign(n_, {});
  for (int k = 0; k < nedge; ++k) {
    endpoint_[2 * k] = edges_[k].u;
    endpoint_[2 * k + 1] = edges_[k].v;
    neighbend_[edges_[k].u].push_back(2 * k + 1);
    neighbend_[edges_[k].v].push_back(2 * k);
  }
  mate_.assign(n_, -1);
  label_.assign(2 * n_, 0);
  labelend_.assign(2 * n_, -1);
  inblossom_.resize(n_);
  for (int v = 0; v < n_; ++v) inblossom_[v] = v;
  parent_.assign(2 * n_, -1);
  childs_.assign(2 * n_, {});
  base_.assign(2 * n_, -1);
  for (int v = 0; v < n_; ++v) base_[v] = v;
  endps_.assign(2 * n_, {});
  bestedge_.assign(2 * n_, -1);
  blossom_bestedges_.assign(2 * n_, {});
  has_bestedges_.assign(2 * n_, 0);
  unused_.clear();
  for (int b = n_; b < 2 * n_; ++b) unused_.push_back(b);
  dual_.assign(2 * n_, 0.0);
  for (int v = 0; v < n_; ++v) dual_[v] = maxweight;
  allowedge_.assign(nedge, 0);

  for (int stage = 0; stage < n_; ++stage) {
    std::fill(label_.begin(), label_.end(), 0);
    std::fill(bestedge_.begin(), bestedge_.end(), -1);
    for (int b = n_; b < 2 * n_; ++b) {
      blossom_bestedges_[b].clear();
      has_bestedges_[b] = 0;
    }
    std::fill(allowedge_.begin(), allowedge_.end(), 0);
    queue_.clear();
    for (int v = 0; v < n_; ++v)
      if (mate_[v] == -1 && label_[inblossom_[v]] == 0) assign_label(v, 1, -1);

    bool augmented = false;
    while (true) {
      while (!queue_.empty() && !augmented) {
        const int v = queue_.back();
        queue_.pop_back();
        for (int p : neighbend_[v]) {
          const int k = p / 2;
          const int w = endpoint_[p];
          if (inblossom_[v] == inblossom_[w]) continue;
          double kslack = 0.0;
          if (!allowedge_[k]) {
            kslack = slack(k);
            if (kslack <= 0.0) allowedge_[k] = 1;
          }
          if (allowedge_[k]) {
            if (label_[inblossom_[w]] == 0) {
              assign_label(w, 2, p ^ 1);
            } else if (label_[inblossom_[w]] == 1) {
              const int base = scan_blossom(v, w);
              if (base >= 0) {
                add_blossom(base, k);
              } else {
                augment_matching(k);
                augmented = true;
                break;
              }
            } else if (label_[w] == 0) {
              label_[w] = 2;
              labelend_[w] = p ^ 1;
            }
          } else if (label_[inblossom_[w]] == 1) {
            const int b = inblossom_[v];
            if (bestedge_[b] == -1 || kslack < slack(bestedge_[b])) bestedge_[b] = k;
          } else if (label_[w] == 0) {
            if (bestedge_[w] == -1 || kslack < slack(bestedge_[w])) bestedge_[w] = k;
          }
        }
      }
      if (augmented) break;

      int deltatype = -1;
      double delta = 0.0;
      int deltaedge = -1, deltablossom = -1;
      if (!max_cardinality_) {
        deltatype = 1;
        delta = *std::min_element(dual_.begin(), dual_.begin() + n_);
      }
      for (int v = 0; v < n_; ++v) {
        if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
          const double d = slack(bestedge_[v]);
          if (deltatype == -1 || d < delta) {
            delta = d;
            deltatype = 2;
            deltaedge = bestedge_[v];
          }
        }
      }
      for (int b = 0; b < 2 * n_; ++b) {
        if (parent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
          const double d = slack(bestedge_[b]) / 2.0;
          if (deltatype == -1 || d < delta) {
            delta = d;
            deltatype = 3;
            deltaedge = bestedge_[b];
          }
        }
      }
      for (int b = n_; b < 2 * n_; ++b) {
        if (base_[b] >= 0 && parent_[b] == -1 && label_[b] == 2 && (deltatype == -1 || dual_[b] < delta)) {
          delta = dual_[b];
          deltatype = 4;
          deltablossom = b;
        }
      }
      if (deltatype == -1) {
        // No further improvement possible; max-cardinality optimum reached.
        deltatype = 1;
        delta = std::max(0.0, *std::min_element(dual_.begin(), dual_.begin() + n_));
      }

      for (int v = 0; v < n_; ++v) {
        const int l = label_[inblossom_[v]];
        if (l == 1) dual_[v] -= delta;
        else if (l == 2) dual_[v] += delta;
      }
      for (int b = n_; b < 2 * n_; ++b) {
        if (base_[b] >= 0 && parent_[b] == -1) {
          if (label_[b] == 1) dual_[b] += delta;
          else if (label_[b] == 2) dual_[b] -= delta;
        }
      }

      if (deltatype == 1) {
        break;
      } else if (deltatype == 2) {
        allowedge_[deltaedge] = 1;
        int i = edges_[deltaedge].u, j = edges_[deltaedge].v;
        if (label_[inblossom_[i]] == 0) std::swap(i, j);
        queue_.push_back(i);
      } else if (deltatype == 3) {
        allowedge_[deltaedge] = 1;
        queue_.push_back(edges_[deltaedge].u);
      } else if (deltatype == 4) {
        expand_blossom(deltablossom, false);
      }
    }
    if (!augmented) break;
    for (int b = n_; b < 2 * n_; ++b) {
      if (parent_[b] == -1 && base_[b] >= 0 && label_[b] == 1 && dual_[b] == 0.0) expand_blossom(b, true);
    }
  }

  std::vector<int> mate(n_, -1);
  for (int v = 0; v < n_; ++v)
    if (mate_[v] >= 0) mate[v] = endpoint_[mate_[v]];
  return mate;
}

}  // namespace

std::vector<int> max_weight_matching(int num_vertices, const std::vector<WeightedEdge>& edges, bool max_cardinality) {
  Blossom solver(num_vertices, edges, max_cardinality);
  return solver.solve();
}

PairMatching mwpm(const DistanceTable& table) {
  const int k = static_cast<int>(table.size());
  if (k % 2 != 0) throw InvariantViolation("mwpm: odd number of defects (" + std::to_string(k) + ")");
  PairMatching out;
  if (k == 0) return out;
  double max_d = 0.0;
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) max_d = std::max(max_d, std::abs(table(a, b)));
  // Maximizing sum(C - d) over perfect matchings minimizes sum(d).
  const double offset = max_d + 1.0;
  std::vector<WeightedEdge> edges;
  edges.reserve(static_cast<std::size_t>(k) * (k - 1) / 2);
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) edges.push_back({a, b, offset - table(a, b)});
  const auto mate = max_weight_matching(k, edges, true);
  for (int a = 0; a < k; ++a) {
    if (mate[a] < 0) throw InvariantViolation("mwpm: matching is not perfect");
    if (a < mate[a]) {
      out.pairs.emplace_back(a, mate[a]);
      out.total_weight += table(a, mate[a]);
    }
  }
  return out;
}

}  // namespace toricnbm
