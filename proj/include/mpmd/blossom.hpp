#pragma once

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>
#include <vector>

namespace mpmd {

// Maximum-weight matching on a dense graph via the O(n^3) primal-dual blossom
// method with per-node slack caching. Dual labels are kept doubled (lab = 2y
// on vertices, 2z on blossom nodes) so the integer instantiation stays
// integral throughout. Absent edges carry weight 0 and are never used;
// callers must shift weights so every real edge weight is >= 1.
//
// With weights shifted as C - w (C large enough that cardinality dominates),
// the maximum-weight matching returned here is a minimum-weight perfect
// matching of the original instance whenever one exists.
template <class W>
class BlossomMatcher {
public:
  // eps: slack tolerance on tightness checks. 0 for exact integer weights.
  BlossomMatcher(int n, W eps) : n_(n), eps_(eps) {
    int cap = 2 * n_ + 1;
    slots_ = cap;
    g_.assign(static_cast<size_t>(cap) * cap, Edge{});
    for (int u = 0; u < cap; ++u)
      for (int v = 0; v < cap; ++v) edge_at(u, v) = Edge{W(0), u, v};
    lab_.assign(cap, W(0));
    match_.assign(cap, 0);
    slack_.assign(cap, 0);
    st_.assign(cap, 0);
    pa_.assign(cap, 0);
    state_.assign(cap, -1);
    vis_.assign(cap, 0);
    flower_.assign(cap, {});
    from_.assign(static_cast<size_t>(cap) * cap, 0);
  }

  // 0-based endpoints; w >= 1. Unset pairs stay absent.
  void set_weight(int u, int v, W w) {
    if (w < W(1)) throw std::invalid_argument("blossom: edge weights must be >= 1");
    edge_at(u + 1, v + 1).w = w;
    edge_at(v + 1, u + 1).w = w;
  }

  void solve() {
    node_count_ = n_;
    std::fill(st_.begin(), st_.end(), 0);
    std::fill(match_.begin(), match_.end(), 0);
    std::fill(lab_.begin(), lab_.end(), W(0));
    for (int x = 1; x <= n_; ++x) {
      st_[x] = x;
      flower_[x].clear();
      from_at(x, x) = x;
    }
    W w_max = W(0);
    for (int u = 1; u <= n_; ++u)
      for (int v = 1; v <= n_; ++v) w_max = std::max(w_max, edge_at(u, v).w);
    for (int x = 1; x <= n_; ++x) lab_[x] = w_max;
    while (run_phase()) {
    }
  }

  // 0-based partner, -1 if unmatched.
  int mate(int v) const { return match_[v + 1] - 1; }

  bool perfect() const {
    for (int v = 1; v <= n_; ++v)
      if (!match_[v]) return false;
    return true;
  }

  W matched_weight() const {
    W total = W(0);
    for (int v = 1; v <= n_; ++v)
      if (match_[v] > v) total += edge_at(v, match_[v]).w;
    return total;
  }

  // Doubled duals for certificate checks: vertex_label(v) = 2 y_v.
  W vertex_label(int v) const { return lab_[v + 1]; }

  struct BlossomDual {
    std::vector<int> vertices;  // 0-based original vertices
    W label2;                   // 2 z_B
  };

  // Every allocated, unexpanded blossom node (including nested ones).
  std::vector<BlossomDual> blossom_duals() const {
    std::vector<BlossomDual> out;
    for (int b = n_ + 1; b <= node_count_; ++b) {
      if (!st_[b]) continue;
      BlossomDual d;
      d.label2 = lab_[b];
      collect_vertices(b, d.vertices);
      out.push_back(std::move(d));
    }
    return out;
  }

  bool edge_present(int u, int v) const { return edge_at(u + 1, v + 1).w > W(0); }
  W edge_weight(int u, int v) const { return edge_at(u + 1, v + 1).w; }

private:
  struct Edge {
    W w = W(0);
    int u = 0, v = 0;
  };

  Edge& edge_at(int u, int v) { return g_[static_cast<size_t>(u) * slots_ + v]; }
  const Edge& edge_at(int u, int v) const { return g_[static_cast<size_t>(u) * slots_ + v]; }
  int& from_at(int b, int x) { return from_[static_cast<size_t>(b) * slots_ + x]; }
  int from_at(int b, int x) const { return from_[static_cast<size_t>(b) * slots_ + x]; }

  // Doubled slack; the weight is read back through the original endpoints so
  // copied representative edges can never go stale.
  W delta2(const Edge& e) const { return lab_[e.u] + lab_[e.v] - edge_at(e.u, e.v).w * W(2); }
  bool tight(const Edge& e) const { return delta2(e) <= eps_; }

  void collect_vertices(int x, std::vector<int>& out) const {
    if (x <= n_) {
      out.push_back(x - 1);
      return;
    }
    for (int t : flower_[x]) collect_vertices(t, out);
  }

  void update_slack(int u, int x) {
    if (!slack_[x] || delta2(edge_at(u, x)) < delta2(edge_at(slack_[x], x))) slack_[x] = u;
  }

  void set_slack(int x) {
    slack_[x] = 0;
    for (int u = 1; u <= n_; ++u)
      if (edge_at(u, x).w > W(0) && st_[u] != x && state_[st_[u]] == 0) update_slack(u, x);
  }

  void queue_push(int x) {
    if (x <= n_) {
      queue_.push_back(x);
    } else {
      for (int t : flower_[x]) queue_push(t);
    }
  }

  void set_st(int x, int b) {
    st_[x] = b;
    if (x > n_)
      for (int t : flower_[x]) set_st(t, b);
  }

  // Position of sub-node xr in flower_[b], rotated to an even index so the
  // path from the base alternates correctly.
  int get_pr(int b, int xr) {
    auto it = std::find(flower_[b].begin(), flower_[b].end(), xr);
    int pr = static_cast<int>(it - flower_[b].begin());
    if (pr % 2 == 1) {
      std::reverse(flower_[b].begin() + 1, flower_[b].end());
      return static_cast<int>(flower_[b].size()) - pr;
    }
    return pr;
  }

  void set_match(int u, int v) {
    match_[u] = edge_at(u, v).v;
    if (u <= n_) return;
    Edge e = edge_at(u, v);
    int xr = from_at(u, e.u);
    int pr = get_pr(u, xr);
    for (int i = 0; i < pr; ++i) set_match(flower_[u][i], flower_[u][i ^ 1]);
    set_match(xr, v);
    std::rotate(flower_[u].begin(), flower_[u].begin() + pr, flower_[u].end());
  }

  void augment(int u, int v) {
    while (true) {
      int xnv = st_[match_[u]];
      set_match(u, v);
      if (!xnv) return;
      set_match(xnv, st_[pa_[xnv]]);
      u = st_[pa_[xnv]];
      v = xnv;
    }
  }

  int get_lca(int u, int v) {
    for (++vis_stamp_; u || v; std::swap(u, v)) {
      if (u == 0) continue;
      if (vis_[u] == vis_stamp_) return u;
      vis_[u] = vis_stamp_;
      u = st_[match_[u]];
      if (u) u = st_[pa_[u]];
    }
    return 0;
  }

  void add_blossom(int u, int lca, int v) {
    int b = n_ + 1;
    while (b <= node_count_ && st_[b]) ++b;
    if (b > node_count_) ++node_count_;
    lab_[b] = W(0);
    state_[b] = 0;
    match_[b] = match_[lca];
    flower_[b].clear();
    flower_[b].push_back(lca);
    for (int x = u, y; x != lca; x = st_[pa_[y]]) {
      flower_[b].push_back(x);
      flower_[b].push_back(y = st_[match_[x]]);
      queue_push(y);
    }
    std::reverse(flower_[b].begin() + 1, flower_[b].end());
    for (int x = v, y; x != lca; x = st_[pa_[y]]) {
      flower_[b].push_back(x);
      flower_[b].push_back(y = st_[match_[x]]);
      queue_push(y);
    }
    set_st(b, b);
    for (int x = 1; x <= node_count_; ++x) {
      edge_at(b, x).w = W(0);
      edge_at(x, b).w = W(0);
    }
    for (int x = 1; x <= n_; ++x) from_at(b, x) = 0;
    for (int xs : flower_[b]) {
      for (int x = 1; x <= node_count_; ++x)
        if (edge_at(xs, x).w > W(0) &&
            (edge_at(b, x).w == W(0) || delta2(edge_at(xs, x)) < delta2(edge_at(b, x)))) {
          edge_at(b, x) = edge_at(xs, x);
          edge_at(x, b) = edge_at(x, xs);
        }
      for (int x = 1; x <= n_; ++x)
        if (from_at(xs, x)) from_at(b, x) = xs;
    }
    set_slack(b);
  }

  void expand_blossom(int b) {  // state_[b] == 1 and lab_[b] == 0
    for (int t : flower_[b]) set_st(t, t);
    int xr = from_at(b, edge_at(b, pa_[b]).u);
    int pr = get_pr(b, xr);
    for (int i = 0; i < pr; i += 2) {
      int xs = flower_[b][i];
      int xns = flower_[b][i + 1];
      pa_[xs] = edge_at(xns, xs).u;
      state_[xs] = 1;
      state_[xns] = 0;
      slack_[xs] = 0;
      set_slack(xns);
      queue_push(xns);
    }
    state_[xr] = 1;
    pa_[xr] = pa_[b];
    for (int i = pr + 1; i < static_cast<int>(flower_[b].size()); ++i) {
      int xs = flower_[b][i];
      state_[xs] = -1;
      set_slack(xs);
    }
    st_[b] = 0;
  }

  // Returns true when the edge completes an augmenting path.
  bool on_found_edge(const Edge& e) {
    int u = st_[e.u];
    int v = st_[e.v];
    if (state_[v] == -1) {
      pa_[v] = e.u;
      state_[v] = 1;
      int nu = st_[match_[v]];
      slack_[v] = 0;
      slack_[nu] = 0;
      state_[nu] = 0;
      queue_push(nu);
    } else if (state_[v] == 0) {
      int lca = get_lca(u, v);
      if (!lca) {
        augment(u, v);
        augment(v, u);
        return true;
      }
      add_blossom(u, lca, v);
    }
    return false;
  }

  // One search phase: grows the forest from all free nodes; returns true on
  // augmentation, false when no weight-improving augmentation remains.
  bool run_phase() {
    std::fill(state_.begin(), state_.begin() + node_count_ + 1, -1);
    std::fill(slack_.begin(), slack_.begin() + node_count_ + 1, 0);
    queue_.clear();
    bool any_free = false;
    for (int x = 1; x <= node_count_; ++x)
      if (st_[x] == x && !match_[x]) {
        pa_[x] = 0;
        state_[x] = 0;
        queue_push(x);
        any_free = true;
      }
    if (!any_free) return false;

    const W inf = std::numeric_limits<W>::max();
    long guard = 16L * (node_count_ + 2) * (node_count_ + 2);
    while (guard-- > 0) {
      while (!queue_.empty()) {
        int u = queue_.front();
        queue_.pop_front();
        if (state_[st_[u]] == 1) continue;
        for (int v = 1; v <= n_; ++v)
          if (edge_at(u, v).w > W(0) && st_[u] != st_[v]) {
            if (tight(edge_at(u, v))) {
              if (on_found_edge(edge_at(u, v))) return true;
            } else {
              update_slack(u, st_[v]);
            }
          }
      }

      W d = inf;
      for (int b = n_ + 1; b <= node_count_; ++b)
        if (st_[b] == b && state_[b] == 1) d = std::min(d, lab_[b] / W(2));
      for (int x = 1; x <= node_count_; ++x)
        if (st_[x] == x && slack_[x]) {
          if (state_[x] == -1)
            d = std::min(d, delta2(edge_at(slack_[x], x)));
          else if (state_[x] == 0)
            d = std::min(d, delta2(edge_at(slack_[x], x)) / W(2));
        }
      // Free even labels bound the step; hitting that bound certifies that no
      // improving augmentation is left.
      W d_label = inf;
      for (int u = 1; u <= n_; ++u)
        if (state_[st_[u]] == 0) d_label = std::min(d_label, lab_[u]);
      bool label_bound = d_label <= d;
      d = std::min(d, d_label);
      if (d == inf) return false;
      if (d < W(0)) d = W(0);

      for (int u = 1; u <= n_; ++u) {
        if (state_[st_[u]] == 0)
          lab_[u] -= d;
        else if (state_[st_[u]] == 1)
          lab_[u] += d;
      }
      for (int b = n_ + 1; b <= node_count_; ++b)
        if (st_[b] == b) {
          if (state_[b] == 0)
            lab_[b] += d * W(2);
          else if (state_[b] == 1)
            lab_[b] -= d * W(2);
        }

      bool progressed = false;
      for (int x = 1; x <= node_count_; ++x)
        if (st_[x] == x && slack_[x] && st_[slack_[x]] != x && tight(edge_at(slack_[x], x))) {
          progressed = true;
          if (on_found_edge(edge_at(slack_[x], x))) return true;
        }
      for (int b = n_ + 1; b <= node_count_; ++b)
        if (st_[b] == b && state_[b] == 1 && lab_[b] <= eps_) {
          progressed = true;
          expand_blossom(b);
        }
      if (!progressed) {
        if (label_bound) return false;
        if (queue_.empty()) return false;
      }
    }
    throw std::logic_error("blossom: phase failed to converge");
  }

  int n_;
  W eps_;
  int slots_ = 0;
  int node_count_ = 0;
  int vis_stamp_ = 0;
  std::vector<Edge> g_;
  std::vector<W> lab_;
  std::vector<int> match_, slack_, st_, pa_, state_, vis_;
  std::vector<std::vector<int>> flower_;
  std::vector<int> from_;
  std::deque<int> queue_;
};

}  // namespace mpmd
