#include "mpmd/offline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mpmd/blossom.hpp"
#include "mpmd/errors.hpp"

namespace mpmd {

MatchInstance::MatchInstance(int n_) : n(n_) {
  if (n < 0 || n % 2 != 0) fail(Errc::BadShape, "match instance: node count must be even");
  w.assign(static_cast<size_t>(n) * n, 0.0);
  present.assign(static_cast<size_t>(n) * n, 0);
}

void MatchInstance::set(int i, int j, double weight) {
  if (i == j) fail(Errc::BadShape, "match instance: no self edges");
  if (!(weight >= 0.0) || !std::isfinite(weight))
    fail(Errc::BadShape, "match instance: weights must be finite and >= 0");
  w[static_cast<size_t>(i) * n + j] = weight;
  w[static_cast<size_t>(j) * n + i] = weight;
  present[static_cast<size_t>(i) * n + j] = 1;
  present[static_cast<size_t>(j) * n + i] = 1;
}

void MatchInstance::forbid(int i, int j) {
  present[static_cast<size_t>(i) * n + j] = 0;
  present[static_cast<size_t>(j) * n + i] = 0;
}

double edge_weight(const Request& a, const Request& b, const MetricSpace& metric,
                   const DelaySpec& spec) {
  return metric.d(a.location, b.location) + spec.eval(std::abs(a.arrival - b.arrival));
}

MatchInstance build_match_instance(const RequestSequence& seq, const MetricSpace& metric,
                                   const DelaySpec& spec) {
  MatchInstance inst(seq.size());
  for (int i = 0; i < seq.size(); ++i)
    for (int j = i + 1; j < seq.size(); ++j) inst.set(i, j, edge_weight(seq[i], seq[j], metric, spec));
  return inst;
}

MatchingResult solve_opt_dp(const MatchInstance& inst) {
  const int n = inst.n;
  if (n > 20) fail(Errc::TooLarge, "dp matching: limited to 20 nodes");
  MatchingResult out;
  if (n == 0) return out;

  const double inf = std::numeric_limits<double>::infinity();
  const uint32_t full = (1u << n) - 1;
  std::vector<double> dp(full + 1, inf);
  std::vector<int32_t> choice(full + 1, -1);
  dp[0] = 0.0;
  for (uint32_t mask = 0; mask < full; ++mask) {
    if (dp[mask] == inf) continue;
    int i = 0;
    while (mask & (1u << i)) ++i;
    for (int j = i + 1; j < n; ++j) {
      if (mask & (1u << j)) continue;
      if (!inst.edge(i, j)) continue;
      uint32_t next = mask | (1u << i) | (1u << j);
      double cand = dp[mask] + inst.weight(i, j);
      if (cand < dp[next]) {
        dp[next] = cand;
        choice[next] = static_cast<int32_t>(i << 8 | j);
      }
    }
  }
  if (dp[full] == inf) fail(Errc::Infeasible, "dp matching: no perfect matching");
  out.weight = dp[full];
  uint32_t mask = full;
  while (mask) {
    int i = choice[mask] >> 8, j = choice[mask] & 0xff;
    out.pairs.emplace_back(i, j);
    mask &= ~(1u << i);
    mask &= ~(1u << j);
  }
  std::reverse(out.pairs.begin(), out.pairs.end());
  return out;
}

namespace {

// Checks dual feasibility and complementary slackness of the solver state on
// the transformed (maximization) weights. A failure here is an internal bug,
// not bad input.
template <class W>
void verify_certificate(const BlossomMatcher<W>& solver, int n, W tol) {
  std::vector<W> y2(n);  // doubled vertex duals
  for (int v = 0; v < n; ++v) y2[v] = solver.vertex_label(v);
  auto blossoms = solver.blossom_duals();

  std::vector<std::vector<char>> member(blossoms.size(), std::vector<char>(n, 0));
  for (size_t b = 0; b < blossoms.size(); ++b)
    for (int x : blossoms[b].vertices) member[b][x] = 1;

  // pi2(e) = 2*pi(e) = y2_u + y2_v + sum of blossom label2 over blossoms
  // containing both endpoints, minus 2w.
  auto pi2 = [&](int u, int v) {
    W s = y2[u] + y2[v] - W(2) * solver.edge_weight(u, v);
    for (size_t b = 0; b < blossoms.size(); ++b)
      if (member[b][u] && member[b][v]) s += blossoms[b].label2;
    return s;
  };

  for (const auto& b : blossoms)
    if (b.label2 < -tol) throw std::logic_error("blossom certificate: negative blossom dual");

  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      if (!solver.edge_present(u, v)) continue;
      W slack = pi2(u, v);
      if (slack < -tol) throw std::logic_error("blossom certificate: infeasible dual");
      if (solver.mate(u) == v && (slack > tol || slack < -tol))
        throw std::logic_error("blossom certificate: matched edge not tight");
    }

  // Blossoms with positive dual must be full: (|B| - 1) / 2 matched pairs inside.
  for (const auto& b : blossoms) {
    if (b.label2 <= tol) continue;
    int inside = 0;
    for (int u : b.vertices) {
      int v = solver.mate(u);
      if (v > u && std::find(b.vertices.begin(), b.vertices.end(), v) != b.vertices.end())
        ++inside;
    }
    if (inside != static_cast<int>(b.vertices.size() - 1) / 2)
      throw std::logic_error("blossom certificate: positive dual on a non-full blossom");
  }
}

template <class W>
MatchingResult solve_transformed(const MatchInstance& inst, W scale_to_int) {
  const int n = inst.n;
  MatchingResult out;
  if (n == 0) return out;

  double w_max = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (inst.edge(i, j)) w_max = std::max(w_max, inst.weight(i, j));

  // Maximize C - w with C large enough that cardinality dominates: any
  // matching with more edges beats any with fewer, so the maximum-weight
  // matching is perfect exactly when a perfect matching exists. The +2 keeps
  // every transformed weight at least 1 after rounding.
  const double shift = (n / 2.0) * w_max + 2.0;

  const bool integral = std::is_integral_v<W>;
  W eps;
  if constexpr (std::is_integral_v<W>) {
    eps = W(0);
  } else {
    eps = static_cast<W>(1e-9 * std::max(1.0, shift));
  }

  BlossomMatcher<W> solver(n, eps);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (!inst.edge(i, j)) continue;
      double tw = shift - inst.weight(i, j);
      if (integral) {
        double scaled = std::round(tw * static_cast<double>(scale_to_int));
        if (scaled >= 4.5e18) fail(Errc::TooLarge, "blossom: fixed-point weights overflow");
        solver.set_weight(i, j, static_cast<W>(scaled));
      } else {
        solver.set_weight(i, j, static_cast<W>(tw));
      }
    }
  solver.solve();

  if (!solver.perfect()) fail(Errc::Infeasible, "blossom: no perfect matching");

  W tol;
  if constexpr (std::is_integral_v<W>) {
    tol = W(0);
  } else {
    tol = static_cast<W>(1e-6 * std::max(1.0, shift));
  }
  verify_certificate(solver, n, tol);

  for (int v = 0; v < n; ++v) {
    int u = solver.mate(v);
    if (u < 0) fail(Errc::Infeasible, "blossom: unmatched node");
    if (!inst.edge(v, u))
      fail(Errc::Infeasible, "blossom: only a forbidden edge completes the matching");
    if (u > v) {
      out.pairs.emplace_back(v, u);
      out.weight += inst.weight(v, u);
    }
  }
  return out;
}

}  // namespace

MatchingResult solve_opt_blossom(const MatchInstance& inst, bool exact_int) {
  if (exact_int) return solve_transformed<long long>(inst, 1000000000LL);
  return solve_transformed<double>(inst, 1.0);
}

FpResult solve_opt_fp(const RequestSequence& seq, const MetricSpace& metric, const DelaySpec& spec,
                      double p, bool exact_int) {
  if (!(p > 0.0)) fail(Errc::NonPositivePenalty, "opt fp: penalty must be > 0");
  const int m = seq.size();
  double w_max = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      w_max = std::max(w_max, edge_weight(seq[i], seq[j], metric, spec));
  // Above w_max the optimum never clears (pairing two cleared requests always
  // wins), so larger penalties are equivalent; clamping keeps the instance's
  // weight range tied to the metric scale.
  const double p_eff = std::min(p, w_max + 1.0);

  // Node i < m is request i, node m + i its shadow. Request-to-foreign-shadow
  // edges stay forbidden.
  MatchInstance inst(2 * m);
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      inst.set(i, j, edge_weight(seq[i], seq[j], metric, spec));
      inst.set(m + i, m + j, 0.0);
    }
    inst.set(i, m + i, p_eff);
  }
  MatchingResult matched = solve_opt_blossom(inst, exact_int);

  FpResult out;
  out.weight = matched.weight;
  for (auto [a, b] : matched.pairs) {
    if (a < m && b < m)
      out.pairs.emplace_back(a, b);
    else if (a < m || b < m)
      out.cleared.push_back(std::min(a, b));
  }
  std::sort(out.cleared.begin(), out.cleared.end());
  return out;
}

double min_total_cost(const RequestSequence& seq, int r, const MetricSpace& metric,
                      const DelaySpec& spec, std::optional<double> p) {
  if (seq.size() < 2) fail(Errc::BadShape, "min total cost: need at least two requests");
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < seq.size(); ++j)
    if (j != r) best = std::min(best, edge_weight(seq[r], seq[j], metric, spec));
  if (p) best = std::min(best, *p);
  return best;
}

double opt_half_sum_bound(const RequestSequence& seq, const MetricSpace& metric,
                          const DelaySpec& spec, std::optional<double> p) {
  double sum = 0.0;
  for (int r = 0; r < seq.size(); ++r) sum += min_total_cost(seq, r, metric, spec, p);
  return 0.5 * sum;
}

Solution to_solution(const MatchingResult& result, const RequestSequence& seq) {
  Solution sol;
  for (auto [a, b] : result.pairs)
    sol.pairs.push_back(MatchedPair{a, b, std::max(seq[a].arrival, seq[b].arrival)});
  return sol;
}

Solution to_solution(const FpResult& result, const RequestSequence& seq) {
  Solution sol;
  for (auto [a, b] : result.pairs)
    sol.pairs.push_back(MatchedPair{a, b, std::max(seq[a].arrival, seq[b].arrival)});
  for (int id : result.cleared) sol.cleared.push_back(ClearedRequest{id, seq[id].arrival});
  return sol;
}

}  // namespace mpmd
