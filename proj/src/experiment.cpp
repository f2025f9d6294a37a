#include "mpmd/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <thread>

#include "mpmd/arrivals.hpp"
#include "mpmd/bipartite.hpp"
#include "mpmd/errors.hpp"
#include "mpmd/greedy.hpp"
#include "mpmd/offline.hpp"
#include "mpmd/radius.hpp"
#include "mpmd/radius_run.hpp"
#include "mpmd/rng.hpp"
#include "mpmd/stats.hpp"

namespace mpmd {

std::string algo_name(Algo a) {
  switch (a) {
    case Algo::Greedy:
      return "greedy";
    case Algo::Radius:
      return "radius";
    case Algo::Mpmdfp:
      return "mpmdfp";
  }
  return "?";
}

Algo algo_from_name(const std::string& name) {
  if (name == "greedy") return Algo::Greedy;
  if (name == "radius") return Algo::Radius;
  if (name == "mpmdfp") return Algo::Mpmdfp;
  fail(Errc::BadConfig, "unknown algorithm '" + name + "'");
}

namespace {

Estimate estimate_mean(std::span<const double> xs, double confidence) {
  Estimate e;
  e.mean = mean(xs);
  e.se = std::sqrt(sample_variance(xs) / static_cast<double>(xs.size()));
  double z = normal_quantile(0.5 * (1.0 + confidence));
  e.lo = e.mean - z * e.se;
  e.hi = e.mean + z * e.se;
  return e;
}

// Delta method for the ratio of paired means; the covariance term matters
// because every algorithm shares the trial's sequence with the optimum.
void ratio_ci(std::span<const double> alg, std::span<const double> opt, double confidence,
              double& ratio, double& lo, double& hi) {
  double ma = mean(alg), mo = mean(opt);
  ratio = ma / mo;
  double va = sample_variance(alg), vo = sample_variance(opt);
  double cov = sample_covariance(alg, opt);
  double n = static_cast<double>(alg.size());
  double var = (va - 2.0 * ratio * cov + ratio * ratio * vo) / (mo * mo * n);
  double se = var > 0.0 ? std::sqrt(var) : 0.0;
  double z = normal_quantile(0.5 * (1.0 + confidence));
  lo = ratio - z * se;
  hi = ratio + z * se;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  if (cfg.trials < 2) fail(Errc::BadConfig, "experiment: need at least 2 trials");
  if (cfg.m < 2 || cfg.m % 2 != 0) fail(Errc::OddSequence, "experiment: m must be even");
  if (cfg.algorithms.empty()) fail(Errc::BadConfig, "experiment: no algorithms selected");
  bool wants_fp = false;
  for (Algo a : cfg.algorithms) wants_fp |= a == Algo::Mpmdfp;
  if (wants_fp && !cfg.penalty)
    fail(Errc::NonPositivePenalty, "experiment: mpmdfp requires a penalty");
  if (cfg.penalty && !(*cfg.penalty > 0.0))
    fail(Errc::NonPositivePenalty, "experiment: penalty must be > 0");

  const RadiusTable rtab = compute_radius_table(cfg.metric, cfg.spec);

  ExperimentResult result;
  result.records.assign(cfg.trials, TrialRecord{});

  auto run_trial = [&](int i) {
    TrialRecord rec;
    rec.trial = i;
    rec.seed = derive_seed(cfg.seed, static_cast<uint64_t>(i));
    GenConfig gen{cfg.m, rec.seed, ArrivalModel::Centralized, false};
    RequestSequence seq = gen_centralized(cfg.metric, gen);

    for (Algo a : cfg.algorithms) {
      Solution sol;
      switch (a) {
        case Algo::Greedy:
          sol = run_greedy(cfg.metric, seq, cfg.spec);
          break;
        case Algo::Radius:
          sol = run_radius(cfg.metric, seq, rtab);
          break;
        case Algo::Mpmdfp:
          sol = run_mpmdfp(cfg.metric, seq, rtab, *cfg.penalty);
          break;
      }
      rec.cost.push_back(sol.breakdown);
    }
    MatchInstance inst = build_match_instance(seq, cfg.metric, cfg.spec);
    rec.opt_total = solve_opt_blossom(inst).weight;
    if (cfg.penalty)
      rec.opt_fp_total = solve_opt_fp(seq, cfg.metric, cfg.spec, *cfg.penalty).weight;
    result.records[i] = std::move(rec);
  };

  int workers = cfg.threads > 0 ? cfg.threads
                                : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min(workers, cfg.trials));
  if (workers == 1) {
    for (int i = 0; i < cfg.trials; ++i) run_trial(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          for (int i = next.fetch_add(1); i < cfg.trials; i = next.fetch_add(1)) run_trial(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (auto& err : errors)
      if (err) std::rethrow_exception(err);
  }

  // Aggregation in fixed trial order keeps results independent of the pool.
  std::vector<double> opt(cfg.trials), opt_fp(cfg.trials);
  for (int i = 0; i < cfg.trials; ++i) {
    opt[i] = result.records[i].opt_total;
    opt_fp[i] = result.records[i].opt_fp_total;
  }
  result.opt = estimate_mean(opt, cfg.confidence);
  if (cfg.penalty) result.opt_fp = estimate_mean(opt_fp, cfg.confidence);

  const double n_pts = cfg.metric.n();
  const double d_max = cfg.metric.d_max();
  const double lambda = cfg.metric.total_rate();
  for (size_t k = 0; k < cfg.algorithms.size(); ++k) {
    std::vector<double> totals(cfg.trials);
    for (int i = 0; i < cfg.trials; ++i) totals[i] = result.records[i].cost[k].total;
    AlgoSummary s;
    s.algo = cfg.algorithms[k];
    s.cost = estimate_mean(totals, cfg.confidence);
    const std::vector<double>& baseline = s.algo == Algo::Mpmdfp ? opt_fp : opt;
    ratio_ci(totals, baseline, cfg.confidence, s.ratio, s.ratio_lo, s.ratio_hi);
    double additive = s.algo == Algo::Greedy ? 2.0 * n_pts * (d_max + 1.0 / lambda)
                                             : 0.5 * n_pts * d_max;
    double base_mean = mean(baseline);
    s.ratio_corrected = std::max(0.0, s.cost.mean - additive) / base_mean;
    result.algos.push_back(std::move(s));
  }
  return result;
}

BoundSet analytic_bounds(const MetricSpace& metric, int m, const DelaySpec& spec,
                         std::optional<double> penalty) {
  BoundSet out;
  RadiusTable rtab = compute_radius_table(metric, spec);
  out.rho = rtab.rho;
  const double lambda = metric.total_rate();
  const double d_max = metric.d_max();
  const double n_pts = metric.n();
  for (int x = 0; x < metric.n(); ++x) {
    double wx = metric.rate(x) / lambda;
    out.rho_rate_avg += wx * rtab.rho[x];
    out.rho_rate_avg_cap += wx * (penalty ? std::min(rtab.rho[x], *penalty) : rtab.rho[x]);
  }
  out.greedy_ub = 4.0 * m * out.rho_rate_avg + 2.0 * n_pts * (d_max + 1.0 / lambda);
  out.radius_ub = 2.0 * m * out.rho_rate_avg + 0.5 * n_pts * d_max;
  const double opt_factor = spec.kind() == DelaySpec::Kind::Linear
                                ? (1.0 - std::exp(-2.0)) / 4.0
                                : 1.0 / (2.0 * compute_Kf(spec));
  out.opt_lb = m * opt_factor * out.rho_rate_avg;
  if (penalty) {
    out.fp_alg_ub = 2.0 * m * out.rho_rate_avg_cap + 0.5 * n_pts * d_max;
    out.fp_opt_lb = m * opt_factor * out.rho_rate_avg_cap;
  }
  return out;
}

BoundReport bound_check(const ExperimentConfig& cfg_in, double debug_cost_factor) {
  ExperimentConfig cfg = cfg_in;
  cfg.algorithms = {Algo::Greedy, Algo::Radius};
  if (cfg.penalty) cfg.algorithms.push_back(Algo::Mpmdfp);

  ExperimentResult res = run_experiment(cfg);
  BoundReport report;
  report.bounds = analytic_bounds(cfg.metric, cfg.m, cfg.spec, cfg.penalty);

  const double z99 = normal_quantile(0.99);
  auto one_sided = [&](const Estimate& e, bool upper) {
    return upper ? e.mean - z99 * e.se : e.mean + z99 * e.se;
  };

  auto add_check = [&](const std::string& name, double observed, double bound, bool is_upper) {
    BoundCheckLine line;
    line.name = name;
    line.observed = observed;
    line.bound = bound;
    line.ok = is_upper ? observed <= bound : observed >= bound;
    report.checks.push_back(line);
  };

  Estimate greedy = res.algos[0].cost;
  greedy.mean *= debug_cost_factor;
  add_check("greedy <= ub", one_sided(greedy, true), report.bounds.greedy_ub, true);
  add_check("radius <= ub", one_sided(res.algos[1].cost, true), report.bounds.radius_ub, true);
  add_check("opt >= lb", one_sided(res.opt, false), report.bounds.opt_lb, false);
  if (cfg.penalty) {
    add_check("mpmdfp <= ub", one_sided(res.algos[2].cost, true), report.bounds.fp_alg_ub, true);
    add_check("opt_fp >= lb", one_sided(res.opt_fp, false), report.bounds.fp_opt_lb, false);
  }

  report.ok = true;
  for (const auto& line : report.checks) report.ok = report.ok && line.ok;
  if (!report.ok) {
    std::string detail = "bound check failed:";
    for (const auto& line : report.checks)
      if (!line.ok)
        detail += " [" + line.name + " observed=" + std::to_string(line.observed) +
                  " bound=" + std::to_string(line.bound) + "]";
    fail(Errc::BoundViolation, detail);
  }
  return report;
}

ScalingFit bipartite_scaling(const std::vector<int>& ms, int trials, uint64_t seed,
                             BipartiteMode mode) {
  if (ms.size() < 2) fail(Errc::InsufficientRange, "bipartite scaling: need several m values");
  int lo = *std::min_element(ms.begin(), ms.end());
  int hi = *std::max_element(ms.begin(), ms.end());
  if (lo < 2) fail(Errc::BadConfig, "bipartite scaling: m must be >= 2");
  if (std::log10(static_cast<double>(hi) / lo) < 1.5 - 1e-12)
    fail(Errc::InsufficientRange, "bipartite scaling: m values must span >= 1.5 decades");

  ScalingFit fit;
  fit.ms = ms;
  for (size_t k = 0; k < ms.size(); ++k) {
    std::vector<double> costs(trials);
    for (int t = 0; t < trials; ++t) {
      uint64_t s = derive_seed(seed, (static_cast<uint64_t>(k) << 32) | static_cast<uint64_t>(t));
      if (mode == BipartiteMode::Poisson) {
        costs[t] = run_bipartite_greedy(0.5, 0.5, ms[k], s).total_cost;
      } else {
        // Deterministic alternating colors, stochastic gaps: the queue stays
        // bounded so cost grows linearly in m.
        std::vector<int> colors(ms[k]);
        for (int i = 0; i < ms[k]; ++i) colors[i] = i % 2;
        Rng rng(derive_seed(s, 1));
        std::vector<double> gaps(ms[k] - 1);
        for (double& gap : gaps) gap = rng.next_exponential(1.0);
        costs[t] = run_bipartite_greedy_fixed(colors, gaps).total_cost;
      }
    }
    fit.mean_cost.push_back(mean(costs));
  }

  std::vector<double> lx(ms.size()), ly(ms.size());
  for (size_t k = 0; k < ms.size(); ++k) {
    lx[k] = std::log(static_cast<double>(ms[k]));
    ly[k] = std::log(fit.mean_cost[k]);
  }
  LineFit line = least_squares(lx, ly);
  fit.slope = line.slope;
  fit.slope_stderr = line.slope_stderr;
  return fit;
}

std::string experiment_csv(const ExperimentConfig& cfg, const ExperimentResult& result) {
  std::string out = "trial,seed,algo,connection,delay,penalty,total,opt_total\n";
  char buf[256];
  for (const TrialRecord& rec : result.records) {
    for (size_t k = 0; k < cfg.algorithms.size(); ++k) {
      double opt = cfg.algorithms[k] == Algo::Mpmdfp ? rec.opt_fp_total : rec.opt_total;
      const CostBreakdown& c = rec.cost[k];
      std::snprintf(buf, sizeof(buf), "%d,%llu,%s,%.17g,%.17g,%.17g,%.17g,%.17g\n", rec.trial,
                    static_cast<unsigned long long>(rec.seed), algo_name(cfg.algorithms[k]).c_str(),
                    c.connection, c.delay, c.penalty, c.total, opt);
      out += buf;
    }
  }
  return out;
}

}  // namespace mpmd
