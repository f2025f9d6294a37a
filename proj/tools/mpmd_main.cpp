#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mpmd/arrivals.hpp"
#include "mpmd/errors.hpp"
#include "mpmd/experiment.hpp"
#include "mpmd/greedy.hpp"
#include "mpmd/io.hpp"
#include "mpmd/offline.hpp"
#include "mpmd/radius.hpp"
#include "mpmd/radius_run.hpp"
#include "mpmd/rng.hpp"
#include "mpmd/solution.hpp"

using nlohmann::json;
using namespace mpmd;

namespace {

// Every run echoes its fully resolved configuration on stderr so the log
// line alone reproduces it.
void echo_config(const std::string& cmd, const json& cfg) {
  json j;
  j["cmd"] = cmd;
  j["config"] = cfg;
  std::cerr << j.dump() << "\n";
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty())
    std::cout << text << "\n";
  else
    write_text_file(out_path, text);
}

struct SeqSource {
  std::string seq_path;
  std::string metric_path;
  int m = 0;
  uint64_t seed = 0;
  std::string model = "centralized";

  void attach(CLI::App* cmd, bool need_model = false) {
    cmd->add_option("--seq", seq_path, "sequence JSON file");
    cmd->add_option("--metric", metric_path, "metric JSON file");
    cmd->add_option("--m", m, "number of requests to generate");
    cmd->add_option("--seed", seed, "master seed for generation");
    if (need_model)
      cmd->add_option("--model", model, "arrival model: centralized|distributed")
          ->check(CLI::IsMember({"centralized", "distributed"}));
  }

  // Either --seq or (--metric, --m, --seed); the two are mutually exclusive.
  SequenceFile resolve() const {
    if (!seq_path.empty()) {
      if (m != 0) fail(Errc::BadConfig, "--seq and --m/--seed are mutually exclusive");
      return load_sequence_file(seq_path);
    }
    if (metric_path.empty() || m == 0)
      fail(Errc::BadConfig, "need --seq or (--metric, --m, --seed)");
    SequenceFile out;
    out.metric = load_metric_file(metric_path);
    GenConfig gen{m, seed,
                  model == "distributed" ? ArrivalModel::Distributed : ArrivalModel::Centralized,
                  false};
    out.seq = generate(out.metric, gen);
    return out;
  }

  json to_json() const {
    json j;
    if (!seq_path.empty()) j["seq"] = seq_path;
    if (!metric_path.empty()) j["metric"] = metric_path;
    if (m != 0) {
      j["m"] = m;
      j["seed"] = seed;
      j["model"] = model;
    }
    return j;
  }
};

std::vector<Algo> parse_algos(const std::string& csv) {
  std::vector<Algo> out;
  size_t pos = 0;
  while (pos < csv.size()) {
    size_t comma = csv.find(',', pos);
    if (comma == std::string::npos) comma = csv.size();
    out.push_back(algo_from_name(csv.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  if (out.empty()) fail(Errc::BadConfig, "no algorithms given");
  return out;
}

json summary_json(const ExperimentConfig& cfg, const ExperimentResult& res,
                  const BoundSet* bounds) {
  json j;
  j["m"] = cfg.m;
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed;
  j["confidence"] = cfg.confidence;
  json algos = json::array();
  for (const AlgoSummary& s : res.algos) {
    algos.push_back({{"algo", algo_name(s.algo)},
                     {"mean", s.cost.mean},
                     {"stderr", s.cost.se},
                     {"ci", {s.cost.lo, s.cost.hi}},
                     {"ratio", s.ratio},
                     {"ratio_ci", {s.ratio_lo, s.ratio_hi}},
                     {"ratio_corrected", s.ratio_corrected}});
  }
  j["algorithms"] = algos;
  j["opt"] = {{"mean", res.opt.mean}, {"stderr", res.opt.se}, {"ci", {res.opt.lo, res.opt.hi}}};
  if (cfg.penalty)
    j["opt_fp"] = {{"mean", res.opt_fp.mean},
                   {"stderr", res.opt_fp.se},
                   {"ci", {res.opt_fp.lo, res.opt_fp.hi}}};
  if (bounds) {
    j["bounds"] = {{"greedy_ub", bounds->greedy_ub},
                   {"radius_ub", bounds->radius_ub},
                   {"opt_lb", bounds->opt_lb}};
    if (cfg.penalty) {
      j["bounds"]["fp_alg_ub"] = bounds->fp_alg_ub;
      j["bounds"]["fp_opt_lb"] = bounds->fp_opt_lb;
    }
  }
  return j;
}

// JSON config file: keys are long option names; explicit flags win. Values
// for options absent from argv are appended as synthetic arguments.
std::vector<std::string> apply_config_file(const std::vector<std::string>& args) {
  std::string config_path;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
  }
  if (config_path.empty()) return args;

  json cfg = json::parse(read_text_file(config_path));
  if (!cfg.is_object()) fail(Errc::BadConfig, "config file must hold a JSON object");
  std::vector<std::string> out = args;
  for (auto& [key, value] : cfg.items()) {
    std::string flag = "--" + key;
    bool given = false;
    for (const std::string& a : out)
      if (a == flag || a.rfind(flag + "=", 0) == 0) given = true;
    if (given) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) out.push_back(flag);
    } else if (value.is_string()) {
      out.push_back(flag + "=" + value.get<std::string>());
    } else {
      out.push_back(flag + "=" + value.dump());
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation and optimization toolkit for online min-cost perfect matching "
               "with delays under Poisson arrivals"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file; explicit flags take precedence")
      ->expected(0, 1);

  // gen ----------------------------------------------------------------
  auto* gen_cmd = app.add_subcommand("gen", "generate a request sequence");
  struct {
    std::string metric, out, model = "centralized";
    int m = 200;
    uint64_t seed = 0;
  } gen_opts;
  gen_cmd->add_option("--metric", gen_opts.metric, "metric JSON file")->required();
  gen_cmd->add_option("--m", gen_opts.m, "number of requests");
  gen_cmd->add_option("--seed", gen_opts.seed, "master seed");
  gen_cmd->add_option("--model", gen_opts.model, "centralized|distributed")
      ->check(CLI::IsMember({"centralized", "distributed"}));
  gen_cmd->add_option("--out", gen_opts.out, "output path (default stdout)");

  // radius -------------------------------------------------------------
  auto* radius_cmd = app.add_subcommand("radius", "per-point radii for a metric");
  struct {
    std::string metric, spec = "linear", out;
  } radius_opts;
  radius_cmd->add_option("--metric", radius_opts.metric, "metric JSON file")->required();
  radius_cmd->add_option("--spec", radius_opts.spec, "delay spec: linear|power:<a>|table:<path>");
  radius_cmd->add_option("--out", radius_opts.out, "write the JSON here instead of stdout");

  // simulate -----------------------------------------------------------
  auto* sim_cmd = app.add_subcommand("simulate", "run one online algorithm on a sequence");
  struct {
    std::string algo, spec = "linear", out;
    double penalty = 0.0;
    SeqSource src;
  } sim_opts;
  sim_cmd->add_option("--algo", sim_opts.algo, "greedy|radius|mpmdfp")
      ->required()
      ->check(CLI::IsMember({"greedy", "radius", "mpmdfp"}));
  sim_cmd->add_option("--spec", sim_opts.spec, "delay spec");
  sim_cmd->add_option("--penalty", sim_opts.penalty, "clearing penalty (mpmdfp)");
  sim_opts.src.attach(sim_cmd, true);
  sim_cmd->add_option("--out", sim_opts.out, "solution JSON path (default stdout)");

  // opt ----------------------------------------------------------------
  auto* opt_cmd = app.add_subcommand("opt", "exact offline optimum");
  struct {
    std::string spec = "linear", out;
    double penalty = 0.0;
    bool exact_int = false;
    SeqSource src;
  } opt_opts;
  opt_opts.src.attach(opt_cmd);
  opt_cmd->add_option("--spec", opt_opts.spec, "delay spec");
  opt_cmd->add_option("--penalty", opt_opts.penalty, "clearing penalty; omit for plain matching");
  opt_cmd->add_flag("--exact-int", opt_opts.exact_int, "fixed-point integer solve");
  opt_cmd->add_option("--out", opt_opts.out, "output path (default stdout)");

  // ratio --------------------------------------------------------------
  auto* ratio_cmd = app.add_subcommand("ratio", "Monte Carlo ratio-of-expectations estimate");
  struct {
    std::string metric, spec = "linear", algos = "greedy,radius", csv, json_out;
    int m = 200, trials = 100, threads = 0;
    uint64_t seed = 0;
    double penalty = 0.0, confidence = 0.95;
  } ratio_opts;
  ratio_cmd->add_option("--metric", ratio_opts.metric)->required();
  ratio_cmd->add_option("--spec", ratio_opts.spec);
  ratio_cmd->add_option("--algos", ratio_opts.algos, "comma list: greedy,radius,mpmdfp");
  ratio_cmd->add_option("--m", ratio_opts.m);
  ratio_cmd->add_option("--trials", ratio_opts.trials);
  ratio_cmd->add_option("--seed", ratio_opts.seed);
  ratio_cmd->add_option("--threads", ratio_opts.threads, "worker cap; 0 = all cores");
  ratio_cmd->add_option("--penalty", ratio_opts.penalty);
  ratio_cmd->add_option("--confidence", ratio_opts.confidence);
  ratio_cmd->add_option("--csv", ratio_opts.csv, "per-trial CSV output path");
  ratio_cmd->add_option("--json", ratio_opts.json_out, "summary JSON output path");

  // bounds -------------------------------------------------------------
  auto* bounds_cmd = app.add_subcommand("bounds", "check measured means against analytic bounds");
  struct {
    std::string metric, spec = "linear", json_out;
    int m = 200, trials = 100, threads = 0;
    uint64_t seed = 0;
    double penalty = 0.0, inject = 1.0;
  } bounds_opts;
  bounds_cmd->add_option("--metric", bounds_opts.metric)->required();
  bounds_cmd->add_option("--spec", bounds_opts.spec);
  bounds_cmd->add_option("--m", bounds_opts.m);
  bounds_cmd->add_option("--trials", bounds_opts.trials);
  bounds_cmd->add_option("--seed", bounds_opts.seed);
  bounds_cmd->add_option("--threads", bounds_opts.threads);
  bounds_cmd->add_option("--penalty", bounds_opts.penalty);
  bounds_cmd->add_option("--json", bounds_opts.json_out);
  bounds_cmd->add_option("--inject-cost-bug", bounds_opts.inject,
                         "scale measured greedy cost (failure-path testing)")
      ->group("");

  // bipartite ----------------------------------------------------------
  auto* bip_cmd = app.add_subcommand("bipartite", "two-color queue scaling experiment");
  struct {
    std::vector<int> ms = {128, 256, 512, 1024, 2048, 4096};
    int trials = 100;
    uint64_t seed = 0;
    std::string mode = "poisson", json_out;
  } bip_opts;
  bip_cmd->add_option("--ms", bip_opts.ms, "sequence lengths (>= 1.5 decades)");
  bip_cmd->add_option("--trials", bip_opts.trials);
  bip_cmd->add_option("--seed", bip_opts.seed);
  bip_cmd->add_option("--mode", bip_opts.mode)->check(CLI::IsMember({"poisson", "alternating"}));
  bip_cmd->add_option("--json", bip_opts.json_out);

  // lets --config appear after the subcommand name
  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = apply_config_file(args);
    std::vector<const char*> cargs;
    cargs.push_back(argv[0]);
    for (const std::string& a : args) cargs.push_back(a.c_str());
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (*gen_cmd) {
      echo_config("gen", {{"metric", gen_opts.metric},
                          {"m", gen_opts.m},
                          {"seed", gen_opts.seed},
                          {"model", gen_opts.model}});
      MetricSpace metric = load_metric_file(gen_opts.metric);
      GenConfig gen{gen_opts.m, gen_opts.seed,
                    gen_opts.model == "distributed" ? ArrivalModel::Distributed
                                                    : ArrivalModel::Centralized,
                    false};
      RequestSequence seq = generate(metric, gen);
      emit(sequence_to_json(metric, seq), gen_opts.out);
    } else if (*radius_cmd) {
      echo_config("radius", {{"metric", radius_opts.metric}, {"spec", radius_opts.spec}});
      MetricSpace metric = load_metric_file(radius_opts.metric);
      DelaySpec spec = delay_spec_from_string(radius_opts.spec);
      RadiusTable table = compute_radius_table(metric, spec);
      for (int x = 0; x < metric.n(); ++x)
        std::cout << metric.labels[x] << "  rate=" << metric.rate(x) << "  rho=" << table.rho[x]
                  << "\n";
      json j;
      j["rho"] = table.rho;
      j["spec"] = spec.to_string();
      emit(j.dump(2), radius_opts.out);
    } else if (*sim_cmd) {
      json echo = sim_opts.src.to_json();
      echo["algo"] = sim_opts.algo;
      echo["spec"] = sim_opts.spec;
      if (sim_opts.penalty > 0.0) echo["penalty"] = sim_opts.penalty;
      echo_config("simulate", echo);
      SequenceFile in = sim_opts.src.resolve();
      DelaySpec spec = delay_spec_from_string(sim_opts.spec);
      Solution sol;
      if (sim_opts.algo == "greedy") {
        sol = run_greedy(in.metric, in.seq, spec);
      } else {
        RadiusTable table = compute_radius_table(in.metric, spec);
        sol = sim_opts.algo == "radius" ? run_radius(in.metric, in.seq, table)
                                        : run_mpmdfp(in.metric, in.seq, table, sim_opts.penalty);
      }
      emit(solution_to_json(sol), sim_opts.out);
      std::cerr << sim_opts.algo << ": connection=" << sol.breakdown.connection
                << " delay=" << sol.breakdown.delay << " penalty=" << sol.breakdown.penalty
                << " total=" << sol.breakdown.total << "\n";
    } else if (*opt_cmd) {
      json echo = opt_opts.src.to_json();
      echo["spec"] = opt_opts.spec;
      echo["exact_int"] = opt_opts.exact_int;
      if (opt_opts.penalty > 0.0) echo["penalty"] = opt_opts.penalty;
      echo_config("opt", echo);
      SequenceFile in = opt_opts.src.resolve();
      DelaySpec spec = delay_spec_from_string(opt_opts.spec);
      json j;
      if (opt_opts.penalty > 0.0) {
        FpResult r = solve_opt_fp(in.seq, in.metric, spec, opt_opts.penalty, opt_opts.exact_int);
        j["weight"] = r.weight;
        j["pairs"] = r.pairs;
        j["cleared"] = r.cleared;
        std::cerr << "opt_fp: weight=" << r.weight << " cleared=" << r.cleared.size() << "\n";
      } else {
        MatchInstance inst = build_match_instance(in.seq, in.metric, spec);
        MatchingResult r = solve_opt_blossom(inst, opt_opts.exact_int);
        j["weight"] = r.weight;
        j["pairs"] = r.pairs;
        j["cleared"] = json::array();
        std::cerr << "opt: weight=" << r.weight << "\n";
      }
      emit(j.dump(2), opt_opts.out);
    } else if (*ratio_cmd) {
      ExperimentConfig cfg;
      cfg.metric = load_metric_file(ratio_opts.metric);
      cfg.spec = delay_spec_from_string(ratio_opts.spec);
      cfg.algorithms = parse_algos(ratio_opts.algos);
      cfg.m = ratio_opts.m;
      cfg.trials = ratio_opts.trials;
      cfg.seed = ratio_opts.seed;
      cfg.threads = ratio_opts.threads;
      cfg.confidence = ratio_opts.confidence;
      if (ratio_opts.penalty > 0.0) cfg.penalty = ratio_opts.penalty;
      echo_config("ratio", {{"metric", ratio_opts.metric},
                            {"spec", ratio_opts.spec},
                            {"algos", ratio_opts.algos},
                            {"m", cfg.m},
                            {"trials", cfg.trials},
                            {"seed", cfg.seed},
                            {"threads", cfg.threads},
                            {"penalty", ratio_opts.penalty},
                            {"confidence", cfg.confidence}});
      ExperimentResult res = run_experiment(cfg);
      if (!ratio_opts.csv.empty()) write_text_file(ratio_opts.csv, experiment_csv(cfg, res));
      json j = summary_json(cfg, res, nullptr);
      emit(j.dump(2), ratio_opts.json_out);
    } else if (*bounds_cmd) {
      ExperimentConfig cfg;
      cfg.metric = load_metric_file(bounds_opts.metric);
      cfg.spec = delay_spec_from_string(bounds_opts.spec);
      cfg.m = bounds_opts.m;
      cfg.trials = bounds_opts.trials;
      cfg.seed = bounds_opts.seed;
      cfg.threads = bounds_opts.threads;
      if (bounds_opts.penalty > 0.0) cfg.penalty = bounds_opts.penalty;
      echo_config("bounds", {{"metric", bounds_opts.metric},
                             {"spec", bounds_opts.spec},
                             {"m", cfg.m},
                             {"trials", cfg.trials},
                             {"seed", cfg.seed},
                             {"threads", cfg.threads},
                             {"penalty", bounds_opts.penalty}});
      BoundReport rep = bound_check(cfg, bounds_opts.inject);
      json j;
      j["ok"] = rep.ok;
      json checks = json::array();
      for (const BoundCheckLine& line : rep.checks) {
        std::cout << (line.ok ? "[PASS] " : "[FAIL] ") << line.name
                  << "  observed=" << line.observed << "  bound=" << line.bound << "\n";
        checks.push_back({{"name", line.name},
                          {"observed", line.observed},
                          {"bound", line.bound},
                          {"ok", line.ok}});
      }
      j["checks"] = checks;
      if (!bounds_opts.json_out.empty()) write_text_file(bounds_opts.json_out, j.dump(2));
    } else if (*bip_cmd) {
      echo_config("bipartite", {{"ms", bip_opts.ms},
                                {"trials", bip_opts.trials},
                                {"seed", bip_opts.seed},
                                {"mode", bip_opts.mode}});
      ScalingFit fit = bipartite_scaling(bip_opts.ms, bip_opts.trials, bip_opts.seed,
                                         bip_opts.mode == "poisson" ? BipartiteMode::Poisson
                                                                    : BipartiteMode::Alternating);
      json j;
      j["ms"] = fit.ms;
      j["mean_cost"] = fit.mean_cost;
      j["slope"] = fit.slope;
      j["slope_stderr"] = fit.slope_stderr;
      std::cout << "log-log slope = " << fit.slope << " +- " << fit.slope_stderr << "\n";
      if (!bip_opts.json_out.empty()) write_text_file(bip_opts.json_out, j.dump(2));
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == Errc::BoundViolation ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
