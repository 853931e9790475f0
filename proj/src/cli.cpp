// Copyright 2026 The dpopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dpopt/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>

#include <CLI11.hpp>

#include "dpopt/csvio.hpp"
#include "dpopt/experiment.hpp"
#include "dpopt/privacy.hpp"

namespace dpopt {
namespace {

namespace fs = std::filesystem;

constexpr std::uint64_t kPairTag = 0x70616972u;
constexpr std::uint64_t kObsTag = 0x6f627376u;
constexpr std::uint64_t kRealObsTag = 0x726f6273u;

struct CommonOpts {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<std::string> out;
  bool quiet = false;
};

void add_common(CLI::App* sub, CommonOpts& opts) {
  sub->add_option("--config", opts.config_path, "path to the JSON config file")
      ->required();
  sub->add_option("--seed", opts.seed, "override experiment.seed");
  sub->add_option("--trials", opts.trials, "override experiment.trials")
      ->check(CLI::PositiveNumber);
  sub->add_option("--out", opts.out, "override experiment.output_dir");
  sub->add_flag("--quiet", opts.quiet, "suppress informational output");
}

Config load_with_overrides(const CommonOpts& opts) {
  Config config = load_config_file(opts.config_path);
  if (opts.seed.has_value()) config.experiment.seed = *opts.seed;
  if (opts.trials.has_value()) config.experiment.trials = *opts.trials;
  if (opts.out.has_value()) config.experiment.output_dir = *opts.out;
  return config;
}

std::int64_t resolve_rounds(const Config& config, const ScheduleParams& params) {
  return config.experiment.rounds > 0
             ? config.experiment.rounds
             : auto_rounds(params, config.experiment.max_rounds);
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  return out;
}

std::string vector_to_string(const Vector& v) {
  std::string s = "(";
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (k > 0) s += ", ";
    s += format_double(v[k]);
  }
  s += ")";
  return s;
}

int cmd_run(const CommonOpts& opts) {
  const Config config = load_with_overrides(opts);
  if (!config.schedule.has_value()) {
    throw ConfigError("run requires a schedule section");
  }
  const auto problem = build_problem(config);
  const ScheduleParams params = *config.schedule;
  const std::int64_t rounds = resolve_rounds(config, params);
  const ExecutionTrace trace =
      run(*problem, params, rounds, config.experiment.seed, config.problem.init);

  const fs::path dir(config.experiment.output_dir);
  fs::create_directories(dir);
  {
    std::ofstream out = open_output(dir / "trace.csv");
    write_trace_csv(trace, out);
  }
  if (!opts.quiet) {
    const OptimumResult opt = global_optimum(*problem);
    const Vector mean = mean_estimate(trace, rounds);
    std::cout << "rounds: " << rounds << "\n"
              << "final mean estimate: " << vector_to_string(mean) << "\n"
              << "optimum: " << vector_to_string(opt.x_star) << "\n"
              << "squared distance to optimum: "
              << format_double((mean - opt.x_star).squaredNorm()) << "\n"
              << "final disagreement: "
              << format_double(disagreement(trace, rounds)) << "\n"
              << "wrote " << (dir / "trace.csv").string() << "\n";
  }
  return 0;
}

int cmd_experiment(const CommonOpts& opts) {
  const Config config = load_with_overrides(opts);
  const ExperimentResult result = run_experiment(config);
  const fs::path dir(config.experiment.output_dir);
  write_experiment_outputs(result, dir);
  if (!opts.quiet) {
    std::cout << "epsilon mean_d p50 theoretical_d T\n";
    for (const EpsilonSummary& s : result.per_epsilon) {
      std::cout << format_double(s.epsilon) << ' ' << format_double(s.mean)
                << ' ' << format_double(s.p50) << ' '
                << format_double(s.bound.total()) << ' ' << s.rounds << "\n";
    }
    std::cout << "wrote " << (dir / "summary.csv").string() << "\n";
  }
  return 0;
}

// Independent coarse search over (q, p) with c optimized per cell; the tuned
// result must never lose to it.
double grid_search_bound(const CostConstants& constants, int dim, double eps) {
  double best = std::numeric_limits<double>::infinity();
  const int nq = 48;
  const int np = 48;
  for (int i = 1; i <= nq; ++i) {
    const double q = 0.95 * static_cast<double>(i) / nq;
    for (int j = 1; j <= np; ++j) {
      const double p = q + (1.0 - q) * static_cast<double>(j) / (np + 1);
      const double c = solve_c_star(constants, dim, eps, q, p);
      best = std::min(
          best,
          accuracy_bound(constants, dim, ScheduleParams(eps, c, q, p)).total());
    }
  }
  return best;
}

int cmd_tune(const CommonOpts& opts) {
  const Config config = load_with_overrides(opts);
  std::vector<double> eps_list = config.experiment.epsilon_list;
  if (eps_list.empty() && config.schedule.has_value()) {
    eps_list.push_back(config.schedule->epsilon);
  }
  if (eps_list.empty()) {
    throw ConfigError(
        "tune requires experiment.epsilon_list or a schedule section");
  }
  const auto problem = build_problem(config);
  const CostConstants& constants = problem->constants();
  const int dim = problem->dim();

  const fs::path dir(config.experiment.output_dir);
  fs::create_directories(dir);
  std::ofstream report = open_output(dir / "tuning_report.csv");
  report << "epsilon,c,q,p,term_init,term_step,term_noise,total,residual_dc,"
            "residual_dq,p_gap,grid_total,passes,converged,q_interior\n";

  std::cout << "epsilon c q p total grid_total\n";
  ScheduleParams warm_params;
  const ScheduleParams* warm = nullptr;
  for (double eps : eps_list) {
    const TuningResult r = tune_best(constants, dim, eps, warm);
    warm_params = r.params;
    warm = &warm_params;
    const double grid_total = grid_search_bound(constants, dim, eps);
    const double residual_dc =
        std::fabs(accuracy_bound_dc(constants, dim, r.params));
    const double residual_dq =
        r.q_interior ? std::fabs(accuracy_bound_dq(constants, dim, r.params))
                     : std::numeric_limits<double>::quiet_NaN();
    const double p_gap = std::fabs(r.params.p - solve_p_star(r.params.q));
    report << format_double(eps) << ',' << format_double(r.params.c) << ','
           << format_double(r.params.q) << ',' << format_double(r.params.p)
           << ',' << format_double(r.bound.term_init) << ','
           << format_double(r.bound.term_step) << ','
           << format_double(r.bound.term_noise) << ','
           << format_double(r.bound.total()) << ','
           << format_double(residual_dc) << ',' << format_double(residual_dq)
           << ',' << format_double(p_gap) << ',' << format_double(grid_total)
           << ',' << r.passes_used << ',' << (r.converged ? 1 : 0) << ','
           << (r.q_interior ? 1 : 0) << '\n';
    std::cout << format_double(eps) << ' ' << format_double(r.params.c) << ' '
              << format_double(r.params.q) << ' ' << format_double(r.params.p)
              << ' ' << format_double(r.bound.total()) << ' '
              << format_double(grid_total) << "\n";
  }
  if (!opts.quiet) {
    std::cout << "wrote " << (dir / "tuning_report.csv").string() << "\n";
  }
  return 0;
}

struct CheckRow {
  std::string name;
  double observed = 0.0;
  double limit = 0.0;
  bool pass = false;
};

int cmd_verify(const CommonOpts& opts) {
  const Config config = load_with_overrides(opts);
  if (!config.schedule.has_value()) {
    throw ConfigError("verify requires a schedule section");
  }
  const std::shared_ptr<const ProblemInstance> problem = build_problem(config);
  const ScheduleParams params = *config.schedule;
  const CostConstants& constants = problem->constants();
  const int dim = problem->dim();
  const std::int64_t rounds_full = resolve_rounds(config, params);
  const std::uint64_t seed = config.experiment.seed;
  std::vector<CheckRow> rows;

  // Privacy budget: partial sums never exceed the target, and the infinite
  // series lands exactly on it.
  {
    const std::int64_t t_budget = std::min<std::int64_t>(rounds_full, 500);
    const BudgetReport rep = budget(constants, dim, params, t_budget);
    rows.push_back({"budget_partial_sums_max", rep.partial_sums.back(),
                    params.epsilon * (1.0 + 1e-9), rep.pass});
    const double gap = std::fabs(rep.infinite_sum - params.epsilon);
    const double gap_limit = 1e-12 * std::max(1.0, params.epsilon);
    rows.push_back({"budget_infinite_sum_gap", gap, gap_limit, gap <= gap_limit});
  }

  // Mixing matrices: doubly stochastic, connected, entries above the floor.
  {
    const std::int64_t horizon = std::min<std::int64_t>(rounds_full, 200);
    bool certified = true;
    double floor_seen = 0.0;
    try {
      floor_seen = certify_eta(problem->graph(), horizon);
    } catch (const std::invalid_argument& err) {
      certified = false;
      std::cout << "  mixing matrix violation: " << err.what() << "\n";
    }
    const double floor_limit = problem->graph().eta() - 1e-12;
    rows.push_back({"mixing_floor_certified", floor_seen, floor_limit,
                    certified && floor_seen >= floor_limit});
  }

  // Trace consistency, and state reconstruction from published values only.
  {
    const std::int64_t t_trace = std::min<std::int64_t>(rounds_full, 200);
    const ExecutionTrace trace =
        run(*problem, params, t_trace, seed, config.problem.init);
    bool consistent = true;
    try {
      validate_trace(*problem, trace);
    } catch (const std::runtime_error& err) {
      consistent = false;
      std::cout << "  " << err.what() << "\n";
    }
    rows.push_back({"trace_consistent", consistent ? 0.0 : 1.0, 0.5, consistent});

    const std::vector<Matrix> states =
        replay(*problem, params, trace.observations(), trace.initial_states());
    double worst = 0.0;
    for (std::int64_t t = 1; t <= t_trace; ++t) {
      worst = std::max(
          worst, (states[static_cast<std::size_t>(t)] - trace.at(t).x_next)
                     .cwiseAbs()
                     .maxCoeff());
    }
    rows.push_back({"replay_gap", worst, 1e-12, worst <= 1e-12});
  }

  // One-agent cost swap for the privacy checks.
  RngStream pair_rng = stream_for(seed, {kPairTag});
  const AdjacentPair pair =
      make_adjacent(problem, 0, problem->domain().sample(pair_rng));

  // Realized state sensitivity against the analytic cap, over both simulated
  // and synthetic observation sets.
  {
    const std::int64_t t_sens = std::min<std::int64_t>(rounds_full, 100);
    const std::vector<double> cap =
        sensitivity_bound(constants, dim, params, t_sens);
    const Matrix x0 = initial_states(*problem, InitPolicy::anchors(), 0);
    const Vector span = problem->domain().upper() - problem->domain().lower();
    const Vector lo = problem->domain().lower() - 0.25 * span;
    double worst_ratio = 0.0;
    for (int set = 0; set < 16; ++set) {
      std::vector<Matrix> obs;
      if (set < 8) {
        const std::uint64_t obs_seed =
            stream_for(seed, {kRealObsTag, static_cast<std::uint64_t>(set)}).key();
        obs = run_from(*problem, params, t_sens, obs_seed, x0).observations();
      } else {
        obs.reserve(static_cast<std::size_t>(t_sens));
        for (std::int64_t t = 1; t <= t_sens; ++t) {
          Matrix y(problem->agents(), dim);
          for (int i = 0; i < problem->agents(); ++i) {
            for (int k = 0; k < dim; ++k) {
              const double u =
                  stream_for(seed, {kObsTag, static_cast<std::uint64_t>(set),
                                    static_cast<std::uint64_t>(t),
                                    static_cast<std::uint64_t>(i),
                                    static_cast<std::uint64_t>(k)})
                      .u01_at(0);
              y(i, k) = lo[k] + 1.5 * span[k] * u;
            }
          }
          obs.push_back(std::move(y));
        }
      }
      const std::vector<double> measured =
          measured_sensitivity(pair, params, obs, x0);
      for (std::size_t t = 0; t < measured.size(); ++t) {
        worst_ratio = std::max(worst_ratio, measured[t] / cap[t]);
      }
    }
    rows.push_back({"sensitivity_ratio_max", worst_ratio, 1.0 + 1e-9,
                    worst_ratio <= 1.0 + 1e-9});
  }

  // Monte Carlo privacy loss of the published values.
  {
    const std::int64_t t_ratio = std::min<std::int64_t>(rounds_full, 100);
    const int trials = opts.trials.value_or(200);
    const RatioCheckResult rc =
        dp_ratio_check(pair, params, t_ratio, trials, seed);
    rows.push_back(
        {"privacy_loss_max", rc.worst_abs_log_ratio, params.epsilon, rc.pass});
  }

  const fs::path dir(config.experiment.output_dir);
  fs::create_directories(dir);
  std::ofstream report = open_output(dir / "verify_report.csv");
  report << "check,observed,limit,status\n";
  bool all_pass = true;
  for (const CheckRow& row : rows) {
    report << row.name << ',' << format_double(row.observed) << ','
           << format_double(row.limit) << ',' << (row.pass ? "pass" : "fail")
           << '\n';
    std::cout << (row.pass ? "[PASS] " : "[FAIL] ") << row.name
              << ": observed " << format_double(row.observed) << ", limit "
              << format_double(row.limit) << "\n";
    all_pass = all_pass && row.pass;
  }
  if (!opts.quiet) {
    std::cout << "wrote " << (dir / "verify_report.csv").string() << "\n";
  }
  return all_pass ? 0 : 1;
}

int cmd_bounds(const CommonOpts& opts) {
  const Config config = load_with_overrides(opts);
  if (!config.schedule.has_value()) {
    throw ConfigError("bounds requires a schedule section");
  }
  const auto problem = build_problem(config);
  const ScheduleParams params = *config.schedule;
  const CostConstants& constants = problem->constants();
  const int dim = problem->dim();
  const int agents = problem->agents();

  const AccuracyBound b = accuracy_bound(constants, dim, params);
  const ConvergenceEnvelope env = envelope(agents, problem->graph().eta());
  const double sup = problem->domain().max_point_norm();
  const BudgetReport rep = budget(constants, dim, params, 1);

  const std::vector<std::pair<std::string, double>> values = {
      {"accuracy_term_init", b.term_init},
      {"accuracy_term_step", b.term_step},
      {"accuracy_term_noise", b.term_noise},
      {"accuracy_total", b.total()},
      {"accuracy_total_conservative", b.total_conservative()},
      {"budget_infinite_sum", rep.infinite_sum},
      {"rounds_auto",
       static_cast<double>(auto_rounds(params, config.experiment.max_rounds))},
      {"step_size_round1", step_size(params, 1)},
      {"noise_scale_round1",
       noise_scale(params, 1, constants.gradient_cap, dim)},
      {"mixing_floor", problem->graph().eta()},
      {"envelope_theta", env.theta},
      {"envelope_beta", env.beta},
      {"disagreement_m1", 2.0 * agents * env.theta * sup},
      {"disagreement_m2", 2.0 * agents * constants.gradient_cap * env.theta},
      {"disagreement_m3", 2.0 * agents * env.theta},
  };

  const fs::path dir(config.experiment.output_dir);
  fs::create_directories(dir);
  std::ofstream out = open_output(dir / "bounds.csv");
  out << "name,value\n";
  for (const auto& [name, value] : values) {
    out << name << ',' << format_double(value) << '\n';
    std::cout << name << ' ' << format_double(value) << "\n";
  }
  if (!opts.quiet) {
    std::cout << "wrote " << (dir / "bounds.csv").string() << "\n";
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{
      "simulator and analysis toolkit for privacy-preserving distributed "
      "optimization"};
  app.require_subcommand(1);

  CommonOpts run_opts, experiment_opts, tune_opts, verify_opts, bounds_opts;
  int code = 0;

  CLI::App* sub_run =
      app.add_subcommand("run", "simulate one noisy optimization trace");
  add_common(sub_run, run_opts);
  sub_run->callback([&] { code = cmd_run(run_opts); });

  CLI::App* sub_experiment = app.add_subcommand(
      "experiment", "Monte Carlo sweep of accuracy against privacy budget");
  add_common(sub_experiment, experiment_opts);
  sub_experiment->callback([&] { code = cmd_experiment(experiment_opts); });

  CLI::App* sub_tune = app.add_subcommand(
      "tune", "optimize schedule parameters against the accuracy cap");
  add_common(sub_tune, tune_opts);
  sub_tune->callback([&] { code = cmd_tune(tune_opts); });

  CLI::App* sub_verify = app.add_subcommand(
      "verify", "check budget, mixing, trace, sensitivity, and privacy loss");
  add_common(sub_verify, verify_opts);
  sub_verify->callback([&] { code = cmd_verify(verify_opts); });

  CLI::App* sub_bounds = app.add_subcommand(
      "bounds", "evaluate the accuracy and disagreement bounds for a config");
  add_common(sub_bounds, bounds_opts);
  sub_bounds->callback([&] { code = cmd_bounds(bounds_opts); });

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("dpopt");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& err) {
    const int rc = app.exit(err);
    return rc == 0 ? 0 : 2;
  } catch (const std::invalid_argument& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return code;
}

}  // namespace dpopt
