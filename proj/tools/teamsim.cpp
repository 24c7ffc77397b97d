// Batch CLI over the teamsim library: single runs from JSON configs, the
// built-in scenario library, hypothesis checks, parameter sweeps and the
// Monte Carlo positivity study.
//
// Exit codes: 0 ok, 1 run failure, 2 config/usage error.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "teamsim/config.hpp"
#include "teamsim/scenarios.hpp"

namespace {

using namespace teamsim;

std::filesystem::path default_out_base() {
  if (const char* env = std::getenv("TEAMSIM_OUT_DIR")) {
    return env;
  }
  return "out";
}

int exit_code_for(TerminalStatus status) {
  switch (status) {
    case TerminalStatus::kConverged:
    case TerminalStatus::kTEndReached:
      return 0;
    case TerminalStatus::kPositivityLost:
    case TerminalStatus::kEigenvectorFailed:
      return 1;
  }
  return 1;
}

void print_summary(const RunSummary& s, bool quiet) {
  if (quiet) return;
  std::cout << s.label << ": status=" << to_string(s.status)
            << " t_final=" << s.t_final;
  for (const char* key : {"h1", "spread", "triads"}) {
    auto it = s.terminal_metrics.find(key);
    if (it != s.terminal_metrics.end() && !std::isnan(it->second)) {
      std::cout << " " << key << "=" << it->second;
    }
  }
  std::cout << "\n";
}

struct GlobalFlags {
  std::optional<uint64_t> seed;
  std::optional<std::string> out;
  bool quiet = false;
  bool svg = false;
};

void apply_overrides(ExperimentConfig& cfg, const GlobalFlags& flags) {
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.out) cfg.output_dir = *flags.out;
  cfg.emit_svg = cfg.emit_svg || flags.svg;
}

int cmd_simulate(const std::string& config_path, const GlobalFlags& flags) {
  ExperimentConfig cfg = load_config_file(config_path);
  apply_overrides(cfg, flags);
  RunSummary summary = run_experiment(cfg);
  print_summary(summary, flags.quiet);
  if (!flags.quiet) {
    std::cout << "artifacts: " << cfg.output_dir.string() << "\n";
  }
  return exit_code_for(summary.status);
}

int cmd_check(const std::string& config_path, const GlobalFlags& flags) {
  ExperimentConfig cfg = load_config_file(config_path);
  if (flags.seed) cfg.seed = *flags.seed;
  Rng rng(cfg.seed);
  MaterializedRun run = materialize(cfg, rng);
  HypothesisReport report = check_hypotheses(cfg, run);
  for (const auto& check : report.checks) {
    if (!flags.quiet) {
      std::cout << (check.satisfied ? "[ok]      " : "[violated] ")
                << check.name << "\n";
    }
  }
  std::string violated = report.violated_names();
  if (!cfg.declared_violation.empty()) {
    bool confirmed = violated.find(cfg.declared_violation) != std::string::npos;
    if (!flags.quiet) {
      std::cout << "declared violation \"" << cfg.declared_violation << "\": "
                << (confirmed ? "confirmed" : "NOT confirmed") << "\n";
    }
    if (!confirmed) {
      std::cerr << "declaration mismatch: config declares \""
                << cfg.declared_violation
                << "\" violated, but the materialized team violates: "
                << (violated.empty() ? "(nothing)" : violated) << "\n";
      return 2;
    }
  } else if (!report.all_satisfied()) {
    std::cerr << "declaration mismatch: config declares all hypotheses "
                 "satisfied, but the materialized team violates: "
              << violated << "\n";
    return 2;
  }
  if (!report.all_satisfied()) {
    std::cerr << "violated: " << violated << "\n";
    return 2;
  }
  return 0;
}

int cmd_scenario(const std::string& name, const GlobalFlags& flags,
                 bool list_only) {
  if (list_only) {
    for (const auto& n : scenario_names()) std::cout << n << "\n";
    return 0;
  }
  std::filesystem::path base =
      flags.out ? std::filesystem::path(*flags.out) : default_out_base();
  Scenario sc = make_scenario(name, flags.seed, base);
  if (!flags.quiet) {
    std::cout << sc.name << " (seed " << sc.seed << "): " << sc.description
              << "\n";
  }
  int worst = 0;
  for (ExperimentConfig cfg : sc.runs) {
    cfg.emit_svg = cfg.emit_svg || flags.svg;
    RunSummary summary = run_experiment(cfg);
    print_summary(summary, flags.quiet);
    worst = std::max(worst, exit_code_for(summary.status));
  }
  return worst;
}

int cmd_montecarlo(const std::string& config_path, long long n_runs,
                   double horizon, double probe,
                   const std::vector<double>& certified, int jobs,
                   const GlobalFlags& flags) {
  ExperimentConfig cfg = load_config_file(config_path);
  if (flags.seed) cfg.seed = *flags.seed;

  long long n_min = 0;
  double epsilon = std::numeric_limits<double>::quiet_NaN();
  double xi = std::numeric_limits<double>::quiet_NaN();
  if (n_runs == 0 && certified.empty()) {
    n_runs = 1000;  // desk-scale default; full scale via --n 27000
  }
  if (!certified.empty()) {
    if (certified.size() != 2) {
      throw std::invalid_argument("--certified needs two values: eps xi");
    }
    epsilon = certified[0];
    xi = certified[1];
    n_min = chernoff_min_samples(epsilon, xi);
    if (n_runs == 0) {
      n_runs = n_min;
    } else if (n_runs < n_min) {
      std::ostringstream os;
      os << "--certified " << epsilon << " " << xi << " needs N >= " << n_min
         << " samples, got " << n_runs;
      throw std::invalid_argument(os.str());
    }
  }

  MonteCarloReport report =
      montecarlo_positivity(cfg, n_runs, horizon, probe, jobs);
  report.epsilon = epsilon;
  report.xi = xi;
  report.chernoff_n_min = n_min;

  std::filesystem::path dir =
      flags.out ? std::filesystem::path(*flags.out)
                : default_out_base() / ("mc-seed" + std::to_string(cfg.seed));
  std::filesystem::create_directories(dir);
  write_montecarlo_json(dir / "montecarlo.json", report);

  if (!flags.quiet) {
    std::cout << "montecarlo: N=" << report.n_runs
              << " successes=" << report.successes << " p_hat=";
    if (std::isnan(report.p_hat)) {
      std::cout << "undefined";
    } else {
      std::cout << report.p_hat;
    }
    if (n_min > 0) std::cout << " (certified: N_min=" << n_min << ")";
    std::cout << "\nreport: " << (dir / "montecarlo.json").string() << "\n";
  }
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& param,
              const GlobalFlags& flags) {
  auto eq = param.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 >= param.size()) {
    throw std::invalid_argument("--param expects path=v1,v2,...");
  }
  std::string path = param.substr(0, eq);
  std::vector<std::string> values;
  std::string rest = param.substr(eq + 1);
  size_t start = 0;
  while (start <= rest.size()) {
    size_t comma = rest.find(',', start);
    values.push_back(rest.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }

  std::ifstream in(config_path);
  if (!in) {
    throw std::invalid_argument("config: cannot open " + config_path);
  }
  nlohmann::json base;
  in >> base;

  int worst = 0;
  for (size_t i = 0; i < values.size(); ++i) {
    nlohmann::json patched = base;
    set_json_path(patched, path, parse_scalar(values[i]));
    ExperimentConfig cfg = parse_config(patched);
    apply_overrides(cfg, flags);
    std::string tag = path;
    for (char& c : tag) {
      if (c == '.') c = '_';
    }
    cfg.output_dir = cfg.output_dir / ("sweep-" + tag + "-" + values[i]);
    cfg.label += "/" + path + "=" + values[i];
    RunSummary summary = run_experiment(cfg);
    print_summary(summary, flags.quiet);
    worst = std::max(worst, exit_code_for(summary.status));
  }
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"team task-assignment and collective-learning simulator"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags flags;
  uint64_t seed_value = 0;
  std::string out_value;
  auto* seed_opt = app.add_option("--seed", seed_value, "override run seed");
  auto* out_opt = app.add_option("--out", out_value, "override output dir");
  app.add_flag("--quiet", flags.quiet, "suppress progress output");
  app.add_flag("--svg", flags.svg, "also emit SVG heatmaps");

  auto* simulate = app.add_subcommand("simulate", "run one JSON config");
  std::string sim_config;
  simulate->add_option("config", sim_config, "config file")->required();

  auto* montecarlo =
      app.add_subcommand("montecarlo", "positivity study over random teams");
  std::string mc_config;
  long long mc_n = 0;
  double mc_horizon = 100.0;
  double mc_probe = 0.01;
  int mc_jobs = 0;
  std::vector<double> mc_certified;
  montecarlo->add_option("config", mc_config, "config file")->required();
  montecarlo->add_option("--n", mc_n, "number of runs (default 1000)");
  montecarlo->add_option("--horizon", mc_horizon, "integration horizon");
  montecarlo->add_option("--probe", mc_probe,
                         "positivity probe as a fraction of min A(0)");
  montecarlo
      ->add_option("--certified", mc_certified,
                   "accuracy eps and confidence xi; enforces the sample bound")
      ->expected(2);
  montecarlo->add_option("--jobs", mc_jobs, "worker threads (0 = all cores)");

  auto* scenario = app.add_subcommand("scenario", "run a built-in scenario");
  std::string scenario_name;
  bool scenario_list = false;
  scenario->add_option("name", scenario_name, "scenario name");
  scenario->add_flag("--list", scenario_list, "list scenario names");

  auto* check =
      app.add_subcommand("check", "validate a config's model hypotheses");
  std::string check_config;
  check->add_option("config", check_config, "config file")->required();

  auto* sweep = app.add_subcommand("sweep", "run a config across parameters");
  std::string sweep_config;
  std::string sweep_param;
  sweep->add_option("config", sweep_config, "config file")->required();
  sweep->add_option("--param", sweep_param, "dot path=v1,v2,...")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help() << "\n";
    return 2;
  }

  if (*seed_opt) flags.seed = seed_value;
  if (*out_opt) flags.out = out_value;

  try {
    if (*simulate) return cmd_simulate(sim_config, flags);
    if (*montecarlo) {
      return cmd_montecarlo(mc_config, mc_n, mc_horizon, mc_probe,
                            mc_certified, mc_jobs, flags);
    }
    if (*scenario) {
      if (!scenario_list && scenario_name.empty()) {
        std::cerr << "scenario: name required (or --list)\n";
        return 2;
      }
      return cmd_scenario(scenario_name, flags, scenario_list);
    }
    if (*check) return cmd_check(check_config, flags);
    if (*sweep) return cmd_sweep(sweep_config, sweep_param, flags);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
