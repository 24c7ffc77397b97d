#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "teamsim/integrator.hpp"
#include "teamsim/rng.hpp"

// Declarative experiment runner: config materialization, metric registry,
// artifact emission, hypothesis checks and the Monte Carlo positivity
// study.

namespace teamsim {

struct SkillGen {
  enum class Kind { kDirichletUniform, kExplicit };
  Kind kind = Kind::kDirichletUniform;
  double min_entry = 0.05;
  Eigen::VectorXd values;
};

struct AssignmentGen {
  enum class Kind { kUniform, kDirichletUniform, kExplicit };
  Kind kind = Kind::kUniform;
  double min_entry = 0.02;
  Eigen::VectorXd values;
};

struct AppraisalGen {
  enum class Kind { kDirichletUniformRows, kExplicit, kSparsePattern };
  Kind kind = Kind::kDirichletUniformRows;
  double min_entry = 1e-3;  // entrywise floor for the positive generator
  double density = 0.5;     // extra-edge probability for the sparse one
  Eigen::MatrixXd values;
};

struct ObservationGen {
  enum class Kind {
    kExplicit,
    kStronglyConnectedRandom,
    kSingleSinkRandom,
    kDisconnectedComponents,
  };
  Kind kind = Kind::kStronglyConnectedRandom;
  int extra_edges = 2;
  Eigen::MatrixXd values;
};

struct ExperimentConfig {
  uint64_t seed = 1;
  int n = 6;
  std::string label = "run";
  SkillGen skills;
  AssignmentGen initial_assignment;  // manager and random-baseline runs
  AppraisalGen initial_appraisals;
  ObservationGen observation;
  ModelSpec model;
  // Replaces the assignment rule with i.i.d. uniform-simplex redraws at
  // every sample time (the "random team" used as a TMS baseline).
  bool random_assignment_baseline = false;
  IntegratorConfig integrator;
  std::vector<std::string> outputs;  // metric names; empty = model default
  std::filesystem::path output_dir = "out/run";
  std::vector<double> snapshot_times;  // empty = {0, 2, 10, 30, t_end}
  bool emit_svg = false;
  // Name fragment of the hypothesis this config deliberately violates
  // (e.g. "Theorem 3"); empty declares every hypothesis satisfied.
  std::string declared_violation;
};

/// Concrete team drawn from the config's generators.
struct MaterializedRun {
  SkillVector x;
  std::optional<Assignment> w0;
  std::optional<AppraisalMatrix> a0;
  ModelSpec spec;  // observation matrix and FJ anchor filled in
};

/// Draw order is fixed (skills, assignment, appraisals, observation) so a
/// seed pins the whole team.
MaterializedRun materialize(const ExperimentConfig& cfg, Rng& rng);

/// Registry of named per-sample metrics: h1, spread, triads,
/// lyapunov_manager, lyapunov_ratio, min_entry. Unknown names throw.
MetricHooks metric_hooks(const std::vector<std::string>& names);
std::vector<std::string> default_outputs(const ExperimentConfig& cfg);

struct HypothesisCheck {
  std::string name;
  bool satisfied = false;
};

struct HypothesisReport {
  std::vector<HypothesisCheck> checks;

  bool all_satisfied() const;
  std::string violated_names() const;
};

/// The structural hypotheses of the theorem governing this model, each
/// evaluated on the materialized team.
HypothesisReport check_hypotheses(const ExperimentConfig& cfg,
                                  const MaterializedRun& run);

struct RunSummary {
  std::string label;
  uint64_t seed = 0;
  int n = 0;
  TerminalStatus status = TerminalStatus::kTEndReached;
  double t_final = 0.0;
  std::map<std::string, double> terminal_metrics;
  MonitorStats stats;
  // Assignment box of the influence model, when it applies.
  double gamma0 = std::numeric_limits<double>::quiet_NaN();
  double xi0 = std::numeric_limits<double>::quiet_NaN();
  bool theorem4_box_violated = false;
  bool omega_invariant_violated = false;
  bool lyapunov_monotonicity_violated = false;
  HypothesisReport hypotheses;
};

/// Runs the config and writes trajectory.csv, snapshots/, heatmaps/ and
/// summary.json under cfg.output_dir.
RunSummary run_experiment(const ExperimentConfig& cfg);

/// Same run without touching the filesystem; also returns the trajectory.
RunSummary run_in_memory(const ExperimentConfig& cfg, Trajectory* out_traj);

/// Random-assignment baseline: appraise dynamics driven by a workload
/// vector redrawn uniformly on the simplex at every sample time.
Trajectory run_random_baseline(const SkillVector& x, const AppraisalMatrix& a0,
                               const ObservationMatrix& m,
                               const PerformanceFunction& f,
                               const IntegratorConfig& cfg, Rng& rng,
                               const MetricHooks& hooks);

/// Smallest N with N >= log(2/xi) / (2 epsilon^2).
long long chernoff_min_samples(double epsilon, double xi);

struct MonteCarloReport {
  long long n_runs = 0;
  long long successes = 0;
  double p_hat = std::numeric_limits<double>::quiet_NaN();  // NaN when N=0
  double epsilon = std::numeric_limits<double>::quiet_NaN();
  double xi = std::numeric_limits<double>::quiet_NaN();
  long long chernoff_n_min = 0;
  double horizon = 0.0;
  double a_min_probe = 0.0;
  std::vector<TerminalStatus> statuses;  // indexed by run
  std::map<std::string, long long> status_counts() const;
};

/// Estimates the probability that the appraisal matrix stays entrywise
/// positive: run i uses sub-seed split(i), redraws every generated input,
/// and scores Z_i = 1 iff the run finished and min A(t) never fell below
/// a_min_probe times the initial minimum entry. Results are merged by run
/// index, so scheduling cannot change the report.
MonteCarloReport montecarlo_positivity(const ExperimentConfig& cfg,
                                       long long n_runs, double horizon,
                                       double a_min_probe = 0.01,
                                       int jobs = 0);

void write_run_summary_json(const std::filesystem::path& path,
                            const RunSummary& summary);
void write_montecarlo_json(const std::filesystem::path& path,
                           const MonteCarloReport& report);

}  // namespace teamsim
