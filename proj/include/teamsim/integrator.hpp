#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "teamsim/dynamics.hpp"

// Time-stepping engine. Advances any ModelSpec while enforcing the state
// manifold (row-stochastic, nonnegative) and monitoring the Lyapunov
// functions, the assignment box and entrywise positivity.

namespace teamsim {

enum class StepMethod { kRk4Fixed, kRk45Adaptive };

struct IntegratorConfig {
  StepMethod method = StepMethod::kRk4Fixed;
  double h = 0.01;            // fixed step, or initial step for rk45
  double t_end = 100.0;
  double sample_every = 0.1;
  double renorm_tol = 1e-9;   // allowed row-sum drift before renormalizing
  double clamp_floor = -1e-9; // entries below this abort the run
  double convergence_window = 1.0;
  double convergence_tol = 1e-8;  // on the max-norm of the derivative
  // rk45 error control
  double rk45_rel_tol = 1e-8;
  double rk45_abs_tol = 1e-10;
  // eigenvector solves inside the right-hand side
  double eig_tol = 1e-12;
  int eig_max_iter = 100000;

  void validate() const;
};

enum class TerminalStatus {
  kConverged,
  kTEndReached,
  kPositivityLost,
  kEigenvectorFailed,
};

const char* to_string(TerminalStatus status);

struct Sample {
  double t = 0.0;
  Eigen::MatrixXd appraisals;  // empty for manager runs
  Eigen::VectorXd w;
  Eigen::VectorXd p;
  Eigen::VectorXd phi;
  std::map<std::string, double> metrics;
};

/// Quantities tracked at every accepted step, not just at samples.
struct MonitorStats {
  double max_row_drift = 0.0;
  // max over steps of V(new)-V(old) for the model's Lyapunov function
  // (manager: -sum x_i log(w_i/x_i); appraisal models: the ratio form).
  double lyapunov_max_step_increase = -std::numeric_limits<double>::infinity();
  double min_appraisal_entry = std::numeric_limits<double>::infinity();
  double w_min = std::numeric_limits<double>::infinity();
  double w_max = -std::numeric_limits<double>::infinity();
  long long steps = 0;
  long long rhs_evaluations = 0;
};

struct Trajectory {
  std::vector<Sample> samples;
  TerminalStatus status = TerminalStatus::kTEndReached;
  MonitorStats stats;
  double t_final = 0.0;

  const Sample& back() const { return samples.back(); }
};

struct InitialState {
  SkillVector x;
  std::optional<Assignment> w0;        // manager model
  std::optional<AppraisalMatrix> a0;   // appraisal models
};

// Hooks are evaluated at every recorded sample; they must be pure.
using MetricHook = std::function<double(const Sample&, const SkillVector&)>;
using MetricHooks = std::map<std::string, MetricHook>;

/// Integrates the model from the given initial state. Throws
/// std::invalid_argument when the initial state violates the model's
/// structural hypotheses (checked through classify_connectivity).
Trajectory integrate(const ModelSpec& spec, const InitialState& init,
                     const IntegratorConfig& cfg,
                     const MetricHooks& hooks = {});

namespace ode {

// Generic single steps over flat state vectors, shared by the model
// integrator, the reduced-dynamics tests and the random-assignment
// baseline.

using Rhs = std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>;

Eigen::VectorXd rk4_step(const Rhs& f, double t, const Eigen::VectorXd& y,
                         double h, const Eigen::VectorXd& k1);

struct Rk45Step {
  Eigen::VectorXd y;  // 5th-order solution
  double error;       // weighted error norm; accept when <= 1
};

Rk45Step rk45_step(const Rhs& f, double t, const Eigen::VectorXd& y, double h,
                   const Eigen::VectorXd& k1, double rel_tol, double abs_tol);

}  // namespace ode

}  // namespace teamsim
