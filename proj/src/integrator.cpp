#include "teamsim/integrator.hpp"

#include <cmath>
#include <sstream>

namespace teamsim {

namespace ode {

Eigen::VectorXd rk4_step(const Rhs& f, double t, const Eigen::VectorXd& y,
                         double h, const Eigen::VectorXd& k1) {
  Eigen::VectorXd k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
  Eigen::VectorXd k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
  Eigen::VectorXd k4 = f(t + h, y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Rk45Step rk45_step(const Rhs& f, double t, const Eigen::VectorXd& y, double h,
                   const Eigen::VectorXd& k1, double rel_tol, double abs_tol) {
  // Fehlberg 4(5) tableau.
  Eigen::VectorXd k2 = f(t + h / 4.0, y + h * (k1 / 4.0));
  Eigen::VectorXd k3 =
      f(t + 3.0 * h / 8.0, y + h * (3.0 / 32.0 * k1 + 9.0 / 32.0 * k2));
  Eigen::VectorXd k4 =
      f(t + 12.0 * h / 13.0,
        y + h * (1932.0 / 2197.0 * k1 - 7200.0 / 2197.0 * k2 +
                 7296.0 / 2197.0 * k3));
  Eigen::VectorXd k5 =
      f(t + h, y + h * (439.0 / 216.0 * k1 - 8.0 * k2 + 3680.0 / 513.0 * k3 -
                        845.0 / 4104.0 * k4));
  Eigen::VectorXd k6 =
      f(t + h / 2.0,
        y + h * (-8.0 / 27.0 * k1 + 2.0 * k2 - 3544.0 / 2565.0 * k3 +
                 1859.0 / 4104.0 * k4 - 11.0 / 40.0 * k5));

  Eigen::VectorXd y4 =
      y + h * (25.0 / 216.0 * k1 + 1408.0 / 2565.0 * k3 +
               2197.0 / 4104.0 * k4 - 1.0 / 5.0 * k5);
  Eigen::VectorXd y5 =
      y + h * (16.0 / 135.0 * k1 + 6656.0 / 12825.0 * k3 +
               28561.0 / 56430.0 * k4 - 9.0 / 50.0 * k5 + 2.0 / 55.0 * k6);

  double err = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    double scale =
        abs_tol + rel_tol * std::max(std::abs(y(i)), std::abs(y5(i)));
    err = std::max(err, std::abs(y5(i) - y4(i)) / scale);
  }
  return {std::move(y5), err};
}

}  // namespace ode

void IntegratorConfig::validate() const {
  if (!(h > 0.0) || !(t_end > 0.0) || h >= t_end) {
    throw std::invalid_argument("integrator: need 0 < h < t_end");
  }
  if (!(sample_every > 0.0)) {
    throw std::invalid_argument("integrator: sample_every must be > 0");
  }
  if (clamp_floor > 0.0) {
    throw std::invalid_argument("integrator: clamp_floor must be <= 0");
  }
  if (convergence_window < 0.0 || !(convergence_tol > 0.0)) {
    throw std::invalid_argument("integrator: bad convergence controls");
  }
}

const char* to_string(TerminalStatus status) {
  switch (status) {
    case TerminalStatus::kConverged:
      return "converged";
    case TerminalStatus::kTEndReached:
      return "t_end_reached";
    case TerminalStatus::kPositivityLost:
      return "positivity_lost";
    case TerminalStatus::kEigenvectorFailed:
      return "eigenvector_failed";
  }
  return "unknown";
}

namespace {

struct EigenvectorFailure {};

// State layout: manager runs integrate w directly (n entries); appraisal
// runs integrate A flattened row-major (n*n entries).
Eigen::MatrixXd unflatten(const Eigen::VectorXd& y, int n) {
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic,
                                        Eigen::Dynamic, Eigen::RowMajor>>(
      y.data(), n, n);
}

Eigen::VectorXd flatten(const Eigen::MatrixXd& a) {
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm =
      a;
  return Eigen::Map<const Eigen::VectorXd>(rm.data(), rm.size());
}

class ModelOde {
 public:
  ModelOde(const ModelSpec& spec, const SkillVector& x,
           const Eigen::MatrixXd& anchor, const IntegratorConfig& cfg)
      : spec_(spec), x_(x), anchor_(anchor), cfg_(cfg) {
    n_ = x.size();
    warm_ = Eigen::VectorXd::Constant(n_, 1.0 / n_);
  }

  bool is_manager() const { return spec_.model == ModelKind::kManager; }

  // Assignment at a raw state vector; updates the warm start.
  Eigen::VectorXd assignment(const Eigen::VectorXd& y) {
    if (is_manager()) return y;
    Eigen::MatrixXd a = unflatten(y, n_).cwiseMax(0.0);
    auto w = detail::assignment_raw(a, spec_.assignment_rule, &warm_,
                                    cfg_.eig_tol, cfg_.eig_max_iter);
    if (!w) throw EigenvectorFailure{};
    warm_ = *w;
    return *w;
  }

  Eigen::VectorXd operator()(double /*t*/, const Eigen::VectorXd& y) {
    ++evals_;
    if (is_manager()) {
      Eigen::VectorXd p = detail::performance_raw(x_.values(), y, spec_.f);
      double mean = y.dot(p);
      return y.cwiseProduct((p.array() - mean).matrix());
    }
    Eigen::MatrixXd a = unflatten(y, n_);
    Eigen::VectorXd w = assignment(y);
    Eigen::VectorXd p = detail::performance_raw(x_.values(), w, spec_.f);
    Eigen::VectorXd phi = p - spec_.observation->values() * p;
    Eigen::MatrixXd d = detail::appraise_term(a, phi, spec_.params.gamma_sens);
    if (spec_.model == ModelKind::kAssignAppraiseInfluence) {
      d /= spec_.params.tau_app;
      if (spec_.influence_rule == InfluenceRule::kDeGroot) {
        d += detail::degroot_term(a) / spec_.params.tau_ave;
      } else {
        d += detail::friedkin_johnsen_term(a, spec_.params.lambda, anchor_) /
             spec_.params.tau_ave;
      }
    }
    return flatten(d);
  }

  long long evaluations() const { return evals_; }

 private:
  const ModelSpec& spec_;
  const SkillVector& x_;
  Eigen::MatrixXd anchor_;
  const IntegratorConfig& cfg_;
  int n_ = 0;
  Eigen::VectorXd warm_;
  long long evals_ = 0;
};

void validate_hypotheses(const ModelSpec& spec, const InitialState& init) {
  int n = init.x.size();
  spec.validate(n);
  if (spec.model == ModelKind::kManager) {
    if (!init.w0) {
      throw std::invalid_argument("manager model needs an initial assignment");
    }
    if (init.w0->size() != n) {
      throw std::invalid_argument("initial assignment has the wrong size");
    }
    return;
  }
  if (!init.a0) {
    throw std::invalid_argument(
        "appraisal models need an initial appraisal matrix");
  }
  if (init.a0->size() != n) {
    throw std::invalid_argument("initial appraisals have the wrong size");
  }
  ConnectivityReport rep = classify_connectivity(init.a0->values());
  if (spec.model == ModelKind::kAssignAppraise) {
    if (!rep.irreducible || !rep.positive_diagonal) {
      throw std::invalid_argument(
          "assign/appraise hypothesis violated: A(0) must be irreducible "
          "with strictly positive diagonal");
    }
  } else {
    if (!rep.primitive) {
      throw std::invalid_argument(
          "assign/appraise/influence hypothesis violated: A(0) must be "
          "primitive (entrywise-positive matrices qualify)");
    }
  }
}

}  // namespace

Trajectory integrate(const ModelSpec& spec, const InitialState& init,
                     const IntegratorConfig& cfg, const MetricHooks& hooks) {
  cfg.validate();
  validate_hypotheses(spec, init);

  const int n = init.x.size();
  const bool manager = spec.model == ModelKind::kManager;

  Eigen::MatrixXd anchor;
  if (spec.influence_rule == InfluenceRule::kFriedkinJohnsen) {
    anchor = spec.prejudice_anchor ? *spec.prejudice_anchor
                                   : init.a0->values();
  }

  ModelOde model(spec, init.x, anchor, cfg);

  Eigen::VectorXd y =
      manager ? init.w0->values() : flatten(init.a0->values());
  const int rows = manager ? 1 : n;
  const int cols = n;

  Trajectory traj;
  double t = 0.0;
  double h = cfg.h;
  double next_sample = 0.0;
  double quiet_since = -1.0;  // start of the current below-tol interval

  auto row_sum = [&](const Eigen::VectorXd& state, int r) {
    return state.segment(static_cast<Eigen::Index>(r) * cols, cols).sum();
  };

  auto record_sample = [&](const Eigen::VectorXd& state, double time,
                           const Eigen::VectorXd& w) {
    Sample s;
    s.t = time;
    s.w = w;
    if (!manager) s.appraisals = unflatten(state, n);
    s.p = detail::performance_raw(init.x.values(), w, spec.f);
    s.phi = manager || !spec.observation
                ? Eigen::VectorXd::Zero(n)
                : Eigen::VectorXd(s.p - spec.observation->values() * s.p);
    for (const auto& [name, hook] : hooks) {
      s.metrics[name] = hook(s, init.x);
    }
    traj.samples.push_back(std::move(s));
  };

  auto lyapunov = [&](const Eigen::VectorXd& w) {
    if (manager) {
      double v = 0.0;
      for (int i = 0; i < n; ++i) {
        v -= init.x[i] * std::log(w(i) / init.x[i]);
      }
      return v;
    }
    double hi = -std::numeric_limits<double>::infinity();
    double lo = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      double r = init.x[i] / w(i);
      hi = std::max(hi, r);
      lo = std::min(lo, r);
    }
    return std::log(hi / lo);
  };

  auto watch_state = [&](const Eigen::VectorXd& state,
                         const Eigen::VectorXd& w) {
    if (!manager) {
      traj.stats.min_appraisal_entry =
          std::min(traj.stats.min_appraisal_entry, state.minCoeff());
    }
    traj.stats.w_min = std::min(traj.stats.w_min, w.minCoeff());
    traj.stats.w_max = std::max(traj.stats.w_max, w.maxCoeff());
  };

  try {
    Eigen::VectorXd w = model.assignment(y);
    watch_state(y, w);
    record_sample(y, t, w);
    next_sample = cfg.sample_every;
    double lyap_prev = lyapunov(w);

    auto rhs = [&model](double tt, const Eigen::VectorXd& yy) {
      return model(tt, yy);
    };

    while (true) {
      Eigen::VectorXd k1 = model(t, y);
      double dnorm = k1.lpNorm<Eigen::Infinity>();

      if (dnorm < cfg.convergence_tol) {
        if (quiet_since < 0.0) quiet_since = t;
        if (t - quiet_since >= cfg.convergence_window) {
          traj.status = TerminalStatus::kConverged;
          break;
        }
      } else {
        quiet_since = -1.0;
      }
      if (t >= cfg.t_end - 1e-12) {
        traj.status = TerminalStatus::kTEndReached;
        break;
      }

      // Never overshoot t_end or the next sample time.
      double h_step = std::min(h, cfg.t_end - t);
      if (cfg.method == StepMethod::kRk45Adaptive) {
        h_step = std::min(h_step, next_sample - t > 1e-12
                                      ? next_sample - t
                                      : cfg.sample_every);
      }

      Eigen::VectorXd y_new;
      if (cfg.method == StepMethod::kRk4Fixed) {
        y_new = ode::rk4_step(rhs, t, y, h_step, k1);
      } else {
        // Shrink until the weighted error estimate accepts the step.
        while (true) {
          auto attempt = ode::rk45_step(rhs, t, y, h_step, k1,
                                        cfg.rk45_rel_tol, cfg.rk45_abs_tol);
          if (attempt.error <= 1.0) {
            y_new = std::move(attempt.y);
            double grow = attempt.error > 0.0
                              ? 0.9 * std::pow(attempt.error, -0.2)
                              : 5.0;
            h = h_step * std::clamp(grow, 0.2, 5.0);
            break;
          }
          h_step *= std::clamp(0.9 * std::pow(attempt.error, -0.25), 0.1, 0.9);
          if (h_step < 1e-12) {
            throw std::runtime_error("rk45: step size underflow");
          }
        }
      }

      // Manifold enforcement: measure drift, clamp stray negatives,
      // renormalize rows. An entry below the clamp floor is a real model
      // violation and aborts the run.
      bool lost = false;
      for (int r = 0; r < rows && !lost; ++r) {
        double drift = std::abs(row_sum(y_new, r) - 1.0);
        traj.stats.max_row_drift = std::max(traj.stats.max_row_drift, drift);
        // negated comparison also catches NaN from a blown-up step
        if (!(drift <= cfg.renorm_tol)) {
          std::ostringstream os;
          os << "integrator: row-sum drift " << drift << " exceeds renorm_tol "
             << cfg.renorm_tol;
          throw std::runtime_error(os.str());
        }
        auto row = y_new.segment(static_cast<Eigen::Index>(r) * cols, cols);
        for (int c = 0; c < cols; ++c) {
          if (row(c) < cfg.clamp_floor) {
            traj.stats.min_appraisal_entry =
                std::min(traj.stats.min_appraisal_entry, row(c));
            lost = true;
            break;
          }
          if (row(c) < 0.0) row(c) = 0.0;
        }
        if (!lost) row /= row.sum();
      }
      if (lost) {
        traj.status = TerminalStatus::kPositivityLost;
        break;
      }

      t += h_step;
      y = std::move(y_new);
      ++traj.stats.steps;

      Eigen::VectorXd w_now = model.assignment(y);
      watch_state(y, w_now);
      double lyap_now = lyapunov(w_now);
      traj.stats.lyapunov_max_step_increase = std::max(
          traj.stats.lyapunov_max_step_increase, lyap_now - lyap_prev);
      lyap_prev = lyap_now;

      if (t >= next_sample - 1e-9) {
        record_sample(y, t, w_now);
        while (next_sample <= t + 1e-9) next_sample += cfg.sample_every;
      }
    }

    // Terminal state is always recorded.
    if (traj.status != TerminalStatus::kPositivityLost &&
        (traj.samples.empty() || traj.samples.back().t < t - 1e-12)) {
      record_sample(y, t, model.assignment(y));
    }
  } catch (const EigenvectorFailure&) {
    traj.status = TerminalStatus::kEigenvectorFailed;
  }

  traj.t_final = t;
  traj.stats.rhs_evaluations = model.evaluations();
  return traj;
}

}  // namespace teamsim
