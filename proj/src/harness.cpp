#include "teamsim/harness.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "teamsim/artifacts.hpp"
#include "teamsim/metrics.hpp"
#include "teamsim/spectral.hpp"

namespace teamsim {

namespace {

constexpr double kBoxTol = 1e-9;
constexpr double kLyapTolManager = 1e-10;
constexpr double kLyapTolRatio = 1e-8;

Eigen::VectorXd flatten_rows(const Eigen::MatrixXd& a) {
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm =
      a;
  return Eigen::Map<const Eigen::VectorXd>(rm.data(), rm.size());
}

Eigen::MatrixXd unflatten_rows(const Eigen::VectorXd& y, int n) {
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic,
                                        Eigen::Dynamic, Eigen::RowMajor>>(
      y.data(), n, n);
}

double nan_value() { return std::numeric_limits<double>::quiet_NaN(); }

}  // namespace

MaterializedRun materialize(const ExperimentConfig& cfg, Rng& rng) {
  if (cfg.n < 2) {
    throw std::invalid_argument("config: n must be at least 2");
  }
  if (cfg.random_assignment_baseline &&
      cfg.model.model != ModelKind::kAssignAppraise) {
    throw std::invalid_argument(
        "config: the random-assignment baseline replaces the assignment "
        "rule of the assign/appraise model");
  }

  SkillVector x = [&] {
    if (cfg.skills.kind == SkillGen::Kind::kExplicit) {
      if (cfg.skills.values.size() != cfg.n) {
        throw std::invalid_argument("config: skills list has wrong length");
      }
      return SkillVector(cfg.skills.values);
    }
    return random_skills(rng, cfg.n, cfg.skills.min_entry);
  }();

  std::optional<Assignment> w0;
  if (cfg.model.model == ModelKind::kManager) {
    switch (cfg.initial_assignment.kind) {
      case AssignmentGen::Kind::kUniform:
        w0 = Assignment(Eigen::VectorXd::Constant(cfg.n, 1.0 / cfg.n));
        break;
      case AssignmentGen::Kind::kDirichletUniform:
        w0 = random_interior_assignment(rng, cfg.n,
                                        cfg.initial_assignment.min_entry);
        break;
      case AssignmentGen::Kind::kExplicit:
        if (cfg.initial_assignment.values.size() != cfg.n) {
          throw std::invalid_argument(
              "config: initial assignment has wrong length");
        }
        w0 = Assignment(cfg.initial_assignment.values);
        break;
    }
  }

  std::optional<AppraisalMatrix> a0;
  std::optional<ObservationMatrix> m;
  if (cfg.model.model != ModelKind::kManager) {
    switch (cfg.initial_appraisals.kind) {
      case AppraisalGen::Kind::kDirichletUniformRows:
        a0 = random_appraisals_positive(rng, cfg.n,
                                        cfg.initial_appraisals.min_entry);
        break;
      case AppraisalGen::Kind::kSparsePattern:
        a0 = random_appraisals_sparse(rng, cfg.n,
                                      cfg.initial_appraisals.density);
        break;
      case AppraisalGen::Kind::kExplicit:
        if (cfg.initial_appraisals.values.rows() != cfg.n) {
          throw std::invalid_argument(
              "config: initial appraisals have wrong dimension");
        }
        a0 = AppraisalMatrix(cfg.initial_appraisals.values);
        break;
    }
    switch (cfg.observation.kind) {
      case ObservationGen::Kind::kStronglyConnectedRandom:
        m = observation_strongly_connected(rng, cfg.n,
                                           cfg.observation.extra_edges);
        break;
      case ObservationGen::Kind::kSingleSinkRandom:
        m = observation_single_sink(rng, cfg.n);
        break;
      case ObservationGen::Kind::kDisconnectedComponents:
        m = observation_disconnected(rng, cfg.n);
        break;
      case ObservationGen::Kind::kExplicit:
        if (cfg.observation.values.rows() != cfg.n) {
          throw std::invalid_argument(
              "config: observation matrix has wrong dimension");
        }
        m = ObservationMatrix(cfg.observation.values);
        break;
    }
  }

  MaterializedRun run{std::move(x), std::move(w0), std::move(a0), cfg.model};
  run.spec.observation = std::move(m);
  if (run.spec.influence_rule == InfluenceRule::kFriedkinJohnsen) {
    if (run.spec.params.lambda.size() == 0) {
      run.spec.params.lambda = Eigen::VectorXd::Constant(cfg.n, 0.5);
    }
    if (!run.spec.prejudice_anchor && run.a0) {
      run.spec.prejudice_anchor = run.a0->values();
    }
  }
  return run;
}

namespace {

double metric_h1(const Sample& s, const SkillVector& x) {
  double h = 0.0;
  for (int i = 0; i < x.size(); ++i) {
    h += std::abs(s.w(i) / x[i] - 1.0);
  }
  return h;
}

double metric_spread(const Sample& s, const SkillVector&) {
  if (s.appraisals.size() == 0) return nan_value();
  double spread = 0.0;
  for (Eigen::Index j = 0; j < s.appraisals.cols(); ++j) {
    spread = std::max(spread, s.appraisals.col(j).maxCoeff() -
                                  s.appraisals.col(j).minCoeff());
  }
  return spread;
}

double metric_triads(const Sample& s, const SkillVector&) {
  if (s.appraisals.size() == 0 || s.appraisals.rows() < 3) return nan_value();
  return nontransitive_triad_count(
      comparative_graph(AppraisalMatrix(s.appraisals)));
}

double metric_lyap_manager(const Sample& s, const SkillVector& x) {
  double v = 0.0;
  for (int i = 0; i < x.size(); ++i) {
    if (s.w(i) <= 0.0) return nan_value();
    v -= x[i] * std::log(s.w(i) / x[i]);
  }
  return v;
}

double metric_lyap_ratio(const Sample& s, const SkillVector& x) {
  double hi = -std::numeric_limits<double>::infinity();
  double lo = std::numeric_limits<double>::infinity();
  for (int i = 0; i < x.size(); ++i) {
    if (s.w(i) <= 0.0) return nan_value();
    double r = x[i] / s.w(i);
    hi = std::max(hi, r);
    lo = std::min(lo, r);
  }
  return std::log(hi / lo);
}

double metric_min_entry(const Sample& s, const SkillVector&) {
  if (s.appraisals.size() == 0) return nan_value();
  return s.appraisals.minCoeff();
}

}  // namespace

MetricHooks metric_hooks(const std::vector<std::string>& names) {
  MetricHooks hooks;
  for (const auto& name : names) {
    if (name == "h1") {
      hooks[name] = metric_h1;
    } else if (name == "spread") {
      hooks[name] = metric_spread;
    } else if (name == "triads") {
      hooks[name] = metric_triads;
    } else if (name == "lyapunov_manager") {
      hooks[name] = metric_lyap_manager;
    } else if (name == "lyapunov_ratio") {
      hooks[name] = metric_lyap_ratio;
    } else if (name == "min_entry") {
      hooks[name] = metric_min_entry;
    } else {
      throw std::invalid_argument("unknown metric: " + name);
    }
  }
  return hooks;
}

std::vector<std::string> default_outputs(const ExperimentConfig& cfg) {
  if (cfg.model.model == ModelKind::kManager) {
    return {"h1", "lyapunov_manager"};
  }
  return {"h1", "spread", "triads", "lyapunov_ratio", "min_entry"};
}

bool HypothesisReport::all_satisfied() const {
  for (const auto& c : checks) {
    if (!c.satisfied) return false;
  }
  return true;
}

std::string HypothesisReport::violated_names() const {
  std::string joined;
  for (const auto& c : checks) {
    if (c.satisfied) continue;
    if (!joined.empty()) joined += "; ";
    joined += c.name;
  }
  return joined;
}

HypothesisReport check_hypotheses(const ExperimentConfig& cfg,
                                  const MaterializedRun& run) {
  HypothesisReport rep;
  auto add = [&rep](std::string name, bool ok) {
    rep.checks.push_back({std::move(name), ok});
  };

  if (run.spec.model == ModelKind::kManager) {
    add("Theorem 1 hypothesis: interior initial assignment",
        run.w0 && run.w0->values().minCoeff() > 0.0);
    return rep;
  }

  ConnectivityReport a_rep = classify_connectivity(run.a0->values());
  ConnectivityReport m_rep =
      classify_connectivity(run.spec.observation->values());
  bool eigenrule = !cfg.random_assignment_baseline &&
                   run.spec.assignment_rule == AssignmentRule::kEigenvector;

  if (run.spec.model == ModelKind::kAssignAppraise) {
    add("Theorem 2 hypothesis: A(0) row-stochastic, irreducible, strictly "
        "positive diagonal",
        a_rep.irreducible && a_rep.positive_diagonal);
    add("Theorem 3 hypothesis: strongly connected observation network",
        m_rep.strongly_connected);
    add("Assumption 3 hypothesis: eigenvector assignment rule", eigenrule);
  } else {
    add("Theorem 4 hypothesis: entrywise-positive (or primitive) A(0)",
        run.a0->values().minCoeff() > 0.0 || a_rep.primitive);
    add("Theorem 4 hypothesis: observation network with a globally "
        "reachable node",
        m_rep.has_globally_reachable_node);
    add("Assumption 6 hypothesis: DeGroot influence dynamics",
        run.spec.influence_rule == InfluenceRule::kDeGroot);
    add("Assumption 3 hypothesis: eigenvector assignment rule", eigenrule);
  }
  return rep;
}

Trajectory run_random_baseline(const SkillVector& x, const AppraisalMatrix& a0,
                               const ObservationMatrix& m,
                               const PerformanceFunction& f,
                               const IntegratorConfig& cfg, Rng& rng,
                               const MetricHooks& hooks) {
  cfg.validate();
  const int n = x.size();
  Eigen::VectorXd y = flatten_rows(a0.values());
  Eigen::VectorXd w = rng.simplex_min(n, 1e-3);

  Trajectory traj;
  traj.status = TerminalStatus::kTEndReached;

  auto record = [&](double t) {
    Sample s;
    s.t = t;
    s.appraisals = unflatten_rows(y, n);
    s.w = w;
    s.p = detail::performance_raw(x.values(), w, f);
    s.phi = s.p - m.values() * s.p;
    for (const auto& [name, hook] : hooks) s.metrics[name] = hook(s, x);
    traj.samples.push_back(std::move(s));
  };

  auto rhs = [&](double, const Eigen::VectorXd& yy) {
    Eigen::MatrixXd a = unflatten_rows(yy, n);
    Eigen::VectorXd p = detail::performance_raw(x.values(), w, f);
    Eigen::VectorXd phi = p - m.values() * p;
    ++traj.stats.rhs_evaluations;
    return flatten_rows(detail::appraise_term(a, phi, Eigen::VectorXd()));
  };

  traj.stats.min_appraisal_entry = y.minCoeff();
  traj.stats.w_min = w.minCoeff();
  traj.stats.w_max = w.maxCoeff();
  record(0.0);

  double t = 0.0;
  double next_sample = cfg.sample_every;
  bool lost = false;
  while (t < cfg.t_end - 1e-12 && !lost) {
    double h = std::min(cfg.h, cfg.t_end - t);
    Eigen::VectorXd k1 = rhs(t, y);
    Eigen::VectorXd y_new = ode::rk4_step(rhs, t, y, h, k1);
    for (int r = 0; r < n && !lost; ++r) {
      auto row = y_new.segment(static_cast<Eigen::Index>(r) * n, n);
      double drift = std::abs(row.sum() - 1.0);
      traj.stats.max_row_drift = std::max(traj.stats.max_row_drift, drift);
      if (!(drift <= cfg.renorm_tol)) {
        throw std::runtime_error("random baseline: row-sum drift too large");
      }
      for (int c = 0; c < n; ++c) {
        if (row(c) < cfg.clamp_floor) {
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
    t += h;
    y = std::move(y_new);
    ++traj.stats.steps;
    traj.stats.min_appraisal_entry =
        std::min(traj.stats.min_appraisal_entry, y.minCoeff());
    if (t >= next_sample - 1e-9) {
      w = rng.simplex_min(n, 1e-3);  // redraw at every sample time
      traj.stats.w_min = std::min(traj.stats.w_min, w.minCoeff());
      traj.stats.w_max = std::max(traj.stats.w_max, w.maxCoeff());
      record(t);
      while (next_sample <= t + 1e-9) next_sample += cfg.sample_every;
    }
  }
  if (traj.status != TerminalStatus::kPositivityLost &&
      (traj.samples.empty() || traj.samples.back().t < t - 1e-12)) {
    record(t);
  }
  traj.t_final = t;
  return traj;
}

RunSummary run_in_memory(const ExperimentConfig& cfg, Trajectory* out_traj) {
  Rng rng(cfg.seed);
  MaterializedRun run = materialize(cfg, rng);
  std::vector<std::string> names =
      cfg.outputs.empty() ? default_outputs(cfg) : cfg.outputs;
  MetricHooks hooks = metric_hooks(names);

  Trajectory traj;
  if (cfg.random_assignment_baseline) {
    traj = run_random_baseline(run.x, *run.a0, *run.spec.observation,
                               run.spec.f, cfg.integrator, rng, hooks);
  } else {
    InitialState init{run.x, run.w0, run.a0};
    traj = integrate(run.spec, init, cfg.integrator, hooks);
  }

  RunSummary s;
  s.label = cfg.label;
  s.seed = cfg.seed;
  s.n = cfg.n;
  s.status = traj.status;
  s.t_final = traj.t_final;
  s.stats = traj.stats;
  if (!traj.samples.empty()) {
    s.terminal_metrics = traj.samples.back().metrics;
  }

  bool eigenrule = !cfg.random_assignment_baseline &&
                   run.spec.assignment_rule == AssignmentRule::kEigenvector;
  if (run.spec.model == ModelKind::kAssignAppraiseInfluence && eigenrule &&
      !traj.samples.empty()) {
    AssignmentBox box =
        theorem4_bounds(run.x, Assignment(traj.samples.front().w));
    s.gamma0 = box.gamma0;
    s.xi0 = box.xi0;
    s.theorem4_box_violated =
        traj.stats.w_min < box.xi0 - kBoxTol ||
        traj.stats.w_max > 1.0 - (cfg.n - 1) * box.xi0 + kBoxTol;
  }

  if (run.spec.model == ModelKind::kAssignAppraise && eigenrule && run.a0) {
    const Eigen::MatrixXd& a0m = run.a0->values();
    Eigen::VectorXd diag0 = a0m.diagonal();
    if ((diag0.array() < 1.0 - 1e-9).all()) {
      Eigen::MatrixXd c_rows = a0m;
      c_rows.diagonal().setZero();
      for (int i = 0; i < cfg.n; ++i) {
        c_rows.row(i) /= 1.0 - diag0(i);
      }
      Assignment c = left_dominant_eigenvector(AppraisalMatrix(c_rows));
      Eigen::VectorXd zeta = omega_invariant_bound(diag0, c, run.x);
      for (const Sample& sample : traj.samples) {
        for (int i = 0; i < cfg.n; ++i) {
          if (sample.appraisals(i, i) > 1.0 - zeta(i) + kBoxTol) {
            s.omega_invariant_violated = true;
          }
        }
      }
    }
  }

  double lyap_tol = run.spec.model == ModelKind::kManager ? kLyapTolManager
                                                          : kLyapTolRatio;
  s.lyapunov_monotonicity_violated =
      !cfg.random_assignment_baseline &&
      traj.stats.lyapunov_max_step_increase > lyap_tol;

  s.hypotheses = check_hypotheses(cfg, run);
  if (out_traj) *out_traj = std::move(traj);
  return s;
}

namespace {

nlohmann::ordered_json summary_to_json(const RunSummary& s) {
  nlohmann::ordered_json j;
  j["label"] = s.label;
  j["seed"] = s.seed;
  j["n"] = s.n;
  j["status"] = to_string(s.status);
  j["t_final"] = s.t_final;
  nlohmann::ordered_json terminal;
  for (const auto& [name, value] : s.terminal_metrics) terminal[name] = value;
  j["terminal"] = std::move(terminal);
  j["monitors"] = {
      {"max_row_drift", s.stats.max_row_drift},
      {"lyapunov_max_step_increase", s.stats.lyapunov_max_step_increase},
      {"min_appraisal_entry", s.stats.min_appraisal_entry},
      {"w_min", s.stats.w_min},
      {"w_max", s.stats.w_max},
      {"steps", s.stats.steps},
      {"rhs_evaluations", s.stats.rhs_evaluations},
  };
  j["bounds"] = {
      {"gamma0", s.gamma0},
      {"xi0", s.xi0},
      {"theorem4_box_violated", s.theorem4_box_violated},
      {"omega_invariant_violated", s.omega_invariant_violated},
      {"lyapunov_monotonicity_violated", s.lyapunov_monotonicity_violated},
  };
  nlohmann::ordered_json hyps = nlohmann::ordered_json::array();
  for (const auto& c : s.hypotheses.checks) {
    hyps.push_back({{"name", c.name}, {"satisfied", c.satisfied}});
  }
  j["hypotheses"] = std::move(hyps);
  return j;
}

}  // namespace

void write_run_summary_json(const std::filesystem::path& path,
                            const RunSummary& summary) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string());
  }
  out << summary_to_json(summary).dump(2) << "\n";
}

RunSummary run_experiment(const ExperimentConfig& cfg) {
  Trajectory traj;
  RunSummary summary = run_in_memory(cfg, &traj);

  namespace fs = std::filesystem;
  fs::create_directories(cfg.output_dir);
  std::vector<std::string> names =
      cfg.outputs.empty() ? default_outputs(cfg) : cfg.outputs;
  write_trajectory_csv(cfg.output_dir / "trajectory.csv", traj, names);

  bool has_matrix =
      !traj.samples.empty() && traj.samples.front().appraisals.size() > 0;
  if (has_matrix) {
    fs::create_directories(cfg.output_dir / "snapshots");
    fs::create_directories(cfg.output_dir / "heatmaps");
    std::vector<double> wanted = cfg.snapshot_times;
    if (wanted.empty()) wanted = {0.0, 2.0, 10.0, 30.0, traj.t_final};
    std::vector<size_t> picked;
    for (double target : wanted) {
      size_t best = 0;
      for (size_t i = 1; i < traj.samples.size(); ++i) {
        if (std::abs(traj.samples[i].t - target) <
            std::abs(traj.samples[best].t - target)) {
          best = i;
        }
      }
      if (std::find(picked.begin(), picked.end(), best) == picked.end()) {
        picked.push_back(best);
      }
    }
    for (size_t idx : picked) {
      const Sample& smp = traj.samples[idx];
      std::string stamp = time_stamp(smp.t);
      write_appraisal_json(
          cfg.output_dir / "snapshots" / ("A_t" + stamp + ".json"), smp.t,
          smp.appraisals);
      write_appraisal_pgm(
          cfg.output_dir / "heatmaps" / ("A_t" + stamp + ".pgm"),
          smp.appraisals);
      if (cfg.emit_svg) {
        write_appraisal_svg(
            cfg.output_dir / "heatmaps" / ("A_t" + stamp + ".svg"),
            smp.appraisals);
      }
    }
  }

  write_run_summary_json(cfg.output_dir / "summary.json", summary);
  return summary;
}

long long chernoff_min_samples(double epsilon, double xi) {
  if (!(epsilon > 0.0 && epsilon < 1.0) || !(xi > 0.0 && xi < 1.0)) {
    throw std::domain_error("chernoff_min_samples: need epsilon, xi in (0,1)");
  }
  double bound = std::log(2.0 / xi) / (2.0 * epsilon * epsilon);
  return static_cast<long long>(std::ceil(bound));
}

std::map<std::string, long long> MonteCarloReport::status_counts() const {
  std::map<std::string, long long> counts;
  for (TerminalStatus st : statuses) ++counts[to_string(st)];
  return counts;
}

MonteCarloReport montecarlo_positivity(const ExperimentConfig& cfg,
                                       long long n_runs, double horizon,
                                       double a_min_probe, int jobs) {
  if (cfg.model.model != ModelKind::kAssignAppraiseInfluence ||
      cfg.random_assignment_baseline) {
    throw std::invalid_argument(
        "montecarlo_positivity: model must be assign/appraise/influence");
  }
  if (n_runs < 0 || !(horizon > 0.0) || !(a_min_probe > 0.0)) {
    throw std::invalid_argument("montecarlo_positivity: bad parameters");
  }

  MonteCarloReport report;
  report.n_runs = n_runs;
  report.horizon = horizon;
  report.a_min_probe = a_min_probe;
  if (n_runs == 0) return report;  // p_hat stays NaN: undefined, flagged

  IntegratorConfig icfg = cfg.integrator;
  icfg.t_end = horizon;
  icfg.sample_every = horizon;  // endpoints only; monitors run per step

  report.statuses.resize(static_cast<size_t>(n_runs));
  std::vector<unsigned char> z(static_cast<size_t>(n_runs), 0);

  Rng master(cfg.seed);
  std::atomic<long long> cursor{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  auto worker = [&] {
    while (true) {
      long long i = cursor.fetch_add(1);
      if (i >= n_runs) return;
      try {
        Rng child = master.split(static_cast<uint64_t>(i));
        MaterializedRun run = materialize(cfg, child);
        double min0 = run.a0->values().minCoeff();
        if (min0 <= 0.0) {
          throw std::invalid_argument(
              "montecarlo_positivity: A(0) generator must be entrywise "
              "positive");
        }
        InitialState init{run.x, run.w0, run.a0};
        Trajectory traj = integrate(run.spec, init, icfg, {});
        report.statuses[static_cast<size_t>(i)] = traj.status;
        bool finished = traj.status == TerminalStatus::kConverged ||
                        traj.status == TerminalStatus::kTEndReached;
        z[static_cast<size_t>(i)] =
            finished &&
            traj.stats.min_appraisal_entry >= a_min_probe * min0;
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  int pool = jobs > 0 ? jobs
                      : static_cast<int>(std::max(
                            1u, std::thread::hardware_concurrency()));
  pool = static_cast<int>(std::min<long long>(pool, n_runs));
  std::vector<std::thread> threads;
  threads.reserve(static_cast<size_t>(pool));
  for (int k = 0; k < pool; ++k) threads.emplace_back(worker);
  for (auto& th : threads) th.join();
  if (first_error) std::rethrow_exception(first_error);

  for (long long i = 0; i < n_runs; ++i) {
    report.successes += z[static_cast<size_t>(i)];
  }
  report.p_hat =
      static_cast<double>(report.successes) / static_cast<double>(n_runs);
  return report;
}

void write_montecarlo_json(const std::filesystem::path& path,
                           const MonteCarloReport& report) {
  nlohmann::ordered_json j;
  j["n_runs"] = report.n_runs;
  j["successes"] = report.successes;
  if (std::isnan(report.p_hat)) {
    j["p_hat"] = nullptr;
    j["p_hat_defined"] = false;
  } else {
    j["p_hat"] = report.p_hat;
    j["p_hat_defined"] = true;
  }
  if (!std::isnan(report.epsilon)) {
    j["epsilon"] = report.epsilon;
    j["xi"] = report.xi;
    j["chernoff_n_min"] = report.chernoff_n_min;
    j["certified"] = report.n_runs >= report.chernoff_n_min;
  }
  j["horizon"] = report.horizon;
  j["a_min_probe"] = report.a_min_probe;
  nlohmann::ordered_json counts;
  for (const auto& [name, count] : report.status_counts()) {
    counts[name] = count;
  }
  j["status_counts"] = std::move(counts);
  nlohmann::ordered_json statuses = nlohmann::ordered_json::array();
  for (TerminalStatus st : report.statuses) statuses.push_back(to_string(st));
  j["statuses"] = std::move(statuses);

  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string());
  }
  out << j.dump(2) << "\n";
}

}  // namespace teamsim
