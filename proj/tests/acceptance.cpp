// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Runs at desk scale (n <= 8, t_end <= 200); every tolerance is
// pinned in code.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <vector>

#include "oracles.hpp"
#include "teamsim/harness.hpp"
#include "teamsim/scenarios.hpp"

using namespace teamsim;

namespace {

int g_failures = 0;

void report(int number, const std::string& name, bool ok,
            const std::string& detail) {
  std::printf("[%s] %2d. %s%s%s\n", ok ? "PASS" : "FAIL", number, name.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  if (!ok) ++g_failures;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// --- pinned run families ------------------------------------------------

ExperimentConfig manager_config(uint64_t seed) {
  ExperimentConfig cfg;
  cfg.seed = seed;
  cfg.n = 6;
  cfg.skills.min_entry = 0.05;
  cfg.model.model = ModelKind::kManager;
  cfg.initial_assignment.kind = AssignmentGen::Kind::kDirichletUniform;
  cfg.initial_assignment.min_entry = 0.02;
  cfg.integrator.t_end = 200.0;
  cfg.integrator.sample_every = 10.0;
  cfg.integrator.convergence_tol = 1e-13;
  return cfg;
}

ExperimentConfig learning_config(uint64_t seed) {
  ExperimentConfig cfg;
  cfg.seed = seed;
  cfg.n = 6;
  cfg.skills.min_entry = 0.10;
  cfg.model.model = ModelKind::kAssignAppraise;
  cfg.model.params.gamma_sens = Eigen::VectorXd::Constant(6, 6.0);
  cfg.initial_appraisals.kind = AppraisalGen::Kind::kSparsePattern;
  cfg.initial_appraisals.density = 0.9;
  cfg.observation.kind = ObservationGen::Kind::kStronglyConnectedRandom;
  cfg.observation.extra_edges = 3;
  cfg.integrator.t_end = 100.0;
  cfg.integrator.sample_every = 0.01;  // every step, for the FD check
  cfg.integrator.convergence_tol = 1e-13;
  cfg.outputs = {"h1"};
  return cfg;
}

ExperimentConfig collective_config(uint64_t seed) {
  ExperimentConfig cfg;
  cfg.seed = seed;
  cfg.n = 6;
  cfg.skills.min_entry = 0.10;
  cfg.model.model = ModelKind::kAssignAppraiseInfluence;
  cfg.model.influence_rule = InfluenceRule::kDeGroot;
  cfg.model.params.tau_ave = 0.25;
  cfg.model.params.tau_app = 0.25;
  cfg.initial_appraisals.kind = AppraisalGen::Kind::kDirichletUniformRows;
  cfg.initial_appraisals.min_entry = 1e-3;
  cfg.observation.kind = ObservationGen::Kind::kSingleSinkRandom;
  cfg.integrator.t_end = 100.0;
  cfg.integrator.sample_every = 0.1;
  cfg.integrator.convergence_tol = 1e-13;
  cfg.outputs = {"h1", "spread"};
  return cfg;
}

// --- criteria -------------------------------------------------------------

void criterion_1_manager() {
  int bad = 0;
  double worst_err = 0.0, worst_inc = -1e300;
  for (int s = 0; s < 50; ++s) {
    ExperimentConfig cfg = manager_config(1000 + s);
    Rng rng(cfg.seed);
    MaterializedRun team = materialize(cfg, rng);
    Trajectory traj;
    RunSummary sum = run_in_memory(cfg, &traj);
    double err =
        (traj.back().w - team.x.values()).lpNorm<Eigen::Infinity>();
    worst_err = std::max(worst_err, err);
    worst_inc = std::max(worst_inc, sum.stats.lyapunov_max_step_increase);
    if (err >= 1e-6 || sum.stats.lyapunov_max_step_increase > 1e-10) ++bad;
  }
  report(1, "manager convergence and Lyapunov descent (50 runs)", bad == 0,
         "worst |w-x|=" + fmt(worst_err) + ", worst V step increase=" +
             fmt(worst_inc));
}

struct LearningRunChecks {
  bool h1_ok = true;       // criterion 2
  bool ratios_ok = true;   // criterion 3 (structure identity)
  bool reduced_ok = true;  // criterion 3 (reduced equivalence)
  bool omega_ok = true;    // criterion 4
  double fd_err = 0.0;     // criterion 5
  double terminal_h1 = 0.0;
  double worst_ratio_drift = 0.0;
  double worst_reduced_gap = 0.0;
};

LearningRunChecks check_learning_run(uint64_t seed, double h) {
  ExperimentConfig cfg = learning_config(seed);
  cfg.integrator.h = h;
  cfg.integrator.sample_every = h;
  Rng rng(cfg.seed);
  MaterializedRun team = materialize(cfg, rng);
  Trajectory traj;
  run_in_memory(cfg, &traj);

  LearningRunChecks out;
  const int n = cfg.n;
  const Eigen::MatrixXd a0 = team.a0->values();
  const Eigen::VectorXd x = team.x.values();
  const double gamma = 6.0;

  for (int i = 0; i < n; ++i) {
    out.terminal_h1 += std::abs(traj.back().w(i) / x(i) - 1.0);
  }
  out.h1_ok = out.terminal_h1 < 1e-3;

  // structure identity: off-diagonal ratios frozen at their t=0 values
  for (const Sample& s : traj.samples) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          if (i == j || i == k || j == k) continue;
          if (a0(i, j) <= 0.0 || a0(i, k) <= 0.0) continue;
          double r0 = a0(i, j) / a0(i, k);
          double rt = s.appraisals(i, j) / s.appraisals(i, k);
          out.worst_ratio_drift =
              std::max(out.worst_ratio_drift, std::abs(rt - r0) / r0);
        }
      }
    }
  }
  out.ratios_ok = out.worst_ratio_drift < 1e-6;

  // reduced dynamics integrated independently from matched initial data
  Eigen::VectorXd diag0 = a0.diagonal();
  Eigen::MatrixXd c_rows = a0;
  c_rows.diagonal().setZero();
  for (int i = 0; i < n; ++i) c_rows.row(i) /= 1.0 - diag0(i);
  ReducedState state{diag0,
                     left_dominant_eigenvector(AppraisalMatrix(c_rows))};
  ObservationMatrix& m = *team.spec.observation;
  auto reduced_rhs = [&](double, const Eigen::VectorXd& a) {
    ReducedState s{a, state.c};
    return Eigen::VectorXd(gamma * rhs_reduced(s, team.x, team.spec.f, m));
  };
  Eigen::VectorXd a_red = diag0;
  for (size_t k = 1; k < traj.samples.size(); ++k) {
    Eigen::VectorXd k1 = reduced_rhs(0.0, a_red);
    a_red = ode::rk4_step(reduced_rhs, 0.0, a_red, h, k1);
    Eigen::VectorXd full_diag = traj.samples[k].appraisals.diagonal();
    out.worst_reduced_gap =
        std::max(out.worst_reduced_gap,
                 (a_red - full_diag).lpNorm<Eigen::Infinity>());
  }
  out.reduced_ok = out.worst_reduced_gap < 1e-6;

  // invariant set: self-appraisals never exceed 1 - zeta
  Eigen::VectorXd zeta = omega_invariant_bound(diag0, state.c, team.x);
  for (const Sample& s : traj.samples) {
    for (int i = 0; i < n; ++i) {
      if (s.appraisals(i, i) > 1.0 - zeta(i) + 1e-9) out.omega_ok = false;
    }
  }

  // generalized replicator: centered differences of the eigenvector
  // sequence against the closed-form right-hand side
  for (size_t k = 1; k + 1 < traj.samples.size(); ++k) {
    Eigen::VectorXd fd =
        (traj.samples[k + 1].w - traj.samples[k - 1].w) / (2.0 * h);
    Eigen::VectorXd rhs =
        gamma * rhs_generalized_replicator(
                    Assignment(traj.samples[k].w),
                    traj.samples[k].appraisals.diagonal(), team.x,
                    team.spec.f, m);
    out.fd_err = std::max(out.fd_err, (fd - rhs).lpNorm<Eigen::Infinity>());
  }
  return out;
}

void criteria_2_to_5_learning() {
  int bad_h1 = 0, bad_ratio = 0, bad_reduced = 0, bad_omega = 0, bad_fd = 0;
  double worst_h1 = 0, worst_ratio = 0, worst_reduced = 0, worst_fd = 0;
  for (int s = 0; s < 25; ++s) {
    LearningRunChecks c = check_learning_run(2000 + s, 0.01);
    worst_h1 = std::max(worst_h1, c.terminal_h1);
    worst_ratio = std::max(worst_ratio, c.worst_ratio_drift);
    worst_reduced = std::max(worst_reduced, c.worst_reduced_gap);
    worst_fd = std::max(worst_fd, c.fd_err);
    if (!c.h1_ok) ++bad_h1;
    if (!c.ratios_ok) ++bad_ratio;
    if (!c.reduced_ok) ++bad_reduced;
    if (!c.omega_ok) ++bad_omega;
    if (c.fd_err >= 10.0 * 0.01) ++bad_fd;
  }
  report(2, "assign/appraise learning: terminal H1 < 1e-3 (25 runs)",
         bad_h1 == 0, "worst H1=" + fmt(worst_h1));
  report(3, "structure identity and reduced equivalence",
         bad_ratio == 0 && bad_reduced == 0,
         "worst ratio drift=" + fmt(worst_ratio) +
             ", worst diagonal gap=" + fmt(worst_reduced));
  report(4, "invariant-set bound on self-appraisals", bad_omega == 0, "");

  // the finite-difference error must also shrink with h
  bool shrink_ok = true;
  double worst_fd_fine = 0;
  for (int s = 0; s < 3; ++s) {
    LearningRunChecks coarse = check_learning_run(2000 + s, 0.01);
    LearningRunChecks fine = check_learning_run(2000 + s, 0.005);
    worst_fd_fine = std::max(worst_fd_fine, fine.fd_err);
    if (fine.fd_err >= coarse.fd_err) shrink_ok = false;
  }
  report(5, "generalized-replicator cross-check (err < 10h, shrinking)",
         bad_fd == 0 && shrink_ok,
         "worst err@h=0.01: " + fmt(worst_fd) +
             ", @h=0.005: " + fmt(worst_fd_fine));
}

void criterion_6_collective() {
  int bad = 0;
  double worst_h1 = 0, worst_spread = 0, worst_inc = -1e300;
  for (int s = 0; s < 25; ++s) {
    ExperimentConfig cfg = collective_config(3000 + s);
    RunSummary sum = run_in_memory(cfg, nullptr);
    double h1 = sum.terminal_metrics.at("h1");
    double spread = sum.terminal_metrics.at("spread");
    worst_h1 = std::max(worst_h1, h1);
    worst_spread = std::max(worst_spread, spread);
    worst_inc = std::max(worst_inc, sum.stats.lyapunov_max_step_increase);
    if (h1 >= 1e-3 || spread >= 1e-3 || sum.theorem4_box_violated ||
        sum.stats.lyapunov_max_step_increase > 1e-8) {
      ++bad;
    }
  }
  report(6,
         "collective learning: H1, consensus spread, assignment box, "
         "ratio Lyapunov (25 runs)",
         bad == 0,
         "worst H1=" + fmt(worst_h1) + ", worst spread=" + fmt(worst_spread) +
             ", worst V step increase=" + fmt(worst_inc));
}

void criterion_7_failure_modes() {
  auto finished = [](const RunSummary& s) {
    return s.status == TerminalStatus::kConverged ||
           s.status == TerminalStatus::kTEndReached;
  };

  Scenario fig5a = make_scenario("fig5a", std::nullopt, "unused");
  RunSummary a = run_in_memory(fig5a.runs[0], nullptr);
  bool ok_a = finished(a) && a.terminal_metrics.at("h1") > 0.05;

  Scenario fig5b = make_scenario("fig5b", std::nullopt, "unused");
  RunSummary b = run_in_memory(fig5b.runs[0], nullptr);
  bool ok_b = finished(b) && b.terminal_metrics.at("h1") > 0.05;

  Scenario fig7 = make_scenario("fig7", std::nullopt, "unused");
  RunSummary c = run_in_memory(fig7.runs[0], nullptr);
  bool ok_c = finished(c) && c.terminal_metrics.at("h1") > 0.05;

  Scenario fig3 = make_scenario("fig3", std::nullopt, "unused");
  RunSummary d_no = run_in_memory(fig3.runs[0], nullptr);
  RunSummary d_with = run_in_memory(fig3.runs[1], nullptr);
  bool ok_d = finished(d_no) && d_no.terminal_metrics.at("h1") > 0.05 &&
              finished(d_with) && d_with.terminal_metrics.at("h1") < 1e-3;

  report(7, "failure modes: partial observation, prejudice, in-degree",
         ok_a && ok_b && ok_c && ok_d,
         "H1: two-component M " + fmt(a.terminal_metrics.at("h1")) +
             ", no reachable node " + fmt(b.terminal_metrics.at("h1")) +
             ", FJ " + fmt(c.terminal_metrics.at("h1")) + ", in-degree " +
             fmt(d_no.terminal_metrics.at("h1")) + " vs " +
             fmt(d_with.terminal_metrics.at("h1")));
}

void criterion_8_tms_metrics() {
  Scenario fig6 = make_scenario("fig6", std::nullopt, "unused");
  Trajectory t_inf;
  RunSummary s_inf = run_in_memory(fig6.runs[0], &t_inf);
  Trajectory t_app;
  RunSummary s_app = run_in_memory(fig6.runs[1], &t_app);
  Trajectory t_rnd;
  RunSummary s_rnd = run_in_memory(fig6.runs[2], &t_rnd);

  double first_zero = -1.0;
  for (const Sample& s : t_inf.samples) {
    if (s.metrics.at("triads") == 0.0) {
      first_zero = s.t;
      break;
    }
  }
  bool inf_ok = t_inf.samples.front().metrics.at("triads") > 0.0 &&
                first_zero >= 0.0 && first_zero < t_inf.t_final &&
                s_inf.terminal_metrics.at("triads") == 0.0 &&
                s_inf.terminal_metrics.at("h1") < 1e-3;
  bool app_ok = s_app.terminal_metrics.at("triads") > 0.0;
  bool rnd_ok = s_rnd.terminal_metrics.at("triads") > 0.0;
  report(8, "TMS metrics: triads vanish only under influence dynamics",
         inf_ok && app_ok && rnd_ok,
         "influence zero at t=" + fmt(first_zero) + ", appraise-only keeps " +
             fmt(s_app.terminal_metrics.at("triads")) + ", random keeps " +
             fmt(s_rnd.terminal_metrics.at("triads")));
}

void criterion_9_montecarlo() {
  bool chernoff_ok =
      chernoff_min_samples(0.01, 0.01) == 26492 && 27000 >= 26492 &&
      chernoff_min_samples(0.1, 0.1) == 150;

  ExperimentConfig cfg;
  cfg.seed = 6001;
  cfg.n = 5;
  cfg.skills.min_entry = 0.05;
  cfg.model.model = ModelKind::kAssignAppraiseInfluence;
  cfg.model.influence_rule = InfluenceRule::kDeGroot;
  cfg.initial_appraisals.kind = AppraisalGen::Kind::kDirichletUniformRows;
  cfg.initial_appraisals.min_entry = 1e-3;
  cfg.observation.kind = ObservationGen::Kind::kStronglyConnectedRandom;
  cfg.integrator.t_end = 100.0;
  cfg.integrator.sample_every = 10.0;
  MonteCarloReport rep = montecarlo_positivity(cfg, 1000, 100.0, 0.01, 0);

  report(9, "Chernoff bound and desk-scale positivity study",
         chernoff_ok && rep.p_hat == 1.0,
         "N_min(0.01,0.01)=" +
             std::to_string(chernoff_min_samples(0.01, 0.01)) +
             ", p_hat=" + fmt(rep.p_hat) + " (" +
             std::to_string(rep.successes) + "/1000)");
}

void criterion_10_lemma_consistency() {
  int bad = 0;
  for (int s = 0; s < 10; ++s) {
    ExperimentConfig cfg;
    cfg.seed = 4000 + s;
    cfg.n = (s % 2 == 0) ? 4 : 6;
    cfg.skills.min_entry = 0.05;
    cfg.model.model = ModelKind::kAssignAppraiseInfluence;
    cfg.model.influence_rule = InfluenceRule::kDeGroot;
    cfg.initial_appraisals.kind = AppraisalGen::Kind::kDirichletUniformRows;
    cfg.initial_appraisals.min_entry = 0.01;
    cfg.observation.kind = ObservationGen::Kind::kStronglyConnectedRandom;
    cfg.integrator.t_end = 50.0;
    cfg.integrator.sample_every = 5.0;

    Rng rng(cfg.seed);
    MaterializedRun team = materialize(cfg, rng);
    Assignment w0 = left_dominant_eigenvector(*team.a0);
    AssignmentBox box = theorem4_bounds(team.x, w0);
    double threshold =
        lemma2_tau_threshold(team.x, box.xi0, team.spec.f, cfg.n);
    cfg.model.params.tau_ave = 1.0;
    cfg.model.params.tau_app = std::max(1.0, 1.05 * threshold);

    RunSummary sum = run_in_memory(cfg, nullptr);
    double min0 = team.a0->values().minCoeff();
    if (sum.status == TerminalStatus::kPositivityLost ||
        sum.stats.min_appraisal_entry < 0.5 * min0) {
      ++bad;
    }
  }
  report(10, "positivity threshold keeps appraisals bounded away from zero",
         bad == 0, "");
}

void criterion_11_oracles() {
  Rng rng(7777);

  bool eig_ok = true;
  double worst_gap = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    int n = rng.uniform_int(3, 8);
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i) a.row(i) = rng.simplex(n).transpose();
    Assignment w = left_dominant_eigenvector(AppraisalMatrix(a));
    Assignment q = workload_diffusion(AppraisalMatrix(a), 10000);
    double gap = (w.values() - q.values()).lpNorm<Eigen::Infinity>();
    worst_gap = std::max(worst_gap, gap);
    if (gap >= 1e-8) eig_ok = false;
  }

  bool conn_ok = true;
  for (int trial = 0; trial < 10000; ++trial) {
    int n = rng.uniform_int(2, 4);
    Eigen::MatrixXd b(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        b(i, j) = rng.uniform01() < 0.4 ? rng.uniform(0.1, 1.0) : 0.0;
      }
    }
    ConnectivityReport rep = classify_connectivity(b);
    if (rep.strongly_connected != oracles::strongly_connected_bruteforce(b) ||
        rep.globally_reachable_nodes !=
            oracles::globally_reachable_bruteforce(b) ||
        rep.primitive != oracles::primitive_bruteforce(b)) {
      conn_ok = false;
    }
  }

  bool triads_ok = true;
  for (int trial = 0; trial < 500; ++trial) {
    ComparativeAppraisalGraph g;
    g.n = rng.uniform_int(3, 6);
    for (int i = 0; i < g.n; ++i) {
      for (int j = 0; j < g.n; ++j) {
        if (i != j && rng.uniform01() < 0.5) g.edges.insert({i, j});
      }
    }
    if (nontransitive_triad_count(g) !=
        oracles::nontransitive_triads_bruteforce(g)) {
      triads_ok = false;
    }
  }

  report(11, "oracle suites: eigenvector, connectivity, triad census",
         eig_ok && conn_ok && triads_ok,
         "worst eigenvector-vs-diffusion gap=" + fmt(worst_gap));
}

}  // namespace

int main() {
  criterion_1_manager();
  criteria_2_to_5_learning();
  criterion_6_collective();
  criterion_7_failure_modes();
  criterion_8_tms_metrics();
  criterion_9_montecarlo();
  criterion_10_lemma_consistency();
  criterion_11_oracles();

  if (g_failures == 0) {
    std::printf("acceptance: all criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) FAILED\n", g_failures);
  return 1;
}
