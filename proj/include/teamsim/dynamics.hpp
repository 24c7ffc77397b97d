#pragma once

#include <optional>

#include "teamsim/spectral.hpp"
#include "teamsim/team.hpp"

// Right-hand sides of every model and variant: pure maps from state to
// time-derivative. Assignments are always recomputed from the appraisal
// state (never integrated separately); the generalized replicator form is
// kept as a cross-check.

namespace teamsim {

enum class ModelKind { kManager, kAssignAppraise, kAssignAppraiseInfluence };
enum class AssignmentRule { kEigenvector, kInDegree };
enum class InfluenceRule { kNone, kDeGroot, kFriedkinJohnsen };

/// Which dynamics to integrate, plus every parameter the right-hand side
/// needs. The observation matrix is unused by the manager model.
struct ModelSpec {
  ModelKind model = ModelKind::kManager;
  AssignmentRule assignment_rule = AssignmentRule::kEigenvector;
  InfluenceRule influence_rule = InfluenceRule::kNone;
  InfluenceParams params;
  PerformanceFunction f = PerformanceFunction::power_law(0.5);
  std::optional<ObservationMatrix> observation;
  // Anchor appraisals for the Friedkin-Johnsen variant. The integrator
  // fills this from the run's A(0) when left empty.
  std::optional<Eigen::MatrixXd> prejudice_anchor;

  void validate(int n) const;
};

/// Self-appraisal state of the reduced dynamics; c = v_left(C) is fixed
/// for the whole run.
struct ReducedState {
  Eigen::VectorXd a;  // entries in [0,1)
  Assignment c;
};

/// Lower bounds from the assignment box of the influence model:
/// gamma0 = (max_k x_k/w_k(0)) / (min_l x_l/w_l(0)) and
/// xi0 = (1 + (n-1)(max_k x_k / min_l x_l) gamma0)^-1.
struct AssignmentBox {
  double gamma0 = 1.0;
  double xi0 = 0.0;
};

/// Manager replicator step: dw_i = w_i (p_i - sum_k w_k p_k).
Eigen::VectorXd rhs_manager(const Assignment& w, const SkillVector& x,
                            const PerformanceFunction& f);

/// Appraise dynamics dA = diag(gamma o phi) A_d (I - A) with the
/// assignment computed internally from A by `rule`. An empty gamma_sens
/// means homogeneous unit sensitivities.
Eigen::MatrixXd rhs_assign_appraise(
    const AppraisalMatrix& a, const SkillVector& x,
    const PerformanceFunction& f, const ObservationMatrix& m,
    const Eigen::VectorXd& gamma_sens = Eigen::VectorXd(),
    AssignmentRule rule = AssignmentRule::kEigenvector);

/// Assignment induced by the reduced state:
/// w_i = (c_i/(1-a_i)) / sum_k (c_k/(1-a_k)).
Eigen::VectorXd reduced_assignment(const ReducedState& s);

/// Reduced self-appraisal dynamics da_i = a_i (1-a_i) phi_i.
Eigen::VectorXd rhs_reduced(const ReducedState& s, const SkillVector& x,
                            const PerformanceFunction& f,
                            const ObservationMatrix& m);

/// Generalized replicator with time-varying fitness a_i phi_i:
/// dw_i = w_i (a_i phi_i - sum_k w_k a_k phi_k).
Eigen::VectorXd rhs_generalized_replicator(const Assignment& w,
                                           const Eigen::VectorXd& a,
                                           const SkillVector& x,
                                           const PerformanceFunction& f,
                                           const ObservationMatrix& m);

/// Combined influence + appraise dynamics
///   dA = F_ave/tau_ave + F_app/tau_app,
/// where F_app is the appraise term and F_ave is either the DeGroot term
/// A^2 - A or the Friedkin-Johnsen term -Lambda (I-A) A + (I-Lambda)(A0-A).
/// The FJ variant needs the anchor A(0); passing kNone is rejected.
Eigen::MatrixXd rhs_assign_appraise_influence(
    const AppraisalMatrix& a, const SkillVector& x,
    const PerformanceFunction& f, const ObservationMatrix& m,
    const InfluenceParams& params, InfluenceRule rule,
    const std::optional<Eigen::MatrixXd>& anchor = std::nullopt,
    AssignmentRule assignment_rule = AssignmentRule::kEigenvector);

AssignmentBox theorem4_bounds(const SkillVector& x, const Assignment& w0);

/// Minimum tau_app/tau_ave guaranteeing an entrywise-positive appraisal
/// trajectory: ((1-xi0)/xi0) (f(x_max/xi0) - f(x_min/(1-(n-1) xi0))).
/// Requires xi0 in (0, 1/(n-1)).
double lemma2_tau_threshold(const SkillVector& x, double xi0,
                            const PerformanceFunction& f, int n);

/// Per-individual floor zeta_i = (c_i/x_i) min_k (x_k/c_k)(1 - a_k(0));
/// along the reduced dynamics a_i(t) <= 1 - zeta_i holds forever.
Eigen::VectorXd omega_invariant_bound(const Eigen::VectorXd& a0,
                                      const Assignment& c,
                                      const SkillVector& x);

namespace detail {

// Raw building blocks shared with the integrator, which supplies its own
// (warm-started) assignment and skips per-call validation.

Eigen::VectorXd performance_raw(const Eigen::VectorXd& x,
                                const Eigen::VectorXd& w,
                                const PerformanceFunction& f);

// diag(gamma o phi) A_d (I - A); gamma empty means all-ones.
Eigen::MatrixXd appraise_term(const Eigen::MatrixXd& a,
                              const Eigen::VectorXd& phi,
                              const Eigen::VectorXd& gamma);

Eigen::MatrixXd degroot_term(const Eigen::MatrixXd& a);

Eigen::MatrixXd friedkin_johnsen_term(const Eigen::MatrixXd& a,
                                      const Eigen::VectorXd& lambda,
                                      const Eigen::MatrixXd& anchor);

// Assignment from a raw appraisal matrix. For the eigenvector rule this
// power-iterates with the given warm start; returns nullopt on failure.
std::optional<Eigen::VectorXd> assignment_raw(const Eigen::MatrixXd& a,
                                              AssignmentRule rule,
                                              const Eigen::VectorXd* warm,
                                              double tol, int max_iter);

}  // namespace detail

}  // namespace teamsim
