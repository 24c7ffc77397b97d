#include "teamsim/dynamics.hpp"

#include <cmath>

namespace teamsim {

namespace detail {

Eigen::VectorXd performance_raw(const Eigen::VectorXd& x,
                                const Eigen::VectorXd& w,
                                const PerformanceFunction& f) {
  Eigen::VectorXd p(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    p(i) = f(x(i) / w(i));
  }
  return p;
}

Eigen::MatrixXd appraise_term(const Eigen::MatrixXd& a,
                              const Eigen::VectorXd& phi,
                              const Eigen::VectorXd& gamma) {
  Eigen::Index n = a.rows();
  Eigen::VectorXd row_scale = phi;
  if (gamma.size() != 0) row_scale = gamma.cwiseProduct(phi);
  // diag(row_scale) A_d (I - A), written entrywise: row i is
  // a_ii * row_scale_i * (e_i - A row i).
  Eigen::MatrixXd d(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double s = a(i, i) * row_scale(i);
    for (Eigen::Index j = 0; j < n; ++j) {
      d(i, j) = s * ((i == j ? 1.0 : 0.0) - a(i, j));
    }
  }
  return d;
}

Eigen::MatrixXd degroot_term(const Eigen::MatrixXd& a) { return a * a - a; }

Eigen::MatrixXd friedkin_johnsen_term(const Eigen::MatrixXd& a,
                                      const Eigen::VectorXd& lambda,
                                      const Eigen::MatrixXd& anchor) {
  Eigen::Index n = a.rows();
  Eigen::MatrixXd degroot = a * a - a;  // -(I-A)A with W = A
  Eigen::MatrixXd d(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d.row(i) =
        lambda(i) * degroot.row(i) + (1.0 - lambda(i)) * (anchor.row(i) - a.row(i));
  }
  return d;
}

std::optional<Eigen::VectorXd> assignment_raw(const Eigen::MatrixXd& a,
                                              AssignmentRule rule,
                                              const Eigen::VectorXd* warm,
                                              double tol, int max_iter) {
  if (rule == AssignmentRule::kInDegree) {
    Eigen::VectorXd col_sums = a.colwise().sum();
    double total = col_sums.sum();
    if (!(total > 0.0)) return std::nullopt;
    return Eigen::VectorXd(col_sums / total);
  }
  Eigen::VectorXd seed =
      warm ? *warm : Eigen::VectorXd::Constant(a.rows(), 1.0 / a.rows());
  return power_iterate_left(a, std::move(seed), tol, max_iter);
}

}  // namespace detail

void ModelSpec::validate(int n) const {
  params.validate(n);
  if (model == ModelKind::kManager) {
    if (influence_rule != InfluenceRule::kNone) {
      throw std::invalid_argument("manager model admits no influence rule");
    }
    return;
  }
  if (!observation) {
    throw std::invalid_argument("appraisal models need an observation matrix");
  }
  if (observation->size() != n) {
    throw std::invalid_argument("observation matrix has the wrong dimension");
  }
  if (model == ModelKind::kAssignAppraise &&
      influence_rule != InfluenceRule::kNone) {
    throw std::invalid_argument(
        "assign/appraise model admits no influence rule");
  }
  if (model == ModelKind::kAssignAppraiseInfluence &&
      influence_rule == InfluenceRule::kNone) {
    throw std::invalid_argument(
        "assign/appraise/influence model needs an influence rule");
  }
  if (influence_rule == InfluenceRule::kFriedkinJohnsen) {
    if (params.lambda.size() != n) {
      throw std::invalid_argument(
          "Friedkin-Johnsen variant needs lambda susceptibilities");
    }
    if (prejudice_anchor &&
        (prejudice_anchor->rows() != n || prejudice_anchor->cols() != n)) {
      throw std::invalid_argument("prejudice anchor has the wrong dimension");
    }
  }
}

namespace {

void check_interior(const Assignment& w) {
  for (int i = 0; i < w.size(); ++i) {
    if (w[i] <= 0.0) {
      throw std::domain_error("assignment on the simplex boundary");
    }
  }
}

}  // namespace

Eigen::VectorXd rhs_manager(const Assignment& w, const SkillVector& x,
                            const PerformanceFunction& f) {
  if (w.size() != x.size()) {
    throw std::invalid_argument("rhs_manager: dimension mismatch");
  }
  check_interior(w);
  Eigen::VectorXd p = detail::performance_raw(x.values(), w.values(), f);
  double mean = w.values().dot(p);
  return w.values().cwiseProduct((p.array() - mean).matrix());
}

Eigen::MatrixXd rhs_assign_appraise(const AppraisalMatrix& a,
                                    const SkillVector& x,
                                    const PerformanceFunction& f,
                                    const ObservationMatrix& m,
                                    const Eigen::VectorXd& gamma_sens,
                                    AssignmentRule rule) {
  if (a.size() != x.size() || m.size() != x.size()) {
    throw std::invalid_argument("rhs_assign_appraise: dimension mismatch");
  }
  Eigen::VectorXd w;
  if (rule == AssignmentRule::kEigenvector) {
    w = left_dominant_eigenvector(a).values();
  } else {
    w = in_degree_assignment(a).values();
  }
  Eigen::VectorXd p = detail::performance_raw(x.values(), w, f);
  Eigen::VectorXd phi = p - m.values() * p;
  return detail::appraise_term(a.values(), phi, gamma_sens);
}

Eigen::VectorXd reduced_assignment(const ReducedState& s) {
  Eigen::VectorXd share(s.a.size());
  for (Eigen::Index i = 0; i < s.a.size(); ++i) {
    if (s.a(i) < 0.0 || s.a(i) >= 1.0) {
      throw std::domain_error("reduced state needs a_i in [0,1)");
    }
    share(i) = s.c[static_cast<int>(i)] / (1.0 - s.a(i));
  }
  return share / share.sum();
}

Eigen::VectorXd rhs_reduced(const ReducedState& s, const SkillVector& x,
                            const PerformanceFunction& f,
                            const ObservationMatrix& m) {
  if (s.a.size() != x.size() || s.c.size() != x.size()) {
    throw std::invalid_argument("rhs_reduced: dimension mismatch");
  }
  Eigen::VectorXd w = reduced_assignment(s);
  Eigen::VectorXd p = detail::performance_raw(x.values(), w, f);
  Eigen::VectorXd phi = p - m.values() * p;
  return s.a.array() * (1.0 - s.a.array()) * phi.array();
}

Eigen::VectorXd rhs_generalized_replicator(const Assignment& w,
                                           const Eigen::VectorXd& a,
                                           const SkillVector& x,
                                           const PerformanceFunction& f,
                                           const ObservationMatrix& m) {
  if (w.size() != x.size() || a.size() != x.size()) {
    throw std::invalid_argument(
        "rhs_generalized_replicator: dimension mismatch");
  }
  check_interior(w);
  Eigen::VectorXd p = detail::performance_raw(x.values(), w.values(), f);
  Eigen::VectorXd phi = p - m.values() * p;
  Eigen::VectorXd fitness = a.cwiseProduct(phi);
  double mean = w.values().dot(fitness);
  return w.values().cwiseProduct((fitness.array() - mean).matrix());
}

Eigen::MatrixXd rhs_assign_appraise_influence(
    const AppraisalMatrix& a, const SkillVector& x,
    const PerformanceFunction& f, const ObservationMatrix& m,
    const InfluenceParams& params, InfluenceRule rule,
    const std::optional<Eigen::MatrixXd>& anchor,
    AssignmentRule assignment_rule) {
  if (a.size() != x.size() || m.size() != x.size()) {
    throw std::invalid_argument(
        "rhs_assign_appraise_influence: dimension mismatch");
  }
  params.validate(x.size());

  Eigen::MatrixXd influence;
  switch (rule) {
    case InfluenceRule::kDeGroot:
      influence = detail::degroot_term(a.values());
      break;
    case InfluenceRule::kFriedkinJohnsen: {
      if (!anchor) {
        throw std::invalid_argument(
            "Friedkin-Johnsen variant needs the stored initial appraisals");
      }
      if (params.lambda.size() != x.size()) {
        throw std::invalid_argument(
            "Friedkin-Johnsen variant needs lambda susceptibilities");
      }
      influence =
          detail::friedkin_johnsen_term(a.values(), params.lambda, *anchor);
      break;
    }
    case InfluenceRule::kNone:
      throw std::invalid_argument(
          "influence dynamics requires an influence rule");
  }

  Eigen::VectorXd w;
  if (assignment_rule == AssignmentRule::kEigenvector) {
    w = left_dominant_eigenvector(a).values();
  } else {
    w = in_degree_assignment(a).values();
  }
  Eigen::VectorXd p = detail::performance_raw(x.values(), w, f);
  Eigen::VectorXd phi = p - m.values() * p;
  Eigen::MatrixXd appraise =
      detail::appraise_term(a.values(), phi, params.gamma_sens);

  return influence / params.tau_ave + appraise / params.tau_app;
}

AssignmentBox theorem4_bounds(const SkillVector& x, const Assignment& w0) {
  if (x.size() != w0.size()) {
    throw std::invalid_argument("theorem4_bounds: dimension mismatch");
  }
  int n = x.size();
  double ratio_hi = -std::numeric_limits<double>::infinity();
  double ratio_lo = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    double r = x[i] / w0[i];
    ratio_hi = std::max(ratio_hi, r);
    ratio_lo = std::min(ratio_lo, r);
  }
  AssignmentBox box;
  box.gamma0 = ratio_hi / ratio_lo;
  double skew = x.values().maxCoeff() / x.values().minCoeff();
  box.xi0 = 1.0 / (1.0 + (n - 1) * skew * box.gamma0);
  return box;
}

double lemma2_tau_threshold(const SkillVector& x, double xi0,
                            const PerformanceFunction& f, int n) {
  if (n < 2 || x.size() != n) {
    throw std::invalid_argument("lemma2_tau_threshold: bad dimension");
  }
  if (!(xi0 > 0.0 && xi0 < 1.0 / (n - 1))) {
    throw std::domain_error("lemma2_tau_threshold: xi0 outside (0, 1/(n-1))");
  }
  double x_max = x.values().maxCoeff();
  double x_min = x.values().minCoeff();
  double value =
      (1.0 - xi0) / xi0 * (f(x_max / xi0) - f(x_min / (1.0 - (n - 1) * xi0)));
  return std::max(value, 0.0);
}

Eigen::VectorXd omega_invariant_bound(const Eigen::VectorXd& a0,
                                      const Assignment& c,
                                      const SkillVector& x) {
  if (a0.size() != x.size() || c.size() != x.size()) {
    throw std::invalid_argument("omega_invariant_bound: dimension mismatch");
  }
  double floor = std::numeric_limits<double>::infinity();
  for (int k = 0; k < x.size(); ++k) {
    if (a0(k) < 0.0 || a0(k) >= 1.0) {
      throw std::invalid_argument("omega_invariant_bound: a0 outside [0,1)");
    }
    floor = std::min(floor, x[k] / c[k] * (1.0 - a0(k)));
  }
  Eigen::VectorXd zeta(x.size());
  for (int i = 0; i < x.size(); ++i) {
    zeta(i) = c[i] / x[i] * floor;
  }
  return zeta;
}

}  // namespace teamsim
