#include "teamsim/team.hpp"

#include <cmath>
#include <sstream>

namespace teamsim {

namespace {

void check_simplex(const Eigen::VectorXd& v, double tol, bool strict,
                   const char* what) {
  if (v.size() < 2) {
    throw std::invalid_argument(std::string(what) +
                                ": need at least 2 entries");
  }
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v(i)) || (strict ? v(i) <= 0.0 : v(i) < 0.0)) {
      std::ostringstream os;
      os << what << ": entry " << i << " = " << v(i)
         << (strict ? " is not strictly positive" : " is negative");
      throw std::invalid_argument(os.str());
    }
  }
  double sum = v.sum();
  if (std::abs(sum - 1.0) > tol) {
    std::ostringstream os;
    os << what << ": entries sum to " << sum << ", off by more than " << tol;
    throw std::invalid_argument(os.str());
  }
}

void check_row_stochastic(const Eigen::MatrixXd& m, double tol,
                          const char* what) {
  if (m.rows() < 2 || m.rows() != m.cols()) {
    throw std::invalid_argument(std::string(what) +
                                ": must be square with n >= 2");
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (!std::isfinite(m(i, j)) || m(i, j) < 0.0) {
        std::ostringstream os;
        os << what << ": entry (" << i << "," << j << ") = " << m(i, j)
           << " is negative or non-finite";
        throw std::invalid_argument(os.str());
      }
    }
    double sum = m.row(i).sum();
    if (std::abs(sum - 1.0) > tol) {
      std::ostringstream os;
      os << what << ": row " << i << " sums to " << sum
         << ", off by more than " << tol;
      throw std::invalid_argument(os.str());
    }
  }
}

}  // namespace

SkillVector::SkillVector(Eigen::VectorXd x) : x_(std::move(x)) {
  check_simplex(x_, kStaticSimplexTol, /*strict=*/true, "SkillVector");
}

Assignment::Assignment(Eigen::VectorXd w) : w_(std::move(w)) {
  check_simplex(w_, kStateSimplexTol, /*strict=*/true, "Assignment");
}

AppraisalMatrix::AppraisalMatrix(Eigen::MatrixXd a) : a_(std::move(a)) {
  check_row_stochastic(a_, kStateSimplexTol, "AppraisalMatrix");
}

ObservationMatrix::ObservationMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {
  check_row_stochastic(m_, kStaticSimplexTol, "ObservationMatrix");
}

PerformanceFunction PerformanceFunction::power_law(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("power_law exponent must lie in (0,1)");
  }
  return PerformanceFunction(Kind::kPowerLaw, gamma);
}

PerformanceFunction PerformanceFunction::log1p() {
  return PerformanceFunction(Kind::kLog1p, 0.0);
}

double PerformanceFunction::operator()(double r) const {
  if (r < 0.0) {
    throw std::domain_error("performance argument must be nonnegative");
  }
  switch (kind_) {
    case Kind::kPowerLaw:
      return gamma_ == 0.5 ? std::sqrt(r) : std::pow(r, gamma_);
    case Kind::kLog1p:
      return std::log1p(r);
  }
  return 0.0;
}

double PerformanceFunction::derivative(double r) const {
  if (r <= 0.0) {
    throw std::domain_error("performance derivative needs r > 0");
  }
  switch (kind_) {
    case Kind::kPowerLaw:
      return gamma_ * std::pow(r, gamma_ - 1.0);
    case Kind::kLog1p:
      return 1.0 / (1.0 + r);
  }
  return 0.0;
}

void InfluenceParams::validate(int n) const {
  if (!(tau_ave > 0.0) || !(tau_app > 0.0)) {
    throw std::invalid_argument("time scales tau_ave, tau_app must be > 0");
  }
  if (lambda.size() != 0) {
    if (lambda.size() != n) {
      throw std::invalid_argument("lambda must have one entry per individual");
    }
    if ((lambda.array() < 0.0).any() || (lambda.array() > 1.0).any()) {
      throw std::invalid_argument("lambda entries must lie in [0,1]");
    }
  }
  if (gamma_sens.size() != 0) {
    if (gamma_sens.size() != n) {
      throw std::invalid_argument(
          "gamma_sens must have one entry per individual");
    }
    if ((gamma_sens.array() <= 0.0).any()) {
      throw std::invalid_argument("gamma_sens entries must be > 0");
    }
  }
}

Eigen::VectorXd performance(const SkillVector& x, const Assignment& w,
                            const PerformanceFunction& f) {
  if (x.size() != w.size()) {
    throw std::invalid_argument("performance: dimension mismatch");
  }
  Eigen::VectorXd p(x.size());
  for (int i = 0; i < x.size(); ++i) {
    if (w[i] <= 0.0) {
      throw std::domain_error("performance: workload must be > 0");
    }
    p(i) = f(x[i] / w[i]);
  }
  return p;
}

Eigen::VectorXd feedback_signal(const Eigen::VectorXd& p,
                                const ObservationMatrix& m) {
  if (p.size() != m.size()) {
    throw std::invalid_argument("feedback_signal: dimension mismatch");
  }
  return p - m.values() * p;
}

double mismatch_h1(const SkillVector& x, const Assignment& w) {
  if (x.size() != w.size()) {
    throw std::invalid_argument("mismatch_h1: dimension mismatch");
  }
  double h = 0.0;
  for (int i = 0; i < x.size(); ++i) {
    h += std::abs(w[i] / x[i] - 1.0);
  }
  return h;
}

}  // namespace teamsim
