#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

// Ground-truth team state, the performance model and the feedback signal
// shared by every dynamics in the library. All types are immutable after
// construction; all operations are pure.

namespace teamsim {

// Simplex tolerances: static inputs are held to 1e-12, run-time state to
// 1e-9 so integrator drift is detectable but not fatal.
inline constexpr double kStaticSimplexTol = 1e-12;
inline constexpr double kStateSimplexTol = 1e-9;

/// True relative skill levels: strictly positive, summing to one.
class SkillVector {
 public:
  explicit SkillVector(Eigen::VectorXd x);

  int size() const { return static_cast<int>(x_.size()); }
  double operator[](int i) const { return x_(i); }
  const Eigen::VectorXd& values() const { return x_; }

 private:
  Eigen::VectorXd x_;
};

/// Workload fractions: strictly positive, summing to one (tolerance 1e-9).
class Assignment {
 public:
  explicit Assignment(Eigen::VectorXd w);

  int size() const { return static_cast<int>(w_.size()); }
  double operator[](int i) const { return w_(i); }
  const Eigen::VectorXd& values() const { return w_; }

 private:
  Eigen::VectorXd w_;
};

/// Row-stochastic nonnegative interpersonal appraisal weights.
class AppraisalMatrix {
 public:
  explicit AppraisalMatrix(Eigen::MatrixXd a);

  int size() const { return static_cast<int>(a_.rows()); }
  double operator()(int i, int j) const { return a_(i, j); }
  const Eigen::MatrixXd& values() const { return a_; }

  /// Diagonal (self-appraisal) vector.
  Eigen::VectorXd self_appraisals() const { return a_.diagonal(); }

 private:
  Eigen::MatrixXd a_;
};

/// Row-stochastic observation weights defining each member's feedback
/// signal. Fixed over a run; tolerance 1e-12.
class ObservationMatrix {
 public:
  explicit ObservationMatrix(Eigen::MatrixXd m);

  int size() const { return static_cast<int>(m_.rows()); }
  double operator()(int i, int j) const { return m_(i, j); }
  const Eigen::MatrixXd& values() const { return m_; }

 private:
  Eigen::MatrixXd m_;
};

/// Concave, strictly increasing performance map with f(0)=0. Two built-in
/// families: f(r)=r^gamma with gamma in (0,1), and f(r)=ln(1+r).
class PerformanceFunction {
 public:
  enum class Kind { kPowerLaw, kLog1p };

  static PerformanceFunction power_law(double gamma);
  static PerformanceFunction log1p();

  double operator()(double r) const;
  /// f'; appears in the positivity bounds.
  double derivative(double r) const;

  Kind kind() const { return kind_; }
  double gamma() const { return gamma_; }

 private:
  PerformanceFunction(Kind kind, double gamma) : kind_(kind), gamma_(gamma) {}

  Kind kind_;
  double gamma_;
};

/// Parameters of the influence stage and the appraise-stage variants.
struct InfluenceParams {
  double tau_ave = 1.0;        // influence time scale
  double tau_app = 1.0;        // appraise time scale
  Eigen::VectorXd lambda;      // prejudice susceptibilities in [0,1] (FJ only)
  Eigen::VectorXd gamma_sens;  // per-individual feedback sensitivities (>0)

  /// Throws std::invalid_argument if any field is out of range for a team
  /// of n individuals. Empty vectors mean "defaulted" and are accepted.
  void validate(int n) const;
};

/// p_i = f(x_i / w_i) for each individual.
Eigen::VectorXd performance(const SkillVector& x, const Assignment& w,
                            const PerformanceFunction& f);

/// phi = p - M p: each member's own performance minus the observed part.
Eigen::VectorXd feedback_signal(const Eigen::VectorXd& p,
                                const ObservationMatrix& m);

/// H1(w) = sum_i |w_i/x_i - 1|, zero exactly at w = x.
double mismatch_h1(const SkillVector& x, const Assignment& w);

}  // namespace teamsim
