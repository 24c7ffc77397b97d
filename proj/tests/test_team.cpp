#include <doctest.h>

#include "teamsim/rng.hpp"
#include "teamsim/team.hpp"

using namespace teamsim;

TEST_CASE("skill vector validates the open simplex") {
  CHECK_NOTHROW(SkillVector(Eigen::Vector3d(0.2, 0.3, 0.5)));
  CHECK_THROWS_AS(SkillVector(Eigen::Vector3d(0.2, 0.3, 0.6)),
                  std::invalid_argument);
  CHECK_THROWS_AS(SkillVector(Eigen::Vector3d(0.0, 0.5, 0.5)),
                  std::invalid_argument);
  CHECK_THROWS_AS(SkillVector(Eigen::VectorXd::Constant(1, 1.0)),
                  std::invalid_argument);
  // static inputs are held to the tighter tolerance
  CHECK_THROWS_AS(SkillVector(Eigen::Vector2d(0.5 + 1e-10, 0.5)),
                  std::invalid_argument);
  CHECK_NOTHROW(Assignment(Eigen::Vector2d(0.5 + 1e-10, 0.5)));
}

TEST_CASE("appraisal matrix requires row-stochastic nonnegative entries") {
  Eigen::MatrixXd good(2, 2);
  good << 0.5, 0.5, 0.25, 0.75;
  CHECK_NOTHROW(AppraisalMatrix{good});
  Eigen::MatrixXd negative = good;
  negative(0, 0) = -0.1;
  negative(0, 1) = 1.1;
  CHECK_THROWS_AS(AppraisalMatrix{negative}, std::invalid_argument);
  Eigen::MatrixXd off = good;
  off(1, 1) = 0.80;
  CHECK_THROWS_AS(AppraisalMatrix{off}, std::invalid_argument);
}

TEST_CASE("performance function families") {
  PerformanceFunction sqrt_f = PerformanceFunction::power_law(0.5);
  CHECK(sqrt_f(0.0) == 0.0);
  CHECK(sqrt_f(1.0) == doctest::Approx(1.0));
  CHECK(sqrt_f(4.0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(PerformanceFunction::power_law(1.0), std::invalid_argument);
  CHECK_THROWS_AS(PerformanceFunction::power_law(0.0), std::invalid_argument);
  CHECK_THROWS_AS(sqrt_f(-1.0), std::domain_error);

  PerformanceFunction log_f = PerformanceFunction::log1p();
  CHECK(log_f(0.0) == 0.0);
  CHECK(log_f(std::exp(1.0) - 1.0) == doctest::Approx(1.0));

  // derivative agrees with a central difference
  for (double r : {0.3, 1.0, 2.7}) {
    double fd = (sqrt_f(r + 1e-6) - sqrt_f(r - 1e-6)) / 2e-6;
    CHECK(sqrt_f.derivative(r) == doctest::Approx(fd).epsilon(1e-6));
    fd = (log_f(r + 1e-6) - log_f(r - 1e-6)) / 2e-6;
    CHECK(log_f.derivative(r) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("performance evaluates f(x_i/w_i)") {
  PerformanceFunction f = PerformanceFunction::power_law(0.5);
  SkillVector x(Eigen::Vector2d(0.5, 0.5));

  Eigen::VectorXd p = performance(x, Assignment(Eigen::Vector2d(0.5, 0.5)), f);
  CHECK(p(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p(1) == doctest::Approx(1.0).epsilon(1e-12));

  p = performance(x, Assignment(Eigen::Vector2d(0.25, 0.75)), f);
  CHECK(p(0) == doctest::Approx(1.4142135623730951).epsilon(1e-12));
  CHECK(p(1) == doctest::Approx(0.816496580927726).epsilon(1e-12));

  // the optimal assignment equalizes performance at f(1)
  SkillVector x3(Eigen::Vector3d(0.2, 0.3, 0.5));
  p = performance(x3, Assignment(Eigen::Vector3d(0.2, 0.3, 0.5)), f);
  for (int i = 0; i < 3; ++i) {
    CHECK(p(i) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("performance is monotone in the skill/workload ratio") {
  PerformanceFunction f = PerformanceFunction::power_law(0.5);
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    int n = rng.uniform_int(2, 8);
    SkillVector x(rng.simplex_min(n, 1e-3));
    Assignment w(rng.simplex_min(n, 1e-3));
    Eigen::VectorXd p = performance(x, w, f);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (x[i] / w[i] >= x[j] / w[j]) {
          CHECK(p(i) >= p(j));
        }
      }
    }
  }
}

TEST_CASE("feedback signal phi = p - M p") {
  Eigen::MatrixXd swap(2, 2);
  swap << 0, 1, 1, 0;
  ObservationMatrix m(swap);
  Eigen::VectorXd p(2);
  p << 1.4142135623730951, 0.816496580927726;
  Eigen::VectorXd phi = feedback_signal(p, m);
  CHECK(phi(0) == doctest::Approx(0.5977169814453691).epsilon(1e-12));
  CHECK(phi(1) == doctest::Approx(-0.5977169814453691).epsilon(1e-12));

  ObservationMatrix identity(Eigen::MatrixXd::Identity(3, 3));
  Eigen::VectorXd q(3);
  q << 0.3, 1.7, 0.9;
  CHECK(feedback_signal(q, identity).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("row-stochastic observation annihilates constant performance") {
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    int n = rng.uniform_int(2, 7);
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i) m.row(i) = rng.simplex(n).transpose();
    Eigen::VectorXd constant =
        Eigen::VectorXd::Constant(n, rng.uniform(0.1, 5.0));
    Eigen::VectorXd phi = feedback_signal(constant, ObservationMatrix(m));
    CHECK(phi.lpNorm<Eigen::Infinity>() < 1e-12);
  }
}

TEST_CASE("self-observation row zeroes its feedback entry") {
  Eigen::MatrixXd m(3, 3);
  m << 1, 0, 0, 0.2, 0.5, 0.3, 0, 0, 1;
  Eigen::VectorXd p(3);
  p << 2.0, 0.7, 1.3;
  Eigen::VectorXd phi = feedback_signal(p, ObservationMatrix(m));
  CHECK(phi(0) == 0.0);
  CHECK(phi(2) == 0.0);
}

TEST_CASE("mismatch H1") {
  SkillVector x(Eigen::Vector2d(0.5, 0.5));
  CHECK(mismatch_h1(x, Assignment(Eigen::Vector2d(0.5, 0.5))) == 0.0);
  CHECK(mismatch_h1(x, Assignment(Eigen::Vector2d(0.6, 0.4))) ==
        doctest::Approx(0.4).epsilon(1e-12));
  SkillVector x2(Eigen::Vector2d(0.25, 0.75));
  CHECK(mismatch_h1(x2, Assignment(Eigen::Vector2d(0.75, 0.25))) ==
        doctest::Approx(2.0 + 2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("mismatch is strictly positive off w = x") {
  Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    int n = rng.uniform_int(2, 8);
    Eigen::VectorXd base = rng.simplex_min(n, 1e-2);
    SkillVector x(base);
    int i = rng.uniform_int(0, n - 1);
    int j = (i + 1 + rng.uniform_int(0, n - 2)) % n;
    double delta = rng.uniform(1e-6, 1e-3);
    Eigen::VectorXd shifted = base;
    shifted(i) += delta;
    shifted(j) -= delta;
    CHECK(mismatch_h1(x, Assignment(shifted)) > 0.0);
  }
}

TEST_CASE("influence params validate ranges") {
  InfluenceParams params;
  CHECK_NOTHROW(params.validate(3));
  params.tau_ave = 0.0;
  CHECK_THROWS_AS(params.validate(3), std::invalid_argument);
  params.tau_ave = 1.0;
  params.lambda = Eigen::Vector3d(0.5, 1.1, 0.0);
  CHECK_THROWS_AS(params.validate(3), std::invalid_argument);
  params.lambda = Eigen::Vector3d(0.5, 1.0, 0.0);
  CHECK_NOTHROW(params.validate(3));
  params.gamma_sens = Eigen::Vector3d(0.1, 10.0, 0.0);
  CHECK_THROWS_AS(params.validate(3), std::invalid_argument);
  params.gamma_sens = Eigen::Vector3d(0.1, 10.0, 1.0);
  CHECK_NOTHROW(params.validate(3));
  CHECK_THROWS_AS(params.validate(2), std::invalid_argument);
}
