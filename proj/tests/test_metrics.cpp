#include <doctest.h>

#include "oracles.hpp"
#include "teamsim/metrics.hpp"
#include "teamsim/rng.hpp"

using namespace teamsim;

TEST_CASE("consensus spread") {
  Eigen::Vector3d v(0.2, 0.3, 0.5);
  Eigen::MatrixXd consensus = Eigen::Vector3d::Ones() * v.transpose();
  CHECK(appraisal_consensus_spread(AppraisalMatrix(consensus)) == 0.0);

  CHECK(appraisal_consensus_spread(
            AppraisalMatrix(Eigen::MatrixXd::Identity(2, 2))) == 1.0);

  Eigen::MatrixXd two(2, 2);
  two << 0.5, 0.5, 0.25, 0.75;
  CHECK(appraisal_consensus_spread(AppraisalMatrix(two)) ==
        doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("spread is zero exactly at row consensus") {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    int n = rng.uniform_int(2, 7);
    Eigen::VectorXd row = rng.simplex(n);
    Eigen::MatrixXd a = Eigen::VectorXd::Ones(n) * row.transpose();
    CHECK(appraisal_consensus_spread(AppraisalMatrix(a)) < 1e-12);
    // perturb one row inside the simplex
    int i = rng.uniform_int(0, n - 1);
    Eigen::MatrixXd b = a;
    int j = rng.uniform_int(0, n - 1);
    int k = (j + 1) % n;
    double shift = 0.5 * std::min(b(i, j), 1.0 - b(i, k));
    if (shift < 1e-9) continue;
    b(i, j) -= shift;
    b(i, k) += shift;
    CHECK(appraisal_consensus_spread(AppraisalMatrix(b)) > 1e-12);
  }
}

TEST_CASE("comparative appraisal graph") {
  SUBCASE("consensus rows order by skill") {
    Eigen::Vector3d v(0.5, 0.2, 0.3);
    Eigen::MatrixXd a = Eigen::Vector3d::Ones() * v.transpose();
    ComparativeAppraisalGraph g = comparative_graph(AppraisalMatrix(a));
    // edge (i,j) iff v_j >= v_i, j != i
    CHECK(g.has_edge(1, 0));
    CHECK(g.has_edge(1, 2));
    CHECK(g.has_edge(2, 0));
    CHECK_FALSE(g.has_edge(0, 1));
    CHECK_FALSE(g.has_edge(0, 2));
    CHECK_FALSE(g.has_edge(2, 1));
  }

  SUBCASE("uniform appraisals give the complete digraph") {
    int n = 4;
    Eigen::MatrixXd a = Eigen::MatrixXd::Constant(n, n, 0.25);
    ComparativeAppraisalGraph g = comparative_graph(AppraisalMatrix(a));
    CHECK(static_cast<int>(g.edges.size()) == n * (n - 1));
  }

  SUBCASE("ties use a_ij >= a_ii") {
    Eigen::MatrixXd a(2, 2);
    a << 0.6, 0.4, 0.5, 0.5;
    ComparativeAppraisalGraph g = comparative_graph(AppraisalMatrix(a));
    CHECK(g.edges == std::set<std::pair<int, int>>{{1, 0}});
  }
}

TEST_CASE("non-transitive triad count") {
  SUBCASE("three-cycle") {
    ComparativeAppraisalGraph g;
    g.n = 3;
    g.edges = {{0, 1}, {1, 2}, {2, 0}};
    CHECK(nontransitive_triad_count(g) == 1);
  }

  SUBCASE("transitive tournament") {
    ComparativeAppraisalGraph g;
    g.n = 3;
    g.edges = {{0, 1}, {0, 2}, {1, 2}};
    CHECK(nontransitive_triad_count(g) == 0);
  }

  SUBCASE("complete digraph") {
    ComparativeAppraisalGraph g;
    g.n = 4;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        if (i != j) g.edges.insert({i, j});
      }
    }
    CHECK(nontransitive_triad_count(g) == 0);
  }

  SUBCASE("needs at least three nodes") {
    ComparativeAppraisalGraph g;
    g.n = 2;
    CHECK_THROWS_AS(nontransitive_triad_count(g), std::domain_error);
  }

  SUBCASE("agrees with the triple-loop census") {
    Rng rng(17);
    for (int trial = 0; trial < 500; ++trial) {
      ComparativeAppraisalGraph g;
      g.n = rng.uniform_int(3, 6);
      for (int i = 0; i < g.n; ++i) {
        for (int j = 0; j < g.n; ++j) {
          if (i != j && rng.uniform01() < 0.5) g.edges.insert({i, j});
        }
      }
      CHECK(nontransitive_triad_count(g) ==
            oracles::nontransitive_triads_bruteforce(g));
    }
  }
}

TEST_CASE("lyapunov functions") {
  SkillVector half(Eigen::Vector2d(0.5, 0.5));

  CHECK(lyapunov_manager(Assignment(Eigen::Vector2d(0.5, 0.5)), half) == 0.0);
  CHECK(lyapunov_ratio(Assignment(Eigen::Vector2d(0.5, 0.5)), half) == 0.0);

  CHECK(lyapunov_ratio(Assignment(Eigen::Vector2d(0.25, 0.75)), half) ==
        doctest::Approx(std::log(3.0)).epsilon(1e-14));
  CHECK(lyapunov_manager(Assignment(Eigen::Vector2d(0.25, 0.75)), half) ==
        doctest::Approx(0.14384103622589045).epsilon(1e-13));
}

TEST_CASE("lyapunov functions are positive off the optimum") {
  Rng rng(29);
  for (int trial = 0; trial < 300; ++trial) {
    int n = rng.uniform_int(2, 8);
    Eigen::VectorXd xv = rng.simplex_min(n, 1e-2);
    int i = rng.uniform_int(0, n - 1);
    int j = (i + 1) % n;
    double delta = rng.uniform(1e-6, 1e-3) * xv.minCoeff();
    Eigen::VectorXd wv = xv;
    wv(i) += delta;
    wv(j) -= delta;
    SkillVector x(xv);
    Assignment w(wv);
    CHECK(lyapunov_manager(w, x) > 0.0);
    CHECK(lyapunov_ratio(w, x) > 0.0);
  }
}
