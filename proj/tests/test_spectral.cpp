#include <doctest.h>

#include "oracles.hpp"
#include "teamsim/rng.hpp"
#include "teamsim/spectral.hpp"

using namespace teamsim;

namespace {

Eigen::MatrixXd directed_cycle(int n) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) m(i, (i + 1) % n) = 1.0;
  return m;
}

}  // namespace

TEST_CASE("classify_connectivity on a directed cycle") {
  ConnectivityReport rep = classify_connectivity(directed_cycle(4));
  CHECK(rep.strongly_connected);
  CHECK(rep.irreducible);
  CHECK_FALSE(rep.primitive);  // all cycle lengths are multiples of 4
  CHECK(rep.has_globally_reachable_node);
  CHECK(rep.globally_reachable_nodes == std::vector<int>{0, 1, 2, 3});
  CHECK_FALSE(rep.positive_diagonal);
}

TEST_CASE("classify_connectivity on a sink star") {
  // every spoke points at the hub, which has a self-loop
  int n = 5;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  m(0, 0) = 1.0;
  for (int i = 1; i < n; ++i) m(i, 0) = 1.0;
  ConnectivityReport rep = classify_connectivity(m);
  CHECK_FALSE(rep.strongly_connected);
  CHECK_FALSE(rep.irreducible);
  CHECK(rep.has_globally_reachable_node);
  CHECK(rep.globally_reachable_nodes == std::vector<int>{0});
}

TEST_CASE("classify_connectivity on two disjoint 2-cycles") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
  m(0, 1) = m(1, 0) = 1.0;
  m(2, 3) = m(3, 2) = 1.0;
  ConnectivityReport rep = classify_connectivity(m);
  CHECK_FALSE(rep.irreducible);
  CHECK_FALSE(rep.has_globally_reachable_node);
  CHECK(rep.globally_reachable_nodes.empty());
}

TEST_CASE("classify_connectivity rejects negative entries") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
  m(0, 1) = -0.5;
  CHECK_THROWS_AS(classify_connectivity(m), std::domain_error);
}

TEST_CASE("self-loop makes a cycle aperiodic") {
  Eigen::MatrixXd m = directed_cycle(3);
  CHECK_FALSE(classify_connectivity(m).primitive);
  m(0, 0) = 1.0;
  CHECK(classify_connectivity(m).primitive);
}

TEST_CASE("left dominant eigenvector examples") {
  Eigen::MatrixXd swap(2, 2);
  swap << 0, 1, 1, 0;
  // periodic but irreducible: the (A+I)/2 shift must still converge
  Assignment w = left_dominant_eigenvector(AppraisalMatrix(swap));
  CHECK(w[0] == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(w[1] == doctest::Approx(0.5).epsilon(1e-10));

  Eigen::MatrixXd uniform = Eigen::MatrixXd::Constant(5, 5, 0.2);
  w = left_dominant_eigenvector(AppraisalMatrix(uniform));
  for (int i = 0; i < 5; ++i) {
    CHECK(w[i] == doctest::Approx(0.2).epsilon(1e-10));
  }

  Eigen::MatrixXd two(2, 2);
  two << 0.5, 0.5, 0.25, 0.75;
  w = left_dominant_eigenvector(AppraisalMatrix(two));
  CHECK(w[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  CHECK(w[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("eigenvector is undefined for reducible input") {
  Eigen::MatrixXd reducible(2, 2);
  reducible << 1.0, 0.0, 0.0, 1.0;
  CHECK_THROWS_WITH_AS(
      left_dominant_eigenvector(AppraisalMatrix(reducible)),
      doctest::Contains("eigenvector undefined"), std::invalid_argument);
}

TEST_CASE("eigenvector residual honors the tolerance") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    int n = rng.uniform_int(2, 8);
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i) a.row(i) = rng.simplex(n).transpose();
    Assignment w = left_dominant_eigenvector(AppraisalMatrix(a), 1e-12);
    Eigen::VectorXd residual =
        a.transpose() * w.values() - w.values();
    CHECK(residual.lpNorm<Eigen::Infinity>() < 1e-12);
    CHECK(w.values().minCoeff() > 0.0);
  }
}

TEST_CASE("workload diffusion examples") {
  Eigen::MatrixXd doubly(3, 3);
  doubly << 0.5, 0.25, 0.25, 0.25, 0.5, 0.25, 0.25, 0.25, 0.5;
  Assignment q = workload_diffusion(AppraisalMatrix(doubly), 37);
  for (int i = 0; i < 3; ++i) {
    CHECK(q[i] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  }

  Eigen::MatrixXd two(2, 2);
  two << 0.5, 0.5, 0.25, 0.75;
  q = workload_diffusion(AppraisalMatrix(two), 200);
  CHECK(std::abs(q[0] - 1.0 / 3.0) < 1e-10);
  CHECK(std::abs(q[1] - 2.0 / 3.0) < 1e-10);

  q = workload_diffusion(AppraisalMatrix(two), 0);
  CHECK(q[0] == 0.5);
  CHECK(q[1] == 0.5);
}

TEST_CASE("in-degree assignment examples") {
  Eigen::MatrixXd two(2, 2);
  two << 0.5, 0.5, 0.25, 0.75;
  Assignment w = in_degree_assignment(AppraisalMatrix(two));
  CHECK(w[0] == doctest::Approx(0.375).epsilon(1e-14));
  CHECK(w[1] == doctest::Approx(0.625).epsilon(1e-14));

  Eigen::MatrixXd swap(2, 2);
  swap << 0, 1, 1, 0;
  w = in_degree_assignment(AppraisalMatrix(swap));
  CHECK(w[0] == doctest::Approx(0.5));
  CHECK(w[1] == doctest::Approx(0.5));

  Eigen::MatrixXd doubly(3, 3);
  doubly << 0.5, 0.25, 0.25, 0.25, 0.5, 0.25, 0.25, 0.25, 0.5;
  w = in_degree_assignment(AppraisalMatrix(doubly));
  for (int i = 0; i < 3; ++i) {
    CHECK(w[i] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  }
}

TEST_CASE("diffusion oracle agrees with the eigenvector") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    int n = rng.uniform_int(3, 8);
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i) a.row(i) = rng.simplex(n).transpose();
    // entrywise positive, hence primitive
    Assignment w = left_dominant_eigenvector(AppraisalMatrix(a));
    Assignment q = workload_diffusion(AppraisalMatrix(a), 10000);
    CHECK((w.values() - q.values()).lpNorm<Eigen::Infinity>() < 1e-8);
  }
}

TEST_CASE("connectivity matches brute-force reachability on small digraphs") {
  Rng rng(13);
  for (int trial = 0; trial < 10000; ++trial) {
    int n = rng.uniform_int(2, 4);
    Eigen::MatrixXd b(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        b(i, j) = rng.uniform01() < 0.4 ? rng.uniform(0.1, 1.0) : 0.0;
      }
    }
    ConnectivityReport rep = classify_connectivity(b);
    CHECK(rep.strongly_connected == oracles::strongly_connected_bruteforce(b));
    CHECK(rep.globally_reachable_nodes ==
          oracles::globally_reachable_bruteforce(b));
    CHECK(rep.has_globally_reachable_node ==
          !oracles::globally_reachable_bruteforce(b).empty());
    CHECK(rep.primitive == oracles::primitive_bruteforce(b));
    if (rep.strongly_connected) {
      CHECK(static_cast<int>(rep.globally_reachable_nodes.size()) == n);
    }
  }
}
