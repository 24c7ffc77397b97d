#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "teamsim/team.hpp"

// Perron left-eigenvector computation and the digraph-connectivity
// classifiers that gate each model's hypotheses.

namespace teamsim {

/// Connectivity structure of the digraph induced by a nonnegative matrix
/// (edge (i,j) present iff b_ij > 0).
struct ConnectivityReport {
  bool irreducible = false;
  bool primitive = false;
  bool strongly_connected = false;
  bool has_globally_reachable_node = false;
  // Nodes reachable from every node: the unique sink SCC of the
  // condensation, empty when the condensation has several sinks.
  std::vector<int> globally_reachable_nodes;
  bool positive_diagonal = false;
};

/// SCC decomposition of the induced digraph; throws std::domain_error on a
/// negative entry.
ConnectivityReport classify_connectivity(const Eigen::MatrixXd& b);

/// Normalized positive left eigenvector w with w^T A = w^T. Power iteration
/// runs on the transpose of (A+I)/2 (same eigenvector, aperiodic by
/// construction), renormalized each step, seeded from warm_start or uniform.
/// Throws std::invalid_argument "eigenvector undefined" when A is not
/// irreducible and std::runtime_error (carrying the residual) when max_iter
/// is exhausted.
Assignment left_dominant_eigenvector(
    const AppraisalMatrix& a, double tol = 1e-12, int max_iter = 100000,
    const std::optional<Assignment>& warm_start = std::nullopt);

/// Workload diffusion q(k+1) = A^T q(k) from q(0) = 1/n. For primitive A
/// this converges to the left dominant eigenvector; it serves as the
/// independent oracle for that operation.
Assignment workload_diffusion(const AppraisalMatrix& a, int steps);

/// Normalized in-degree centrality w = A^T 1 / (1^T A 1).
Assignment in_degree_assignment(const AppraisalMatrix& a);

namespace detail {

// Unvalidated power iteration used inside integration loops, where stage
// states may carry tiny clamped negatives and connectivity was checked at
// t=0. Returns the residual-converged vector or nullopt after max_iter.
std::optional<Eigen::VectorXd> power_iterate_left(const Eigen::MatrixXd& a,
                                                  Eigen::VectorXd seed,
                                                  double tol, int max_iter);

}  // namespace detail

}  // namespace teamsim
