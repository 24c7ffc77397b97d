#pragma once

#include <set>
#include <utility>

#include "teamsim/team.hpp"

// Transactive-memory and convergence metrics computed on states and
// trajectories. Pure functions throughout.

namespace teamsim {

/// Unweighted digraph with edge (i,j) iff a_ij >= a_ii: "i thinks j is at
/// least as skilled as i herself". No self-loops.
struct ComparativeAppraisalGraph {
  int n = 0;
  std::set<std::pair<int, int>> edges;

  bool has_edge(int i, int j) const { return edges.count({i, j}) > 0; }
};

/// max_j (max_k a_kj - min_k a_kj): zero iff all rows agree (consensus).
double appraisal_consensus_spread(const AppraisalMatrix& a);

ComparativeAppraisalGraph comparative_graph(const AppraisalMatrix& a);

/// Number of unordered node triples {i,j,k} containing at least one
/// violating 2-path: distinct u,v,z inside the triple with (u,v),(v,z) in E
/// but (u,z) not in E. Throws std::domain_error for n < 3.
int nontransitive_triad_count(const ComparativeAppraisalGraph& g);

/// V(w) = -sum_i x_i log(w_i/x_i); nonnegative, zero iff w = x.
double lyapunov_manager(const Assignment& w, const SkillVector& x);

/// V = log((max_k x_k/w_k) / (min_k x_k/w_k)); nonnegative, zero iff w = x.
double lyapunov_ratio(const Assignment& w, const SkillVector& x);

}  // namespace teamsim
