#include "teamsim/metrics.hpp"

#include <cmath>

namespace teamsim {

double appraisal_consensus_spread(const AppraisalMatrix& a) {
  const Eigen::MatrixXd& m = a.values();
  double spread = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    spread = std::max(spread, m.col(j).maxCoeff() - m.col(j).minCoeff());
  }
  return spread;
}

ComparativeAppraisalGraph comparative_graph(const AppraisalMatrix& a) {
  ComparativeAppraisalGraph g;
  g.n = a.size();
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      if (i != j && a(i, j) >= a(i, i)) g.edges.insert({i, j});
    }
  }
  return g;
}

int nontransitive_triad_count(const ComparativeAppraisalGraph& g) {
  if (g.n < 3) {
    throw std::domain_error("nontransitive_triad_count: need n >= 3");
  }
  int count = 0;
  for (int i = 0; i < g.n; ++i) {
    for (int j = i + 1; j < g.n; ++j) {
      for (int k = j + 1; k < g.n; ++k) {
        int triple[3] = {i, j, k};
        bool violating = false;
        // Any ordered 2-path u->v->z inside the triple without the
        // closing edge u->z marks the triple non-transitive.
        for (int u : triple) {
          for (int v : triple) {
            if (v == u) continue;
            for (int z : triple) {
              if (z == u || z == v) continue;
              if (g.has_edge(u, v) && g.has_edge(v, z) && !g.has_edge(u, z)) {
                violating = true;
              }
            }
          }
        }
        if (violating) ++count;
      }
    }
  }
  return count;
}

namespace {

void check_interior(const Assignment& w) {
  for (int i = 0; i < w.size(); ++i) {
    if (w[i] <= 0.0) {
      throw std::domain_error("lyapunov: assignment on simplex boundary");
    }
  }
}

}  // namespace

double lyapunov_manager(const Assignment& w, const SkillVector& x) {
  if (w.size() != x.size()) {
    throw std::invalid_argument("lyapunov_manager: dimension mismatch");
  }
  check_interior(w);
  double v = 0.0;
  for (int i = 0; i < x.size(); ++i) {
    v -= x[i] * std::log(w[i] / x[i]);
  }
  return v;
}

double lyapunov_ratio(const Assignment& w, const SkillVector& x) {
  if (w.size() != x.size()) {
    throw std::invalid_argument("lyapunov_ratio: dimension mismatch");
  }
  check_interior(w);
  double hi = -std::numeric_limits<double>::infinity();
  double lo = std::numeric_limits<double>::infinity();
  for (int i = 0; i < x.size(); ++i) {
    double r = x[i] / w[i];
    hi = std::max(hi, r);
    lo = std::min(lo, r);
  }
  return std::log(hi / lo);
}

}  // namespace teamsim
