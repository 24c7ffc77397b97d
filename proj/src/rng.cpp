#include "teamsim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

namespace teamsim {

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Eigen::VectorXd Rng::simplex_min(int n, double min_entry) {
  if (min_entry * n >= 1.0) {
    throw std::invalid_argument("simplex_min: min_entry too large for n");
  }
  for (int attempt = 0; attempt < 100000; ++attempt) {
    Eigen::VectorXd v = simplex(n);
    if (v.minCoeff() >= min_entry) return v;
  }
  throw std::runtime_error("simplex_min: rejection sampling stalled");
}

SkillVector random_skills(Rng& rng, int n, double min_entry) {
  return SkillVector(rng.simplex_min(n, min_entry));
}

Assignment random_interior_assignment(Rng& rng, int n, double min_entry) {
  return Assignment(rng.simplex_min(n, min_entry));
}

AppraisalMatrix random_appraisals_positive(Rng& rng, int n,
                                           double min_entry) {
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i) {
    a.row(i) = rng.simplex_min(n, min_entry).transpose();
  }
  return AppraisalMatrix(a);
}

AppraisalMatrix random_appraisals_sparse(Rng& rng, int n, double density) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    std::set<int> targets = {(i + 1) % n};  // ring keeps it irreducible
    for (int j = 0; j < n; ++j) {
      if (j != i && rng.uniform01() < density) targets.insert(j);
    }
    double self = rng.uniform(0.2, 0.6);
    Eigen::VectorXd weights = rng.simplex(static_cast<int>(targets.size()));
    int k = 0;
    a(i, i) = self;
    for (int j : targets) {
      a(i, j) = (1.0 - self) * weights(k++);
    }
  }
  return AppraisalMatrix(a);
}

namespace {

Eigen::MatrixXd rows_from_targets(Rng& rng, int n,
                                  const std::vector<std::set<int>>& targets) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd weights =
        rng.simplex(static_cast<int>(targets[i].size()));
    int k = 0;
    for (int j : targets[i]) m(i, j) = weights(k++);
  }
  return m;
}

}  // namespace

ObservationMatrix observation_strongly_connected(Rng& rng, int n,
                                                 int extra_edges) {
  std::vector<std::set<int>> targets(n);
  for (int i = 0; i < n; ++i) {
    targets[i].insert((i + 1) % n);
    for (int e = 0; e < extra_edges; ++e) {
      int j = rng.uniform_int(0, n - 1);
      if (j != i) targets[i].insert(j);
    }
  }
  return ObservationMatrix(rows_from_targets(rng, n, targets));
}

ObservationMatrix observation_single_sink(Rng& rng, int n) {
  std::vector<std::set<int>> targets(n);
  targets[0].insert(0);  // the sink observes only itself
  for (int i = 1; i < n; ++i) {
    targets[i].insert(i - 1);
    if (i > 1) targets[i].insert(rng.uniform_int(0, i - 1));
  }
  return ObservationMatrix(rows_from_targets(rng, n, targets));
}

ObservationMatrix observation_disconnected(Rng& rng, int n) {
  if (n < 4) {
    throw std::invalid_argument("observation_disconnected: need n >= 4");
  }
  int half = n / 2;
  std::vector<std::set<int>> targets(n);
  for (int i = 0; i < half; ++i) {
    targets[i].insert((i + 1) % half);
  }
  for (int i = half; i < n; ++i) {
    targets[i].insert(half + (i - half + 1) % (n - half));
  }
  // a second random in-block edge keeps the blocks from being bare cycles
  for (int i = 0; i < n; ++i) {
    int lo = i < half ? 0 : half;
    int hi = i < half ? half - 1 : n - 1;
    int j = rng.uniform_int(lo, hi);
    if (j != i) targets[i].insert(j);
  }
  return ObservationMatrix(rows_from_targets(rng, n, targets));
}

}  // namespace teamsim
