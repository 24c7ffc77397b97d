#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>

#include "teamsim/team.hpp"

// Seeded randomness with counter-based splitting, plus the random team
// generators used by the experiment harness. The raw mt19937_64 stream is
// standardized, and all floating-point draws are derived from it directly,
// so runs replay bit-identically across platforms.

namespace teamsim {

uint64_t splitmix64(uint64_t x);

class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed), gen_(splitmix64(seed)) {}

  uint64_t next_u64() { return gen_(); }

  /// Uniform in [0,1) with 53 random bits.
  double uniform01() { return (next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  /// Exp(1) draw.
  double exponential() { return -std::log(1.0 - uniform01()); }

  /// Uniform integer in [lo, hi] inclusive.
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(next_u64() %
                                 static_cast<uint64_t>(hi - lo + 1));
  }

  /// Uniform point on the open simplex (Dirichlet(1,...,1)): normalized
  /// exponentials.
  Eigen::VectorXd simplex(int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = exponential();
    return v / v.sum();
  }

  /// Simplex point redrawn until every entry reaches min_entry.
  Eigen::VectorXd simplex_min(int n, double min_entry);

  /// Independent child stream number `index`, derived from the original
  /// seed only, so splits do not depend on how much of this stream was
  /// consumed.
  Rng split(uint64_t index) const {
    return Rng(splitmix64(seed_ + 0x9e3779b97f4a7c15ULL * (index + 1)));
  }

  uint64_t seed() const { return seed_; }

 private:
  uint64_t seed_;
  std::mt19937_64 gen_;
};

/// Random skill vector: uniform on the simplex, every entry >= min_entry.
SkillVector random_skills(Rng& rng, int n, double min_entry);

/// Interior assignment drawn the same way.
Assignment random_interior_assignment(Rng& rng, int n, double min_entry);

/// Entrywise-positive row-stochastic matrix: Dirichlet-uniform rows,
/// redrawn until the minimum entry reaches min_entry.
AppraisalMatrix random_appraisals_positive(Rng& rng, int n, double min_entry);

/// Irreducible matrix with strictly positive diagonal but a sparse
/// off-diagonal pattern (a directed ring plus extra random edges with
/// probability `density`). Suitable initial condition for the
/// assign/appraise model without being entrywise positive.
AppraisalMatrix random_appraisals_sparse(Rng& rng, int n, double density);

/// Strongly connected observation network: directed ring plus
/// `extra_edges` random out-edges per node, Dirichlet weights.
ObservationMatrix observation_strongly_connected(Rng& rng, int n,
                                                 int extra_edges);

/// Observation network whose only globally reachable node is node 0
/// (every other node observes strictly lower-indexed nodes); not strongly
/// connected for n >= 2.
ObservationMatrix observation_single_sink(Rng& rng, int n);

/// Two internally strongly connected blocks with no edges between them:
/// no globally reachable node.
ObservationMatrix observation_disconnected(Rng& rng, int n);

}  // namespace teamsim
