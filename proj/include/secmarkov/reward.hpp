#pragma once

#include <cstddef>
#include <vector>

#include "secmarkov/chain.hpp"
#include "secmarkov/graph.hpp"

namespace secmarkov {

/// Per-state impact rewards, aligned with graph (and chain) state order.
struct RewardVector {
  std::vector<double> values;

  /// Throws InputError unless every entry lies in [0, 10.41].
  void check() const;
};

struct InitialDistribution {
  static constexpr double kSumTolerance = 1e-12;

  Vector x;

  static InitialDistribution unit(std::size_t size, std::size_t state);
  /// Throws InputError on negative entries or a sum other than 1.
  void check() const;
};

/// Row-vector propagation x(t)^T = x(0)^T P^t.
Vector state_distribution(const CanonicalChain& c, const InitialDistribution& x0,
                          std::size_t steps);

/// Occupancy expectation sum_i rho(s_i) P{X(t) = s_i}. Throws InputError on a
/// dimension mismatch.
double expected_impact(const CanonicalChain& c, const RewardVector& r,
                       const InitialDistribution& x0, std::size_t steps);

/// rho(start) = 0, rho(transient) = the bound vulnerability's impact. A goal
/// takes its explicit reward if given, else the impact of its own
/// vulnerability, else the largest impact among its predecessors.
RewardVector reward_vector_from_graph(const AttackGraph& g);

}  // namespace secmarkov
