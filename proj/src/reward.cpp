#include "secmarkov/reward.hpp"

#include <algorithm>
#include <cmath>

#include "secmarkov/cvss.hpp"
#include "secmarkov/error.hpp"

namespace secmarkov {

void RewardVector::check() const {
  for (double v : values) {
    if (!(v >= 0.0 && v <= cvss::ScoreConstants::impact_factor)) {
      throw InputError("reward outside [0, 10.41]");
    }
  }
}

InitialDistribution InitialDistribution::unit(std::size_t size, std::size_t state) {
  if (state >= size) throw InputError("initial state out of range");
  InitialDistribution d{Vector::Zero(static_cast<Eigen::Index>(size))};
  d.x(static_cast<Eigen::Index>(state)) = 1.0;
  return d;
}

void InitialDistribution::check() const {
  if ((x.array() < 0.0).any()) throw InputError("initial distribution has negative entries");
  if (std::abs(x.sum() - 1.0) > kSumTolerance) {
    throw InputError("initial distribution does not sum to 1");
  }
}

Vector state_distribution(const CanonicalChain& c, const InitialDistribution& x0,
                          std::size_t steps) {
  if (static_cast<std::size_t>(x0.x.size()) != c.size()) {
    throw InputError("initial distribution length does not match the chain");
  }
  x0.check();
  Eigen::RowVectorXd x = x0.x.transpose();
  for (std::size_t t = 0; t < steps; ++t) x = x * c.P();
  return x.transpose();
}

double expected_impact(const CanonicalChain& c, const RewardVector& r,
                       const InitialDistribution& x0, std::size_t steps) {
  if (r.values.size() != c.size()) {
    throw InputError("reward vector length does not match the chain");
  }
  const Vector x = state_distribution(c, x0, steps);
  double sum = 0.0;
  for (std::size_t i = 0; i < r.values.size(); ++i) {
    sum += r.values[i] * x(static_cast<Eigen::Index>(i));
  }
  return sum;
}

RewardVector reward_vector_from_graph(const AttackGraph& g) {
  RewardVector r;
  r.values.assign(g.size(), 0.0);
  auto impact_of = [&](std::size_t i) -> std::optional<double> {
    const Vulnerability* v = g.vulnerability_of(i);
    return v ? v->impact_score() : std::nullopt;
  };

  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.state(i).kind != StateKind::Transient) continue;
    const auto impact = impact_of(i);
    if (!impact) {
      throw InputError("transient state '" + g.state(i).id + "' has no impact score");
    }
    r.values[i] = *impact;
  }
  for (std::size_t i = 0; i < g.size(); ++i) {
    const State& s = g.state(i);
    if (s.kind != StateKind::Goal) continue;
    if (s.reward) {
      r.values[i] = *s.reward;
    } else if (const auto own = impact_of(i)) {
      r.values[i] = *own;
    } else {
      double best = 0.0;
      for (auto p : g.predecessors(i)) best = std::max(best, r.values[p]);
      r.values[i] = best;
    }
  }
  r.check();
  return r;
}

}  // namespace secmarkov
