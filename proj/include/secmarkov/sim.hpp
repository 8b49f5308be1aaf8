#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "secmarkov/chain.hpp"
#include "secmarkov/forecast.hpp"

namespace secmarkov {

struct SimulationConfig {
  std::uint64_t runs = 2000;
  std::uint64_t seed = 0;
  std::uint64_t max_steps = 1'000'000;
  long day = 0;          // forecast day whose chain is simulated
  unsigned threads = 1;  // output does not depend on this

  /// Throws InputError unless runs >= 1 and max_steps >= 1.
  void check() const;
};

struct SimulationResult {
  /// Transitions to absorption -> number of runs.
  std::map<std::uint64_t, std::uint64_t> path_length_histogram;
  /// Total visits per state (graph order) across all runs, counting the
  /// initial occupancy of the start state and the final absorbing state.
  std::vector<std::uint64_t> visit_counts;
  /// Sum over runs of the squared per-run visit count, for variance.
  std::vector<std::uint64_t> visit_square_sums;
  /// Runs absorbed in each absorbing state, chain absorbing order.
  std::vector<std::uint64_t> absorbed_per_goal;
  std::uint64_t truncated = 0;
  std::uint64_t runs = 0;
  std::uint64_t seed = 0;
  std::string generator;

  double mean_path_length() const;
  /// Sample standard deviation over absorbed runs.
  double path_length_stddev() const;
  double mean_visits(std::size_t state) const;
  double visits_stddev(std::size_t state) const;

  friend bool operator==(const SimulationResult&, const SimulationResult&) = default;
};

/// Identifies the per-run random stream; echoed in every result.
inline constexpr const char* kGeneratorName = "mt19937_64/seed_seq(seed,run)/v1";

/// Each run starts at the chain's start state and samples successors by
/// inverse CDF over the cumulative row (ties toward the lower state index)
/// until absorption or max_steps. Run r draws from its own stream keyed by
/// (seed, r), so the result is independent of cfg.threads.
SimulationResult simulate(const CanonicalChain& c, const SimulationConfig& cfg);

enum class SeedPolicy {
  PerDay,  // seed for day d is day_seed(cfg.seed, d)
  Common,  // every day reuses cfg.seed (common random numbers)
};

std::uint64_t day_seed(std::uint64_t seed, long day);

struct DaySimulation {
  long day = 0;
  SimulationResult result;
};

/// Independent simulation of each selected day's snapshot chain. Throws
/// InputError for a day outside the series.
std::vector<DaySimulation> simulate_trend(const ForecastSeries& series,
                                          const SimulationConfig& cfg, std::span<const long> days,
                                          SeedPolicy policy = SeedPolicy::PerDay);

}  // namespace secmarkov
