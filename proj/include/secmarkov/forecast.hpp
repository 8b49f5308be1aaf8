#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "secmarkov/chain.hpp"
#include "secmarkov/date.hpp"
#include "secmarkov/graph.hpp"
#include "secmarkov/lifecycle.hpp"
#include "secmarkov/reward.hpp"

namespace secmarkov {

/// e(v_t) = temporal weight * e(v) for every state bound to a vulnerability;
/// empty slots for the start state and vulnerability-less goals.
std::vector<std::optional<double>> temporal_scores(const AttackGraph& g, Date eval,
                                                   lifecycle::WeightMode mode,
                                                   const lifecycle::ParetoParams& params = {});

/// Snapshot treats each day's chain as homogeneous ("quasi-static"). Product
/// propagates the state distribution through the day-ordered matrix product
/// and emits nothing else.
enum class Variant { Snapshot, Product };

Variant parse_variant(std::string_view text);
std::string to_string(Variant v);

struct ForecastOptions {
  lifecycle::WeightMode mode = lifecycle::WeightMode::Frei;
  Variant variant = Variant::Snapshot;
  lifecycle::ParetoParams params;
  /// Step horizon for expected impact; ceil(EPL) of day 0 when unset.
  std::optional<std::size_t> ei_steps;
  unsigned threads = 1;
};

struct SnapshotMetrics {
  double epl = 0.0;
  std::vector<double> pp;      // per absorbing state, chain absorbing order
  double ei = 0.0;
  std::vector<double> visits;  // N row of start, chain transient order
};

struct DayRecord {
  long day = 0;
  Date date;
  CanonicalChain chain;
  std::optional<SnapshotMetrics> metrics;
  std::optional<std::vector<double>> distribution;  // product variant only
};

struct ForecastSeries {
  Date start_date;
  long horizon = 0;
  ForecastOptions options;
  std::size_t ei_steps = 0;
  std::vector<std::string> state_ids;
  std::vector<std::string> transient_ids;
  std::vector<std::string> goal_ids;
  std::vector<Edge> edges;
  std::vector<DayRecord> records;  // one per day, 0..horizon
};

/// The chain and snapshot metrics for a single evaluation date.
DayRecord compute_day(const AttackGraph& g, const RewardVector& rewards, Date start_date,
                      long day, const ForecastOptions& options, std::size_t ei_steps);

/// Rebuilds the chain for every day in [start_date, start_date + horizon].
/// Errors carry the offending day.
ForecastSeries daily_series(const AttackGraph& g, Date start_date, long horizon,
                            const ForecastOptions& options = {});

/// Metric names: epl, ei, pp (single goal), pp:<goal>, visits:<state>,
/// p:<from>-><to>, x:<state> (product variant). Throws InputError for an
/// unknown metric or one the series does not carry.
std::vector<double> metric_series(const ForecastSeries& s, std::string_view metric);
std::vector<std::string> metric_names(const ForecastSeries& s);

enum class Direction { Below, Above };

Direction parse_direction(std::string_view text);
std::string to_string(Direction d);

/// First day whose value is strictly below (or above) the threshold.
std::optional<long> threshold_crossing(const ForecastSeries& s, std::string_view metric,
                                       double threshold, Direction direction);

}  // namespace secmarkov
