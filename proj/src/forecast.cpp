#include "secmarkov/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "secmarkov/error.hpp"

namespace secmarkov {

std::vector<std::optional<double>> temporal_scores(const AttackGraph& g, Date eval,
                                                   lifecycle::WeightMode mode,
                                                   const lifecycle::ParetoParams& params) {
  std::vector<std::optional<double>> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vulnerability* v = g.vulnerability_of(i);
    if (!v) continue;
    out[i] = cvss::temporal_exploitability(v->exploitability(),
                                           lifecycle::temporal_weight(*v, eval, mode, params));
  }
  return out;
}

Variant parse_variant(std::string_view text) {
  if (text == "snapshot") return Variant::Snapshot;
  if (text == "product") return Variant::Product;
  throw InputError("unknown variant '" + std::string(text) + "', expected snapshot|product");
}

std::string to_string(Variant v) { return v == Variant::Snapshot ? "snapshot" : "product"; }

Direction parse_direction(std::string_view text) {
  if (text == "below") return Direction::Below;
  if (text == "above") return Direction::Above;
  throw InputError("unknown threshold direction '" + std::string(text) + "', expected below|above");
}

std::string to_string(Direction d) { return d == Direction::Below ? "below" : "above"; }

namespace {

CanonicalChain chain_for(const AttackGraph& g, Date date, const ForecastOptions& options) {
  const auto scores = temporal_scores(g, date, options.mode, options.params);
  return transition_matrix(g, scores);
}

template <typename F>
auto with_day_context(long day, Date date, F&& f) {
  const std::string where = "day " + std::to_string(day) + " (" + date.to_string() + "): ";
  try {
    return f();
  } catch (const NumericError& e) {
    throw NumericError(where + e.what());
  } catch (const InputError& e) {
    throw InputError(where + e.what());
  }
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

DayRecord compute_day(const AttackGraph& g, const RewardVector& rewards, Date start_date,
                      long day, const ForecastOptions& options, std::size_t ei_steps) {
  const Date date = start_date.plus_days(day);
  return with_day_context(day, date, [&] {
    DayRecord rec{day, date, chain_for(g, date, options), std::nullopt, std::nullopt};
    if (options.variant == Variant::Snapshot) {
      const ChainMetrics m = chain_metrics(rec.chain);
      const auto x0 = InitialDistribution::unit(rec.chain.size(), rec.chain.start());
      rec.metrics = SnapshotMetrics{m.epl, to_std(m.pp),
                                    expected_impact(rec.chain, rewards, x0, ei_steps),
                                    to_std(m.visits)};
    }
    return rec;
  });
}

ForecastSeries daily_series(const AttackGraph& g, Date start_date, long horizon,
                            const ForecastOptions& options) {
  if (horizon < 0) throw InputError("forecast horizon must be >= 0");
  options.params.check();
  const auto start = g.start();
  if (!start) throw InputError("attack graph has no start state");

  ForecastSeries s;
  s.start_date = start_date;
  s.horizon = horizon;
  s.options = options;
  s.edges = g.edges();
  for (const auto& st : g.states()) s.state_ids.push_back(st.id);

  const RewardVector rewards =
      options.variant == Variant::Snapshot ? reward_vector_from_graph(g) : RewardVector{};

  if (options.ei_steps) {
    s.ei_steps = *options.ei_steps;
  } else if (options.variant == Variant::Snapshot) {
    const double epl0 = with_day_context(0, start_date, [&] {
      return chain_metrics(chain_for(g, start_date, options)).epl;
    });
    s.ei_steps = static_cast<std::size_t>(std::ceil(epl0));
  }

  const auto days = static_cast<std::size_t>(horizon) + 1;
  std::vector<std::optional<DayRecord>> slots(days);
  const unsigned workers = std::max(1u, std::min<unsigned>(options.threads, days));
  if (workers == 1) {
    for (std::size_t d = 0; d < days; ++d) {
      slots[d] = compute_day(g, rewards, start_date, static_cast<long>(d), options, s.ei_steps);
    }
  } else {
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t d = w; d < days; d += workers) {
            slots[d] = compute_day(g, rewards, start_date, static_cast<long>(d), options,
                                   s.ei_steps);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    // Report the earliest failing day, as the sequential loop would.
    std::exception_ptr first;
    std::size_t first_day = days;
    for (unsigned w = 0; w < workers; ++w) {
      if (!errors[w]) continue;
      std::size_t d = w;
      while (d < days && slots[d]) d += workers;
      if (d < first_day) {
        first_day = d;
        first = errors[w];
      }
    }
    if (first) std::rethrow_exception(first);
  }

  s.records.reserve(days);
  for (auto& slot : slots) s.records.push_back(std::move(*slot));

  const CanonicalChain& c0 = s.records.front().chain;
  for (auto i : c0.transient_states()) s.transient_ids.push_back(s.state_ids[i]);
  for (auto i : c0.absorbing_states()) s.goal_ids.push_back(s.state_ids[i]);

  if (options.variant == Variant::Product) {
    Eigen::RowVectorXd x = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(c0.size()));
    x(static_cast<Eigen::Index>(c0.start())) = 1.0;
    for (auto& rec : s.records) {
      x = x * rec.chain.P();
      rec.distribution = std::vector<double>(x.data(), x.data() + x.size());
    }
  }
  return s;
}

namespace {

std::ptrdiff_t index_of(const std::vector<std::string>& ids, std::string_view id) {
  const auto it = std::find(ids.begin(), ids.end(), id);
  return it == ids.end() ? -1 : it - ids.begin();
}

[[noreturn]] void unknown_metric(std::string_view metric, std::string_view why) {
  throw InputError("unknown metric '" + std::string(metric) + "': " + std::string(why));
}

}  // namespace

std::vector<double> metric_series(const ForecastSeries& s, std::string_view metric) {
  std::vector<double> out;
  out.reserve(s.records.size());
  auto need_snapshot = [&] {
    if (s.options.variant != Variant::Snapshot) {
      unknown_metric(metric, "only the snapshot variant carries epl/pp/ei/visits");
    }
  };

  if (metric == "epl" || metric == "ei") {
    need_snapshot();
    for (const auto& r : s.records) out.push_back(metric == "epl" ? r.metrics->epl : r.metrics->ei);
    return out;
  }

  const auto colon = metric.find(':');
  const std::string_view head = metric.substr(0, colon);
  const std::string_view arg =
      colon == std::string_view::npos ? std::string_view{} : metric.substr(colon + 1);

  if (head == "pp") {
    need_snapshot();
    std::ptrdiff_t k = 0;
    if (arg.empty()) {
      if (s.goal_ids.size() != 1) unknown_metric(metric, "name a goal as pp:<goal>");
    } else {
      k = index_of(s.goal_ids, arg);
      if (k < 0) unknown_metric(metric, "no such goal");
    }
    for (const auto& r : s.records) out.push_back(r.metrics->pp[static_cast<std::size_t>(k)]);
    return out;
  }
  if (head == "visits") {
    need_snapshot();
    const auto k = index_of(s.transient_ids, arg);
    if (k < 0) unknown_metric(metric, "no such transient state");
    for (const auto& r : s.records) out.push_back(r.metrics->visits[static_cast<std::size_t>(k)]);
    return out;
  }
  if (head == "x") {
    if (s.options.variant != Variant::Product) {
      unknown_metric(metric, "state distribution is carried by the product variant only");
    }
    const auto k = index_of(s.state_ids, arg);
    if (k < 0) unknown_metric(metric, "no such state");
    for (const auto& r : s.records) out.push_back((*r.distribution)[static_cast<std::size_t>(k)]);
    return out;
  }
  if (head == "p") {
    const auto arrow = arg.find("->");
    if (arrow == std::string_view::npos) unknown_metric(metric, "expected p:<from>-><to>");
    const auto from = index_of(s.state_ids, arg.substr(0, arrow));
    const auto to = index_of(s.state_ids, arg.substr(arrow + 2));
    if (from < 0 || to < 0) unknown_metric(metric, "no such state");
    for (const auto& r : s.records) out.push_back(r.chain.P()(from, to));
    return out;
  }
  unknown_metric(metric, "expected epl, ei, pp[:goal], visits:<state>, p:<from>-><to> or x:<state>");
}

std::vector<std::string> metric_names(const ForecastSeries& s) {
  std::vector<std::string> names;
  if (s.options.variant == Variant::Snapshot) {
    names.push_back("epl");
    names.push_back("ei");
    for (const auto& g : s.goal_ids) names.push_back("pp:" + g);
    for (const auto& t : s.transient_ids) names.push_back("visits:" + t);
  } else {
    for (const auto& id : s.state_ids) names.push_back("x:" + id);
  }
  for (const auto& e : s.edges) {
    names.push_back("p:" + s.state_ids[e.from] + "->" + s.state_ids[e.to]);
  }
  return names;
}

std::optional<long> threshold_crossing(const ForecastSeries& s, std::string_view metric,
                                       double threshold, Direction direction) {
  const auto values = metric_series(s, metric);
  for (std::size_t m = 0; m < values.size(); ++m) {
    const bool crossed = direction == Direction::Below ? values[m] < threshold
                                                       : values[m] > threshold;
    if (crossed) return s.records[m].day;
  }
  return std::nullopt;
}

}  // namespace secmarkov
