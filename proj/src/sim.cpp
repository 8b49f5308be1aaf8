#include "secmarkov/sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "secmarkov/error.hpp"

namespace secmarkov {

void SimulationConfig::check() const {
  if (runs < 1) throw InputError("simulation needs at least one run");
  if (max_steps < 1) throw InputError("max_steps must be at least 1");
}

double SimulationResult::mean_path_length() const {
  std::uint64_t n = 0;
  long double sum = 0;
  for (const auto& [len, freq] : path_length_histogram) {
    n += freq;
    sum += static_cast<long double>(len) * freq;
  }
  return n == 0 ? 0.0 : static_cast<double>(sum / n);
}

double SimulationResult::path_length_stddev() const {
  std::uint64_t n = 0;
  for (const auto& [len, freq] : path_length_histogram) n += freq;
  if (n < 2) return 0.0;
  const long double mean = mean_path_length();
  long double ss = 0;
  for (const auto& [len, freq] : path_length_histogram) {
    const long double d = static_cast<long double>(len) - mean;
    ss += d * d * freq;
  }
  return static_cast<double>(std::sqrt(ss / (n - 1)));
}

double SimulationResult::mean_visits(std::size_t state) const {
  return runs == 0 ? 0.0 : static_cast<double>(visit_counts.at(state)) / static_cast<double>(runs);
}

double SimulationResult::visits_stddev(std::size_t state) const {
  if (runs < 2) return 0.0;
  const long double n = runs;
  const long double sum = visit_counts.at(state);
  const long double sq = visit_square_sums.at(state);
  const long double var = (sq - sum * sum / n) / (n - 1);
  return var > 0 ? static_cast<double>(std::sqrt(var)) : 0.0;
}

namespace {

struct Row {
  std::vector<std::size_t> targets;
  std::vector<double> cumulative;  // last entry is exactly 1
};

std::vector<Row> cumulative_rows(const CanonicalChain& c) {
  std::vector<Row> rows(c.size());
  const Matrix& p = c.P();
  for (auto i : c.transient_states()) {
    Row& row = rows[i];
    double acc = 0.0;
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      const double x = p(static_cast<Eigen::Index>(i), j);
      if (x <= 0.0) continue;
      acc += x;
      row.targets.push_back(static_cast<std::size_t>(j));
      row.cumulative.push_back(acc);
    }
    row.cumulative.back() = 1.0;
  }
  return rows;
}

class RunStream {
 public:
  RunStream(std::uint64_t seed, std::uint64_t run) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(run), static_cast<std::uint32_t>(run >> 32)};
    engine_.seed(seq);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

struct Tally {
  std::map<std::uint64_t, std::uint64_t> histogram;
  std::vector<std::uint64_t> visits;
  std::vector<std::uint64_t> squares;
  std::vector<std::uint64_t> absorbed;
  std::uint64_t truncated = 0;

  explicit Tally(std::size_t states) : visits(states, 0), squares(states, 0), absorbed(states, 0) {}

  void merge(const Tally& other) {
    for (const auto& [len, freq] : other.histogram) histogram[len] += freq;
    for (std::size_t i = 0; i < visits.size(); ++i) {
      visits[i] += other.visits[i];
      squares[i] += other.squares[i];
      absorbed[i] += other.absorbed[i];
    }
    truncated += other.truncated;
  }
};

void run_range(const CanonicalChain& c, const std::vector<Row>& rows, const SimulationConfig& cfg,
               std::uint64_t first, std::uint64_t last, Tally& tally) {
  std::vector<std::uint64_t> local(c.size(), 0);
  std::vector<std::size_t> touched;
  for (std::uint64_t run = first; run < last; ++run) {
    RunStream rng(cfg.seed, run);
    std::size_t state = c.start();
    std::uint64_t steps = 0;
    touched.clear();
    auto visit = [&](std::size_t s) {
      if (local[s]++ == 0) touched.push_back(s);
    };
    visit(state);
    bool absorbed = false;
    while (true) {
      if (c.is_absorbing(state)) {
        absorbed = true;
        break;
      }
      if (steps == cfg.max_steps) break;
      const Row& row = rows[state];
      const double u = rng.next();
      const auto it = std::upper_bound(row.cumulative.begin(), row.cumulative.end(), u);
      state = row.targets[static_cast<std::size_t>(it - row.cumulative.begin())];
      ++steps;
      visit(state);
    }
    if (absorbed) {
      ++tally.histogram[steps];
      ++tally.absorbed[state];
    } else {
      ++tally.truncated;
    }
    for (auto s : touched) {
      tally.visits[s] += local[s];
      tally.squares[s] += local[s] * local[s];
      local[s] = 0;
    }
  }
}

}  // namespace

SimulationResult simulate(const CanonicalChain& c, const SimulationConfig& cfg) {
  cfg.check();
  const auto rows = cumulative_rows(c);

  const unsigned workers =
      static_cast<unsigned>(std::max<std::uint64_t>(1, std::min<std::uint64_t>(cfg.threads, cfg.runs)));
  Tally total(c.size());
  if (workers == 1) {
    run_range(c, rows, cfg, 0, cfg.runs, total);
  } else {
    std::vector<Tally> parts(workers, Tally(c.size()));
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (cfg.runs + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t first = std::min(cfg.runs, w * chunk);
      const std::uint64_t last = std::min(cfg.runs, first + chunk);
      pool.emplace_back([&, w, first, last] { run_range(c, rows, cfg, first, last, parts[w]); });
    }
    for (auto& t : pool) t.join();
    for (const auto& part : parts) total.merge(part);
  }

  SimulationResult out;
  out.path_length_histogram = std::move(total.histogram);
  out.visit_counts = std::move(total.visits);
  out.visit_square_sums = std::move(total.squares);
  for (auto a : c.absorbing_states()) out.absorbed_per_goal.push_back(total.absorbed[a]);
  out.truncated = total.truncated;
  out.runs = cfg.runs;
  out.seed = cfg.seed;
  out.generator = kGeneratorName;
  return out;
}

std::uint64_t day_seed(std::uint64_t seed, long day) {
  // splitmix64 finalizer over the pair.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(day) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<DaySimulation> simulate_trend(const ForecastSeries& series,
                                          const SimulationConfig& cfg, std::span<const long> days,
                                          SeedPolicy policy) {
  std::vector<DaySimulation> out;
  for (long d : days) {
    if (d < 0 || d > series.horizon) {
      throw InputError("simulation day " + std::to_string(d) + " outside forecast horizon 0.." +
                       std::to_string(series.horizon));
    }
  }
  for (long d : days) {
    SimulationConfig day_cfg = cfg;
    day_cfg.day = d;
    day_cfg.seed = policy == SeedPolicy::PerDay ? day_seed(cfg.seed, d) : cfg.seed;
    out.push_back({d, simulate(series.records[static_cast<std::size_t>(d)].chain, day_cfg)});
  }
  return out;
}

}  // namespace secmarkov
