#include "secmarkov/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "secmarkov/cvss.hpp"
#include "secmarkov/error.hpp"
#include "secmarkov/graph.hpp"
#include "secmarkov/report.hpp"
#include "secmarkov/reward.hpp"
#include "secmarkov/sim.hpp"

namespace secmarkov::cli {

using nlohmann::json;
using report::format_number;
using report::rounded;

Threshold parse_threshold(std::string_view text) {
  const auto last = text.rfind(':');
  const auto mid = last == std::string_view::npos || last == 0 ? std::string_view::npos
                                                                : text.rfind(':', last - 1);
  if (mid == std::string_view::npos) {
    throw InputError("threshold '" + std::string(text) + "' must be METRIC:OP:VALUE");
  }
  Threshold t;
  t.metric = std::string(text.substr(0, mid));
  t.direction = parse_direction(text.substr(mid + 1, last - mid - 1));
  const std::string value(text.substr(last + 1));
  std::size_t used = 0;
  try {
    t.value = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size() || t.metric.empty()) {
    throw InputError("threshold '" + std::string(text) + "' must be METRIC:OP:VALUE");
  }
  return t;
}

std::vector<long> parse_days(std::string_view text) {
  std::vector<long> days;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto item = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
    long d = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), d);
    if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size() || d < 0) {
      throw InputError("invalid day list '" + std::string(text) + "'");
    }
    days.push_back(d);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return days;
}

std::set<std::string> parse_formats(std::string_view text) {
  std::set<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const std::string item(text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos));
    if (item != "csv" && item != "json" && item != "svg") {
      throw InputError("unknown output format '" + item + "', expected csv, json or svg");
    }
    out.insert(item);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

namespace {

struct RawOptions {
  std::string graph;
  std::string date;
  std::string mode = "frei";
  std::string variant = "snapshot";
  double pareto_a = 0.26;
  double pareto_k = 0.00161;
  long horizon = -1;
  long steps = -1;
  std::vector<std::string> thresholds;
  long long runs = 2000;
  std::uint64_t seed = 0;
  std::uint64_t max_steps = 1'000'000;
  std::string days;
  bool common_seed = false;
  unsigned threads = 1;
  std::string out;
  std::string format;

  // score
  std::string vector;
  std::string maturity;
  std::string cve;
  std::string host;
  std::string disclosure;
};

AnalysisConfig to_config(const RawOptions& raw, std::string_view default_formats) {
  AnalysisConfig cfg;
  cfg.graph_path = raw.graph;
  if (!raw.date.empty()) cfg.eval_date = Date::parse(raw.date);
  cfg.mode = lifecycle::parse_mode(raw.mode);
  cfg.variant = parse_variant(raw.variant);
  cfg.params = {raw.pareto_a, raw.pareto_k};
  cfg.params.check();
  cfg.horizon = raw.horizon;
  if (raw.steps >= 0) cfg.ei_steps = static_cast<std::size_t>(raw.steps);
  for (const auto& t : raw.thresholds) cfg.thresholds.push_back(parse_threshold(t));
  if (raw.runs < 1) throw InputError("--runs must be at least 1");
  cfg.runs = static_cast<std::uint64_t>(raw.runs);
  cfg.seed = raw.seed;
  cfg.max_steps = raw.max_steps;
  if (!raw.days.empty()) cfg.days = parse_days(raw.days);
  cfg.common_seed = raw.common_seed;
  cfg.threads = std::max(1u, raw.threads);
  if (!raw.out.empty()) cfg.out_dir = raw.out;
  cfg.formats = parse_formats(raw.format.empty() ? default_formats : raw.format);
  return cfg;
}

json config_json(const AnalysisConfig& cfg) {
  return {{"graph", cfg.graph_path.string()},
          {"date", cfg.eval_date.to_string()},
          {"mode", lifecycle::to_string(cfg.mode)},
          {"variant", to_string(cfg.variant)},
          {"pareto", {{"a", cfg.params.a}, {"k", cfg.params.k}}}};
}

std::string config_line(const AnalysisConfig& cfg) {
  std::ostringstream s;
  s << "date " << cfg.eval_date.to_string() << ", mode " << lifecycle::to_string(cfg.mode)
    << ", variant " << to_string(cfg.variant)
    << (cfg.variant == Variant::Snapshot ? " (quasi-static)" : "") << ", pareto a=" << cfg.params.a
    << " k=" << cfg.params.k;
  return s.str();
}

class OutputDir {
 public:
  explicit OutputDir(const AnalysisConfig& cfg) : cfg_(cfg) {
    if (cfg.out_dir) {
      std::error_code ec;
      std::filesystem::create_directories(*cfg.out_dir, ec);
      if (ec) throw InputError("cannot create output directory '" + cfg.out_dir->string() + "'");
    }
  }

  bool wants(const std::string& format) const {
    return cfg_.out_dir.has_value() && cfg_.formats.contains(format);
  }

  void write(const std::string& name, const std::string& content) {
    const auto path = *cfg_.out_dir / name;
    std::ofstream f(path, std::ios::binary);
    f << content;
    if (!f) throw InputError("cannot write '" + path.string() + "'");
    written_.push_back(path.string());
  }

  const std::vector<std::string>& written() const { return written_; }

 private:
  const AnalysisConfig& cfg_;
  std::vector<std::string> written_;
};

std::string file_safe(const std::string& id) {
  std::string out = id;
  for (auto& c : out) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
  }
  return out;
}

std::vector<std::string> select(const std::vector<std::string>& ids,
                                const std::vector<std::size_t>& idx) {
  std::vector<std::string> out;
  for (auto i : idx) out.push_back(ids[i]);
  return out;
}

ForecastOptions forecast_options(const AnalysisConfig& cfg, Variant variant) {
  ForecastOptions o;
  o.mode = cfg.mode;
  o.variant = variant;
  o.params = cfg.params;
  o.ei_steps = cfg.ei_steps;
  o.threads = cfg.threads;
  return o;
}

// score ---------------------------------------------------------------------

int cmd_score(const RawOptions& raw, std::ostream& out) {
  Vulnerability v;
  if (!raw.cve.empty()) {
    if (raw.graph.empty()) throw InputError("--cve needs --graph to look the record up");
    const AttackGraph g = read_graph(raw.graph);
    const Vulnerability* found = nullptr;
    for (const auto& rec : g.vulnerabilities()) {
      if (rec.cve_id == raw.cve && (raw.host.empty() || rec.host == raw.host)) {
        if (found) throw InputError(raw.cve + " exists on several hosts; pass --host");
        found = &rec;
      }
    }
    if (!found) throw InputError("no vulnerability record " + raw.cve + " in " + raw.graph);
    v = *found;
  } else if (!raw.vector.empty()) {
    v.cve_id = "(vector)";
    v.base_vector = cvss::parse_vector(raw.vector);
  } else {
    throw InputError("score needs a CVSS vector or --graph with --cve");
  }
  if (!raw.maturity.empty()) v.exploit_maturity = cvss::parse_maturity(raw.maturity);
  if (!raw.disclosure.empty()) v.disclosure_date = Date::parse(raw.disclosure);

  const auto mode = lifecycle::parse_mode(raw.mode);
  const lifecycle::ParetoParams params{raw.pareto_a, raw.pareto_k};
  const Date eval = raw.date.empty() ? Date::today() : Date::parse(raw.date);

  double weight = 1.0;
  std::string weight_source;
  if (mode == lifecycle::WeightMode::Frei) {
    weight = lifecycle::temporal_weight(v, eval, mode, params);
    weight_source = "frei, age " + std::to_string(lifecycle::age(v, eval).age_days) + " days on " +
                    eval.to_string();
  } else {
    if (!v.exploit_maturity) v.exploit_maturity = cvss::ExploitMaturity::NotDefined;
    weight = lifecycle::temporal_weight(v, eval, mode, params);
    weight_source = "static, maturity " + cvss::to_string(*v.exploit_maturity);
  }

  const double e = v.exploitability();
  const double et = cvss::temporal_exploitability(e, weight);
  const auto impact = v.impact_score();

  auto line = [&](const char* label, double x) {
    out << label << std::string(26 - std::char_traits<char>::length(label), ' ')
        << cvss::display_score(x) << "  (" << format_number(x) << ")\n";
  };
  if (v.base_vector) out << "vector                    " << cvss::to_string(*v.base_vector) << '\n';
  if (!raw.cve.empty()) out << "cve                       " << v.cve_id << " on " << v.host << '\n';
  line("exploitability", e);
  if (impact) line("impact", *impact);
  out << "temporal_weight           " << format_number(weight) << "  (" << weight_source << ")\n";
  line("temporal_exploitability", et);
  return kOk;
}

// validate --------------------------------------------------------------------

int cmd_validate(const RawOptions& raw, std::ostream& out) {
  const AttackGraph g = read_graph(raw.graph);
  const auto violations = validate(g);
  if (violations.empty()) {
    out << "ok: " << g.size() << " states, " << g.edges().size() << " edges, "
        << g.goals().size() << " goal(s)\n";
    return kOk;
  }
  std::vector<std::string> messages;
  for (const auto& v : violations) messages.push_back(v.message);
  throw ValidationError(std::move(messages));
}

// analyze ---------------------------------------------------------------------

int cmd_analyze(const AnalysisConfig& cfg, std::ostream& out) {
  if (cfg.variant != Variant::Snapshot) {
    throw InputError("analyze reports single-day snapshot metrics; use forecast --variant product");
  }
  const AttackGraph g = load_graph(cfg.graph_path);
  const auto scores = temporal_scores(g, cfg.eval_date, cfg.mode, cfg.params);
  const CanonicalChain chain = transition_matrix(g, scores);
  const ChainMetrics m = chain_metrics(chain);
  const RewardVector rewards = reward_vector_from_graph(g);
  const std::size_t steps = cfg.ei_steps.value_or(static_cast<std::size_t>(std::ceil(m.epl)));
  const double ei = expected_impact(
      chain, rewards, InitialDistribution::unit(chain.size(), chain.start()), steps);

  const auto& ids = chain.state_ids();
  const auto transient = select(ids, chain.transient_states());
  const auto goals = select(ids, chain.absorbing_states());

  json doc;
  doc["config"] = config_json(cfg);
  doc["config"]["ei_steps"] = steps;
  doc["epl"] = rounded(m.epl);
  doc["ei"] = rounded(ei);
  json pp = json::object(), visits = json::object(), tsteps = json::object();
  for (std::size_t k = 0; k < goals.size(); ++k) pp[goals[k]] = rounded(m.pp(static_cast<Eigen::Index>(k)));
  for (std::size_t k = 0; k < transient.size(); ++k) {
    visits[transient[k]] = rounded(m.visits(static_cast<Eigen::Index>(k)));
    tsteps[transient[k]] = rounded(m.steps(static_cast<Eigen::Index>(k)));
  }
  doc["pp"] = pp;
  doc["expected_visits"] = visits;
  doc["expected_steps"] = tsteps;
  json rows = json::array();
  for (Eigen::Index i = 0; i < chain.P().rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < chain.P().cols(); ++j) row.push_back(rounded(chain.P()(i, j)));
    rows.push_back(row);
  }
  doc["transition_matrix"] = {{"states", ids}, {"rows", rows}};
  doc["fundamental_matrix_residual"] = m.fundamental.residual;

  OutputDir dir(cfg);
  if (dir.wants("json")) dir.write("analysis.json", doc.dump(2) + "\n");
  if (dir.wants("csv")) {
    std::ostringstream metrics;
    metrics << "metric,value\n";
    metrics << "epl," << format_number(m.epl) << "\n";
    metrics << "ei," << format_number(ei) << "\n";
    for (std::size_t k = 0; k < goals.size(); ++k) {
      metrics << report::csv_field("pp:" + goals[k]) << ','
              << format_number(m.pp(static_cast<Eigen::Index>(k))) << '\n';
    }
    for (std::size_t k = 0; k < transient.size(); ++k) {
      metrics << report::csv_field("visits:" + transient[k]) << ','
              << format_number(m.visits(static_cast<Eigen::Index>(k))) << '\n';
    }
    dir.write("metrics.csv", metrics.str());
    std::ostringstream p, n, b;
    report::write_matrix_csv(p, ids, ids, chain.P());
    report::write_matrix_csv(n, transient, transient, m.fundamental.N);
    report::write_matrix_csv(b, transient, goals, m.absorption);
    dir.write("transition_matrix.csv", p.str());
    dir.write("fundamental_matrix.csv", n.str());
    dir.write("absorption_probabilities.csv", b.str());
  }

  out << "analysis of " << cfg.graph_path.string() << (g.name.empty() ? "" : " (" + g.name + ")")
      << "\n" << config_line(cfg) << "\n\n";
  out << "EPL (expected steps from start)  " << format_number(m.epl) << "\n";
  for (std::size_t k = 0; k < goals.size(); ++k) {
    out << "PP  " << goals[k] << "  " << format_number(m.pp(static_cast<Eigen::Index>(k))) << "\n";
  }
  out << "EI  (t = " << steps << ")  " << format_number(ei) << "\n\nexpected visits from start\n";
  for (std::size_t k = 0; k < transient.size(); ++k) {
    out << "  " << transient[k] << "  " << format_number(m.visits(static_cast<Eigen::Index>(k)))
        << "\n";
  }
  out << "\ntransition matrix\n";
  std::ostringstream p;
  report::write_matrix_csv(p, ids, ids, chain.P());
  out << p.str();
  for (const auto& f : dir.written()) out << "wrote " << f << "\n";
  return kOk;
}

// forecast --------------------------------------------------------------------

int cmd_forecast(const AnalysisConfig& cfg, std::ostream& out) {
  if (cfg.horizon <= 0) throw InputError("forecast needs --horizon N with N > 0");
  const AttackGraph g = load_graph(cfg.graph_path);
  const ForecastSeries s =
      daily_series(g, cfg.eval_date, cfg.horizon, forecast_options(cfg, cfg.variant));

  json crossings = json::array();
  std::ostringstream summary;
  for (const auto& t : cfg.thresholds) {
    const auto day = threshold_crossing(s, t.metric, t.value, t.direction);
    json c = {{"metric", t.metric}, {"direction", to_string(t.direction)}, {"value", t.value}};
    c["crossing_day"] = day ? json(*day) : json(nullptr);
    c["crossing_date"] = day ? json(s.start_date.plus_days(*day).to_string()) : json(nullptr);
    crossings.push_back(c);
    summary << "threshold " << t.metric << ' ' << to_string(t.direction) << ' '
            << format_number(t.value) << ": ";
    if (day) {
      summary << "crossed on day " << *day << " (" << s.start_date.plus_days(*day).to_string()
              << ")\n";
    } else {
      summary << "none within " << s.horizon << " days\n";
    }
  }

  OutputDir dir(cfg);
  if (dir.wants("csv")) {
    std::ostringstream csv;
    report::write_series_csv(csv, s);
    dir.write("forecast.csv", csv.str());
  }
  if (dir.wants("json")) {
    json doc = report::series_json(s);
    doc["config"] = config_json(cfg);
    doc["thresholds"] = crossings;
    dir.write("forecast.json", doc.dump(2) + "\n");
  }
  if (dir.wants("svg")) {
    std::vector<double> xs;
    for (const auto& r : s.records) xs.push_back(static_cast<double>(r.day));
    std::vector<std::pair<std::string, std::string>> charts;  // metric, label
    if (s.options.variant == Variant::Snapshot) {
      charts.emplace_back("epl", "expected path length (steps)");
      charts.emplace_back("ei", "expected impact");
      for (const auto& goal : s.goal_ids) charts.emplace_back("pp:" + goal, "absorption probability");
    } else {
      for (const auto& goal : s.goal_ids) charts.emplace_back("x:" + goal, "probability mass");
    }
    for (const auto& [metric, label] : charts) {
      report::LineChart chart;
      chart.title = metric + " from " + s.start_date.to_string();
      chart.y_label = label;
      chart.xs = xs;
      chart.ys = metric_series(s, metric);
      for (const auto& t : cfg.thresholds) {
        if (t.metric == metric || (metric.rfind("pp:", 0) == 0 && t.metric == "pp")) {
          chart.threshold = t.value;
        }
      }
      dir.write(file_safe(metric) + ".svg", report::render_svg(chart));
    }
  }

  out << "forecast of " << cfg.graph_path.string() << " over " << s.horizon << " days ("
      << s.records.size() << " records)\n" << config_line(cfg) << "\n";
  if (s.options.variant == Variant::Snapshot) {
    const auto epl = metric_series(s, "epl");
    const auto ei = metric_series(s, "ei");
    out << "EI step horizon " << s.ei_steps << "\n";
    out << "EPL day 0 " << format_number(epl.front()) << ", day " << s.horizon << ' '
        << format_number(epl.back()) << ", min " << format_number(*std::min_element(epl.begin(), epl.end()))
        << ", max " << format_number(*std::max_element(epl.begin(), epl.end())) << "\n";
    out << "EI  day 0 " << format_number(ei.front()) << ", day " << s.horizon << ' '
        << format_number(ei.back()) << "\n";
  }
  out << summary.str();
  for (const auto& f : dir.written()) out << "wrote " << f << "\n";
  return kOk;
}

// simulate --------------------------------------------------------------------

int cmd_simulate(const AnalysisConfig& cfg, std::ostream& out) {
  const AttackGraph g = load_graph(cfg.graph_path);
  SimulationConfig sim;
  sim.runs = cfg.runs;
  sim.seed = cfg.seed;
  sim.max_steps = cfg.max_steps;
  sim.threads = cfg.threads;
  sim.check();

  const bool multi = !cfg.days.empty();
  const std::vector<long> days = multi ? cfg.days : std::vector<long>{0};
  const long horizon = *std::max_element(days.begin(), days.end());
  const ForecastSeries s =
      daily_series(g, cfg.eval_date, horizon, forecast_options(cfg, Variant::Snapshot));
  const auto sims = simulate_trend(s, sim, days, cfg.common_seed ? SeedPolicy::Common
                                                                 : (multi ? SeedPolicy::PerDay
                                                                          : SeedPolicy::Common));

  json doc;
  doc["config"] = config_json(cfg);
  doc["config"]["runs"] = cfg.runs;
  doc["config"]["seed"] = cfg.seed;
  doc["config"]["max_steps"] = cfg.max_steps;
  doc["config"]["seed_policy"] = cfg.common_seed || !multi ? "common" : "per-day";
  doc["generator"] = kGeneratorName;
  json jdays = json::array();

  out << "simulation of " << cfg.graph_path.string() << ", " << cfg.runs << " runs, seed "
      << cfg.seed << " (" << kGeneratorName << ")\n" << config_line(cfg) << "\n";
  for (const auto& ds : sims) {
    const auto& r = ds.result;
    const auto& rec = s.records[static_cast<std::size_t>(ds.day)];
    const auto& metrics = *rec.metrics;
    json jd;
    jd["day"] = ds.day;
    jd["date"] = rec.date.to_string();
    jd["seed"] = r.seed;
    jd["truncated"] = r.truncated;
    jd["mean_path_length"] = rounded(r.mean_path_length());
    jd["path_length_stddev"] = rounded(r.path_length_stddev());
    jd["analytic_epl"] = rounded(metrics.epl);
    json hist = json::object();
    for (const auto& [len, freq] : r.path_length_histogram) hist[std::to_string(len)] = freq;
    jd["path_length_histogram"] = hist;
    json visits = json::object();
    for (std::size_t i = 0; i < s.state_ids.size(); ++i) visits[s.state_ids[i]] = r.visit_counts[i];
    jd["visits"] = visits;
    json goals = json::array();
    for (std::size_t k = 0; k < s.goal_ids.size(); ++k) {
      goals.push_back({{"goal", s.goal_ids[k]},
                       {"frequency", rounded(static_cast<double>(r.absorbed_per_goal[k]) /
                                             static_cast<double>(r.runs))},
                       {"analytic", rounded(metrics.pp[k])}});
    }
    jd["goals"] = goals;
    jdays.push_back(jd);

    std::uint64_t mode_len = 0, mode_freq = 0;
    for (const auto& [len, freq] : r.path_length_histogram) {
      if (freq > mode_freq) mode_len = len, mode_freq = freq;
    }
    out << "day " << ds.day << " (" << rec.date.to_string() << "): mean path length "
        << format_number(r.mean_path_length()) << " vs EPL " << format_number(metrics.epl)
        << ", modal length " << mode_len << ", truncated " << r.truncated << "\n";
    for (std::size_t k = 0; k < s.goal_ids.size(); ++k) {
      out << "  " << s.goal_ids[k] << ": frequency "
          << format_number(static_cast<double>(r.absorbed_per_goal[k]) / static_cast<double>(r.runs))
          << " vs PP " << format_number(metrics.pp[k]) << "\n";
    }
  }
  doc["days"] = jdays;

  OutputDir dir(cfg);
  if (dir.wants("csv")) {
    std::ostringstream lengths, visits;
    report::write_path_lengths_csv(lengths, sims, multi);
    report::write_visits_csv(visits, sims, s.state_ids, multi);
    dir.write("path_lengths.csv", lengths.str());
    dir.write("visits.csv", visits.str());
  }
  if (dir.wants("json")) dir.write("simulation.json", doc.dump(2) + "\n");
  for (const auto& f : dir.written()) out << "wrote " << f << "\n";
  return kOk;
}

void add_common(CLI::App* cmd, RawOptions& raw) {
  cmd->add_option("--graph", raw.graph, "attack graph JSON file")->required();
  cmd->add_option("--date", raw.date, "evaluation date YYYY-MM-DD (default: today)");
  cmd->add_option("--mode", raw.mode, "temporal weights: frei|static")->capture_default_str();
  cmd->add_option("--variant", raw.variant, "snapshot|product")->capture_default_str();
  cmd->add_option("--pareto-a", raw.pareto_a, "Pareto exponent a")->capture_default_str();
  cmd->add_option("--pareto-k", raw.pareto_k, "Pareto scale k (days)")->capture_default_str();
  cmd->add_option("--steps", raw.steps, "step horizon t for expected impact (default ceil(EPL))");
  cmd->add_option("--out", raw.out, "output directory");
  cmd->add_option("--format", raw.format, "comma list of csv,json,svg");
  cmd->add_option("--threads", raw.threads, "worker threads (output is unaffected)");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Attack-graph security metrics over a time-varying absorbing Markov chain",
               "secmarkov"};
  app.require_subcommand(1);
  RawOptions raw;

  auto* score = app.add_subcommand("score", "exploitability, temporal exploitability and impact");
  score->add_option("vector", raw.vector, "CVSS v2 base vector, e.g. AV:N/AC:L/Au:N/C:N/I:N/A:N");
  score->add_option("--maturity", raw.maturity, "exploit maturity label");
  score->add_option("--graph", raw.graph, "graph file holding the record");
  score->add_option("--cve", raw.cve, "score this record from --graph");
  score->add_option("--host", raw.host, "disambiguate --cve by host");
  score->add_option("--date", raw.date, "evaluation date for frei mode");
  score->add_option("--disclosure", raw.disclosure, "disclosure date for frei mode");
  score->add_option("--pareto-a", raw.pareto_a, "Pareto exponent a");
  score->add_option("--pareto-k", raw.pareto_k, "Pareto scale k");
  std::string score_mode = "static";
  score->add_option("--mode", score_mode, "frei|static")->capture_default_str();

  auto* validate_cmd = app.add_subcommand("validate", "check attack graph invariants");
  validate_cmd->add_option("--graph", raw.graph, "attack graph JSON file")->required();

  auto* analyze = app.add_subcommand("analyze", "EPL, PP, visits and EI for one day");
  add_common(analyze, raw);

  auto* forecast = app.add_subcommand("forecast", "daily metric series and threshold crossings");
  add_common(forecast, raw);
  forecast->add_option("--horizon", raw.horizon, "days after --date")->required();
  forecast->add_option("--threshold", raw.thresholds, "METRIC:below|above:VALUE (repeatable)");

  auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo attacker trajectories");
  add_common(simulate_cmd, raw);
  simulate_cmd->add_option("--runs", raw.runs, "trajectories per day")->capture_default_str();
  simulate_cmd->add_option("--seed", raw.seed, "64-bit seed")->capture_default_str();
  simulate_cmd->add_option("--max-steps", raw.max_steps, "cap per trajectory")->capture_default_str();
  simulate_cmd->add_option("--days", raw.days, "comma list of forecast days, e.g. 0,100,200,300");
  simulate_cmd->add_flag("--common-seed", raw.common_seed, "reuse --seed on every day");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInputError;
  }

  try {
    if (score->parsed()) {
      raw.mode = score_mode;
      return cmd_score(raw, out);
    }
    if (validate_cmd->parsed()) return cmd_validate(raw, out);
    if (analyze->parsed()) return cmd_analyze(to_config(raw, "csv,json"), out);
    if (forecast->parsed()) return cmd_forecast(to_config(raw, "csv,json,svg"), out);
    if (simulate_cmd->parsed()) return cmd_simulate(to_config(raw, "csv,json"), out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kValidationError;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << "\n";
    return kNumericError;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("secmarkov");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace secmarkov::cli
