#include "secmarkov/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace secmarkov::report {

using nlohmann::json;

std::string format_number(double x) {
  if (x == 0.0) return "0";  // no "-0"
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

double rounded(double x) { return std::stod(format_number(x)); }

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_matrix_csv(std::ostream& out, const std::vector<std::string>& row_ids,
                      const std::vector<std::string>& col_ids, const Matrix& m) {
  out << "state";
  for (const auto& id : col_ids) out << ',' << csv_field(id);
  out << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out << csv_field(row_ids[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << ',' << format_number(m(i, j));
    out << '\n';
  }
}

void write_series_csv(std::ostream& out, const ForecastSeries& series) {
  const auto names = metric_names(series);
  std::vector<std::vector<double>> columns;
  columns.reserve(names.size());
  for (const auto& n : names) columns.push_back(metric_series(series, n));

  out << "day,date";
  for (const auto& n : names) out << ',' << csv_field(n);
  out << '\n';
  for (std::size_t r = 0; r < series.records.size(); ++r) {
    out << series.records[r].day << ',' << series.records[r].date.to_string();
    for (const auto& col : columns) out << ',' << format_number(col[r]);
    out << '\n';
  }
}

json series_json(const ForecastSeries& series) {
  json doc;
  doc["start_date"] = series.start_date.to_string();
  doc["horizon"] = series.horizon;
  doc["variant"] = to_string(series.options.variant);
  doc["mode"] = lifecycle::to_string(series.options.mode);
  doc["pareto"] = {{"a", series.options.params.a}, {"k", series.options.params.k}};
  if (series.options.variant == Variant::Snapshot) {
    doc["ei_steps"] = series.ei_steps;
    doc["convention"] = "quasi-static: each day's chain is treated as homogeneous; "
                        "EPL is expected steps to absorption (larger means more attacker effort)";
  }
  doc["states"] = series.state_ids;
  doc["goals"] = series.goal_ids;

  json records = json::array();
  for (const auto& r : series.records) {
    json rec;
    rec["day"] = r.day;
    rec["date"] = r.date.to_string();
    if (r.metrics) {
      rec["epl"] = rounded(r.metrics->epl);
      rec["ei"] = rounded(r.metrics->ei);
      json pp = json::object();
      for (std::size_t k = 0; k < series.goal_ids.size(); ++k) {
        pp[series.goal_ids[k]] = rounded(r.metrics->pp[k]);
      }
      rec["pp"] = std::move(pp);
      json visits = json::object();
      for (std::size_t k = 0; k < series.transient_ids.size(); ++k) {
        visits[series.transient_ids[k]] = rounded(r.metrics->visits[k]);
      }
      rec["visits"] = std::move(visits);
    }
    if (r.distribution) {
      json x = json::object();
      for (std::size_t k = 0; k < series.state_ids.size(); ++k) {
        x[series.state_ids[k]] = rounded((*r.distribution)[k]);
      }
      rec["distribution"] = std::move(x);
    }
    json transitions = json::array();
    for (const auto& e : series.edges) {
      transitions.push_back({{"from", series.state_ids[e.from]},
                             {"to", series.state_ids[e.to]},
                             {"p", rounded(r.chain.P()(static_cast<Eigen::Index>(e.from),
                                                        static_cast<Eigen::Index>(e.to)))}});
    }
    rec["transitions"] = std::move(transitions);
    records.push_back(std::move(rec));
  }
  doc["records"] = std::move(records);
  return doc;
}

void write_path_lengths_csv(std::ostream& out, const std::vector<DaySimulation>& sims,
                            bool with_day) {
  out << (with_day ? "day,length,frequency\n" : "length,frequency\n");
  for (const auto& s : sims) {
    for (const auto& [len, freq] : s.result.path_length_histogram) {
      if (with_day) out << s.day << ',';
      out << len << ',' << freq << '\n';
    }
  }
}

void write_visits_csv(std::ostream& out, const std::vector<DaySimulation>& sims,
                      const std::vector<std::string>& state_ids, bool with_day) {
  out << (with_day ? "day,state_id,visits\n" : "state_id,visits\n");
  for (const auto& s : sims) {
    for (std::size_t i = 0; i < state_ids.size(); ++i) {
      if (with_day) out << s.day << ',';
      out << csv_field(state_ids[i]) << ',' << s.result.visit_counts[i] << '\n';
    }
  }
}

namespace {

std::string xml_escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::string render_svg(const LineChart& chart) {
  constexpr double width = 720, height = 420;
  constexpr double left = 80, right = 20, top = 40, bottom = 60;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
  if (!chart.xs.empty()) {
    x_min = *std::min_element(chart.xs.begin(), chart.xs.end());
    x_max = *std::max_element(chart.xs.begin(), chart.xs.end());
    y_min = *std::min_element(chart.ys.begin(), chart.ys.end());
    y_max = *std::max_element(chart.ys.begin(), chart.ys.end());
  }
  if (chart.threshold) {
    y_min = std::min(y_min, *chart.threshold);
    y_max = std::max(y_max, *chart.threshold);
  }
  if (x_max == x_min) x_max = x_min + 1;
  if (y_max - y_min < 1e-12 * std::max(1.0, std::abs(y_max))) {
    const double pad = std::max(1e-6, std::abs(y_max) * 0.05);
    y_min -= pad;
    y_max += pad;
  } else {
    const double pad = (y_max - y_min) * 0.05;
    y_min -= pad;
    y_max += pad;
  }
  auto sx = [&](double x) { return left + (x - x_min) / (x_max - x_min) * plot_w; };
  auto sy = [&](double y) { return top + (y_max - y) / (y_max - y_min) * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">"
      << xml_escape(chart.title) << "</text>\n";
  svg << "<g stroke=\"black\" stroke-width=\"1\">\n"
      << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w
      << "\" y2=\"" << top + plot_h << "\"/>\n"
      << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
      << top + plot_h << "\"/>\n</g>\n";

  svg << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  constexpr int ticks = 5;
  for (int t = 0; t <= ticks; ++t) {
    const double xv = x_min + (x_max - x_min) * t / ticks;
    const double yv = y_min + (y_max - y_min) * t / ticks;
    svg << "<line x1=\"" << sx(xv) << "\" y1=\"" << top + plot_h << "\" x2=\"" << sx(xv)
        << "\" y2=\"" << top + plot_h + 5 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << sx(xv) << "\" y=\"" << top + plot_h + 18
        << "\" text-anchor=\"middle\">" << tick_label(xv) << "</text>\n";
    svg << "<line x1=\"" << left - 5 << "\" y1=\"" << sy(yv) << "\" x2=\"" << left << "\" y2=\""
        << sy(yv) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << left - 8 << "\" y=\"" << sy(yv) + 4 << "\" text-anchor=\"end\">"
        << tick_label(yv) << "</text>\n";
  }
  svg << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 16
      << "\" text-anchor=\"middle\" font-size=\"13\">" << xml_escape(chart.x_label) << "</text>\n";
  svg << "<text x=\"18\" y=\"" << top + plot_h / 2 << "\" text-anchor=\"middle\" font-size=\"13\" "
      << "transform=\"rotate(-90 18 " << top + plot_h / 2 << ")\">" << xml_escape(chart.y_label)
      << "</text>\n</g>\n";

  if (chart.threshold) {
    svg << "<line x1=\"" << left << "\" y1=\"" << sy(*chart.threshold) << "\" x2=\""
        << left + plot_w << "\" y2=\"" << sy(*chart.threshold)
        << "\" stroke=\"#c0392b\" stroke-dasharray=\"6 4\"/>\n";
  }
  svg << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < chart.xs.size(); ++i) {
    if (i) svg << ' ';
    svg << sx(chart.xs[i]) << ',' << sy(chart.ys[i]);
  }
  svg << "\"/>\n</svg>\n";
  return svg.str();
}

}  // namespace secmarkov::report
