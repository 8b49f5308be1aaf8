#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "secmarkov/chain.hpp"
#include "secmarkov/forecast.hpp"
#include "secmarkov/sim.hpp"

namespace secmarkov::report {

/// 12 significant digits, '.' decimal separator. Every emitted number goes
/// through this so CSV and JSON carry the same values.
std::string format_number(double x);
/// The double that format_number(x) denotes.
double rounded(double x);

std::string csv_field(const std::string& text);

/// Header row "state,<col ids...>" then one row per `rows` entry.
void write_matrix_csv(std::ostream& out, const std::vector<std::string>& row_ids,
                      const std::vector<std::string>& col_ids, const Matrix& m);

/// One row per day: day,date,<metric_names(series)...>.
void write_series_csv(std::ostream& out, const ForecastSeries& series);
nlohmann::json series_json(const ForecastSeries& series);

/// length,frequency (or day,length,frequency when more than one day).
void write_path_lengths_csv(std::ostream& out, const std::vector<DaySimulation>& sims,
                            bool with_day);
/// state_id,visits (or day,state_id,visits).
void write_visits_csv(std::ostream& out, const std::vector<DaySimulation>& sims,
                      const std::vector<std::string>& state_ids, bool with_day);

struct LineChart {
  std::string title;
  std::string x_label = "day";
  std::string y_label = "value";
  std::vector<double> xs;
  std::vector<double> ys;
  std::optional<double> threshold;
};

/// Self-contained static SVG line chart.
std::string render_svg(const LineChart& chart);

}  // namespace secmarkov::report
