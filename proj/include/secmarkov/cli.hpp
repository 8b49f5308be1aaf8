#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "secmarkov/forecast.hpp"

namespace secmarkov::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 2,
  kValidationError = 3,
  kNumericError = 4,
};

struct Threshold {
  std::string metric;
  Direction direction = Direction::Below;
  double value = 0.0;
};

/// "METRIC:OP:VALUE", e.g. "epl:below:4.86" or "pp:goal:above:0.5".
Threshold parse_threshold(std::string_view text);
/// "0,100,200".
std::vector<long> parse_days(std::string_view text);
/// Subset of {csv, json, svg}; must be nonempty.
std::set<std::string> parse_formats(std::string_view text);

struct AnalysisConfig {
  std::filesystem::path graph_path;
  Date eval_date = Date::today();
  lifecycle::WeightMode mode = lifecycle::WeightMode::Frei;
  Variant variant = Variant::Snapshot;
  lifecycle::ParetoParams params;
  long horizon = 0;
  std::optional<std::size_t> ei_steps;
  std::vector<Threshold> thresholds;
  std::uint64_t runs = 2000;
  std::uint64_t seed = 0;
  std::uint64_t max_steps = 1'000'000;
  std::vector<long> days;
  bool common_seed = false;
  unsigned threads = 1;
  std::optional<std::filesystem::path> out_dir;
  std::set<std::string> formats;
};

/// Runs one invocation; argv[0] is the program name. Returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace secmarkov::cli
