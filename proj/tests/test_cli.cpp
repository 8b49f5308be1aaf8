#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "oracles.hpp"
#include "secmarkov/cli.hpp"

namespace fs = std::filesystem;
using secmarkov::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("secmarkov-test-" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t line_count(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("score prints display and full-precision values") {
  const auto r = call({"score", "AV:N/AC:L/Au:N/C:P/I:N/A:N", "--maturity", "unproven"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "exploitability            10.0"));
  CHECK(contains(r.out, "temporal_exploitability   8.5"));

  const auto low = call({"score", "AV:L/AC:H/Au:M/C:N/I:N/A:N"});
  CHECK(low.code == 0);
  CHECK(contains(low.out, "exploitability            1.2"));
  CHECK(contains(low.out, "impact                    0.0"));

  const auto bad = call({"score", "AV:N/AC:L"});
  CHECK(bad.code == 2);
  CHECK(contains(bad.err, "missing metrics"));

  const auto frei = call({"score", "--graph", oracle::data("table1.json"), "--cve", "CVE-2014-0098",
                          "--host", "M1", "--mode", "frei", "--date", "2014-03-19"});
  CHECK(frei.code == 0);
  CHECK(contains(frei.out, "exploitability            10.0"));
  CHECK(contains(frei.out, "temporal_exploitability   8.1"));
  const auto ambiguous = call({"score", "--graph", oracle::data("table1.json"), "--cve",
                               "CVE-2014-0098", "--date", "2014-03-19"});
  CHECK(ambiguous.code == 2);
  CHECK(contains(ambiguous.err, "--host"));
}

TEST_CASE("validate") {
  const auto ok = call({"validate", "--graph", oracle::data("table1.json")});
  CHECK(ok.code == 0);
  CHECK(contains(ok.out, "ok: 10 states, 15 edges, 1 goal"));
  const auto bad = call({"validate", "--graph", oracle::data("invalid.json")});
  CHECK(bad.code == 3);
  CHECK(contains(bad.err, "expected exactly one start state"));
  CHECK(contains(bad.err, "cannot reach any goal"));
  CHECK(call({"validate", "--graph", oracle::data("missing.json")}).code == 2);
  CHECK(call({"frobnicate"}).code == 2);
}

TEST_CASE("analyze the minimal graph") {
  TempDir dir;
  const auto r = call({"analyze", "--graph", oracle::data("minimal.json"), "--date", "2014-03-19",
                       "--out", dir.path.string()});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(slurp(dir / "analysis.json"));
  CHECK(doc["epl"].get<double>() == 2.0);
  CHECK(doc["pp"]["goal"].get<double>() == 1.0);
  CHECK(fs::exists(dir / "metrics.csv"));
  CHECK(fs::exists(dir / "transition_matrix.csv"));
  CHECK(slurp(dir / "transition_matrix.csv") == "state,start,v1,goal\nstart,0,1,0\nv1,0,0,1\ngoal,0,0,1\n");
}

TEST_CASE("analyze the inventory fixture against the reference computation") {
  TempDir dir;
  const auto r = call({"analyze", "--graph", oracle::data("table1.json"), "--date", "2014-03-19",
                       "--out", dir.path.string(), "--format", "json"});
  REQUIRE(r.code == 0);
  CHECK_FALSE(fs::exists(dir / "metrics.csv"));
  const auto doc = nlohmann::json::parse(slurp(dir / "analysis.json"));
  const auto ref = nlohmann::json::parse(slurp(oracle::golden("table1_2014-03-19.json")));
  CHECK(std::abs(doc["epl"].get<double>() - ref["epl"].get<double>()) < 1e-9);
  CHECK(std::abs(doc["ei"].get<double>() - ref["ei"].get<double>()) < 1e-9);
  CHECK(doc["config"]["ei_steps"] == ref["ei_steps"]);
  for (const auto& [id, v] : ref["pp"].items()) {
    CHECK(std::abs(doc["pp"][id].get<double>() - v.get<double>()) < 1e-9);
  }
  for (const auto& [id, v] : ref["expected_visits"].items()) {
    CHECK(std::abs(doc["expected_visits"][id].get<double>() - v.get<double>()) < 1e-9);
  }
  for (const auto& [id, v] : ref["expected_steps"].items()) {
    CHECK(std::abs(doc["expected_steps"][id].get<double>() - v.get<double>()) < 1e-9);
  }
  const auto& rows = doc["transition_matrix"]["rows"];
  for (std::size_t i = 0; i < ref["P"].size(); ++i) {
    for (std::size_t j = 0; j < ref["P"][i].size(); ++j) {
      CHECK(std::abs(rows[i][j].get<double>() - ref["P"][i][j].get<double>()) < 1e-9);
    }
  }

  const auto two = call({"analyze", "--graph", oracle::data("two_goals.json"), "--date",
                         "2014-03-19", "--out", dir.path.string()});
  REQUIRE(two.code == 0);
  const auto d2 = nlohmann::json::parse(slurp(dir / "analysis.json"));
  const auto r2 = nlohmann::json::parse(slurp(oracle::golden("two_goals_2014-03-19.json")));
  CHECK(std::abs(d2["epl"].get<double>() - r2["epl"].get<double>()) < 1e-9);
  for (const auto& [id, v] : r2["pp"].items()) {
    CHECK(std::abs(d2["pp"][id].get<double>() - v.get<double>()) < 1e-9);
  }
}

TEST_CASE("analyze error codes") {
  CHECK(call({"analyze", "--graph", oracle::data("invalid.json"), "--date", "2014-03-19"}).code == 3);
  CHECK(call({"analyze", "--graph", oracle::data("table1.json"), "--date", "2014-01-01"}).code == 2);
  CHECK(call({"analyze", "--graph", oracle::data("table1.json"), "--date", "19/03/2014"}).code == 2);
  CHECK(call({"analyze", "--graph", oracle::data("table1.json"), "--date", "2014-03-19",
              "--variant", "product"})
            .code == 2);
  CHECK(call({"analyze", "--graph", oracle::data("table1.json"), "--date", "2014-03-19",
              "--format", "pdf"})
            .code == 2);
}

TEST_CASE("forecast writes one row per day and reports crossings") {
  TempDir dir;
  const auto r = call({"forecast", "--graph", oracle::data("table1.json"), "--date", "2014-03-19",
                       "--horizon", "150", "--threshold", "epl:below:4.86", "--threshold",
                       "epl:below:6.86", "--out", dir.path.string()});
  REQUIRE(r.code == 0);
  CHECK(line_count(slurp(dir / "forecast.csv")) == 152);  // header plus days 0..150
  CHECK(contains(r.out, "threshold epl below 4.86: none within 150 days"));
  CHECK(contains(r.out, "threshold epl below 6.86: crossed on day"));
  CHECK(fs::exists(dir / "epl.svg"));
  CHECK(fs::exists(dir / "ei.svg"));
  const auto doc = nlohmann::json::parse(slurp(dir / "forecast.json"));
  CHECK(doc["thresholds"].size() == 2);
  CHECK(doc["thresholds"][0]["crossing_day"].is_null());
  CHECK(doc["thresholds"][1]["crossing_day"].is_number_integer());

  const auto flat = call({"forecast", "--graph", oracle::data("uniform_dates.json"), "--date",
                          "2014-03-19", "--horizon", "300", "--threshold", "epl:below:1",
                          "--threshold", "epl:above:100", "--format", "csv", "--out",
                          dir.path.string()});
  REQUIRE(flat.code == 0);
  CHECK_FALSE(contains(flat.out, "crossed"));

  CHECK(call({"forecast", "--graph", oracle::data("table1.json"), "--horizon", "0"}).code == 2);
  CHECK(call({"forecast", "--graph", oracle::data("table1.json"), "--date", "2014-03-19",
              "--horizon", "5", "--threshold", "epl:sideways:3"})
            .code == 2);
}

TEST_CASE("product forecast") {
  TempDir dir;
  const auto r = call({"forecast", "--graph", oracle::data("two_branch.json"), "--date",
                       "2014-03-19", "--horizon", "10", "--variant", "product", "--out",
                       dir.path.string()});
  REQUIRE(r.code == 0);
  const auto csv = slurp(dir / "forecast.csv");
  CHECK(contains(csv.substr(0, csv.find('\n')), "x:goal"));
  CHECK_FALSE(contains(csv.substr(0, csv.find('\n')), "epl"));
}

TEST_CASE("simulate is reproducible") {
  TempDir a, b;
  const std::vector<std::string> base = {"simulate", "--graph", oracle::data("table1.json"),
                                         "--date", "2014-03-19", "--runs", "2000", "--seed", "42"};
  auto args_a = base;
  args_a.insert(args_a.end(), {"--out", a.path.string()});
  auto args_b = base;
  args_b.insert(args_b.end(), {"--out", b.path.string(), "--threads", "3"});
  REQUIRE(call(args_a).code == 0);
  REQUIRE(call(args_b).code == 0);
  CHECK(slurp(a / "path_lengths.csv") == slurp(b / "path_lengths.csv"));
  CHECK(slurp(a / "visits.csv") == slurp(b / "visits.csv"));
  const auto doc = nlohmann::json::parse(slurp(a / "simulation.json"));
  CHECK(doc.dump().find("mt19937_64") != std::string::npos);

  TempDir t;
  const auto trend = call({"simulate", "--graph", oracle::data("table1.json"), "--date",
                           "2014-03-19", "--runs", "500", "--days", "0,100,200,300", "--out",
                           t.path.string()});
  REQUIRE(trend.code == 0);
  const auto lengths = slurp(t / "path_lengths.csv");
  CHECK(lengths.rfind("day,length,frequency\n", 0) == 0);
  for (const char* d : {"\n0,", "\n100,", "\n200,", "\n300,"}) CHECK(contains(lengths, d));

  CHECK(call({"simulate", "--graph", oracle::data("table1.json"), "--runs", "0"}).code == 2);
}

TEST_CASE("argument helpers") {
  using namespace secmarkov::cli;
  const auto t = parse_threshold("pp:root@M4:above:0.5");
  CHECK(t.metric == "pp:root@M4");
  CHECK(t.direction == secmarkov::Direction::Above);
  CHECK(t.value == 0.5);
  CHECK(parse_days("0,100,200") == std::vector<long>{0, 100, 200});
  CHECK_THROWS(parse_days("0,,3"));
  CHECK_THROWS(parse_threshold("epl:below"));
  CHECK(parse_formats("csv,svg") == std::set<std::string>{"csv", "svg"});
  CHECK_THROWS(parse_formats(""));
}
