#include <algorithm>

#include "doctest.h"
#include "secmarkov/error.hpp"
#include "secmarkov/topology.hpp"

using namespace secmarkov;

namespace {

Vulnerability vuln(const char* cve, const char* host, const char* service, const char* vector) {
  Vulnerability v;
  v.cve_id = cve;
  v.host = host;
  v.service = service;
  v.base_vector = cvss::parse_vector(vector);
  v.disclosure_date = Date::parse("2014-01-01");
  return v;
}

std::vector<std::string> successor_ids(const AttackGraph& g, std::size_t i) {
  std::vector<std::string> out;
  for (auto j : g.successors(i)) out.push_back(g.state(j).id);
  return out;
}

Topology four_hosts() {
  Topology t;
  t.hosts = {"M1", "M2", "M3", "M4"};
  t.vulnerabilities = {
      vuln("CVE-2014-0098", "M1", "apache", "AV:N/AC:L/Au:N/C:N/I:N/A:P"),
      vuln("CVE-2014-0063", "M2", "postgresql", "AV:N/AC:M/Au:S/C:P/I:P/A:P"),
      vuln("CVE-2013-3906", "M3", "ms-office", "AV:N/AC:M/Au:N/C:C/I:C/A:C"),
      vuln("CVE-2014-0038", "M3", "linux", "AV:L/AC:M/Au:N/C:C/I:C/A:C"),
      vuln("CVE-2013-4782", "M4", "bmc", "AV:N/AC:L/Au:N/C:C/I:C/A:C"),
  };
  t.reachability = {{"M1", {"M2", "postgresql"}},
                    {"M1", {"M3", "ms-office"}},
                    {"M2", {"M4", "bmc"}},
                    {"M3", {"M4", "bmc"}}};
  t.entry = {"M1", "apache"};
  t.goal_host = "M4";
  return t;
}

}  // namespace

TEST_CASE("inventory-like topology gives a valid graph entered through the web server") {
  const auto g = build_from_topology(four_hosts());
  CHECK(validate(g).empty());
  CHECK(successor_ids(g, *g.start()) == std::vector<std::string>{"apache@M1"});
  CHECK(g.goals().size() == 1);
  CHECK(g.size() == 7);

  auto office = successor_ids(g, *g.find("ms-office@M3"));
  std::sort(office.begin(), office.end());
  CHECK(office == std::vector<std::string>{"bmc@M4", "linux@M3"});
  CHECK(successor_ids(g, *g.find("bmc@M4")) == std::vector<std::string>{"goal"});
  // Local vulnerabilities are never reachable from another host.
  for (auto p : g.predecessors(*g.find("linux@M3"))) CHECK(g.state(p).id == "ms-office@M3");
}

TEST_CASE("states without a route to the goal are pruned") {
  auto t = four_hosts();
  t.hosts.push_back("M5");
  t.vulnerabilities.push_back(vuln("CVE-2012-0001", "M5", "ftp", "AV:N/AC:L/Au:N/C:P/I:P/A:P"));
  t.reachability.push_back({"M1", {"M5", "ftp"}});
  const auto g = build_from_topology(t);
  CHECK_FALSE(g.find("ftp@M5"));
  CHECK(validate(g).empty());
}

TEST_CASE("a single host exposing a root vulnerability gives three states") {
  Topology t;
  t.hosts = {"H"};
  t.vulnerabilities = {vuln("CVE-2013-4782", "H", "bmc", "AV:N/AC:L/Au:N/C:C/I:C/A:C")};
  t.entry = {"H", "bmc"};
  t.goal_host = "H";
  const auto g = build_from_topology(t);
  CHECK(g.size() == 3);
  CHECK(validate(g).empty());
}

TEST_CASE("disconnected goal host raises with the explored frontier") {
  auto t = four_hosts();
  t.reachability = {{"M1", {"M2", "postgresql"}}};
  try {
    build_from_topology(t);
    FAIL("expected UnreachableGoalError");
  } catch (const UnreachableGoalError& e) {
    auto f = e.frontier();
    std::sort(f.begin(), f.end());
    CHECK(std::find(f.begin(), f.end(), "apache@M1") != f.end());
    CHECK(std::find(f.begin(), f.end(), "postgresql@M2") != f.end());
    CHECK(std::find(f.begin(), f.end(), "bmc@M4") == f.end());
  }
}

TEST_CASE("topology input errors") {
  auto t = four_hosts();
  t.entry = {"M1", "nginx"};
  CHECK_THROWS_AS(build_from_topology(t), InputError);
  t = four_hosts();
  t.goal_host = "M9";
  CHECK_THROWS_AS(build_from_topology(t), InputError);
  t = four_hosts();
  t.vulnerabilities[0].host = "M0";
  CHECK_THROWS_AS(build_from_topology(t), InputError);
}
