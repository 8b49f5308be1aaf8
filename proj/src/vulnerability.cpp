#include "secmarkov/vulnerability.hpp"

#include <cmath>
#include <cstdio>

#include "secmarkov/error.hpp"

namespace secmarkov {

double Vulnerability::exploitability() const {
  if (base_exploitability) return *base_exploitability;
  if (base_vector) return cvss::exploitability_subscore(*base_vector);
  throw InputError("vulnerability " + cve_id + " on " + host +
                   " has neither a CVSS vector nor an exploitability subscore");
}

std::optional<double> Vulnerability::impact_score() const {
  if (impact) return impact;
  if (base_vector) return cvss::impact_score(*base_vector);
  return std::nullopt;
}

std::vector<std::string> check_vulnerability(const Vulnerability& v) {
  std::vector<std::string> problems;
  const std::string who = v.cve_id + " on " + v.host;
  auto fmt = [](double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return std::string(buf);
  };

  if (!v.base_vector && !v.base_exploitability) {
    problems.push_back(who + ": needs a CVSS vector or an exploitability subscore");
  }
  if (v.base_exploitability) {
    const double e = *v.base_exploitability;
    if (!(e > 0.0 && e <= 10.01)) {
      problems.push_back(who + ": exploitability " + fmt(e) + " outside (0, 10]");
    }
    if (v.base_vector) {
      const double derived = cvss::exploitability_subscore(*v.base_vector);
      if (std::abs(derived - e) > Vulnerability::kSubscoreSlack) {
        problems.push_back(who + ": stated exploitability " + fmt(e) +
                           " disagrees with vector-derived " + fmt(derived));
      }
    }
  }
  if (v.impact) {
    const double i = *v.impact;
    if (!(i >= 0.0 && i <= cvss::ScoreConstants::impact_factor)) {
      problems.push_back(who + ": impact " + fmt(i) + " outside [0, 10.41]");
    }
    if (v.base_vector) {
      const double derived = cvss::impact_score(*v.base_vector);
      if (std::abs(derived - i) > Vulnerability::kSubscoreSlack) {
        problems.push_back(who + ": stated impact " + fmt(i) + " disagrees with vector-derived " +
                           fmt(derived));
      }
    }
  }
  return problems;
}

}  // namespace secmarkov
