#pragma once

#include <optional>
#include <string>
#include <vector>

#include "secmarkov/cvss.hpp"
#include "secmarkov/date.hpp"

namespace secmarkov {

/// A vulnerability instance bound to a service on a host.
///
/// Either `base_vector` or `base_exploitability` must be present. Published
/// subscores are sometimes rounded differently from the enumerant product, so
/// a stated subscore wins over the vector-derived one once they agree to
/// within `kSubscoreSlack`.
struct Vulnerability {
  static constexpr double kSubscoreSlack = 0.05;

  std::string cve_id;
  std::string service;
  std::string host;
  std::optional<cvss::CvssBaseVector> base_vector;
  std::optional<double> base_exploitability;
  std::optional<double> impact;
  std::optional<Date> disclosure_date;
  std::optional<cvss::ExploitMaturity> exploit_maturity;

  /// e(v). Throws InputError when neither source is present.
  double exploitability() const;
  std::optional<double> impact_score() const;
};

/// Empty when the record is consistent.
std::vector<std::string> check_vulnerability(const Vulnerability& v);

}  // namespace secmarkov
