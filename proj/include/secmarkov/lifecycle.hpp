#pragma once

#include "secmarkov/date.hpp"
#include "secmarkov/vulnerability.hpp"

namespace secmarkov::lifecycle {

/// Exploit-availability CDF F(t) = 1 - (k/t)^a, t in days since disclosure.
struct ParetoParams {
  double a = 0.26;
  double k = 0.00161;

  /// Throws InputError unless a > 0 and k > 0.
  void check() const;
};

/// Whether temporal weights come from vulnerability age or from the static
/// CVSS exploit-maturity label. One mode per analysis.
enum class WeightMode { Frei, Static };

WeightMode parse_mode(std::string_view text);
std::string to_string(WeightMode mode);

struct AgedVulnerability {
  const Vulnerability* vulnerability = nullptr;
  long age_days = 1;
};

/// max(1, eval - disclosure). Throws InputError when eval precedes disclosure.
long age_in_days(Date disclosure, Date eval);

AgedVulnerability age(const Vulnerability& v, Date eval);

/// Throws InputError for t < k, where the distribution has no support.
double exploit_availability(double t_days, const ParetoParams& params = {});

/// F(age) in Frei mode, the maturity table weight in Static mode.
double temporal_weight(const Vulnerability& v, Date eval, WeightMode mode,
                       const ParetoParams& params = {});

}  // namespace secmarkov::lifecycle
