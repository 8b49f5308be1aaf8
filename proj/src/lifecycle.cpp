#include "secmarkov/lifecycle.hpp"

#include <algorithm>
#include <cmath>

#include "secmarkov/error.hpp"

namespace secmarkov::lifecycle {

void ParetoParams::check() const {
  if (!(a > 0.0) || !(k > 0.0) || !std::isfinite(a) || !std::isfinite(k)) {
    throw InputError("Pareto parameters must satisfy a > 0 and k > 0");
  }
}

WeightMode parse_mode(std::string_view text) {
  if (text == "frei") return WeightMode::Frei;
  if (text == "static") return WeightMode::Static;
  throw InputError("unknown weight mode '" + std::string(text) + "', expected frei|static");
}

std::string to_string(WeightMode mode) { return mode == WeightMode::Frei ? "frei" : "static"; }

long age_in_days(Date disclosure, Date eval) {
  const long diff = eval.days_since(disclosure);
  if (diff < 0) {
    throw InputError("evaluation date " + eval.to_string() + " precedes disclosure date " +
                     disclosure.to_string());
  }
  return std::max(1L, diff);
}

AgedVulnerability age(const Vulnerability& v, Date eval) {
  if (!v.disclosure_date) {
    throw InputError("vulnerability " + v.cve_id + " on " + v.host + " has no disclosure date");
  }
  return {&v, age_in_days(*v.disclosure_date, eval)};
}

double exploit_availability(double t_days, const ParetoParams& params) {
  params.check();
  if (!(t_days >= params.k)) {
    throw InputError("age t below the Pareto scale k; exploit availability is undefined");
  }
  return 1.0 - std::pow(params.k / t_days, params.a);
}

double temporal_weight(const Vulnerability& v, Date eval, WeightMode mode,
                       const ParetoParams& params) {
  if (mode == WeightMode::Frei) {
    return exploit_availability(static_cast<double>(age(v, eval).age_days), params);
  }
  if (!v.exploit_maturity) {
    throw InputError("vulnerability " + v.cve_id + " on " + v.host +
                     " has no exploit maturity label (required in static mode)");
  }
  return cvss::maturity_weight(*v.exploit_maturity);
}

}  // namespace secmarkov::lifecycle
