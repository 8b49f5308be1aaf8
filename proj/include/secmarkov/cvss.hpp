#pragma once

#include <string>
#include <string_view>

namespace secmarkov::cvss {

// CVSS v2 base metric enumerants. Each maps to a calibrated weight.
enum class AccessVector { Local, Adjacent, Network };
enum class AccessComplexity { High, Medium, Low };
enum class Authentication { Multiple, Single, None };
enum class ImpactLevel { None, Partial, Complete };

double weight(AccessVector v);
double weight(AccessComplexity v);
double weight(Authentication v);
double weight(ImpactLevel v);

struct ScoreConstants {
  static constexpr double severity_factor = 20.0;
  static constexpr double impact_factor = 10.41;
};

struct CvssBaseVector {
  AccessVector access_vector = AccessVector::Network;
  AccessComplexity access_complexity = AccessComplexity::Low;
  Authentication authentication = Authentication::None;
  ImpactLevel conf_impact = ImpactLevel::None;
  ImpactLevel integ_impact = ImpactLevel::None;
  ImpactLevel avail_impact = ImpactLevel::None;

  friend bool operator==(const CvssBaseVector&, const CvssBaseVector&) = default;
};

/// Parses "AV:N/AC:L/Au:N/C:P/I:P/A:P". Tokens may come in any order but each
/// of the six base metrics must appear exactly once. Throws InputError naming
/// the offending token.
CvssBaseVector parse_vector(std::string_view text);

/// Canonical form, metrics in AV/AC/Au/C/I/A order.
std::string to_string(const CvssBaseVector& v);

/// 20 * AV * AC * Au, unrounded.
double exploitability_subscore(const CvssBaseVector& v);
double exploitability_from_weights(double av, double ac, double au);

/// 10.41 * (1 - (1-C)(1-I)(1-A)), unrounded.
double impact_score(const CvssBaseVector& v);
double impact_from_weights(double c, double i, double a);

/// weight * e.
double temporal_exploitability(double base_exploitability, double temporal_weight);

/// One-decimal rendering used at report boundaries ("10.0" for 9.9968).
std::string display_score(double score);

// CVSS v2 temporal exploitability (E) enumerants.
enum class ExploitMaturity { Unproven, ProofOfConcept, Functional, High, NotDefined };

double maturity_weight(ExploitMaturity m);
ExploitMaturity parse_maturity(std::string_view label);
std::string to_string(ExploitMaturity m);

}  // namespace secmarkov::cvss
