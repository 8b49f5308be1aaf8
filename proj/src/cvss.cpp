#include "secmarkov/cvss.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <optional>

#include "secmarkov/error.hpp"

namespace secmarkov::cvss {

double weight(AccessVector v) {
  switch (v) {
    case AccessVector::Local: return 0.395;
    case AccessVector::Adjacent: return 0.646;
    case AccessVector::Network: return 1.0;
  }
  return 0.0;
}

double weight(AccessComplexity v) {
  switch (v) {
    case AccessComplexity::High: return 0.35;
    case AccessComplexity::Medium: return 0.61;
    case AccessComplexity::Low: return 0.71;
  }
  return 0.0;
}

double weight(Authentication v) {
  switch (v) {
    case Authentication::Multiple: return 0.45;
    case Authentication::Single: return 0.56;
    case Authentication::None: return 0.704;
  }
  return 0.0;
}

double weight(ImpactLevel v) {
  switch (v) {
    case ImpactLevel::None: return 0.0;
    case ImpactLevel::Partial: return 0.275;
    case ImpactLevel::Complete: return 0.660;
  }
  return 0.0;
}

namespace {

enum Metric : std::size_t { kAV, kAC, kAu, kC, kI, kA, kMetricCount };

constexpr std::array<std::string_view, kMetricCount> kMetricKeys = {"AV", "AC", "Au",
                                                                    "C",  "I",  "A"};

char av_letter(AccessVector v) {
  switch (v) {
    case AccessVector::Local: return 'L';
    case AccessVector::Adjacent: return 'A';
    case AccessVector::Network: return 'N';
  }
  return '?';
}

char ac_letter(AccessComplexity v) {
  switch (v) {
    case AccessComplexity::High: return 'H';
    case AccessComplexity::Medium: return 'M';
    case AccessComplexity::Low: return 'L';
  }
  return '?';
}

char au_letter(Authentication v) {
  switch (v) {
    case Authentication::Multiple: return 'M';
    case Authentication::Single: return 'S';
    case Authentication::None: return 'N';
  }
  return '?';
}

char impact_letter(ImpactLevel v) {
  switch (v) {
    case ImpactLevel::None: return 'N';
    case ImpactLevel::Partial: return 'P';
    case ImpactLevel::Complete: return 'C';
  }
  return '?';
}

std::optional<ImpactLevel> impact_from_letter(std::string_view s) {
  if (s == "N") return ImpactLevel::None;
  if (s == "P") return ImpactLevel::Partial;
  if (s == "C") return ImpactLevel::Complete;
  return std::nullopt;
}

[[noreturn]] void bad_value(std::string_view token) {
  throw InputError("unknown value in CVSS token '" + std::string(token) + "'");
}

}  // namespace

CvssBaseVector parse_vector(std::string_view text) {
  CvssBaseVector out;
  std::array<bool, kMetricCount> seen{};

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t slash = text.find('/', pos);
    const std::string_view token =
        text.substr(pos, slash == std::string_view::npos ? std::string_view::npos : slash - pos);
    pos = slash == std::string_view::npos ? text.size() + 1 : slash + 1;

    const std::size_t colon = token.find(':');
    if (token.empty() || colon == std::string_view::npos) {
      throw InputError("malformed CVSS token '" + std::string(token) + "', expected METRIC:VALUE");
    }
    const std::string_view key = token.substr(0, colon);
    const std::string_view value = token.substr(colon + 1);

    const auto it = std::find(kMetricKeys.begin(), kMetricKeys.end(), key);
    if (it == kMetricKeys.end()) {
      throw InputError("unknown CVSS metric '" + std::string(key) + "' in token '" +
                       std::string(token) + "'");
    }
    const auto metric = static_cast<std::size_t>(it - kMetricKeys.begin());
    if (seen[metric]) {
      throw InputError("duplicate CVSS metric '" + std::string(key) + "' in token '" +
                       std::string(token) + "'");
    }
    seen[metric] = true;

    switch (metric) {
      case kAV:
        if (value == "L") out.access_vector = AccessVector::Local;
        else if (value == "A") out.access_vector = AccessVector::Adjacent;
        else if (value == "N") out.access_vector = AccessVector::Network;
        else bad_value(token);
        break;
      case kAC:
        if (value == "H") out.access_complexity = AccessComplexity::High;
        else if (value == "M") out.access_complexity = AccessComplexity::Medium;
        else if (value == "L") out.access_complexity = AccessComplexity::Low;
        else bad_value(token);
        break;
      case kAu:
        if (value == "M") out.authentication = Authentication::Multiple;
        else if (value == "S") out.authentication = Authentication::Single;
        else if (value == "N") out.authentication = Authentication::None;
        else bad_value(token);
        break;
      default: {
        const auto level = impact_from_letter(value);
        if (!level) bad_value(token);
        if (metric == kC) out.conf_impact = *level;
        else if (metric == kI) out.integ_impact = *level;
        else out.avail_impact = *level;
      }
    }
  }

  std::string missing;
  for (std::size_t m = 0; m < kMetricCount; ++m) {
    if (!seen[m]) {
      if (!missing.empty()) missing += ", ";
      missing += kMetricKeys[m];
    }
  }
  if (!missing.empty()) {
    throw InputError("CVSS vector '" + std::string(text) + "' is missing metrics " + missing);
  }
  return out;
}

std::string to_string(const CvssBaseVector& v) {
  std::string s;
  s += "AV:"; s += av_letter(v.access_vector);
  s += "/AC:"; s += ac_letter(v.access_complexity);
  s += "/Au:"; s += au_letter(v.authentication);
  s += "/C:"; s += impact_letter(v.conf_impact);
  s += "/I:"; s += impact_letter(v.integ_impact);
  s += "/A:"; s += impact_letter(v.avail_impact);
  return s;
}

double exploitability_from_weights(double av, double ac, double au) {
  return ScoreConstants::severity_factor * av * ac * au;
}

double exploitability_subscore(const CvssBaseVector& v) {
  return exploitability_from_weights(weight(v.access_vector), weight(v.access_complexity),
                                     weight(v.authentication));
}

double impact_from_weights(double c, double i, double a) {
  return ScoreConstants::impact_factor * (1.0 - (1.0 - c) * (1.0 - i) * (1.0 - a));
}

double impact_score(const CvssBaseVector& v) {
  return impact_from_weights(weight(v.conf_impact), weight(v.integ_impact),
                             weight(v.avail_impact));
}

double temporal_exploitability(double base_exploitability, double temporal_weight) {
  return temporal_weight * base_exploitability;
}

std::string display_score(double score) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", score);
  return buf;
}

double maturity_weight(ExploitMaturity m) {
  switch (m) {
    case ExploitMaturity::Unproven: return 0.85;
    case ExploitMaturity::ProofOfConcept: return 0.9;
    case ExploitMaturity::Functional: return 0.95;
    case ExploitMaturity::High: return 1.0;
    case ExploitMaturity::NotDefined: return 1.0;
  }
  return 1.0;
}

ExploitMaturity parse_maturity(std::string_view label) {
  std::string s(label);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  std::replace(s.begin(), s.end(), '_', '-');
  if (s == "unproven" || s == "u") return ExploitMaturity::Unproven;
  if (s == "proof-of-concept" || s == "poc") return ExploitMaturity::ProofOfConcept;
  if (s == "functional" || s == "f") return ExploitMaturity::Functional;
  if (s == "high" || s == "h") return ExploitMaturity::High;
  if (s == "not-defined" || s == "nd") return ExploitMaturity::NotDefined;
  throw InputError("unknown exploit maturity '" + std::string(label) + "'");
}

std::string to_string(ExploitMaturity m) {
  switch (m) {
    case ExploitMaturity::Unproven: return "unproven";
    case ExploitMaturity::ProofOfConcept: return "proof-of-concept";
    case ExploitMaturity::Functional: return "functional";
    case ExploitMaturity::High: return "high";
    case ExploitMaturity::NotDefined: return "not-defined";
  }
  return "not-defined";
}

}  // namespace secmarkov::cvss
