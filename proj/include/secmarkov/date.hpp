#pragma once

#include <chrono>
#include <compare>
#include <string>
#include <string_view>

namespace secmarkov {

/// Calendar day with ISO-8601 (YYYY-MM-DD) text form.
class Date {
 public:
  constexpr Date() = default;
  constexpr explicit Date(std::chrono::sys_days days) : days_(days) {}

  static Date parse(std::string_view text);
  static Date today();

  std::chrono::sys_days sys_days() const { return days_; }
  std::string to_string() const;

  Date plus_days(long n) const { return Date(days_ + std::chrono::days(n)); }

  /// Whole days from `from` to `*this` (negative when `*this` is earlier).
  long days_since(Date from) const { return (days_ - from.days_).count(); }

  friend constexpr auto operator<=>(const Date&, const Date&) = default;

 private:
  std::chrono::sys_days days_{};
};

}  // namespace secmarkov
