#include "secmarkov/date.hpp"

#include <charconv>
#include <cstdio>

#include "secmarkov/error.hpp"

namespace secmarkov {

namespace {

int parse_field(std::string_view text, std::string_view whole) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw InputError("invalid date '" + std::string(whole) + "', expected YYYY-MM-DD");
  }
  return value;
}

}  // namespace

Date Date::parse(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
    throw InputError("invalid date '" + std::string(text) + "', expected YYYY-MM-DD");
  }
  const int y = parse_field(text.substr(0, 4), text);
  const int m = parse_field(text.substr(5, 2), text);
  const int d = parse_field(text.substr(8, 2), text);
  const std::chrono::year_month_day ymd{std::chrono::year{y},
                                        std::chrono::month{static_cast<unsigned>(m)},
                                        std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) {
    throw InputError("invalid calendar date '" + std::string(text) + "'");
  }
  return Date(std::chrono::sys_days{ymd});
}

Date Date::today() {
  return Date(std::chrono::floor<std::chrono::days>(std::chrono::system_clock::now()));
}

std::string Date::to_string() const {
  const std::chrono::year_month_day ymd{days_};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

}  // namespace secmarkov
