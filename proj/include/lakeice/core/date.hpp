#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace lakeice {

// Calendar day, stored as days since 1970-01-01 (proleptic Gregorian).
// Cheap value type; arithmetic in whole days.
class Date {
 public:
  Date() = default;
  explicit Date(std::int64_t days_since_epoch) : days_(days_since_epoch) {}
  Date(int year, unsigned month, unsigned day);

  static Date parse_iso(const std::string& s);  // "YYYY-MM-DD"

  std::int64_t serial() const { return days_; }
  std::string to_iso() const;
  int year() const;
  unsigned month() const;
  unsigned day() const;

  Date operator+(std::int64_t d) const { return Date(days_ + d); }
  Date operator-(std::int64_t d) const { return Date(days_ - d); }
  std::int64_t operator-(const Date& o) const { return days_ - o.days_; }
  auto operator<=>(const Date&) const = default;

 private:
  std::int64_t days_ = 0;
};

}  // namespace lakeice
