#include "celltide/civil_time.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace celltide {

namespace {

// Howard Hinnant's civil-from-days / days-from-civil algorithms.
std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y = static_cast<int>(yy + (m <= 2));
}

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
  static constexpr std::array<int, 12> kDays = {31, 28, 31, 30, 31, 30,
                                                31, 31, 30, 31, 30, 31};
  if (m == 2 && is_leap(y)) return 29;
  return kDays[static_cast<std::size_t>(m - 1)];
}

void validate_fields(const CivilTime& t) {
  if (t.month < 1 || t.month > 12) throw std::runtime_error("month out of range");
  if (t.day < 1 || t.day > days_in_month(t.year, t.month))
    throw std::runtime_error("day out of range");
  if (t.hour < 0 || t.hour > 23) throw std::runtime_error("hour out of range");
  if (t.minute < 0 || t.minute > 59) throw std::runtime_error("minute out of range");
}

int read_digits(std::string_view text, std::size_t& pos, int min_digits, int max_digits) {
  std::size_t n = 0;
  while (n < static_cast<std::size_t>(max_digits) && pos + n < text.size() &&
         text[pos + n] >= '0' && text[pos + n] <= '9')
    ++n;
  if (n < static_cast<std::size_t>(min_digits))
    throw std::runtime_error("expected digits in timestamp");
  int value = 0;
  std::from_chars(text.data() + pos, text.data() + pos + n, value);
  pos += n;
  return value;
}

} // namespace

std::int64_t to_epoch_minutes(const CivilTime& t) {
  return days_from_civil(t.year, static_cast<unsigned>(t.month),
                         static_cast<unsigned>(t.day)) *
             1440 +
         t.hour * 60 + t.minute;
}

CivilTime from_epoch_minutes(std::int64_t minutes) {
  std::int64_t days = minutes / 1440;
  std::int64_t rem = minutes % 1440;
  if (rem < 0) {
    rem += 1440;
    days -= 1;
  }
  CivilTime t;
  unsigned m = 0;
  unsigned d = 0;
  civil_from_days(days, t.year, m, d);
  t.month = static_cast<int>(m);
  t.day = static_cast<int>(d);
  t.hour = static_cast<int>(rem / 60);
  t.minute = static_cast<int>(rem % 60);
  return t;
}

CivilTime midnight_of(const CivilTime& t) { return {t.year, t.month, t.day, 0, 0}; }

std::string format_civil(const CivilTime& t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d %02d:%02d", t.year, t.month, t.day,
                t.hour, t.minute);
  return buf;
}

CivilTime parse_civil_iso(std::string_view text) {
  return parse_civil(text, "YYYY-MM-DD HH:mm");
}

CivilTime parse_civil(std::string_view text, std::string_view format) {
  CivilTime t;
  std::size_t pos = 0;
  std::size_t f = 0;
  while (f < format.size()) {
    if (format.compare(f, 4, "YYYY") == 0) {
      t.year = read_digits(text, pos, 4, 4);
      f += 4;
    } else if (format.compare(f, 2, "MM") == 0) {
      t.month = read_digits(text, pos, 2, 2);
      f += 2;
    } else if (format[f] == 'M') {
      t.month = read_digits(text, pos, 1, 2);
      f += 1;
    } else if (format.compare(f, 2, "DD") == 0) {
      t.day = read_digits(text, pos, 2, 2);
      f += 2;
    } else if (format[f] == 'D') {
      t.day = read_digits(text, pos, 1, 2);
      f += 1;
    } else if (format.compare(f, 2, "HH") == 0) {
      t.hour = read_digits(text, pos, 2, 2);
      f += 2;
    } else if (format[f] == 'H') {
      t.hour = read_digits(text, pos, 1, 2);
      f += 1;
    } else if (format.compare(f, 2, "mm") == 0) {
      t.minute = read_digits(text, pos, 1, 2);
      f += 2;
    } else if (format[f] == ' ') {
      if (pos >= text.size() || text[pos] != ' ')
        throw std::runtime_error("timestamp does not match format");
      while (pos < text.size() && text[pos] == ' ') ++pos;
      f += 1;
    } else {
      if (pos >= text.size() || text[pos] != format[f])
        throw std::runtime_error("timestamp does not match format");
      ++pos;
      ++f;
    }
  }
  if (pos != text.size()) throw std::runtime_error("trailing characters in timestamp");
  validate_fields(t);
  return t;
}

} // namespace celltide
