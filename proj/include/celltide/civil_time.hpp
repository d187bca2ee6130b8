#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace celltide {

/// Calendar datetime at minute resolution, proleptic Gregorian.
struct CivilTime {
  int year = 1970;
  int month = 1;  // 1-12
  int day = 1;    // 1-31
  int hour = 0;   // 0-23
  int minute = 0; // 0-59

  bool operator==(const CivilTime&) const = default;
};

/// Minutes since 1970-01-01 00:00.
std::int64_t to_epoch_minutes(const CivilTime& t);
CivilTime from_epoch_minutes(std::int64_t minutes);

/// Same date, 00:00.
CivilTime midnight_of(const CivilTime& t);

/// "2012-09-03 00:00"
std::string format_civil(const CivilTime& t);

/// Inverse of format_civil. Throws std::runtime_error on malformed input.
CivilTime parse_civil_iso(std::string_view text);

/// Parse against a format string made of the tokens YYYY, MM, M, DD, D,
/// HH, H, mm and literal separators, e.g. "YYYY/M/D H:mm". Single-letter
/// tokens accept one or two digits; a literal space matches any run of
/// spaces. Throws std::runtime_error on mismatch or out-of-range fields.
CivilTime parse_civil(std::string_view text, std::string_view format);

} // namespace celltide
