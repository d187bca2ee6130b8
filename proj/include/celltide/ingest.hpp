#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "celltide/civil_time.hpp"

namespace celltide::ingest {

constexpr double kEarthRadiusM = 6371000.0;

/// One raw log row. Timestamps are minutes since the dataset epoch
/// (midnight of the first calendar day present in the log).
struct TrafficRecord {
  std::int64_t timestamp_min = 0;
  std::string station_id;
  double lon = 0.0; // degrees
  double lat = 0.0; // degrees
  std::uint64_t volume = 0; // bytes
};

/// Names of the required columns in the input header plus the timestamp
/// format (see parse_civil). Extra columns in the input are ignored.
struct ColumnSchema {
  std::string timestamp = "Time";
  std::string station_id = "BS Number";
  std::string lon = "Longitude";
  std::string lat = "Latitude";
  std::string volume = "Traffic Volume";
  std::string timestamp_format = "YYYY/M/D H:mm";
};

/// Parse failure with the 1-based input line it occurred on.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct ParsedLog {
  CivilTime epoch; // midnight of the first calendar day present
  std::vector<TrafficRecord> records; // input order
};

/// Read delimiter-separated text (comma or tab, auto-detected from the
/// header row) into records. Throws ParseError on malformed rows,
/// unparseable numbers/dates and negative volumes.
ParsedLog parse_records(std::istream& in, const ColumnSchema& schema = {});

struct PlanePoint {
  double x = 0.0; // meters east of reference
  double y = 0.0; // meters north of reference
};
struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;
};

/// Equirectangular projection about (ref_lat, ref_lon):
///   x = R * (lon - ref_lon) * cos(ref_lat),  y = R * (lat - ref_lat),
/// angles in radians, R = 6371 km.
PlanePoint project(double lat, double lon, double ref_lat, double ref_lon);
GeoPoint unproject(const PlanePoint& p, double ref_lat, double ref_lon);

struct Station {
  std::string id;
  double lon = 0.0;
  double lat = 0.0;
  double x = 0.0; // plane coordinates about the dataset reference point
  double y = 0.0;
};

/// Station-by-hour traffic matrix. A cell with no records is absent, not
/// zero; means are taken over reporting stations only. Immutable by
/// convention after construction.
struct HourlyDataset {
  std::vector<Station> stations;
  std::size_t hours = 0; // T
  CivilTime epoch;       // wall clock of hour 0
  std::vector<std::optional<double>> volumes; // row-major T x |stations|
  std::string region_label;
  double ref_lat = 0.0; // projection reference (station centroid)
  double ref_lon = 0.0;

  const std::optional<double>& at(std::size_t t, std::size_t s) const {
    return volumes[t * stations.size() + s];
  }
  int hour_of_day(std::size_t t) const {
    return static_cast<int>((static_cast<std::size_t>(epoch.hour) + t) % 24);
  }
};

/// Sum record volumes into hourly per-station cells. Stations are ordered
/// by first appearance; T covers the last record. Records must not
/// precede the epoch.
HourlyDataset bin_hourly(std::span<const TrafficRecord> records, const CivilTime& epoch);

struct RegionBounds {
  double min_lon = -180.0;
  double max_lon = 180.0;
  double min_lat = -90.0;
  double max_lat = 90.0;
};

/// Keep exactly the stations whose (lon, lat) lie inside bounds
/// (inclusive). The hour axis is unchanged; plane coordinates are
/// recomputed about the retained stations' centroid.
HourlyDataset filter_region(const HourlyDataset& ds, const RegionBounds& bounds,
                            std::string label);

/// Reset the reference point to the station centroid and refresh every
/// station's (x, y). Called by the dataset constructors; only needed
/// directly after editing the station list by hand.
void recompute_plane_frame(HourlyDataset& ds);

enum class Aggregate { kTotal, kMean };

/// Per hour, the sum or mean over stations whose cell is present that
/// hour; hours with no reporting station are absent. Throws on a dataset
/// with zero stations.
std::vector<std::optional<double>> aggregate(const HourlyDataset& ds, Aggregate mode);

} // namespace celltide::ingest
