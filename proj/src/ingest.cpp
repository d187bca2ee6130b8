#include "celltide/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_map>

namespace celltide::ingest {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = line.find(delim, start);
    if (end == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, end - start)));
    start = end + 1;
  }
  return out;
}

double parse_double(std::string_view s, std::size_t line, const char* what) {
  double v = 0.0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || s.empty())
    throw ParseError(line, std::string("cannot parse ") + what + " '" + std::string(s) + "'");
  return v;
}

std::uint64_t parse_volume(std::string_view s, std::size_t line) {
  if (s.empty()) throw ParseError(line, "empty volume field");
  if (s.front() == '-') throw ParseError(line, "negative volume '" + std::string(s) + "'");
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ParseError(line, "cannot parse volume '" + std::string(s) + "'");
  return v;
}

constexpr double kDegToRad = std::numbers::pi / 180.0;

} // namespace

ParsedLog parse_records(std::istream& in, const ColumnSchema& schema) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "missing header row");
  const char delim = line.find('\t') != std::string::npos ? '\t' : ',';
  const auto header = split(line, delim);

  auto column_index = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), std::string_view(name));
    if (it == header.end())
      throw ParseError(1, "header has no column named '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t c_time = column_index(schema.timestamp);
  const std::size_t c_id = column_index(schema.station_id);
  const std::size_t c_lon = column_index(schema.lon);
  const std::size_t c_lat = column_index(schema.lat);
  const std::size_t c_vol = column_index(schema.volume);

  struct RawRecord {
    std::int64_t abs_minutes;
    std::string id;
    double lon, lat;
    std::uint64_t volume;
  };
  std::vector<RawRecord> raw;
  std::int64_t min_abs = std::numeric_limits<std::int64_t>::max();

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line, delim);
    if (fields.size() != header.size())
      throw ParseError(line_no, "expected " + std::to_string(header.size()) +
                                    " fields, got " + std::to_string(fields.size()));
    CivilTime ts;
    try {
      ts = parse_civil(fields[c_time], schema.timestamp_format);
    } catch (const std::exception& e) {
      throw ParseError(line_no, e.what());
    }
    const double lon = parse_double(fields[c_lon], line_no, "longitude");
    const double lat = parse_double(fields[c_lat], line_no, "latitude");
    if (lat < -90.0 || lat > 90.0)
      throw ParseError(line_no, "latitude out of range");
    if (lon < -180.0 || lon > 180.0)
      throw ParseError(line_no, "longitude out of range");
    const std::uint64_t volume = parse_volume(fields[c_vol], line_no);

    const std::int64_t abs_minutes = to_epoch_minutes(ts);
    min_abs = std::min(min_abs, abs_minutes);
    raw.push_back({abs_minutes, std::string(fields[c_id]), lon, lat, volume});
  }

  ParsedLog out;
  if (raw.empty()) {
    out.epoch = CivilTime{};
    return out;
  }
  out.epoch = midnight_of(from_epoch_minutes(min_abs));
  const std::int64_t epoch_minutes = to_epoch_minutes(out.epoch);
  out.records.reserve(raw.size());
  for (auto& r : raw)
    out.records.push_back(
        {r.abs_minutes - epoch_minutes, std::move(r.id), r.lon, r.lat, r.volume});
  return out;
}

PlanePoint project(double lat, double lon, double ref_lat, double ref_lon) {
  return {kEarthRadiusM * (lon - ref_lon) * kDegToRad * std::cos(ref_lat * kDegToRad),
          kEarthRadiusM * (lat - ref_lat) * kDegToRad};
}

GeoPoint unproject(const PlanePoint& p, double ref_lat, double ref_lon) {
  return {ref_lat + p.y / kEarthRadiusM / kDegToRad,
          ref_lon + p.x / (kEarthRadiusM * std::cos(ref_lat * kDegToRad)) / kDegToRad};
}

void recompute_plane_frame(HourlyDataset& ds) {
  if (ds.stations.empty()) {
    ds.ref_lat = 0.0;
    ds.ref_lon = 0.0;
    return;
  }
  double sum_lat = 0.0;
  double sum_lon = 0.0;
  for (const auto& s : ds.stations) {
    sum_lat += s.lat;
    sum_lon += s.lon;
  }
  ds.ref_lat = sum_lat / static_cast<double>(ds.stations.size());
  ds.ref_lon = sum_lon / static_cast<double>(ds.stations.size());
  for (auto& s : ds.stations) {
    const auto p = project(s.lat, s.lon, ds.ref_lat, ds.ref_lon);
    s.x = p.x;
    s.y = p.y;
  }
}

HourlyDataset bin_hourly(std::span<const TrafficRecord> records, const CivilTime& epoch) {
  HourlyDataset ds;
  ds.epoch = epoch;
  if (records.empty()) return ds;

  std::int64_t max_min = 0;
  for (const auto& r : records) {
    if (r.timestamp_min < 0)
      throw std::invalid_argument("record precedes the dataset epoch");
    max_min = std::max(max_min, r.timestamp_min);
  }
  ds.hours = static_cast<std::size_t>(max_min / 60) + 1;

  std::unordered_map<std::string, std::size_t> index;
  for (const auto& r : records) {
    if (index.emplace(r.station_id, ds.stations.size()).second)
      ds.stations.push_back({r.station_id, r.lon, r.lat, 0.0, 0.0});
  }

  const std::size_t n = ds.stations.size();
  ds.volumes.assign(ds.hours * n, std::nullopt);
  for (const auto& r : records) {
    const std::size_t t = static_cast<std::size_t>(r.timestamp_min / 60);
    auto& cell = ds.volumes[t * n + index[r.station_id]];
    cell = cell.value_or(0.0) + static_cast<double>(r.volume);
  }

  recompute_plane_frame(ds);
  return ds;
}

HourlyDataset filter_region(const HourlyDataset& ds, const RegionBounds& bounds,
                            std::string label) {
  if (bounds.min_lon > bounds.max_lon || bounds.min_lat > bounds.max_lat)
    throw std::invalid_argument("region bounds has min > max");

  HourlyDataset out;
  out.hours = ds.hours;
  out.epoch = ds.epoch;
  out.region_label = std::move(label);

  std::vector<std::size_t> keep;
  for (std::size_t s = 0; s < ds.stations.size(); ++s) {
    const auto& st = ds.stations[s];
    if (st.lon >= bounds.min_lon && st.lon <= bounds.max_lon &&
        st.lat >= bounds.min_lat && st.lat <= bounds.max_lat) {
      keep.push_back(s);
      out.stations.push_back(st);
    }
  }
  out.volumes.resize(out.hours * keep.size());
  for (std::size_t t = 0; t < out.hours; ++t)
    for (std::size_t j = 0; j < keep.size(); ++j)
      out.volumes[t * keep.size() + j] = ds.at(t, keep[j]);

  recompute_plane_frame(out);
  return out;
}

std::vector<std::optional<double>> aggregate(const HourlyDataset& ds, Aggregate mode) {
  if (ds.stations.empty())
    throw std::invalid_argument("cannot aggregate a dataset with zero stations");
  std::vector<std::optional<double>> out(ds.hours);
  for (std::size_t t = 0; t < ds.hours; ++t) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t s = 0; s < ds.stations.size(); ++s) {
      if (const auto& v = ds.at(t, s)) {
        sum += *v;
        ++count;
      }
    }
    if (count > 0)
      out[t] = mode == Aggregate::kTotal ? sum : sum / static_cast<double>(count);
  }
  return out;
}

} // namespace celltide::ingest
