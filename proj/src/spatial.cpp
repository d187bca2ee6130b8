#include "celltide/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace celltide::spatial {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

struct UnionFind {
  std::vector<std::size_t> parent;

  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), std::size_t{0});
  }
  std::size_t find(std::size_t i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

} // namespace

SpatialSample spatial_sample(const ingest::HourlyDataset& ds,
                             const std::set<int>& hours_of_day, StationFilter include,
                             const HotspotPartition* partition) {
  if (hours_of_day.empty())
    throw std::invalid_argument("spatial_sample: hours_of_day is empty");
  for (const int h : hours_of_day)
    if (h < 0 || h > 23)
      throw std::invalid_argument("spatial_sample: hour of day out of 0-23");
  if (include == StationFilter::kNonHotspotOnly && partition == nullptr)
    throw std::invalid_argument("spatial_sample: non_hotspot_only needs a partition");

  std::vector<std::size_t> station_idx;
  for (std::size_t s = 0; s < ds.stations.size(); ++s) {
    if (include == StationFilter::kNonHotspotOnly &&
        partition->hotspot_ids.contains(ds.stations[s].id))
      continue;
    station_idx.push_back(s);
  }

  SpatialSample sample;
  std::set<std::size_t> days;
  for (std::size_t t = 0; t < ds.hours; ++t) {
    if (!hours_of_day.contains(ds.hour_of_day(t))) continue;
    days.insert(t / 24);
    for (const std::size_t s : station_idx) {
      const auto& cell = ds.at(t, s);
      if (!cell) continue;
      if (*cell > 0.0)
        sample.values.push_back(*cell);
      else
        ++sample.excluded_zero_count;
    }
  }
  if (sample.values.empty())
    throw std::runtime_error("spatial_sample: no positive values selected");

  sample.provenance.region_label = ds.region_label;
  sample.provenance.hours_of_day.assign(hours_of_day.begin(), hours_of_day.end());
  sample.provenance.day_count = days.size();
  sample.provenance.station_count = station_idx.size();
  return sample;
}

LognormalParams fit_lognormal(std::span<const double> values) {
  if (values.size() < 2)
    throw std::invalid_argument("fit_lognormal needs at least 2 values");
  double mean = 0.0;
  for (const double v : values) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument("fit_lognormal: values must be positive and finite");
    mean += std::log(v);
  }
  mean /= static_cast<double>(values.size());

  double ss = 0.0;
  for (const double v : values) {
    const double d = std::log(v) - mean;
    ss += d * d;
  }
  const double sigma = std::sqrt(ss / static_cast<double>(values.size()));
  if (!(sigma > 0.0))
    throw std::invalid_argument("fit_lognormal: all values equal (sigma = 0)");
  return {mean, sigma};
}

LognormalParams fit_lognormal(const SpatialSample& sample) {
  return fit_lognormal(std::span<const double>(sample.values));
}

double lognormal_pdf(const LognormalParams& p, double x) {
  if (!(x > 0.0)) throw std::invalid_argument("lognormal_pdf requires x > 0");
  const double z = (std::log(x) - p.mu) / p.sigma;
  return std::exp(-0.5 * z * z) / (x * p.sigma * std::sqrt(2.0 * std::numbers::pi));
}

double lognormal_cdf(const LognormalParams& p, double x) {
  if (!(x > 0.0)) throw std::invalid_argument("lognormal_cdf requires x > 0");
  const double z = (std::log(x) - p.mu) / p.sigma;
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double haversine_m(double lat1, double lon1, double lat2, double lon2) {
  const double phi1 = lat1 * kDegToRad;
  const double phi2 = lat2 * kDegToRad;
  const double dphi = (lat2 - lat1) * kDegToRad;
  const double dlambda = (lon2 - lon1) * kDegToRad;
  const double s1 = std::sin(dphi / 2.0);
  const double s2 = std::sin(dlambda / 2.0);
  const double a = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
  return 2.0 * ingest::kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(a)));
}

HotspotPartition detect_hotspots(std::span<const ingest::Station> stations,
                                 double radius_m) {
  if (!(radius_m > 0.0)) throw std::invalid_argument("radius_m must be positive");
  {
    std::unordered_set<std::string_view> ids;
    for (const auto& s : stations)
      if (!ids.insert(s.id).second)
        throw std::invalid_argument("detect_hotspots: duplicate station id '" + s.id + "'");
  }

  const std::size_t n = stations.size();
  UnionFind uf(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (haversine_m(stations[i].lat, stations[i].lon, stations[j].lat,
                      stations[j].lon) < radius_m)
        uf.unite(i, j);

  // Clusters ordered by their first member's input position.
  std::vector<std::vector<std::size_t>> members(n);
  std::vector<std::size_t> roots;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = uf.find(i);
    if (members[r].empty()) roots.push_back(r);
    members[r].push_back(i);
  }

  HotspotPartition out;
  for (const std::size_t r : roots) {
    std::vector<std::string> ids;
    ids.reserve(members[r].size());
    for (const std::size_t i : members[r]) ids.push_back(stations[i].id);
    if (ids.size() >= 2)
      for (const auto& id : ids) out.hotspot_ids.insert(id);
    out.clusters.push_back(std::move(ids));
  }
  return out;
}

ingest::HourlyDataset remove_hotspots(const ingest::HourlyDataset& ds,
                                      const HotspotPartition& partition) {
  std::unordered_set<std::string_view> covered;
  for (const auto& cluster : partition.clusters)
    for (const auto& id : cluster) covered.insert(id);
  for (const auto& s : ds.stations)
    if (!covered.contains(s.id))
      throw std::invalid_argument("partition does not cover station '" + s.id + "'");

  ingest::HourlyDataset out;
  out.hours = ds.hours;
  out.epoch = ds.epoch;
  out.region_label = ds.region_label;
  std::vector<std::size_t> keep;
  for (std::size_t s = 0; s < ds.stations.size(); ++s)
    if (!partition.hotspot_ids.contains(ds.stations[s].id)) {
      keep.push_back(s);
      out.stations.push_back(ds.stations[s]);
    }
  if (keep.empty()) throw std::runtime_error("remove_hotspots: empty dataset");

  out.volumes.resize(out.hours * keep.size());
  for (std::size_t t = 0; t < out.hours; ++t)
    for (std::size_t j = 0; j < keep.size(); ++j)
      out.volumes[t * keep.size() + j] = ds.at(t, keep[j]);

  ingest::recompute_plane_frame(out);
  return out;
}

std::vector<DensityBin> empirical_vs_model(const SpatialSample& sample,
                                           const LognormalParams& p, int n_bins) {
  if (n_bins < 2) throw std::invalid_argument("empirical_vs_model needs n_bins >= 2");
  const auto [min_it, max_it] = std::minmax_element(sample.values.begin(), sample.values.end());
  const double lo = *min_it;
  const double hi = *max_it;
  if (!(hi > lo))
    throw std::invalid_argument("empirical_vs_model: degenerate sample range");

  const std::size_t bins = static_cast<std::size_t>(n_bins);
  const double width = (hi - lo) / static_cast<double>(bins);
  std::vector<std::size_t> counts(bins, 0);
  for (const double v : sample.values) {
    auto b = static_cast<std::size_t>((v - lo) / width);
    if (b >= bins) b = bins - 1; // v == hi
    ++counts[b];
  }

  const double n = static_cast<double>(sample.values.size());
  std::vector<DensityBin> out(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    out[b].lo = lo + width * static_cast<double>(b);
    out[b].hi = b + 1 == bins ? hi : lo + width * static_cast<double>(b + 1);
    out[b].empirical = static_cast<double>(counts[b]) / (n * width);
    out[b].model = (lognormal_cdf(p, out[b].hi) - lognormal_cdf(p, out[b].lo)) / width;
  }
  return out;
}

double sigma_preset(RegionPreset preset) {
  switch (preset) {
    case RegionPreset::kPark: return 1.3;
    case RegionPreset::kCampus: return 3.6;
    case RegionPreset::kCbd: return 2.8;
  }
  throw std::invalid_argument("unknown region preset");
}

std::optional<RegionPreset> preset_from_name(std::string_view name) {
  if (name == "park") return RegionPreset::kPark;
  if (name == "campus") return RegionPreset::kCampus;
  if (name == "cbd") return RegionPreset::kCbd;
  return std::nullopt;
}

std::string_view preset_name(RegionPreset preset) {
  switch (preset) {
    case RegionPreset::kPark: return "park";
    case RegionPreset::kCampus: return "campus";
    case RegionPreset::kCbd: return "cbd";
  }
  return "";
}

} // namespace celltide::spatial
