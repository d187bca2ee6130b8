#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "celltide/ingest.hpp"

namespace celltide::spatial {

/// Parameters of the lognormal spatial traffic distribution: mu and sigma
/// of the underlying normal (natural log).
struct LognormalParams {
  double mu = 0.0;
  double sigma = 1.0; // > 0
};

struct SampleProvenance {
  std::string region_label;
  std::vector<int> hours_of_day; // ascending
  std::size_t day_count = 0;
  std::size_t station_count = 0;
};

/// Strictly positive cell values pooled across days and stations for the
/// selected hours of day. Zero cells are dropped but counted so the data
/// loss stays visible.
struct SpatialSample {
  std::vector<double> values;
  SampleProvenance provenance;
  std::size_t excluded_zero_count = 0;
};

/// Station-id partition under proximity clustering; clusters of size >= 2
/// are hotspots.
struct HotspotPartition {
  std::vector<std::vector<std::string>> clusters;
  std::set<std::string> hotspot_ids;
};

enum class StationFilter { kAll, kNonHotspotOnly };

SpatialSample spatial_sample(const ingest::HourlyDataset& ds,
                             const std::set<int>& hours_of_day,
                             StationFilter include = StationFilter::kAll,
                             const HotspotPartition* partition = nullptr);

/// Maximum likelihood: mu is the mean of ln(values), sigma the population
/// (1/n) standard deviation of ln(values). Needs >= 2 distinct values.
LognormalParams fit_lognormal(std::span<const double> values);
LognormalParams fit_lognormal(const SpatialSample& sample);

/// f(x) = 1/(x sigma sqrt(2 pi)) exp(-(ln x - mu)^2 / (2 sigma^2)), x > 0.
double lognormal_pdf(const LognormalParams& p, double x);
double lognormal_cdf(const LognormalParams& p, double x);

/// Great-circle distance in meters (haversine, R = 6371 km).
double haversine_m(double lat1, double lon1, double lat2, double lon2);

/// Single-linkage proximity clustering: stations are connected when their
/// haversine distance is strictly below radius_m, and clusters are the
/// connected components (so a 100 m chain A-B-C forms one cluster even if
/// A and C are 200 m apart). Station ids must be unique.
HotspotPartition detect_hotspots(std::span<const ingest::Station> stations,
                                 double radius_m = 150.0);

/// Drop every station belonging to a hotspot. The partition must cover
/// the dataset's stations; throws if nothing would remain.
ingest::HourlyDataset remove_hotspots(const ingest::HourlyDataset& ds,
                                      const HotspotPartition& partition);

struct DensityBin {
  double lo = 0.0;
  double hi = 0.0;
  double empirical = 0.0; // histogram density, integrates to 1
  double model = 0.0;     // lognormal probability mass / bin width
};

/// Equal-width histogram over [min, max] of the sample next to the model
/// density, bar-graph style.
std::vector<DensityBin> empirical_vs_model(const SpatialSample& sample,
                                           const LognormalParams& p, int n_bins);

/// Empirical sigma presets (park 1.3, campus 3.6, CBD 2.8).
enum class RegionPreset { kPark, kCampus, kCbd };
double sigma_preset(RegionPreset preset);
std::optional<RegionPreset> preset_from_name(std::string_view name);
std::string_view preset_name(RegionPreset preset);

} // namespace celltide::spatial
