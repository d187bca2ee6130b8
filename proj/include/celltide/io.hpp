#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "celltide/ingest.hpp"
#include "celltide/spatial.hpp"
#include "celltide/spectral.hpp"
#include "celltide/stgen.hpp"
#include "celltide/temporal.hpp"

namespace celltide::io {

/// {epoch, region_label, hours, stations:[{id,lon,lat}], volumes: row-major
/// array with null for absent}. Doubles round-trip exactly (shortest
/// decimal form).
nlohmann::json dataset_to_json(const ingest::HourlyDataset& ds);
ingest::HourlyDataset dataset_from_json(const nlohmann::json& j);

/// Sinusoid model together with the display scale its magnitudes are in.
struct ModelFile {
  temporal::SinusoidModel model;
  double scale = 1.0;
  std::string region_label;
};

nlohmann::json model_to_json(const temporal::SinusoidModel& model, double scale,
                             const std::string& region_label);
ModelFile model_from_json(const nlohmann::json& j);

nlohmann::json fit_report_to_json(const temporal::FitReport& report, double scale,
                                  const std::string& region_label);

nlohmann::json lognormal_to_json(const spatial::LognormalParams& params,
                                 const spatial::SpatialSample& sample, double scale);

nlohmann::json partition_to_json(const spatial::HotspotPartition& partition,
                                 double radius_m);

nlohmann::json validation_to_json(const stgen::ValidationReport& report);

nlohmann::json component_set_to_json(const spectral::ComponentSet& set);

/// Two-column CSV (frequency_rad_per_hour, amplitude).
std::string spectrum_to_csv(const spectral::AmplitudeSpectrum& spectrum);

/// CSV (bin_lo, bin_hi, empirical_density, model_density).
std::string comparison_to_csv(std::span<const spatial::DensityBin> bins);

/// CSV (hour, station_index, volume), row-major draw order.
std::string generated_to_csv(const stgen::GeneratedTraffic& gen);

/// Generated matrix in the HourlyDataset layout so it can be fed back
/// through the fitting pipeline. Volumes are multiplied by scale
/// (model units back to bytes); synthetic stations sit at (0, 0).
ingest::HourlyDataset generated_to_dataset(const stgen::GeneratedTraffic& gen,
                                           double scale, const CivilTime& epoch);

/// Write via a temp file in the same directory plus rename, so a failure
/// never leaves a partially written named output.
void write_text_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_text(const std::filesystem::path& path);

} // namespace celltide::io
