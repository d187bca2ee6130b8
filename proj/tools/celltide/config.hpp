#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "celltide/ingest.hpp"

namespace celltide::cli {

struct RegionSpec {
  std::string label;
  ingest::RegionBounds bounds;
};

/// One config document drives every subcommand; each field can be
/// overridden by a command-line flag, and flags win.
struct RunConfig {
  std::string input_path;
  std::string out_dir = "out";
  std::vector<RegionSpec> regions; // empty = whole area, labelled "all"
  std::string region_filter;      // restrict commands to one region label

  ingest::Aggregate aggregate_mode = ingest::Aggregate::kMean;
  ingest::ColumnSchema schema;

  // spectral
  bool detrend = true;
  int max_components = 3;
  double rel_threshold = 0.15;

  // fit
  double min_gain = 0.02;
  double scale = 1e6; // bytes per traffic unit applied before fitting
  std::vector<double> frequencies; // explicit override of spectral selection

  // spatial
  std::vector<int> spare_hours = {2, 3, 4};
  std::vector<int> busy_hours = {17, 18, 19};
  std::vector<int> custom_hours; // --hours override; replaces both lists
  double hotspot_radius_m = 150.0;
  int n_bins = 30;

  // generation; n_stations/hours_count default to 100/504 for generate and
  // to the fitted region's own dimensions for pipeline
  std::optional<double> sigma;
  std::string region_preset; // park | campus | cbd
  std::optional<std::size_t> n_stations;
  std::optional<std::size_t> hours_count;
  std::uint64_t seed = 1;
  std::string model_path; // temporal model JSON for generate
};

/// Load a config JSON document. Unknown keys are rejected so typos fail
/// loudly.
RunConfig load_config(const std::filesystem::path& path);
void apply_config_json(RunConfig& config, const std::string& text);

/// "pi/12", "2pi/24", "0.5235987755982988" -> radians/hour.
double parse_frequency(const std::string& token);
std::vector<double> parse_frequency_list(const std::string& csv);
std::vector<int> parse_hour_list(const std::string& csv);

enum class LogLevel { kQuiet = 0, kInfo = 1, kDebug = 2 };

/// Level from CELLTIDE_LOG (quiet|info|debug), defaulting to info.
LogLevel log_level();
void log_info(const std::string& message);
void log_debug(const std::string& message);
void log_warn(const std::string& message);

} // namespace celltide::cli
