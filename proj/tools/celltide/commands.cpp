#include "commands.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "celltide/io.hpp"
#include "celltide/spatial.hpp"
#include "celltide/spectral.hpp"
#include "celltide/stgen.hpp"
#include "celltide/temporal.hpp"

namespace celltide::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string sanitize_label(const std::string& label) {
  std::string out;
  for (const char c : label)
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
  return out.empty() ? "region" : out;
}

/// Collects planned output paths and refuses to overwrite an input.
class OutputGuard {
 public:
  void protect(const fs::path& input) {
    if (!input.empty()) inputs_.push_back(fs::weakly_canonical(input));
  }
  fs::path path(const fs::path& out) {
    const fs::path resolved = fs::weakly_canonical(out);
    for (const auto& in : inputs_)
      if (resolved == in)
        throw std::runtime_error("output path " + out.string() +
                                 " collides with an input path");
    return out;
  }

 private:
  std::vector<fs::path> inputs_;
};

ingest::ParsedLog parse_log_file(const RunConfig& config) {
  if (config.input_path.empty()) throw std::runtime_error("no input file given");
  if (!fs::exists(config.input_path))
    throw std::runtime_error("input file not found: " + config.input_path);
  std::ifstream in(config.input_path);
  if (!in) throw std::runtime_error("cannot open " + config.input_path);
  return ingest::parse_records(in, config.schema);
}

struct NamedDataset {
  std::string label;
  ingest::HourlyDataset ds;
};

/// Raw logs are binned and cut into the configured regions; a .json input
/// is taken as one already-built dataset.
std::vector<NamedDataset> load_datasets(const RunConfig& config) {
  std::vector<NamedDataset> out;
  if (config.input_path.size() > 5 &&
      config.input_path.ends_with(".json")) {
    if (!fs::exists(config.input_path))
      throw std::runtime_error("input file not found: " + config.input_path);
    auto ds = io::dataset_from_json(json::parse(io::read_text(config.input_path)));
    std::string label = ds.region_label.empty() ? "all" : ds.region_label;
    out.push_back({std::move(label), std::move(ds)});
  } else {
    const auto log = parse_log_file(config);
    const auto full = ingest::bin_hourly(log.records, log.epoch);
    if (config.regions.empty()) {
      auto ds = full;
      ds.region_label = "all";
      out.push_back({"all", std::move(ds)});
    } else {
      for (const auto& region : config.regions)
        out.push_back(
            {region.label, ingest::filter_region(full, region.bounds, region.label)});
    }
  }
  if (!config.region_filter.empty()) {
    std::erase_if(out, [&](const NamedDataset& d) { return d.label != config.region_filter; });
    if (out.empty())
      throw std::runtime_error("no region labelled '" + config.region_filter + "'");
  }
  return out;
}

double missing_fraction(const ingest::HourlyDataset& ds) {
  if (ds.volumes.empty()) return 0.0;
  std::size_t absent = 0;
  for (const auto& v : ds.volumes)
    if (!v) ++absent;
  return static_cast<double>(absent) / static_cast<double>(ds.volumes.size());
}

std::vector<std::optional<double>> scaled_aggregate(const ingest::HourlyDataset& ds,
                                                    const RunConfig& config) {
  auto series = ingest::aggregate(ds, config.aggregate_mode);
  for (auto& v : series)
    if (v) *v /= config.scale;
  return series;
}

struct TemporalFitOutput {
  spectral::AmplitudeSpectrum spectrum;
  temporal::FitReport report;
};

TemporalFitOutput fit_temporal_for(const ingest::HourlyDataset& ds,
                                   const RunConfig& config) {
  const auto series = scaled_aggregate(ds, config);
  const auto filled = spectral::fill_missing_linear(series);

  TemporalFitOutput out;
  out.spectrum = spectral::amplitude_spectrum(filled, config.detrend);
  const auto points = temporal::to_points(series);
  if (!config.frequencies.empty()) {
    out.report = temporal::fit(points, config.frequencies);
  } else {
    spectral::DominantOptions options;
    options.max_components = config.max_components;
    options.rel_threshold = config.rel_threshold;
    const auto candidates = spectral::dominant_components(out.spectrum, options);
    out.report = temporal::select_order(points, candidates, config.min_gain);
  }
  return out;
}

spatial::SpatialSample scaled_sample(const ingest::HourlyDataset& ds,
                                     const std::vector<int>& hours, double scale,
                                     spatial::StationFilter include,
                                     const spatial::HotspotPartition* partition) {
  const std::set<int> hour_set(hours.begin(), hours.end());
  auto sample = spatial::spatial_sample(ds, hour_set, include, partition);
  for (auto& v : sample.values) v /= scale;
  return sample;
}

struct SpatialVariant {
  std::string name;
  spatial::StationFilter include;
  std::vector<int> hours;
};

std::vector<SpatialVariant> spatial_variants(const RunConfig& config) {
  std::vector<SpatialVariant> variants;
  if (!config.custom_hours.empty()) {
    variants.push_back({"all_custom", spatial::StationFilter::kAll, config.custom_hours});
    variants.push_back(
        {"nohotspot_custom", spatial::StationFilter::kNonHotspotOnly, config.custom_hours});
  } else {
    variants.push_back({"all_spare", spatial::StationFilter::kAll, config.spare_hours});
    variants.push_back({"all_busy", spatial::StationFilter::kAll, config.busy_hours});
    variants.push_back(
        {"nohotspot_spare", spatial::StationFilter::kNonHotspotOnly, config.spare_hours});
    variants.push_back(
        {"nohotspot_busy", spatial::StationFilter::kNonHotspotOnly, config.busy_hours});
  }
  return variants;
}

struct SigmaChoice {
  double sigma = 0.0;
  std::string source;
};

SigmaChoice resolve_sigma(const RunConfig& config) {
  if (config.sigma) {
    if (!(*config.sigma > 0.0))
      throw std::runtime_error("sigma must be positive");
    return {*config.sigma, "explicit"};
  }
  if (!config.region_preset.empty()) {
    const auto preset = spatial::preset_from_name(config.region_preset);
    if (!preset)
      throw std::runtime_error("unknown region preset '" + config.region_preset +
                               "' (expect park|campus|cbd)");
    return {spatial::sigma_preset(*preset), "preset:" + config.region_preset};
  }
  return {0.0, ""};
}

json generation_summary(const stgen::STModel& model, std::size_t hours,
                        std::uint64_t seed, const std::string& sigma_source) {
  return json{{"region_label", model.region_label},
              {"sigma", model.sigma},
              {"sigma_source", sigma_source},
              {"n_stations", model.n_stations},
              {"hours", hours},
              {"seed", seed}};
}

/// Shared generate-and-validate step; writes the three generated outputs
/// into dir and returns the validation report JSON.
json run_generation(const stgen::STModel& model, std::size_t hours, double scale,
                    const RunConfig& config, const fs::path& dir, OutputGuard& guard,
                    const std::string& sigma_source) {
  const auto gen = stgen::generate(model, hours, config.seed);
  const auto report = stgen::validate(gen);

  io::write_text_atomic(guard.path(dir / "generated.csv"), io::generated_to_csv(gen));
  const auto fed_back =
      io::generated_to_dataset(gen, scale, CivilTime{2012, 9, 3, 0, 0});
  io::write_text_atomic(guard.path(dir / "generated_dataset.json"),
                        io::dataset_to_json(fed_back).dump(2) + "\n");
  json validation = io::validation_to_json(report);
  validation["generation"] = generation_summary(model, hours, config.seed, sigma_source);
  io::write_text_atomic(guard.path(dir / "validation.json"), validation.dump(2) + "\n");
  return validation;
}

int run_command(const char* name, const std::function<void()>& body) {
  try {
    body();
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "celltide %s: error: %s\n", name, e.what());
    return 1;
  }
}

} // namespace

int cmd_ingest(const RunConfig& config) {
  return run_command("ingest", [&] {
    OutputGuard guard;
    guard.protect(config.input_path);
    const auto datasets = load_datasets(config);
    const fs::path out_dir = config.out_dir;

    json summary;
    summary["input"] = config.input_path;
    summary["regions"] = json::array();
    for (const auto& [label, ds] : datasets) {
      const fs::path path = out_dir / sanitize_label(label) / "dataset.json";
      io::write_text_atomic(guard.path(path), io::dataset_to_json(ds).dump(2) + "\n");
      if (ds.stations.empty())
        log_warn("region '" + label + "' contains no stations");
      summary["regions"].push_back({{"label", label},
                                    {"stations", ds.stations.size()},
                                    {"hours", ds.hours},
                                    {"missing_cell_fraction", missing_fraction(ds)},
                                    {"path", path.string()}});
      log_info("wrote " + path.string() + " (" + std::to_string(ds.stations.size()) +
               " stations, " + std::to_string(ds.hours) + " hours)");
    }
    io::write_text_atomic(guard.path(out_dir / "ingest_summary.json"),
                          summary.dump(2) + "\n");
  });
}

int cmd_fit_temporal(const RunConfig& config) {
  return run_command("fit-temporal", [&] {
    OutputGuard guard;
    guard.protect(config.input_path);
    const auto datasets = load_datasets(config);
    const fs::path out_dir = config.out_dir;

    for (const auto& [label, ds] : datasets) {
      const fs::path dir = out_dir / sanitize_label(label);
      const auto fitted = fit_temporal_for(ds, config);
      io::write_text_atomic(guard.path(dir / "spectrum.csv"),
                            io::spectrum_to_csv(fitted.spectrum));
      io::write_text_atomic(
          guard.path(dir / "model.json"),
          io::model_to_json(fitted.report.model, config.scale, label).dump(2) + "\n");
      io::write_text_atomic(
          guard.path(dir / "fit_report.json"),
          io::fit_report_to_json(fitted.report, config.scale, label).dump(2) + "\n");
      std::ostringstream msg;
      msg << "region '" << label << "': " << fitted.report.model.components.size()
          << " components, R^2 = " << fitted.report.r_squared;
      log_info(msg.str());
    }
  });
}

int cmd_fit_spatial(const RunConfig& config) {
  return run_command("fit-spatial", [&] {
    OutputGuard guard;
    guard.protect(config.input_path);
    const auto datasets = load_datasets(config);
    const fs::path out_dir = config.out_dir;

    for (const auto& [label, ds] : datasets) {
      const fs::path dir = out_dir / sanitize_label(label);
      const auto partition = spatial::detect_hotspots(ds.stations, config.hotspot_radius_m);
      io::write_text_atomic(guard.path(dir / "hotspots.json"),
                            io::partition_to_json(partition, config.hotspot_radius_m).dump(2) +
                                "\n");
      for (const auto& variant : spatial_variants(config)) {
        const auto sample =
            scaled_sample(ds, variant.hours, config.scale, variant.include, &partition);
        const auto params = spatial::fit_lognormal(sample);
        io::write_text_atomic(
            guard.path(dir / ("spatial_" + variant.name + ".json")),
            io::lognormal_to_json(params, sample, config.scale).dump(2) + "\n");
        const auto table = spatial::empirical_vs_model(sample, params, config.n_bins);
        io::write_text_atomic(guard.path(dir / ("comparison_" + variant.name + ".csv")),
                              io::comparison_to_csv(table));
        log_info("region '" + label + "' " + variant.name + ": mu = " +
                 std::to_string(params.mu) + ", sigma = " + std::to_string(params.sigma));
      }
    }
  });
}

int cmd_hotspots(const RunConfig& config) {
  return run_command("hotspots", [&] {
    OutputGuard guard;
    guard.protect(config.input_path);
    const auto datasets = load_datasets(config);
    const fs::path out_dir = config.out_dir;

    for (const auto& [label, ds] : datasets) {
      const auto partition = spatial::detect_hotspots(ds.stations, config.hotspot_radius_m);
      const fs::path path = out_dir / sanitize_label(label) / "hotspots.json";
      io::write_text_atomic(guard.path(path),
                            io::partition_to_json(partition, config.hotspot_radius_m).dump(2) +
                                "\n");
      log_info("region '" + label + "': " + std::to_string(partition.clusters.size()) +
               " clusters, " + std::to_string(partition.hotspot_ids.size()) +
               " hotspot stations");
    }
  });
}

int cmd_generate(const RunConfig& config) {
  return run_command("generate", [&] {
    const std::string model_path =
        !config.model_path.empty() ? config.model_path : config.input_path;
    if (model_path.empty())
      throw std::runtime_error("generate needs a temporal model JSON (--input)");
    if (!fs::exists(model_path))
      throw std::runtime_error("model file not found: " + model_path);

    const auto sigma = resolve_sigma(config);
    if (sigma.source.empty())
      throw std::runtime_error("generate needs --sigma or --region-preset");

    OutputGuard guard;
    guard.protect(model_path);
    const auto file = io::model_from_json(json::parse(io::read_text(model_path)));
    const std::string label = !file.region_label.empty() ? file.region_label
                              : !config.region_preset.empty() ? config.region_preset
                                                              : "generated";
    const std::size_t hours = config.hours_count.value_or(504);
    const std::size_t n = config.n_stations.value_or(100);
    const auto model = stgen::make_st_model(file.model, sigma.sigma, n, label, hours);

    const fs::path dir = fs::path(config.out_dir) / sanitize_label(label);
    const json validation =
        run_generation(model, hours, file.scale, config, dir, guard, sigma.source);
    log_info("region '" + label + "': generated " + std::to_string(hours) + "x" +
             std::to_string(n) + " values, nrmse = " +
             validation["nrmse_mean_profile"].dump());
  });
}

int cmd_pipeline(const RunConfig& config) {
  return run_command("pipeline", [&] {
    OutputGuard guard;
    guard.protect(config.input_path);
    const auto datasets = load_datasets(config);
    const fs::path out_dir = config.out_dir;

    json pipeline_summary;
    pipeline_summary["regions"] = json::array();

    json ingest_summary;
    ingest_summary["input"] = config.input_path;
    ingest_summary["regions"] = json::array();

    for (const auto& [label, ds] : datasets) {
      const fs::path dir = out_dir / sanitize_label(label);
      io::write_text_atomic(guard.path(dir / "dataset.json"),
                            io::dataset_to_json(ds).dump(2) + "\n");
      ingest_summary["regions"].push_back({{"label", label},
                                           {"stations", ds.stations.size()},
                                           {"hours", ds.hours},
                                           {"missing_cell_fraction", missing_fraction(ds)}});

      if (ds.stations.empty() || ds.hours < 4) {
        log_warn("region '" + label + "' skipped: too little data");
        pipeline_summary["regions"].push_back({{"label", label}, {"skipped", true}});
        continue;
      }

      // Temporal fit.
      const auto fitted = fit_temporal_for(ds, config);
      io::write_text_atomic(guard.path(dir / "spectrum.csv"),
                            io::spectrum_to_csv(fitted.spectrum));
      io::write_text_atomic(
          guard.path(dir / "model.json"),
          io::model_to_json(fitted.report.model, config.scale, label).dump(2) + "\n");
      io::write_text_atomic(
          guard.path(dir / "fit_report.json"),
          io::fit_report_to_json(fitted.report, config.scale, label).dump(2) + "\n");

      // Spatial fits; keep the busy all-stations sigma as a fallback for
      // generation.
      const auto partition = spatial::detect_hotspots(ds.stations, config.hotspot_radius_m);
      io::write_text_atomic(guard.path(dir / "hotspots.json"),
                            io::partition_to_json(partition, config.hotspot_radius_m).dump(2) +
                                "\n");
      std::optional<double> fitted_sigma;
      for (const auto& variant : spatial_variants(config)) {
        const auto sample =
            scaled_sample(ds, variant.hours, config.scale, variant.include, &partition);
        const auto params = spatial::fit_lognormal(sample);
        if (variant.include == spatial::StationFilter::kAll &&
            (!fitted_sigma || variant.name == "all_busy"))
          fitted_sigma = params.sigma;
        io::write_text_atomic(
            guard.path(dir / ("spatial_" + variant.name + ".json")),
            io::lognormal_to_json(params, sample, config.scale).dump(2) + "\n");
        io::write_text_atomic(
            guard.path(dir / ("comparison_" + variant.name + ".csv")),
            io::comparison_to_csv(spatial::empirical_vs_model(sample, params, config.n_bins)));
      }

      // Generate from the fitted model and check self-consistency.
      auto sigma = resolve_sigma(config);
      if (sigma.source.empty()) {
        if (!fitted_sigma) throw std::runtime_error("no sigma available for generation");
        sigma = {*fitted_sigma, "fitted:all_busy"};
      }
      const std::size_t hours = config.hours_count.value_or(ds.hours);
      const std::size_t n = config.n_stations.value_or(ds.stations.size());
      const auto model =
          stgen::make_st_model(fitted.report.model, sigma.sigma, n, label, hours);
      const json validation =
          run_generation(model, hours, config.scale, config, dir, guard, sigma.source);

      // Self-consistency: the generated data should show the same dominant
      // frequencies the fit used.
      std::set<double> fitted_freqs;
      for (const auto& c : fitted.report.model.components) fitted_freqs.insert(c.omega);
      std::set<double> recovered;
      for (const auto& c : validation["dominant_frequencies"])
        recovered.insert(c["frequency_rad_per_hour"].get<double>());
      const bool match = fitted_freqs == recovered;

      json region_report{{"label", label},
                         {"skipped", false},
                         {"fit", {{"r_squared", fitted.report.r_squared},
                                  {"n_components", fitted.report.model.components.size()}}},
                         {"validation", validation},
                         {"frequencies_match", match}};
      io::write_text_atomic(guard.path(dir / "pipeline_report.json"),
                            region_report.dump(2) + "\n");
      pipeline_summary["regions"].push_back(region_report);
      log_info("region '" + label + "': pipeline complete, frequencies_match = " +
               std::string(match ? "true" : "false"));
    }

    io::write_text_atomic(guard.path(out_dir / "ingest_summary.json"),
                          ingest_summary.dump(2) + "\n");
    io::write_text_atomic(guard.path(out_dir / "pipeline_summary.json"),
                          pipeline_summary.dump(2) + "\n");
  });
}

} // namespace celltide::cli
