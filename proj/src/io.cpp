#include "celltide/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace celltide::io {

using nlohmann::json;

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

} // namespace

json dataset_to_json(const ingest::HourlyDataset& ds) {
  json stations = json::array();
  for (const auto& s : ds.stations)
    stations.push_back({{"id", s.id}, {"lon", s.lon}, {"lat", s.lat}});
  json volumes = json::array();
  for (const auto& v : ds.volumes) {
    if (v)
      volumes.push_back(*v);
    else
      volumes.push_back(nullptr);
  }
  return json{{"epoch", format_civil(ds.epoch)},
              {"region_label", ds.region_label},
              {"hours", ds.hours},
              {"stations", std::move(stations)},
              {"volumes", std::move(volumes)}};
}

ingest::HourlyDataset dataset_from_json(const json& j) {
  ingest::HourlyDataset ds;
  ds.epoch = parse_civil_iso(j.at("epoch").get<std::string>());
  ds.region_label = j.at("region_label").get<std::string>();
  ds.hours = j.at("hours").get<std::size_t>();
  for (const auto& s : j.at("stations")) {
    ingest::Station st;
    st.id = s.at("id").get<std::string>();
    st.lon = s.at("lon").get<double>();
    st.lat = s.at("lat").get<double>();
    ds.stations.push_back(std::move(st));
  }
  const auto& volumes = j.at("volumes");
  if (volumes.size() != ds.hours * ds.stations.size())
    throw std::runtime_error("dataset volumes length does not match hours x stations");
  ds.volumes.reserve(volumes.size());
  for (const auto& v : volumes) {
    if (v.is_null()) {
      ds.volumes.emplace_back(std::nullopt);
    } else {
      const double value = v.get<double>();
      if (!std::isfinite(value) || value < 0.0)
        throw std::runtime_error("dataset volume must be finite and >= 0");
      ds.volumes.emplace_back(value);
    }
  }
  ingest::recompute_plane_frame(ds);
  return ds;
}

json model_to_json(const temporal::SinusoidModel& model, double scale,
                   const std::string& region_label) {
  json components = json::array();
  for (const auto& c : model.components)
    components.push_back({{"omega_rad_per_hour", c.omega},
                          {"amplitude", c.amplitude},
                          {"phase", c.phase}});
  return json{{"a0", model.a0},
              {"components", std::move(components)},
              {"scale", scale},
              {"region_label", region_label}};
}

ModelFile model_from_json(const json& j) {
  ModelFile file;
  file.model.a0 = j.at("a0").get<double>();
  for (const auto& c : j.at("components"))
    file.model.components.push_back({c.at("omega_rad_per_hour").get<double>(),
                                     c.at("amplitude").get<double>(),
                                     c.at("phase").get<double>()});
  file.scale = j.at("scale").get<double>();
  file.region_label = j.at("region_label").get<std::string>();
  return file;
}

json fit_report_to_json(const temporal::FitReport& report, double scale,
                        const std::string& region_label) {
  return json{{"model", model_to_json(report.model, scale, region_label)},
              {"r_squared", report.r_squared},
              {"residual_rms", report.residual_rms},
              {"n_points", report.n_points}};
}

json lognormal_to_json(const spatial::LognormalParams& params,
                       const spatial::SpatialSample& sample, double scale) {
  return json{{"mu", params.mu},
              {"sigma", params.sigma},
              {"provenance",
               {{"region_label", sample.provenance.region_label},
                {"hours_of_day", sample.provenance.hours_of_day},
                {"day_count", sample.provenance.day_count},
                {"station_count", sample.provenance.station_count}}},
              {"excluded_zero_count", sample.excluded_zero_count},
              {"sample_size", sample.values.size()},
              {"scale", scale}};
}

json partition_to_json(const spatial::HotspotPartition& partition, double radius_m) {
  json clusters = json::array();
  for (const auto& c : partition.clusters) clusters.push_back(c);
  return json{{"radius_m", radius_m},
              {"clusters", std::move(clusters)},
              {"hotspot_ids", partition.hotspot_ids},
              {"hotspot_count", partition.hotspot_ids.size()}};
}

json component_set_to_json(const spectral::ComponentSet& set) {
  json out = json::array();
  for (const auto& c : set.components)
    out.push_back({{"frequency_rad_per_hour", c.frequency}, {"amplitude", c.amplitude}});
  return out;
}

json validation_to_json(const stgen::ValidationReport& report) {
  return json{{"nrmse_mean_profile", report.nrmse_mean_profile},
              {"dominant_frequencies", component_set_to_json(report.dominant_frequencies)}};
}

std::string spectrum_to_csv(const spectral::AmplitudeSpectrum& spectrum) {
  std::string out = "frequency_rad_per_hour,amplitude\n";
  for (const auto& b : spectrum.bins) {
    out += format_double(b.frequency);
    out += ',';
    out += format_double(b.amplitude);
    out += '\n';
  }
  return out;
}

std::string comparison_to_csv(std::span<const spatial::DensityBin> bins) {
  std::string out = "bin_lo,bin_hi,empirical_density,model_density\n";
  for (const auto& b : bins) {
    out += format_double(b.lo);
    out += ',';
    out += format_double(b.hi);
    out += ',';
    out += format_double(b.empirical);
    out += ',';
    out += format_double(b.model);
    out += '\n';
  }
  return out;
}

std::string generated_to_csv(const stgen::GeneratedTraffic& gen) {
  std::string out = "hour,station_index,volume\n";
  char buf[96];
  for (std::size_t t = 0; t < gen.hours; ++t)
    for (std::size_t i = 0; i < gen.n_stations; ++i) {
      std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g\n", t, i, gen.at(t, i));
      out += buf;
    }
  return out;
}

ingest::HourlyDataset generated_to_dataset(const stgen::GeneratedTraffic& gen,
                                           double scale, const CivilTime& epoch) {
  ingest::HourlyDataset ds;
  ds.hours = gen.hours;
  ds.epoch = epoch;
  ds.region_label = gen.model.region_label;
  ds.stations.reserve(gen.n_stations);
  char buf[32];
  for (std::size_t i = 0; i < gen.n_stations; ++i) {
    std::snprintf(buf, sizeof buf, "gen_%zu", i);
    ds.stations.push_back({buf, 0.0, 0.0, 0.0, 0.0});
  }
  ds.volumes.reserve(gen.values.size());
  for (const double v : gen.values) ds.volumes.emplace_back(v * scale);
  ingest::recompute_plane_frame(ds);
  return ds;
}

void write_text_atomic(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

} // namespace celltide::io
