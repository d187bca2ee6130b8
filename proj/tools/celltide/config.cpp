#include "config.hpp"

#include <cstdio>
#include <cstdlib>
#include <charconv>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "celltide/io.hpp"

namespace celltide::cli {

using nlohmann::json;

namespace {

void expect_keys(const json& j, std::initializer_list<const char*> allowed,
                 const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* k : allowed)
      if (key == k) ok = true;
    if (!ok) throw std::runtime_error("unknown config key '" + where + key + "'");
  }
}

std::vector<std::string> split_csv(const std::string& csv) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const std::size_t end = csv.find(',', start);
    const std::string token =
        csv.substr(start, end == std::string::npos ? std::string::npos : end - start);
    out.push_back(token);
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

} // namespace

void apply_config_json(RunConfig& config, const std::string& text) {
  const json j = json::parse(text);
  expect_keys(j, {"input", "out", "regions", "region", "aggregate", "schema", "spectral",
                  "fit", "spatial", "generate"},
              "");

  if (j.contains("input")) config.input_path = j["input"].get<std::string>();
  if (j.contains("out")) config.out_dir = j["out"].get<std::string>();
  if (j.contains("region")) config.region_filter = j["region"].get<std::string>();
  if (j.contains("aggregate")) {
    const auto mode = j["aggregate"].get<std::string>();
    if (mode == "total")
      config.aggregate_mode = ingest::Aggregate::kTotal;
    else if (mode == "mean")
      config.aggregate_mode = ingest::Aggregate::kMean;
    else
      throw std::runtime_error("aggregate must be 'total' or 'mean'");
  }
  if (j.contains("regions")) {
    config.regions.clear();
    for (const auto& r : j["regions"]) {
      expect_keys(r, {"label", "min_lon", "max_lon", "min_lat", "max_lat"}, "regions.");
      RegionSpec spec;
      spec.label = r.at("label").get<std::string>();
      spec.bounds.min_lon = r.at("min_lon").get<double>();
      spec.bounds.max_lon = r.at("max_lon").get<double>();
      spec.bounds.min_lat = r.at("min_lat").get<double>();
      spec.bounds.max_lat = r.at("max_lat").get<double>();
      config.regions.push_back(std::move(spec));
    }
  }
  if (j.contains("schema")) {
    const auto& s = j["schema"];
    expect_keys(s, {"timestamp", "station_id", "lon", "lat", "volume", "timestamp_format"},
                "schema.");
    if (s.contains("timestamp")) config.schema.timestamp = s["timestamp"];
    if (s.contains("station_id")) config.schema.station_id = s["station_id"];
    if (s.contains("lon")) config.schema.lon = s["lon"];
    if (s.contains("lat")) config.schema.lat = s["lat"];
    if (s.contains("volume")) config.schema.volume = s["volume"];
    if (s.contains("timestamp_format"))
      config.schema.timestamp_format = s["timestamp_format"];
  }
  if (j.contains("spectral")) {
    const auto& s = j["spectral"];
    expect_keys(s, {"detrend", "max_components", "rel_threshold"}, "spectral.");
    if (s.contains("detrend")) config.detrend = s["detrend"].get<bool>();
    if (s.contains("max_components")) config.max_components = s["max_components"].get<int>();
    if (s.contains("rel_threshold")) config.rel_threshold = s["rel_threshold"].get<double>();
  }
  if (j.contains("fit")) {
    const auto& f = j["fit"];
    expect_keys(f, {"min_gain", "scale", "frequencies"}, "fit.");
    if (f.contains("min_gain")) config.min_gain = f["min_gain"].get<double>();
    if (f.contains("scale")) config.scale = f["scale"].get<double>();
    if (f.contains("frequencies")) {
      config.frequencies.clear();
      for (const auto& v : f["frequencies"]) {
        if (v.is_string())
          config.frequencies.push_back(parse_frequency(v.get<std::string>()));
        else
          config.frequencies.push_back(v.get<double>());
      }
    }
  }
  if (j.contains("spatial")) {
    const auto& s = j["spatial"];
    expect_keys(s, {"spare_hours", "busy_hours", "hours", "radius_m", "bins"}, "spatial.");
    if (s.contains("spare_hours"))
      config.spare_hours = s["spare_hours"].get<std::vector<int>>();
    if (s.contains("busy_hours"))
      config.busy_hours = s["busy_hours"].get<std::vector<int>>();
    if (s.contains("hours")) config.custom_hours = s["hours"].get<std::vector<int>>();
    if (s.contains("radius_m")) config.hotspot_radius_m = s["radius_m"].get<double>();
    if (s.contains("bins")) config.n_bins = s["bins"].get<int>();
  }
  if (j.contains("generate")) {
    const auto& g = j["generate"];
    expect_keys(g, {"sigma", "region_preset", "n_stations", "hours_count", "seed", "model"},
                "generate.");
    if (g.contains("sigma") && !g["sigma"].is_null())
      config.sigma = g["sigma"].get<double>();
    if (g.contains("region_preset")) config.region_preset = g["region_preset"];
    if (g.contains("n_stations")) config.n_stations = g["n_stations"].get<std::size_t>();
    if (g.contains("hours_count")) config.hours_count = g["hours_count"].get<std::size_t>();
    if (g.contains("seed")) config.seed = g["seed"].get<std::uint64_t>();
    if (g.contains("model")) config.model_path = g["model"];
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  RunConfig config;
  apply_config_json(config, io::read_text(path));
  return config;
}

double parse_frequency(const std::string& token) {
  std::string s;
  for (const char c : token)
    if (c != ' ') s += c;
  if (s.empty()) throw std::runtime_error("empty frequency token");

  const std::size_t pi_pos = s.find("pi");
  if (pi_pos == std::string::npos) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
      throw std::runtime_error("cannot parse frequency '" + token + "'");
    return v;
  }

  double numerator = 1.0;
  if (pi_pos > 0) {
    std::string head = s.substr(0, pi_pos);
    if (head.back() == '*') head.pop_back();
    const auto [ptr, ec] = std::from_chars(head.data(), head.data() + head.size(), numerator);
    if (ec != std::errc{} || ptr != head.data() + head.size())
      throw std::runtime_error("cannot parse frequency '" + token + "'");
  }
  double denominator = 1.0;
  std::string tail = s.substr(pi_pos + 2);
  if (!tail.empty()) {
    if (tail.front() != '/')
      throw std::runtime_error("cannot parse frequency '" + token + "'");
    tail.erase(0, 1);
    const auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), denominator);
    if (ec != std::errc{} || ptr != tail.data() + tail.size() || denominator == 0.0)
      throw std::runtime_error("cannot parse frequency '" + token + "'");
  }
  return numerator * std::numbers::pi / denominator;
}

std::vector<double> parse_frequency_list(const std::string& csv) {
  std::vector<double> out;
  for (const auto& token : split_csv(csv))
    if (!token.empty()) out.push_back(parse_frequency(token));
  if (out.empty()) throw std::runtime_error("empty frequency list");
  return out;
}

std::vector<int> parse_hour_list(const std::string& csv) {
  std::vector<int> out;
  for (const auto& token : split_csv(csv)) {
    if (token.empty()) continue;
    int h = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), h);
    if (ec != std::errc{} || ptr != token.data() + token.size() || h < 0 || h > 23)
      throw std::runtime_error("bad hour '" + token + "' (expect 0-23)");
    out.push_back(h);
  }
  if (out.empty()) throw std::runtime_error("empty hour list");
  return out;
}

LogLevel log_level() {
  const char* env = std::getenv("CELLTIDE_LOG");
  if (env == nullptr) return LogLevel::kInfo;
  const std::string v = env;
  if (v == "quiet") return LogLevel::kQuiet;
  if (v == "debug") return LogLevel::kDebug;
  return LogLevel::kInfo;
}

void log_info(const std::string& message) {
  if (log_level() >= LogLevel::kInfo) std::fprintf(stderr, "[celltide] %s\n", message.c_str());
}

void log_debug(const std::string& message) {
  if (log_level() >= LogLevel::kDebug)
    std::fprintf(stderr, "[celltide:debug] %s\n", message.c_str());
}

void log_warn(const std::string& message) {
  if (log_level() >= LogLevel::kQuiet)
    std::fprintf(stderr, "[celltide:warn] %s\n", message.c_str());
}

} // namespace celltide::cli
