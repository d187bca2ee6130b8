#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"

namespace {

using celltide::cli::RunConfig;

struct Flags {
  std::optional<std::string> config;
  std::optional<std::string> input;
  std::optional<std::string> out;
  std::optional<std::string> region;
  std::optional<std::string> frequencies;
  std::optional<std::string> hours;
  std::optional<std::string> region_preset;
  std::optional<double> min_gain;
  std::optional<double> radius_m;
  std::optional<double> sigma;
  std::optional<double> scale;
  std::optional<int> n_stations;
  std::optional<int> hours_count;
  std::optional<std::uint64_t> seed;
  std::optional<int> bins;
};

void add_flags(CLI::App* sub, Flags& flags) {
  sub->add_option("--config", flags.config, "Config JSON; flags override its fields");
  sub->add_option("--input", flags.input, "Input file (raw log, dataset JSON or model JSON)");
  sub->add_option("--out", flags.out, "Output directory");
  sub->add_option("--region", flags.region, "Restrict to one region label");
  sub->add_option("--frequencies", flags.frequencies,
                  "Comma list overriding spectral selection, e.g. pi/12,pi/6");
  sub->add_option("--min-gain", flags.min_gain, "Minimum R^2 gain to add a component");
  sub->add_option("--hours", flags.hours,
                  "Comma list of hours of day for spatial fits (replaces spare/busy)");
  sub->add_option("--radius-m", flags.radius_m, "Hotspot clustering radius in meters");
  sub->add_option("--sigma", flags.sigma, "Lognormal sigma for generation");
  sub->add_option("--region-preset", flags.region_preset,
                  "Sigma preset: park, campus or cbd");
  sub->add_option("--n-stations", flags.n_stations, "Station count for generation");
  sub->add_option("--hours-count", flags.hours_count, "Hour count for generation");
  sub->add_option("--seed", flags.seed, "PRNG seed for generation");
  sub->add_option("--scale", flags.scale, "Bytes per traffic unit applied before fits");
  sub->add_option("--bins", flags.bins, "Histogram bins for spatial comparison tables");
}

RunConfig build_config(const Flags& flags) {
  RunConfig config;
  if (flags.config) config = celltide::cli::load_config(*flags.config);
  if (flags.input) config.input_path = *flags.input;
  if (flags.out) config.out_dir = *flags.out;
  if (flags.region) config.region_filter = *flags.region;
  if (flags.frequencies)
    config.frequencies = celltide::cli::parse_frequency_list(*flags.frequencies);
  if (flags.min_gain) config.min_gain = *flags.min_gain;
  if (flags.hours) config.custom_hours = celltide::cli::parse_hour_list(*flags.hours);
  if (flags.radius_m) config.hotspot_radius_m = *flags.radius_m;
  if (flags.sigma) config.sigma = *flags.sigma;
  if (flags.region_preset) config.region_preset = *flags.region_preset;
  if (flags.n_stations) {
    if (*flags.n_stations < 1) throw std::runtime_error("--n-stations must be >= 1");
    config.n_stations = static_cast<std::size_t>(*flags.n_stations);
  }
  if (flags.hours_count) {
    if (*flags.hours_count < 1) throw std::runtime_error("--hours-count must be >= 1");
    config.hours_count = static_cast<std::size_t>(*flags.hours_count);
  }
  if (flags.seed) config.seed = *flags.seed;
  if (flags.scale) config.scale = *flags.scale;
  if (flags.bins) config.n_bins = *flags.bins;
  return config;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"celltide: fit temporal (sinusoid superposition) and spatial (lognormal) "
               "models to per-base-station traffic logs and synthesize traffic from them"};
  app.require_subcommand(1);

  Flags flags;
  int (*command)(const RunConfig&) = nullptr;

  const struct {
    const char* name;
    const char* help;
    int (*fn)(const RunConfig&);
  } subcommands[] = {
      {"ingest", "Parse a raw log and write per-region hourly datasets", celltide::cli::cmd_ingest},
      {"fit-temporal", "Spectrum, dominant components and sinusoid fit per region",
       celltide::cli::cmd_fit_temporal},
      {"fit-spatial", "Lognormal spatial fits (all/hotspot-free, spare/busy hours)",
       celltide::cli::cmd_fit_spatial},
      {"hotspots", "Detect hotspot station clusters", celltide::cli::cmd_hotspots},
      {"generate", "Synthesize traffic from a temporal model and sigma",
       celltide::cli::cmd_generate},
      {"pipeline", "Ingest, fit, generate and self-check in one run",
       celltide::cli::cmd_pipeline},
  };
  for (const auto& sc : subcommands) {
    auto* sub = app.add_subcommand(sc.name, sc.help);
    add_flags(sub, flags);
    sub->callback([&flags, &command, fn = sc.fn] { command = fn; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    return command(build_config(flags));
  } catch (const std::exception& e) {
    std::fprintf(stderr, "celltide: error: %s\n", e.what());
    return 1;
  }
}
