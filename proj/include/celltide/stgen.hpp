#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "celltide/spatial.hpp"
#include "celltide/spectral.hpp"
#include "celltide/temporal.hpp"

namespace celltide::stgen {

/// Spatial-temporal generator model: a region's sinusoid superposition
/// model plus the spatial sigma and station count. Construction checks
/// that the per-station mean profile stays positive over the declared
/// horizon, so a bad temporal model fails fast instead of at draw time.
struct STModel {
  temporal::SinusoidModel temporal;
  double sigma = 1.0;
  std::size_t n_stations = 1;
  std::string region_label;
  std::size_t horizon_hours = 0;
};

STModel make_st_model(temporal::SinusoidModel temporal_model, double sigma,
                      std::size_t n_stations, std::string region_label,
                      std::size_t horizon_hours);

/// Per-station mean traffic at hour t: the regional model divided by the
/// station count.
double mean_profile(const STModel& model, double t);

/// mu(t) = ln m - sigma^2/2, so the analytic mean of
/// lognormal(mu, sigma) equals m exactly. Throws for m <= 0.
double mu_of_t(double m, double sigma);

/// Lognormal parameters from a target mean and variance:
///   mu = ln(m^2 / sqrt(v + m^2)),  sigma = sqrt(ln(v/m^2 + 1)).
spatial::LognormalParams moment_match(double m, double v);

/// Standard-normal quantile (Wichura's AS 241, double precision).
/// Requires p in (0, 1).
double normal_quantile(double p);

/// One standard-normal draw consuming exactly one engine output, mapped
/// through the quantile function. This pins the value for a given engine
/// state on every platform, unlike std::normal_distribution.
double standard_normal(std::mt19937_64& rng);

struct GeneratedTraffic {
  std::size_t hours = 0;
  std::size_t n_stations = 0;
  std::vector<double> values; // row-major hours x n_stations, all > 0
  std::uint64_t seed = 0;
  STModel model;

  double at(std::size_t t, std::size_t i) const { return values[t * n_stations + i]; }
};

/// Independent lognormal draws V_i(t) = exp(N(mu(t), sigma^2)). The draw
/// order is pinned row-major (t outer, station inner), one normal draw
/// per cell from mt19937_64 seeded with seed, so identical inputs give
/// bit-identical matrices.
GeneratedTraffic generate(const STModel& model, std::size_t hours, std::uint64_t seed);

struct ValidationReport {
  /// RMS over t of (empirical station mean(t) - m(t)), divided by the RMS
  /// of m(t).
  double nrmse_mean_profile = 0.0;
  spectral::ComponentSet dominant_frequencies;
};

/// Compare the generated data's hourly station mean against the driving
/// mean profile and recover its dominant frequency components.
ValidationReport validate(const GeneratedTraffic& gen,
                          const spectral::DominantOptions& options = {});

} // namespace celltide::stgen
