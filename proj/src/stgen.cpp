#include "celltide/stgen.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace celltide::stgen {

STModel make_st_model(temporal::SinusoidModel temporal_model, double sigma,
                      std::size_t n_stations, std::string region_label,
                      std::size_t horizon_hours) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw std::invalid_argument("sigma must be positive and finite");
  if (n_stations < 1) throw std::invalid_argument("n_stations must be >= 1");
  if (horizon_hours < 1) throw std::invalid_argument("horizon_hours must be >= 1");

  STModel model{std::move(temporal_model), sigma, n_stations, std::move(region_label),
                horizon_hours};
  for (std::size_t t = 0; t < horizon_hours; ++t)
    if (!(mean_profile(model, static_cast<double>(t)) > 0.0))
      throw std::invalid_argument("mean profile non-positive at t = " + std::to_string(t));
  return model;
}

double mean_profile(const STModel& model, double t) {
  return temporal::evaluate(model.temporal, t) / static_cast<double>(model.n_stations);
}

double mu_of_t(double m, double sigma) {
  if (!(m > 0.0)) throw std::invalid_argument("mean profile non-positive");
  return std::log(m) - 0.5 * sigma * sigma;
}

spatial::LognormalParams moment_match(double m, double v) {
  if (!(m > 0.0)) throw std::invalid_argument("moment_match requires mean > 0");
  if (!(v > 0.0)) throw std::invalid_argument("moment_match requires variance > 0");
  return {std::log(m * m / std::sqrt(v + m * m)), std::sqrt(std::log(v / (m * m) + 1.0))};
}

double normal_quantile(double p) {
  // Wichura's algorithm AS 241, PPND16: maximum relative error about 1e-15.
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("normal_quantile requires p in (0, 1)");

  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                 6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
               1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
             1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
           (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                 3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
               5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
             4.2313330701600911252e1) * r + 1.0);
  }

  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    value = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
              4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
              2.05319162663775882187e0) * r + 1.0);
  } else {
    r -= 5.0;
    value = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
              5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
  }
  return q < 0.0 ? -value : value;
}

double standard_normal(std::mt19937_64& rng) {
  // 53-bit uniform shifted into the open interval (0, 1).
  const double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
  return normal_quantile(u);
}

GeneratedTraffic generate(const STModel& model, std::size_t hours, std::uint64_t seed) {
  if (hours < 1) throw std::invalid_argument("generate needs hours >= 1");

  GeneratedTraffic gen;
  gen.hours = hours;
  gen.n_stations = model.n_stations;
  gen.seed = seed;
  gen.model = model;
  gen.values.resize(hours * model.n_stations);

  std::mt19937_64 rng(seed);
  std::size_t cell = 0;
  for (std::size_t t = 0; t < hours; ++t) {
    const double mu = mu_of_t(mean_profile(model, static_cast<double>(t)), model.sigma);
    for (std::size_t i = 0; i < model.n_stations; ++i)
      gen.values[cell++] = std::exp(mu + model.sigma * standard_normal(rng));
  }
  return gen;
}

ValidationReport validate(const GeneratedTraffic& gen,
                          const spectral::DominantOptions& options) {
  if (gen.hours == 0 || gen.n_stations == 0)
    throw std::invalid_argument("validate: empty generated traffic");

  std::vector<double> mean_series(gen.hours);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t t = 0; t < gen.hours; ++t) {
    double sum = 0.0;
    for (std::size_t i = 0; i < gen.n_stations; ++i) sum += gen.at(t, i);
    mean_series[t] = sum / static_cast<double>(gen.n_stations);
    const double m = mean_profile(gen.model, static_cast<double>(t));
    num += (mean_series[t] - m) * (mean_series[t] - m);
    den += m * m;
  }

  ValidationReport report;
  report.nrmse_mean_profile = std::sqrt(num / den);
  report.dominant_frequencies =
      dominant_components(spectral::amplitude_spectrum(mean_series, true), options);
  return report;
}

} // namespace celltide::stgen
