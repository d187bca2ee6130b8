#include "celltide/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace celltide::spectral {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Daily harmonics k*pi/12, k = 1..8 (periods 24h down to 3h). Spelled as
// explicit constants so callers comparing against pi/12 etc. get exact
// equality.
constexpr std::array<double, 8> kDailyHarmonics = {
    std::numbers::pi / 12.0,       std::numbers::pi / 6.0,
    std::numbers::pi / 4.0,        std::numbers::pi / 3.0,
    std::numbers::pi * 5.0 / 12.0, std::numbers::pi / 2.0,
    std::numbers::pi * 7.0 / 12.0, std::numbers::pi * 2.0 / 3.0};

} // namespace

AmplitudeSpectrum amplitude_spectrum(std::span<const double> series, bool detrend) {
  const std::size_t n = series.size();
  if (n < 4) throw std::invalid_argument("amplitude_spectrum needs at least 4 values");
  for (const double v : series)
    if (!std::isfinite(v))
      throw std::invalid_argument("amplitude_spectrum: non-finite value in series");

  double mean = 0.0;
  if (detrend) {
    for (const double v : series) mean += v;
    mean /= static_cast<double>(n);
  }

  AmplitudeSpectrum out;
  out.series_len = n;
  const std::size_t half = n / 2;
  out.bins.reserve(half);
  const double t_count = static_cast<double>(n);
  for (std::size_t k = 1; k <= half; ++k) {
    const double omega = kTwoPi * static_cast<double>(k) / t_count;
    double re = 0.0;
    double im = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double angle = omega * static_cast<double>(t);
      const double v = series[t] - mean;
      re += v * std::cos(angle);
      im -= v * std::sin(angle);
    }
    const double magnitude = std::hypot(re, im);
    // Nyquist bin (k = T/2 for even T) has no mirror image.
    const bool nyquist = (n % 2 == 0) && (k == half);
    out.bins.push_back({omega, (nyquist ? 1.0 : 2.0) * magnitude / t_count});
  }
  return out;
}

std::vector<double> fill_missing_linear(std::span<const std::optional<double>> series) {
  std::vector<double> out(series.size());
  std::ptrdiff_t prev = -1;
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (!series[i]) continue;
    const auto cur = static_cast<std::ptrdiff_t>(i);
    if (prev < 0) {
      std::fill(out.begin(), out.begin() + cur + 1, *series[i]);
    } else {
      const double lo = out[static_cast<std::size_t>(prev)];
      const double hi = *series[i];
      const double span_len = static_cast<double>(cur - prev);
      for (std::ptrdiff_t j = prev + 1; j <= cur; ++j)
        out[static_cast<std::size_t>(j)] =
            lo + (hi - lo) * static_cast<double>(j - prev) / span_len;
    }
    prev = cur;
  }
  if (prev < 0) throw std::invalid_argument("series has no present values");
  std::fill(out.begin() + prev + 1, out.end(), out[static_cast<std::size_t>(prev)]);
  return out;
}

ComponentSet dominant_components(const AmplitudeSpectrum& spectrum,
                                 const DominantOptions& options) {
  if (options.max_components < 1)
    throw std::invalid_argument("max_components must be >= 1");
  if (!(options.rel_threshold > 0.0) || options.rel_threshold > 1.0)
    throw std::invalid_argument("rel_threshold must be in (0, 1]");
  if (spectrum.bins.empty()) throw std::invalid_argument("empty spectrum");

  std::vector<Component> candidates;
  if (options.full_spectrum) {
    for (const auto& b : spectrum.bins) candidates.push_back({b.frequency, b.amplitude});
  } else {
    for (const double harmonic : kDailyHarmonics) {
      // Nearest bin by frequency; bins are ascending.
      std::size_t best = 0;
      double best_dist = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < spectrum.bins.size(); ++i) {
        const double d = std::abs(spectrum.bins[i].frequency - harmonic);
        if (d < best_dist) {
          best_dist = d;
          best = i;
        }
      }
      candidates.push_back({harmonic, spectrum.bins[best].amplitude});
    }
  }

  double max_amp = 0.0;
  for (const auto& c : candidates) max_amp = std::max(max_amp, c.amplitude);
  if (!(max_amp > 0.0)) throw std::runtime_error("no periodic content");

  std::erase_if(candidates, [&](const Component& c) {
    return c.amplitude < options.rel_threshold * max_amp;
  });
  std::sort(candidates.begin(), candidates.end(), [](const Component& a, const Component& b) {
    if (a.amplitude != b.amplitude) return a.amplitude > b.amplitude;
    return a.frequency < b.frequency;
  });
  if (candidates.size() > static_cast<std::size_t>(options.max_components))
    candidates.resize(static_cast<std::size_t>(options.max_components));
  std::sort(candidates.begin(), candidates.end(),
            [](const Component& a, const Component& b) { return a.frequency < b.frequency; });

  return ComponentSet{std::move(candidates)};
}

} // namespace celltide::spectral
