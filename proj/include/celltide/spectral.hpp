#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace celltide::spectral {

struct SpectrumBin {
  double frequency = 0.0; // radians/hour
  double amplitude = 0.0; // same units as the input series
};

/// One-sided amplitude spectrum over bins k = 1 .. floor(T/2), frequency
/// k*2*pi/T. Amplitudes are scaled so a pure sinusoid of amplitude A on
/// the DFT grid shows up as A at its bin (2|X_k|/T, halved at the Nyquist
/// bin when T is even).
struct AmplitudeSpectrum {
  std::size_t series_len = 0;
  std::vector<SpectrumBin> bins;
};

/// DFT of an equally-spaced hourly series, optionally mean-subtracted.
/// Requires T >= 4 and all values finite.
AmplitudeSpectrum amplitude_spectrum(std::span<const double> series, bool detrend = true);

/// Fill absent hours by linear interpolation between the nearest present
/// neighbours; leading/trailing gaps copy the nearest present value.
/// Throws if no value is present at all.
std::vector<double> fill_missing_linear(std::span<const std::optional<double>> series);

struct Component {
  double frequency = 0.0; // radians/hour
  double amplitude = 0.0;
};

/// Selected periodic components, distinct frequencies in ascending order.
struct ComponentSet {
  std::vector<Component> components;
};

struct DominantOptions {
  int max_components = 3;
  double rel_threshold = 0.15;
  /// When false (default), candidates are the daily harmonics k*pi/12 for
  /// k = 1..8, each matched to its nearest spectrum bin; this suppresses
  /// leakage false-positives. When true every bin is a candidate.
  bool full_spectrum = false;
};

/// Pick the dominant components: candidates with amplitude at least
/// rel_threshold times the largest candidate amplitude, ranked by
/// amplitude (lower frequency wins ties), truncated to max_components.
/// Throws "no periodic content" when every candidate amplitude is zero.
ComponentSet dominant_components(const AmplitudeSpectrum& spectrum,
                                 const DominantOptions& options = {});

} // namespace celltide::spectral
