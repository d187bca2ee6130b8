#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "celltide/spectral.hpp"

namespace celltide::temporal {

struct SinusoidComponent {
  double omega = 0.0;     // radians/hour
  double amplitude = 0.0; // >= 0 (canonical form)
  double phase = 0.0;     // in (-pi, pi]
};

/// Mean level plus a superposition of sinusoids:
///   V(t) = a0 + sum_k amplitude_k * sin(omega_k * t + phase_k)
/// Components are kept canonical: non-negative amplitude, phase in
/// (-pi, pi], distinct omegas in ascending order.
struct SinusoidModel {
  double a0 = 0.0;
  std::vector<SinusoidComponent> components;
};

double evaluate(const SinusoidModel& model, double t);

/// Canonical (amplitude, phase) for s*sin(wt) + c*cos(wt).
SinusoidComponent canonical_component(double omega, double sin_coef, double cos_coef);

/// One sample of an hourly series: value at hour t.
struct HourPoint {
  double t = 0.0;
  double value = 0.0;
};

struct FitReport {
  SinusoidModel model;
  double r_squared = 0.0;
  double residual_rms = 0.0;
  std::size_t n_points = 0;
};

/// Ordinary least squares on the basis {1} u {sin(wt), cos(wt) per w}.
/// Frequencies must be distinct and nonzero; needs at least
/// 2*|omegas| + 1 points. Throws on a rank-deficient design matrix
/// (duplicated or aliased frequency).
FitReport fit(std::span<const HourPoint> points, std::span<const double> omegas);
FitReport fit(std::span<const HourPoint> points, const spectral::ComponentSet& frequencies);

/// R^2 = sum (yhat_i - ybar)^2 / sum (y_i - ybar)^2 with ybar the mean of
/// the original data; the denominator is the total sum of squares (the
/// SSR/SST form). Throws when y is constant (zero denominator).
double r_squared(std::span<const double> fitted, std::span<const double> original);

/// Grow the model one candidate at a time in descending spectrum-amplitude
/// order, stopping before the first addition that improves R^2 by less
/// than min_gain. Returns the last accepted fit.
FitReport select_order(std::span<const HourPoint> points,
                       const spectral::ComponentSet& candidates, double min_gain);

/// Hour-indexed series to fit points, skipping absent entries.
std::vector<HourPoint> to_points(std::span<const std::optional<double>> series);

} // namespace celltide::temporal
