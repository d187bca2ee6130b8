#include "celltide/temporal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace celltide::temporal {

namespace {

// Householder QR least squares for the small dense systems produced by
// fit(): n rows, p = 2m+1 columns with m rarely above 8. The reflector
// vectors live below the diagonal of a, R above it, R's diagonal in
// r_diag.
std::vector<double> solve_least_squares(std::vector<double>& a, std::vector<double>& y,
                                        std::size_t n, std::size_t p) {
  std::vector<double> r_diag(p);
  for (std::size_t k = 0; k < p; ++k) {
    double nrm = 0.0;
    for (std::size_t i = k; i < n; ++i) nrm = std::hypot(nrm, a[i * p + k]);
    if (nrm == 0.0) throw std::runtime_error("rank-deficient design matrix");
    if (a[k * p + k] < 0.0) nrm = -nrm;
    for (std::size_t i = k; i < n; ++i) a[i * p + k] /= nrm;
    a[k * p + k] += 1.0;

    for (std::size_t j = k + 1; j < p; ++j) {
      double s = 0.0;
      for (std::size_t i = k; i < n; ++i) s += a[i * p + k] * a[i * p + j];
      s = -s / a[k * p + k];
      for (std::size_t i = k; i < n; ++i) a[i * p + j] += s * a[i * p + k];
    }
    double s = 0.0;
    for (std::size_t i = k; i < n; ++i) s += a[i * p + k] * y[i];
    s = -s / a[k * p + k];
    for (std::size_t i = k; i < n; ++i) y[i] += s * a[i * p + k];
    r_diag[k] = -nrm;
  }

  double max_diag = 0.0;
  for (const double d : r_diag) max_diag = std::max(max_diag, std::abs(d));
  for (const double d : r_diag)
    if (std::abs(d) < 1e-10 * max_diag)
      throw std::runtime_error("rank-deficient design matrix");

  std::vector<double> coef(p);
  for (std::size_t kk = p; kk-- > 0;) {
    double s = y[kk];
    for (std::size_t j = kk + 1; j < p; ++j) s -= a[kk * p + j] * coef[j];
    coef[kk] = s / r_diag[kk];
  }
  return coef;
}

} // namespace

double evaluate(const SinusoidModel& model, double t) {
  double v = model.a0;
  for (const auto& c : model.components)
    v += c.amplitude * std::sin(c.omega * t + c.phase);
  return v;
}

SinusoidComponent canonical_component(double omega, double sin_coef, double cos_coef) {
  SinusoidComponent c;
  c.omega = omega;
  c.amplitude = std::hypot(sin_coef, cos_coef);
  c.phase = std::atan2(cos_coef, sin_coef);
  if (c.phase <= -std::numbers::pi) c.phase = std::numbers::pi;
  return c;
}

FitReport fit(std::span<const HourPoint> points, std::span<const double> omegas) {
  std::vector<double> freqs(omegas.begin(), omegas.end());
  std::sort(freqs.begin(), freqs.end());
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    if (freqs[i] == 0.0) throw std::invalid_argument("fit frequencies must be nonzero");
    if (i > 0 && freqs[i] == freqs[i - 1])
      throw std::invalid_argument("fit frequencies must be distinct");
  }

  const std::size_t n = points.size();
  const std::size_t p = 2 * freqs.size() + 1;
  if (n < p)
    throw std::invalid_argument("fit needs at least 2*|frequencies| + 1 points");

  std::vector<double> a(n * p);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i * p] = 1.0;
    for (std::size_t j = 0; j < freqs.size(); ++j) {
      const double angle = freqs[j] * points[i].t;
      a[i * p + 1 + 2 * j] = std::sin(angle);
      a[i * p + 2 + 2 * j] = std::cos(angle);
    }
    y[i] = points[i].value;
  }
  auto a_work = a;
  auto y_work = y;
  const auto coef = solve_least_squares(a_work, y_work, n, p);

  FitReport report;
  report.model.a0 = coef[0];
  for (std::size_t j = 0; j < freqs.size(); ++j)
    report.model.components.push_back(
        canonical_component(freqs[j], coef[1 + 2 * j], coef[2 + 2 * j]));
  report.n_points = n;

  double y_mean = 0.0;
  for (const double v : y) y_mean += v;
  y_mean /= static_cast<double>(n);
  double ssr = 0.0;
  double sse = 0.0;
  double sst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double fitted = 0.0;
    for (std::size_t j = 0; j < p; ++j) fitted += a[i * p + j] * coef[j];
    ssr += (fitted - y_mean) * (fitted - y_mean);
    sse += (y[i] - fitted) * (y[i] - fitted);
    sst += (y[i] - y_mean) * (y[i] - y_mean);
  }
  // Constant data is fit exactly by the intercept; report R^2 = 1 there
  // rather than 0/0.
  report.r_squared = sst > 0.0 ? ssr / sst : 1.0;
  report.residual_rms = std::sqrt(sse / static_cast<double>(n));
  return report;
}

FitReport fit(std::span<const HourPoint> points, const spectral::ComponentSet& frequencies) {
  std::vector<double> omegas;
  omegas.reserve(frequencies.components.size());
  for (const auto& c : frequencies.components) omegas.push_back(c.frequency);
  return fit(points, omegas);
}

double r_squared(std::span<const double> fitted, std::span<const double> original) {
  if (fitted.size() != original.size())
    throw std::invalid_argument("r_squared: length mismatch");
  const std::size_t n = original.size();
  if (n < 2) throw std::invalid_argument("r_squared needs at least 2 points");

  double y_mean = 0.0;
  for (const double v : original) y_mean += v;
  y_mean /= static_cast<double>(n);

  double ssr = 0.0;
  double sst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ssr += (fitted[i] - y_mean) * (fitted[i] - y_mean);
    sst += (original[i] - y_mean) * (original[i] - y_mean);
  }
  if (sst == 0.0) throw std::invalid_argument("r_squared undefined for constant data");
  return ssr / sst;
}

FitReport select_order(std::span<const HourPoint> points,
                       const spectral::ComponentSet& candidates, double min_gain) {
  if (candidates.components.empty())
    throw std::invalid_argument("select_order needs at least one candidate");

  auto ordered = candidates.components;
  std::sort(ordered.begin(), ordered.end(),
            [](const spectral::Component& a, const spectral::Component& b) {
              if (a.amplitude != b.amplitude) return a.amplitude > b.amplitude;
              return a.frequency < b.frequency;
            });

  std::vector<double> omegas{ordered.front().frequency};
  FitReport best = fit(points, omegas);
  for (std::size_t i = 1; i < ordered.size(); ++i) {
    omegas.push_back(ordered[i].frequency);
    FitReport next = fit(points, omegas);
    if (next.r_squared - best.r_squared < min_gain) break;
    best = std::move(next);
  }
  return best;
}

std::vector<HourPoint> to_points(std::span<const std::optional<double>> series) {
  std::vector<HourPoint> out;
  for (std::size_t t = 0; t < series.size(); ++t)
    if (series[t]) out.push_back({static_cast<double>(t), *series[t]});
  return out;
}

} // namespace celltide::temporal
