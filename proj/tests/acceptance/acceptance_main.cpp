// Acceptance suite: one pass/fail line per criterion, nonzero exit when
// any fails. Golden fixtures come from the four reference region models;
// every tolerance is pinned here in code.

#include <chrono>
#include <cstdlib>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "celltide/ingest.hpp"
#include "celltide/io.hpp"
#include "celltide/spatial.hpp"
#include "celltide/spectral.hpp"
#include "celltide/stgen.hpp"
#include "celltide/temporal.hpp"
#include "commands.hpp"
#include "config.hpp"
#include "../helpers.hpp"

using namespace celltide;
using testutil::kPi;

namespace {

int g_failures = 0;

class Criterion {
 public:
  Criterion(int number, std::string name) : number_(number), name_(std::move(name)) {
    start_ = std::chrono::steady_clock::now();
  }

  void require(bool ok, const std::string& what) {
    if (!ok) {
      failed_ = true;
      details_ += (details_.empty() ? "" : "; ") + what;
    }
  }
  void note(const std::string& what) {
    notes_ += (notes_.empty() ? "" : ", ") + what;
  }
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }
  void require_runtime(double limit_s) {
    const double t = elapsed();
    std::ostringstream msg;
    msg << "runtime " << t << "s (limit " << limit_s << "s)";
    if (t >= limit_s) {
      failed_ = true;
      details_ += (details_.empty() ? "" : "; ") + msg.str();
    } else {
      note(msg.str());
    }
  }

  ~Criterion() {
    if (failed_) ++g_failures;
    std::printf("[%s] %d. %s%s%s%s%s\n", failed_ ? "FAIL" : "PASS", number_, name_.c_str(),
                notes_.empty() ? "" : " — ", notes_.c_str(),
                details_.empty() ? "" : " — FAILED: ", details_.c_str());
    std::fflush(stdout);
  }

 private:
  int number_;
  std::string name_;
  std::string details_;
  std::string notes_;
  bool failed_ = false;
  std::chrono::steady_clock::time_point start_;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

temporal::FitReport spectrum_dominant_fit(const std::vector<double>& series,
                                          int max_components, double rel_threshold) {
  const auto spectrum = spectral::amplitude_spectrum(series, true);
  const auto candidates = spectral::dominant_components(
      spectrum, {max_components, rel_threshold, false});
  return temporal::fit(testutil::to_fit_points(series), candidates);
}

// ---------------------------------------------------------------------------

// Criterion 1: noisy whole-area round trip through spectrum -> dominant
// components -> linear fit, at 5% of a0 Gaussian noise.
void criterion_1() {
  Criterion c(1, "temporal round trip with 5% noise recovers the 3-component model");
  const auto truth = testutil::whole_area_model();
  auto series = testutil::sample_series(truth, 504);
  series = testutil::with_gaussian_noise(series, 0.05 * truth.a0, 11);

  const auto report = spectrum_dominant_fit(series, 3, 0.15);
  c.require(report.model.components.size() == 3,
            "expected 3 components, got " + std::to_string(report.model.components.size()));
  if (report.model.components.size() == 3) {
    c.require(report.model.components[0].omega == kPi / 12 &&
                  report.model.components[1].omega == kPi / 6 &&
                  report.model.components[2].omega == kPi / 4,
              "frequencies are not exactly {pi/12, pi/6, pi/4}");
    const double a0_err = std::abs(report.model.a0 - truth.a0) / truth.a0;
    c.require(a0_err <= 0.02, "a0 error " + fmt(a0_err) + " > 2%");
    double max_amp_err = 0.0;
    double max_phase_err = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      max_amp_err = std::max(max_amp_err,
                             std::abs(report.model.components[i].amplitude -
                                      truth.components[i].amplitude) /
                                 truth.components[i].amplitude);
      max_phase_err = std::max(max_phase_err,
                               std::abs(std::remainder(report.model.components[i].phase -
                                                           truth.components[i].phase,
                                                       2.0 * kPi)));
    }
    c.require(max_amp_err <= 0.05, "amplitude error " + fmt(max_amp_err) + " > 5%");
    c.require(max_phase_err <= 0.05,
              "phase error " + fmt(max_phase_err) + " rad > 0.05 rad");
    c.require(report.r_squared >= 0.94, "R^2 " + fmt(report.r_squared) + " < 0.94");
    c.note("a0 err " + fmt(a0_err) + ", max amp err " + fmt(max_amp_err) +
           ", max phase err " + fmt(max_phase_err) + " rad, R^2 " + fmt(report.r_squared));
  }
  c.require_runtime(1.0);
}

// Criterion 2: noise-free exactness for all four fixture models.
void criterion_2() {
  Criterion c(2, "noise-free round trips recover every fixture model to 1e-6");
  const std::vector<std::pair<const char*, temporal::SinusoidModel>> fixtures = {
      {"whole-area", testutil::whole_area_model()},
      {"park", testutil::park_model()},
      {"campus", testutil::campus_model()},
      {"cbd", testutil::cbd_model()},
  };
  for (const auto& [name, truth] : fixtures) {
    const auto series = testutil::sample_series(truth, 504);
    const auto report = spectrum_dominant_fit(series, 3, 0.15);
    const std::string tag(name);
    c.require(report.model.components.size() == truth.components.size(),
              tag + ": wrong model order");
    if (report.model.components.size() != truth.components.size()) continue;
    c.require(std::abs(report.model.a0 - truth.a0) <= 1e-6 * std::abs(truth.a0),
              tag + ": a0 off");
    for (std::size_t i = 0; i < truth.components.size(); ++i) {
      const auto& fitted = report.model.components[i];
      const auto& expected = truth.components[i];
      c.require(fitted.omega == expected.omega, tag + ": frequency mismatch");
      c.require(std::abs(fitted.amplitude - expected.amplitude) <=
                    1e-6 * expected.amplitude,
                tag + ": amplitude off");
      c.require(std::abs(fitted.phase - expected.phase) <=
                    1e-6 * std::max(1.0, std::abs(expected.phase)),
                tag + ": phase off");
    }
    c.require(std::abs(report.r_squared - 1.0) <= 1e-9, tag + ": R^2 not 1");
  }
}

// Criterion 3: order selection at 1% noise with candidates {pi/12, pi/6,
// pi/4} and min_gain 0.02.
void criterion_3() {
  Criterion c(3, "order selection picks 2 components for park/CBD, 3 for whole-area/campus");
  const std::vector<std::tuple<const char*, temporal::SinusoidModel, std::size_t>> cases = {
      {"park", testutil::park_model(), 2},
      {"cbd", testutil::cbd_model(), 2},
      {"whole-area", testutil::whole_area_model(), 3},
      {"campus", testutil::campus_model(), 3},
  };
  std::uint64_t seed = 33;
  for (const auto& [name, truth, expected_order] : cases) {
    auto series = testutil::sample_series(truth, 504);
    series = testutil::with_gaussian_noise(series, 0.01 * truth.a0, seed++);
    const auto spectrum = spectral::amplitude_spectrum(series, true);

    // Fixed candidate set: the three daily harmonics with their measured
    // spectrum amplitudes.
    spectral::ComponentSet candidates;
    for (const double harmonic : {kPi / 12, kPi / 6, kPi / 4}) {
      double amplitude = 0.0;
      double best = std::numeric_limits<double>::infinity();
      for (const auto& bin : spectrum.bins)
        if (std::abs(bin.frequency - harmonic) < best) {
          best = std::abs(bin.frequency - harmonic);
          amplitude = bin.amplitude;
        }
      candidates.components.push_back({harmonic, amplitude});
    }

    const auto report =
        temporal::select_order(testutil::to_fit_points(series), candidates, 0.02);
    c.require(report.model.components.size() == expected_order,
              std::string(name) + ": selected " +
                  std::to_string(report.model.components.size()) + " instead of " +
                  std::to_string(expected_order));
  }
}

// Criterion 4: lognormal MLE recovery from 1e5 draws for each Table sigma.
void criterion_4() {
  Criterion c(4, "lognormal MLE recovers (mu, sigma) from 1e5 draws within 0.03");
  std::uint64_t seed = 404;
  for (const double sigma : {2.8, 1.3, 3.6}) {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(seed++);
    std::vector<double> values(100'000);
    for (auto& v : values) v = std::exp(2.0 + sigma * stgen::standard_normal(rng));
    const auto params = spatial::fit_lognormal(values);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.require(std::abs(params.mu - 2.0) <= 0.03,
              "sigma=" + fmt(sigma) + ": mu error " + fmt(std::abs(params.mu - 2.0)));
    c.require(std::abs(params.sigma - sigma) <= 0.03,
              "sigma=" + fmt(sigma) + ": sigma error " + fmt(std::abs(params.sigma - sigma)));
    c.require(secs < 1.0, "sigma=" + fmt(sigma) + " took " + fmt(secs) + "s (limit 1s)");
  }
}

// Criterion 5: the Eq (9)-(11) identities at machine-level tolerances.
void criterion_5() {
  Criterion c(5, "moment matching and mu(t) identities hold to 1e-10 / 1e-12");
  std::mt19937_64 rng(505);
  std::uniform_real_distribution<double> value(0.01, 100.0);
  std::uniform_real_distribution<double> sigma_dist(0.05, 3.6);
  double worst_mm = 0.0;
  double worst_mu = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double m = value(rng);
    const double v = value(rng);
    const auto p = stgen::moment_match(m, v);
    const double mean_back = std::exp(p.mu + 0.5 * p.sigma * p.sigma);
    const double var_back =
        (std::exp(p.sigma * p.sigma) - 1.0) * std::exp(2.0 * p.mu + p.sigma * p.sigma);
    worst_mm = std::max(worst_mm, std::abs(mean_back - m) / m);
    worst_mm = std::max(worst_mm, std::abs(var_back - v) / v);

    const double s = sigma_dist(rng);
    const double mu = stgen::mu_of_t(m, s);
    worst_mu = std::max(worst_mu, std::abs(std::exp(mu + 0.5 * s * s) - m) / m);
  }
  c.require(worst_mm <= 1e-10, "moment_match worst error " + fmt(worst_mm));
  c.require(worst_mu <= 1e-12, "mu_of_t worst error " + fmt(worst_mu));
  c.note("worst moment_match err " + fmt(worst_mm) + ", worst mu_of_t err " + fmt(worst_mu));
  c.require_runtime(0.1);
}

// Criterion 6: park S-T generation validates under the CLT band and shows
// the park frequency pair. The 5.5% figure in the source material is tied
// to its own (unpublished) normalization and is not a target here.
void criterion_6() {
  Criterion c(6, "park S-T model (sigma 1.3, N=1e4, T=504) validates to nrmse < 0.05");
  const auto model = stgen::make_st_model(testutil::park_model(), 1.3, 10'000, "park", 504);
  const auto gen = stgen::generate(model, 504, 20120903);
  const auto report = stgen::validate(gen);
  c.require(report.nrmse_mean_profile < 0.05,
            "nrmse " + fmt(report.nrmse_mean_profile) + " >= 0.05");
  std::set<double> recovered;
  for (const auto& comp : report.dominant_frequencies.components)
    recovered.insert(comp.frequency);
  c.require(recovered == std::set<double>{kPi / 12, kPi / 6},
            "dominant frequencies are not {pi/12, pi/6}");
  c.note("nrmse " + fmt(report.nrmse_mean_profile));
  c.require_runtime(5.0);
}

// Criterion 7: union-find clustering equals brute-force edge enumeration
// plus transitive closure on random layouts, with strict-boundary pairs.
void criterion_7() {
  Criterion c(7, "hotspot detection matches the brute-force closure oracle exactly");
  const double meters_per_deg = ingest::kEarthRadiusM * kPi / 180.0;
  std::mt19937_64 rng(707);
  // Up to 98 random stations + the injected boundary pair = 100 total.
  std::uniform_int_distribution<std::size_t> count(2, 98);
  std::uniform_real_distribution<double> offset(0.0, 2000.0);

  bool all_equal = true;
  for (int layout = 0; layout < 100; ++layout) {
    std::vector<ingest::Station> stations;
    const std::size_t n = count(rng);
    for (std::size_t i = 0; i < n; ++i)
      stations.push_back({"S" + std::to_string(i),
                          118.75 + offset(rng) / (meters_per_deg * std::cos(32.05 * kPi / 180.0)),
                          32.05 + offset(rng) / meters_per_deg, 0.0, 0.0});
    // A nominally-exact 150 m pair exercises the strict boundary.
    stations.push_back({"B0", 118.76, 32.058, 0.0, 0.0});
    stations.push_back({"B1", 118.76, 32.058 + 150.0 / meters_per_deg, 0.0, 0.0});

    const auto partition = spatial::detect_hotspots(stations, 150.0);

    // Oracle: explicit edge list, then BFS transitive closure.
    const std::size_t total = stations.size();
    std::vector<std::vector<std::size_t>> adj(total);
    for (std::size_t i = 0; i < total; ++i)
      for (std::size_t j = i + 1; j < total; ++j)
        if (spatial::haversine_m(stations[i].lat, stations[i].lon, stations[j].lat,
                                 stations[j].lon) < 150.0) {
          adj[i].push_back(j);
          adj[j].push_back(i);
        }
    std::set<std::set<std::string>> oracle;
    std::vector<bool> seen(total, false);
    for (std::size_t i = 0; i < total; ++i) {
      if (seen[i]) continue;
      std::set<std::string> cluster;
      std::vector<std::size_t> queue{i};
      seen[i] = true;
      while (!queue.empty()) {
        const std::size_t cur = queue.back();
        queue.pop_back();
        cluster.insert(stations[cur].id);
        for (const std::size_t next : adj[cur])
          if (!seen[next]) {
            seen[next] = true;
            queue.push_back(next);
          }
      }
      oracle.insert(std::move(cluster));
    }
    std::set<std::set<std::string>> ours;
    for (const auto& cluster : partition.clusters)
      ours.insert(std::set<std::string>(cluster.begin(), cluster.end()));
    if (ours != oracle) all_equal = false;
  }
  c.require(all_equal, "a layout diverged from the oracle");

  // Pinned boundary semantics: clustering happens iff distance < 150.
  for (const double nominal : {149.999, 150.001}) {
    const std::vector<ingest::Station> pair = {
        {"A", 118.75, 32.05, 0.0, 0.0},
        {"B", 118.75, 32.05 + nominal / meters_per_deg, 0.0, 0.0}};
    const double d =
        spatial::haversine_m(pair[0].lat, pair[0].lon, pair[1].lat, pair[1].lon);
    const auto partition = spatial::detect_hotspots(pair, 150.0);
    c.require((partition.hotspot_ids.size() == 2) == (d < 150.0),
              "boundary case at " + fmt(d) + " m misclassified");
  }
}

// Criterion 8: cmd_generate determinism at the file level.
void criterion_8() {
  Criterion c(8, "cmd_generate is byte-deterministic per seed and varies across seeds");
  testutil::TempDir dir("acc8");
  const auto model_path = dir.path() / "model.json";
  io::write_text_atomic(model_path,
                        io::model_to_json(testutil::park_model(), 1e6, "park").dump(2));

  cli::RunConfig config;
  config.input_path = model_path.string();
  config.region_preset = "park";
  config.n_stations = 40;
  config.hours_count = 168;
  config.seed = 42;

  config.out_dir = (dir.path() / "a").string();
  c.require(cli::cmd_generate(config) == 0, "first run failed");
  config.out_dir = (dir.path() / "b").string();
  c.require(cli::cmd_generate(config) == 0, "second run failed");
  config.out_dir = (dir.path() / "c").string();
  config.seed = 43;
  c.require(cli::cmd_generate(config) == 0, "third run failed");

  const auto a = io::read_text(dir.path() / "a/park/generated.csv");
  const auto b = io::read_text(dir.path() / "b/park/generated.csv");
  const auto other = io::read_text(dir.path() / "c/park/generated.csv");
  c.require(a == b, "same seed produced different bytes");
  c.require(a != other, "different seeds produced identical bytes");
  c.require(io::read_text(dir.path() / "a/park/validation.json") ==
                io::read_text(dir.path() / "b/park/validation.json"),
            "validation reports differ for the same seed");
}

// Criterion 9: property suites.
void criterion_9() {
  Criterion c(9, "property suites (Parseval, fit equivariance, R^2, mass, scale)");

  // Parseval at 1e-6 relative, odd and even lengths.
  {
    std::mt19937_64 rng(909);
    std::uniform_real_distribution<double> value(-10.0, 10.0);
    for (const std::size_t n : {48u, 504u, 505u}) {
      for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> series(n);
        for (auto& v : series) v = value(rng);
        double mean = 0.0;
        for (const double v : series) mean += v;
        mean /= static_cast<double>(n);
        double energy = 0.0;
        for (const double v : series) energy += (v - mean) * (v - mean);

        const auto spec = spectral::amplitude_spectrum(series, true);
        double sum = 0.0;
        for (std::size_t i = 0; i < spec.bins.size(); ++i) {
          const double a = spec.bins[i].amplitude;
          const bool nyquist = (n % 2 == 0) && (i + 1 == spec.bins.size());
          sum += (nyquist ? 2.0 : 1.0) * a * a;
        }
        const double restated = 0.5 * static_cast<double>(n) * sum;
        c.require(std::abs(restated - energy) <= 1e-6 * energy, "Parseval violated");
      }
    }
  }

  // Fit scale equivariance and time-shift covariance.
  {
    auto series = testutil::sample_series(testutil::park_model(), 504);
    series = testutil::with_gaussian_noise(series, 2.0, 910);
    const std::vector<double> omegas{kPi / 12, kPi / 6};
    const auto base = temporal::fit(testutil::to_fit_points(series), omegas);

    auto scaled = series;
    for (auto& v : scaled) v *= 3.0;
    const auto big = temporal::fit(testutil::to_fit_points(scaled), omegas);
    c.require(std::abs(big.model.a0 - 3.0 * base.model.a0) <= 1e-9 * std::abs(base.model.a0),
              "scale equivariance: a0");
    for (std::size_t i = 0; i < omegas.size(); ++i) {
      c.require(std::abs(big.model.components[i].amplitude -
                         3.0 * base.model.components[i].amplitude) <=
                    1e-9 * base.model.components[i].amplitude,
                "scale equivariance: amplitude");
      c.require(std::abs(big.model.components[i].phase - base.model.components[i].phase) <=
                    1e-9,
                "scale equivariance: phase");
    }
    c.require(std::abs(big.r_squared - base.r_squared) <= 1e-12, "scale equivariance: R^2");

    const double delta = 7.0;
    std::vector<temporal::HourPoint> shifted;
    for (int t = 0; t < 504; ++t)
      shifted.push_back({static_cast<double>(t),
                         temporal::evaluate(testutil::park_model(), t + delta)});
    const auto moved = temporal::fit(shifted, omegas);
    for (std::size_t i = 0; i < omegas.size(); ++i) {
      const double expected = std::remainder(
          testutil::park_model().components[i].phase + omegas[i] * delta, 2.0 * kPi);
      c.require(std::abs(std::remainder(moved.model.components[i].phase - expected,
                                        2.0 * kPi)) <= 1e-9,
                "time-shift covariance: phase");
      c.require(std::abs(moved.model.components[i].amplitude -
                         testutil::park_model().components[i].amplitude) <= 1e-9 * 222.7,
                "time-shift covariance: amplitude");
    }
  }

  // R^2 in [0, 1] and monotone in added basis frequencies.
  {
    std::mt19937_64 rng(911);
    std::uniform_real_distribution<double> value(-5.0, 5.0);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<temporal::HourPoint> points;
      for (int t = 0; t < 72; ++t) points.push_back({static_cast<double>(t), value(rng)});
      double previous = -1.0;
      std::vector<double> omegas;
      for (const double omega : {kPi / 12, kPi / 6, kPi / 4, kPi / 3}) {
        omegas.push_back(omega);
        const auto report = temporal::fit(points, omegas);
        c.require(report.r_squared >= -1e-12 && report.r_squared <= 1.0 + 1e-12,
                  "R^2 out of [0,1]");
        c.require(report.r_squared >= previous - 1e-12, "R^2 decreased");
        previous = report.r_squared;
      }
    }
  }

  // bin_hourly mass conservation.
  {
    std::mt19937_64 rng(912);
    std::uniform_int_distribution<std::int64_t> slot(0, 24 * 12 - 1);
    std::uniform_int_distribution<std::uint64_t> volume(0, 1'000'000);
    std::uniform_int_distribution<int> station(0, 7);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<ingest::TrafficRecord> records;
      for (int i = 0; i < 400; ++i)
        records.push_back({slot(rng) * 5, "BS_" + std::to_string(station(rng)), 118.75,
                           32.05, volume(rng)});
      const auto ds = ingest::bin_hourly(records, CivilTime{2012, 9, 3, 0, 0});
      double record_total = 0.0;
      for (const auto& r : records) record_total += static_cast<double>(r.volume);
      double cell_total = 0.0;
      for (const auto& v : ds.volumes)
        if (v) cell_total += *v;
      c.require(cell_total == record_total, "bin_hourly lost mass");
    }
  }

  // Lognormal fit scale property: exact ln(alpha) shift of mu.
  {
    std::mt19937_64 rng(913);
    std::uniform_real_distribution<double> value(0.2, 40.0);
    std::vector<double> values(1000);
    for (auto& v : values) v = value(rng);
    const auto base = spatial::fit_lognormal(values);
    for (const double alpha : {3.0, 1e6}) {
      auto scaled = values;
      for (auto& v : scaled) v *= alpha;
      const auto fit = spatial::fit_lognormal(scaled);
      c.require(std::abs(fit.mu - (base.mu + std::log(alpha))) <= 1e-12 *
                    std::max(1.0, std::abs(base.mu + std::log(alpha))),
                "lognormal scale: mu shift not ln(alpha)");
      c.require(std::abs(fit.sigma - base.sigma) <= 1e-12, "lognormal scale: sigma moved");
    }
  }
}

} // namespace

int main() {
  setenv("CELLTIDE_LOG", "quiet", 1);
  std::printf("celltide acceptance suite\n");
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  if (g_failures == 0)
    std::printf("all 9 criteria passed\n");
  else
    std::printf("%d criteria FAILED\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
