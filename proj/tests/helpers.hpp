#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <unistd.h>
#include <vector>

#include "celltide/stgen.hpp"
#include "celltide/temporal.hpp"

namespace testutil {

inline constexpr double kPi = std::numbers::pi;

// Reference region models (whole area, park, campus, CBD).
inline celltide::temporal::SinusoidModel whole_area_model() {
  return {173.29,
          {{kPi / 12, 89.83, 3.08}, {kPi / 6, 52.6, 2.08}, {kPi / 4, 16.68, 1.13}}};
}
inline celltide::temporal::SinusoidModel park_model() {
  return {351.06, {{kPi / 12, 222.7, 3.11}, {kPi / 6, 96.24, 2.36}}};
}
inline celltide::temporal::SinusoidModel campus_model() {
  return {323.04,
          {{kPi / 12, 148.3, 2.98}, {kPi / 6, 109.4, 2.15}, {kPi / 4, 38.43, 1.0}}};
}
inline celltide::temporal::SinusoidModel cbd_model() {
  return {75.72, {{kPi / 12, 47.52, -2.56}, {kPi / 6, 16.71, 1.45}}};
}

inline std::vector<double> sample_series(const celltide::temporal::SinusoidModel& model,
                                         std::size_t hours) {
  std::vector<double> out(hours);
  for (std::size_t t = 0; t < hours; ++t)
    out[t] = celltide::temporal::evaluate(model, static_cast<double>(t));
  return out;
}

inline std::vector<double> with_gaussian_noise(std::vector<double> series, double stddev,
                                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (auto& v : series) v += stddev * celltide::stgen::standard_normal(rng);
  return series;
}

inline std::vector<celltide::temporal::HourPoint> to_fit_points(
    const std::vector<double>& series) {
  std::vector<celltide::temporal::HourPoint> out;
  out.reserve(series.size());
  for (std::size_t t = 0; t < series.size(); ++t)
    out.push_back({static_cast<double>(t), series[t]});
  return out;
}

/// Unique scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<unsigned> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("celltide_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

} // namespace testutil
