/*
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace hess {

// Fixed 365-day calendar. February 29 is dropped on ingestion.
inline constexpr std::size_t kMinutesPerDay = 1440;
inline constexpr std::size_t kDaysPerYear = 365;
inline constexpr std::size_t kMinutesPerYear = kMinutesPerDay * kDaysPerYear;

enum class SeriesKind { kPv, kLoad };

std::string_view to_string(SeriesKind kind) noexcept;

/// One civil year of 1-minute average power samples in W.
///
/// Sample i is minute i of the year, minute 0 being Jan 1 00:00. The
/// constructor enforces the length and the finite, non-negative sample
/// invariant, so every instance in circulation is valid.
class MinuteSeries {
 public:
  MinuteSeries(std::vector<double> values, SeriesKind kind, int year_index = 1);

  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t minute) const noexcept { return values_[minute]; }
  std::size_t size() const noexcept { return values_.size(); }
  SeriesKind kind() const noexcept { return kind_; }
  int year_index() const noexcept { return year_index_; }

  // Annual energy in Wh.
  double energy_wh() const noexcept;

  bool operator==(const MinuteSeries&) const = default;

 private:
  std::vector<double> values_;
  SeriesKind kind_;
  int year_index_;
};

struct ScalingPolicy {
  double pv_degradation_rate = 0.0045;  // fraction per year
  double load_growth_rate = 0.02;       // fraction per year

  // Throws Error(kRange) when a rate is outside [0, 0.2].
  void validate() const;
};

inline constexpr int kHorizonYears = 15;

/// Year-over-year multiplier applied to a base (year 1) profile.
double scale_factor(SeriesKind kind, const ScalingPolicy& policy, int year);

/// Degrades PV or grows load for simulation year `year` in [1, 15].
MinuteSeries scale_to_year(const MinuteSeries& base, const ScalingPolicy& policy, int year);

/// Reads a `timestamp,power_w` CSV at a uniform native step and resamples to
/// one-minute averages.
///
/// Sub-minute data (the step must divide 60 s) is mean-aggregated into the
/// enclosing minute. Coarser data (a multiple of 60 s) is step-held: each
/// timestamp labels the start of its interval. Interior runs of missing
/// minutes shorter than 60 are linearly interpolated; longer runs are
/// rejected. The resulting series must span the whole year.
MinuteSeries load_profile(const std::filesystem::path& path, SeriesKind kind, int native_step_s);

/// Same as load_profile, reading from an in-memory CSV document.
MinuteSeries parse_profile(std::string_view csv, SeriesKind kind, int native_step_s);

// Bundled synthetic inputs: one representative week with a smooth seasonal
// envelope, tiled across the year. Deterministic, no RNG.
MinuteSeries synthetic_pv_profile();
MinuteSeries synthetic_load_profile();

}  // namespace hess
