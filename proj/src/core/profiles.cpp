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

#include "hess/profiles.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include "hess/error.hpp"

namespace hess {

namespace {

constexpr std::array<int, 12> kDaysInMonth{31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
constexpr int kMaxGapMinutes = 60;

bool is_leap(int year) {
  return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

struct Timestamp {
  int year;
  // Seconds since Jan 1 00:00 on the 365-day calendar.
  std::int64_t second_of_year;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::optional<int> parse_fixed_int(std::string_view s) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& why) {
  throw Error(ErrorCode::kParse, "line " + std::to_string(line) + ": " + why);
}

// Accepts YYYY-MM-DD[T| ]HH:MM[:SS][Z]. Returns nullopt for Feb 29.
std::optional<Timestamp> parse_timestamp(std::string_view text, std::size_t line) {
  text = trim(text);
  if (!text.empty() && text.back() == 'Z') text.remove_suffix(1);
  if (text.size() != 16 && text.size() != 19) parse_fail(line, "malformed timestamp '" + std::string(text) + "'");
  if (text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != ' ') || text[13] != ':' ||
      (text.size() == 19 && text[16] != ':')) {
    parse_fail(line, "malformed timestamp '" + std::string(text) + "'");
  }
  auto year = parse_fixed_int(text.substr(0, 4));
  auto month = parse_fixed_int(text.substr(5, 2));
  auto day = parse_fixed_int(text.substr(8, 2));
  auto hour = parse_fixed_int(text.substr(11, 2));
  auto minute = parse_fixed_int(text.substr(14, 2));
  auto second = text.size() == 19 ? parse_fixed_int(text.substr(17, 2)) : std::optional<int>(0);
  if (!year || !month || !day || !hour || !minute || !second || *month < 1 || *month > 12 || *hour > 23 ||
      *minute > 59 || *second > 59) {
    parse_fail(line, "malformed timestamp '" + std::string(text) + "'");
  }
  const bool leap_day = *month == 2 && *day == 29;
  if (leap_day && !is_leap(*year)) parse_fail(line, "February 29 in a non-leap year");
  if (!leap_day && (*day < 1 || *day > kDaysInMonth[*month - 1])) {
    parse_fail(line, "day out of range in '" + std::string(text) + "'");
  }
  if (leap_day) return std::nullopt;

  int day_of_year = *day - 1;
  for (int m = 0; m < *month - 1; ++m) day_of_year += kDaysInMonth[m];
  const std::int64_t s = static_cast<std::int64_t>(day_of_year) * 86400 + *hour * 3600 + *minute * 60 + *second;
  return Timestamp{*year, s};
}

std::string describe_minute(std::size_t minute_of_year) {
  std::size_t day = minute_of_year / kMinutesPerDay;
  const std::size_t in_day = minute_of_year % kMinutesPerDay;
  int month = 0;
  while (day >= static_cast<std::size_t>(kDaysInMonth[month])) {
    day -= kDaysInMonth[month];
    ++month;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%02d-%02zu %02zu:%02zu", month + 1, day + 1, in_day / 60, in_day % 60);
  return buf;
}

}  // namespace

std::string_view to_string(SeriesKind kind) noexcept {
  return kind == SeriesKind::kPv ? "pv" : "load";
}

MinuteSeries::MinuteSeries(std::vector<double> values, SeriesKind kind, int year_index)
    : values_(std::move(values)), kind_(kind), year_index_(year_index) {
  if (values_.size() != kMinutesPerYear) {
    throw Error(ErrorCode::kLength, "minute series has " + std::to_string(values_.size()) + " samples, expected " +
                                        std::to_string(kMinutesPerYear));
  }
  if (year_index_ < 1) throw Error(ErrorCode::kRange, "year_index must be >= 1");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]) || values_[i] < 0.0) {
      throw Error(ErrorCode::kNumeric, "sample " + std::to_string(i) + " is negative or not finite");
    }
  }
}

double MinuteSeries::energy_wh() const noexcept {
  double sum = 0.0;
  for (double v : values_) sum += v;
  return sum / 60.0;
}

void ScalingPolicy::validate() const {
  auto check = [](double rate, const char* name) {
    if (!(rate >= 0.0 && rate <= 0.2)) {
      throw Error(ErrorCode::kRange, std::string(name) + " must lie in [0, 0.2]");
    }
  };
  check(pv_degradation_rate, "pv_degradation_rate");
  check(load_growth_rate, "load_growth_rate");
}

double scale_factor(SeriesKind kind, const ScalingPolicy& policy, int year) {
  if (year < 1 || year > kHorizonYears) {
    throw Error(ErrorCode::kRange, "year " + std::to_string(year) + " outside the 1.." +
                                       std::to_string(kHorizonYears) + " horizon");
  }
  const double base = kind == SeriesKind::kPv ? 1.0 - policy.pv_degradation_rate : 1.0 + policy.load_growth_rate;
  return std::pow(base, year - 1);
}

MinuteSeries scale_to_year(const MinuteSeries& base, const ScalingPolicy& policy, int year) {
  if (base.year_index() != 1) throw Error(ErrorCode::kRange, "scale_to_year expects a year-1 base series");
  policy.validate();
  const double factor = scale_factor(base.kind(), policy, year);
  std::vector<double> out(base.values().begin(), base.values().end());
  if (factor != 1.0) {
    for (double& v : out) v *= factor;
  }
  return MinuteSeries(std::move(out), base.kind(), year);
}

MinuteSeries parse_profile(std::string_view csv, SeriesKind kind, int native_step_s) {
  if (native_step_s <= 0 || (native_step_s < 60 && 60 % native_step_s != 0) ||
      (native_step_s > 60 && native_step_s % 60 != 0)) {
    throw Error(ErrorCode::kRange, "native step " + std::to_string(native_step_s) +
                                       " s must divide 60 s or be a multiple of it");
  }

  std::vector<double> sum(kMinutesPerYear, 0.0);
  std::vector<std::uint32_t> count(kMinutesPerYear, 0);

  std::size_t line_no = 0;
  bool header_seen = false;
  std::optional<int> profile_year;
  std::optional<std::int64_t> prev;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    std::size_t end = csv.find('\n', pos);
    if (end == std::string_view::npos) end = csv.size();
    std::string_view line = csv.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    line = trim(line);
    if (line.empty()) {
      if (end == csv.size()) break;
      continue;
    }
    if (!header_seen) {
      if (line != "timestamp,power_w") parse_fail(line_no, "expected header 'timestamp,power_w'");
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) {
      parse_fail(line_no, "expected two comma-separated fields");
    }
    const auto ts = parse_timestamp(line.substr(0, comma), line_no);
    const std::string_view power_text = trim(line.substr(comma + 1));
    double power = 0.0;
    auto [ptr, ec] = std::from_chars(power_text.data(), power_text.data() + power_text.size(), power);
    if (ec != std::errc{} || ptr != power_text.data() + power_text.size() || !std::isfinite(power)) {
      parse_fail(line_no, "malformed power value '" + std::string(power_text) + "'");
    }
    if (power < 0.0) parse_fail(line_no, "negative power value");
    if (!ts) continue;  // Feb 29

    if (!profile_year) profile_year = ts->year;
    if (ts->year != *profile_year) parse_fail(line_no, "timestamp outside profile year " + std::to_string(*profile_year));
    if (prev) {
      const std::int64_t delta = ts->second_of_year - *prev;
      if (delta <= 0) parse_fail(line_no, "timestamps must be strictly increasing");
      if (delta % native_step_s != 0) parse_fail(line_no, "sample off the uniform " + std::to_string(native_step_s) + " s grid");
    }
    prev = ts->second_of_year;

    const auto minute = static_cast<std::size_t>(ts->second_of_year / 60);
    if (native_step_s <= 60) {
      sum[minute] += power;
      ++count[minute];
    } else {
      const std::size_t span = static_cast<std::size_t>(native_step_s / 60);
      const std::size_t last = std::min(minute + span, kMinutesPerYear);
      for (std::size_t m = minute; m < last; ++m) {
        sum[m] = power;
        count[m] = 1;
      }
    }
  }
  if (!header_seen) throw Error(ErrorCode::kParse, "line 1: empty profile");

  std::vector<double> values(kMinutesPerYear, 0.0);
  for (std::size_t m = 0; m < kMinutesPerYear; ++m) {
    if (count[m] > 0) values[m] = sum[m] / count[m];
  }

  const auto first = std::find_if(count.begin(), count.end(), [](auto c) { return c > 0; });
  const auto last = std::find_if(count.rbegin(), count.rend(), [](auto c) { return c > 0; });
  if (first == count.end()) throw Error(ErrorCode::kLength, "profile contains no samples");
  const auto first_m = static_cast<std::size_t>(first - count.begin());
  const auto last_m = kMinutesPerYear - 1 - static_cast<std::size_t>(last - count.rbegin());
  if (first_m != 0 || last_m != kMinutesPerYear - 1) {
    throw Error(ErrorCode::kLength, "resampled profile covers " + std::to_string(last_m - first_m + 1) +
                                        " minutes (" + describe_minute(first_m) + " to " +
                                        describe_minute(last_m) + "), expected " +
                                        std::to_string(kMinutesPerYear));
  }

  for (std::size_t m = 0; m < kMinutesPerYear;) {
    if (count[m] > 0) {
      ++m;
      continue;
    }
    std::size_t run_end = m;
    while (count[run_end] == 0) ++run_end;  // bounded: last minute is covered
    const std::size_t run = run_end - m;
    if (run >= kMaxGapMinutes) {
      throw Error(ErrorCode::kGap, "gap of " + std::to_string(run) + " minutes starting at " + describe_minute(m));
    }
    const double left = values[m - 1];
    const double right = values[run_end];
    for (std::size_t k = 0; k < run; ++k) {
      const double w = static_cast<double>(k + 1) / static_cast<double>(run + 1);
      values[m + k] = left + (right - left) * w;
    }
    m = run_end;
  }

  return MinuteSeries(std::move(values), kind, 1);
}

MinuteSeries load_profile(const std::filesystem::path& path, SeriesKind kind, int native_step_s) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open profile '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_profile(buf.str(), kind, native_step_s);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::array<double, 7> kWeekCloudiness{1.00, 0.93, 0.45, 0.82, 1.00, 0.30, 0.88};

double seasonal(std::size_t day, double peak_day) {
  return std::cos(kTwoPi * (static_cast<double>(day) - peak_day) / 365.0);
}

}  // namespace

namespace {

MinuteSeries build_synthetic_pv() {
  constexpr double kPeakCapacityW = 9750.0;
  std::vector<double> v(kMinutesPerYear, 0.0);
  for (std::size_t day = 0; day < kDaysPerYear; ++day) {
    const double s = seasonal(day, 171.0);
    const double day_length_h = 12.2 + 2.6 * s;
    const double sunrise_h = 13.5 - day_length_h / 2.0;
    const double peak_w = kPeakCapacityW * (0.62 + 0.18 * s);
    const double clouds = kWeekCloudiness[day % 7];
    for (std::size_t m = 0; m < kMinutesPerDay; ++m) {
      const double x = (static_cast<double>(m) / 60.0 - sunrise_h) / day_length_h;
      if (x <= 0.0 || x >= 1.0) continue;
      double shape = std::pow(std::sin(std::numbers::pi * x), 1.5);
      if (clouds < 0.9) {
        const double t = static_cast<double>(m);
        const double flicker = 0.5 * (1.0 + std::sin(kTwoPi * t / 47.0) * std::sin(kTwoPi * t / 13.0));
        shape *= clouds + 0.6 * (1.0 - clouds) * flicker;
      }
      v[day * kMinutesPerDay + m] = peak_w * shape;
    }
  }
  return MinuteSeries(std::move(v), SeriesKind::kPv, 1);
}

MinuteSeries build_synthetic_load() {
  std::vector<double> v(kMinutesPerYear, 0.0);
  for (std::size_t day = 0; day < kDaysPerYear; ++day) {
    const double c = seasonal(day, 15.0);
    const double hvac = 1.0 + 0.30 * c * c;  // heating around mid-January, cooling mid-July
    const bool weekday = day % 7 < 5;
    for (std::size_t block = 0; block < 96; ++block) {
      const double h = static_cast<double>(block) / 4.0;
      double w;
      if (weekday) {
        if (h < 7.0) w = 550.0;
        else if (h < 8.0) w = 1400.0;
        else if (h < 13.0) w = 2600.0 * hvac;
        else if (h < 14.0) w = 2200.0 * hvac;
        else if (h < 19.0) w = 2500.0 * hvac;
        else if (h < 21.0) w = 1200.0;
        else w = 600.0;
      } else {
        w = (h >= 8.0 && h < 20.0) ? 800.0 : 500.0;
      }
      w += 80.0 * std::sin(kTwoPi * 3.0 * static_cast<double>(block) / 96.0 + static_cast<double>(day));
      // 15-minute blocks, step-held to minutes like a metered block profile.
      for (std::size_t k = 0; k < 15; ++k) v[day * kMinutesPerDay + block * 15 + k] = w;
    }
  }
  return MinuteSeries(std::move(v), SeriesKind::kLoad, 1);
}

}  // namespace

MinuteSeries synthetic_pv_profile() {
  static const MinuteSeries cached = build_synthetic_pv();
  return cached;
}

MinuteSeries synthetic_load_profile() {
  static const MinuteSeries cached = build_synthetic_load();
  return cached;
}

}  // namespace hess
