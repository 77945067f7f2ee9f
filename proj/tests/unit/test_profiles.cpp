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


#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <cmath>

#include "hess/profiles.hpp"
#include "support.hpp"

namespace hess {
namespace {

using test::code_of;
using test::year_csv;

constexpr long kDaySeconds = 86400;

// Dense at the native step for the first day, one on-grid row per minute after.
bool dense_first_day(long s) { return s < kDaySeconds || s % 60 == 0; }

TEST(Profiles, TwoSecondConstantAggregatesToSameValue) {
  const auto csv = year_csv(2, [](long) { return 1000.0; }, dense_first_day);
  const auto series = parse_profile(csv, SeriesKind::kPv, 2);
  ASSERT_EQ(series.size(), kMinutesPerYear);
  for (double v : series.values()) ASSERT_EQ(v, 1000.0);
}

TEST(Profiles, FifteenMinuteIntervalIsStepHeld) {
  const long start = 10 * kDaySeconds + 12 * 3600;
  const auto csv = year_csv(900, [&](long s) { return s == start ? 480.0 : 0.0; });
  const auto series = parse_profile(csv, SeriesKind::kLoad, 900);
  const std::size_t m0 = static_cast<std::size_t>(start / 60);
  for (std::size_t m = 0; m < kMinutesPerYear; ++m) {
    const bool inside = m >= m0 && m < m0 + 15;
    ASSERT_EQ(series[m], inside ? 480.0 : 0.0) << "minute " << m;
  }
}

TEST(Profiles, OneSecondAlternatingMeansToHalf) {
  const auto value = [](long s) { return s < kDaySeconds ? (s % 2 == 0 ? 0.0 : 2000.0) : 1000.0; };
  const auto series = parse_profile(year_csv(1, value, dense_first_day), SeriesKind::kPv, 1);
  for (std::size_t m = 0; m < kMinutesPerYear; ++m) ASSERT_EQ(series[m], 1000.0) << m;
}

TEST(Profiles, SubMinuteMeanMatchesDirectAverage) {
  // Independent oracle: average the generating function over each minute.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(0.0, 5000.0);
  std::vector<double> raw(365L * 86400 / 30);
  for (auto& v : raw) v = std::round(dist(rng));
  const auto csv = year_csv(30, [&](long s) { return raw[static_cast<std::size_t>(s / 30)]; });
  const auto series = parse_profile(csv, SeriesKind::kLoad, 30);

  long double native_wh = 0.0L;
  for (double v : raw) native_wh += static_cast<long double>(v) * 30.0L / 3600.0L;
  for (std::size_t m = 0; m < kMinutesPerYear; m += 997) {
    ASSERT_NEAR(series[m], (raw[2 * m] + raw[2 * m + 1]) / 2.0, 1e-9);
  }
  EXPECT_NEAR(series.energy_wh(), static_cast<double>(native_wh), 1e-9 * static_cast<double>(native_wh));
}

TEST(Profiles, LeapDayIsDropped) {
  // 2024 is a leap year. Feb 29 rows carry a marker value that must vanish.
  std::string csv = "timestamp,power_w\n";
  static constexpr int kDays[12] = {31, 29, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  for (int month = 1; month <= 12; ++month) {
    for (int day = 1; day <= kDays[month - 1]; ++day) {
      for (int h = 0; h < 24; ++h) {
        char buf[48];
        const double w = (month == 2 && day == 29) ? 9999.0 : 100.0;
        std::snprintf(buf, sizeof buf, "2024-%02d-%02d %02d:00:00,%g\n", month, day, h, w);
        csv += buf;
      }
    }
  }
  const auto series = parse_profile(csv, SeriesKind::kLoad, 3600);
  ASSERT_EQ(series.size(), kMinutesPerYear);
  for (double v : series.values()) ASSERT_EQ(v, 100.0);
}

TEST(Profiles, ShortGapIsInterpolated) {
  // 59 missing minutes between 0 W and 600 W: ten watts per minute.
  const long first_missing = 5 * kDaySeconds;
  const auto value = [&](long s) { return s >= first_missing + 59 * 60 ? 600.0 : 0.0; };
  const auto keep = [&](long s) { return s < first_missing || s >= first_missing + 59 * 60; };
  const auto series = parse_profile(year_csv(60, value, keep), SeriesKind::kPv, 60);
  const std::size_t m0 = static_cast<std::size_t>(first_missing / 60);
  EXPECT_EQ(series[m0 - 1], 0.0);
  for (std::size_t k = 0; k < 59; ++k) EXPECT_NEAR(series[m0 + k], 10.0 * static_cast<double>(k + 1), 1e-9);
  EXPECT_EQ(series[m0 + 59], 600.0);
}

TEST(Profiles, LongGapIsRejectedWithLocation) {
  const long first_missing = 5 * kDaySeconds;
  const auto keep = [&](long s) { return s < first_missing || s >= first_missing + 60 * 60; };
  const auto csv = year_csv(60, [](long) { return 1.0; }, keep);
  EXPECT_EQ(code_of([&] { parse_profile(csv, SeriesKind::kPv, 60); }), ErrorCode::kGap);
  const auto msg = test::message_of([&] { parse_profile(csv, SeriesKind::kPv, 60); });
  EXPECT_NE(msg.find("60"), std::string::npos) << msg;
}

TEST(Profiles, IncompleteYearIsRejected) {
  const auto csv = year_csv(3600, [](long) { return 1.0; }, [](long s) { return s < 300 * kDaySeconds; });
  EXPECT_EQ(code_of([&] { parse_profile(csv, SeriesKind::kLoad, 3600); }), ErrorCode::kLength);
}

TEST(Profiles, MalformedRowNamesItsLine) {
  const std::string csv = "timestamp,power_w\n2021-01-01 00:00:00,1\n2021-01-01 00:01:00,abc\n";
  EXPECT_EQ(code_of([&] { parse_profile(csv, SeriesKind::kLoad, 60); }), ErrorCode::kParse);
  const auto msg = test::message_of([&] { parse_profile(csv, SeriesKind::kLoad, 60); });
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
}

TEST(Profiles, BadHeaderAndOffGridRows) {
  EXPECT_EQ(code_of([] { parse_profile("time,w\n", SeriesKind::kPv, 60); }), ErrorCode::kParse);
  const std::string off_grid = "timestamp,power_w\n2021-01-01 00:00:00,1\n2021-01-01 00:00:45,1\n";
  EXPECT_EQ(code_of([&] { parse_profile(off_grid, SeriesKind::kPv, 60); }), ErrorCode::kParse);
  const std::string backwards = "timestamp,power_w\n2021-01-01 00:02:00,1\n2021-01-01 00:01:00,1\n";
  EXPECT_EQ(code_of([&] { parse_profile(backwards, SeriesKind::kPv, 60); }), ErrorCode::kParse);
}

TEST(Profiles, MissingFileIsIoError) {
  EXPECT_EQ(code_of([] { load_profile("/nonexistent/pv.csv", SeriesKind::kPv, 60); }), ErrorCode::kIo);
}

TEST(MinuteSeriesInvariant, RejectsWrongLengthAndBadSamples) {
  EXPECT_EQ(code_of([] { MinuteSeries(std::vector<double>(100, 1.0), SeriesKind::kPv); }), ErrorCode::kLength);
  std::vector<double> v(kMinutesPerYear, 1.0);
  v[17] = -1.0;
  EXPECT_EQ(code_of([&] { MinuteSeries(v, SeriesKind::kPv); }), ErrorCode::kNumeric);
  v[17] = std::nan("");
  EXPECT_EQ(code_of([&] { MinuteSeries(v, SeriesKind::kPv); }), ErrorCode::kNumeric);
}

TEST(Scaling, YearOneIsIdentity) {
  const auto pv = synthetic_pv_profile();
  const auto load = synthetic_load_profile();
  EXPECT_EQ(scale_to_year(pv, {}, 1).values().size(), kMinutesPerYear);
  EXPECT_TRUE(std::equal(pv.values().begin(), pv.values().end(), scale_to_year(pv, {}, 1).values().begin()));
  EXPECT_TRUE(std::equal(load.values().begin(), load.values().end(), scale_to_year(load, {}, 1).values().begin()));
}

TEST(Scaling, FactorsMatchHighPrecisionPowers) {
  using boost::multiprecision::cpp_dec_float_50;
  const ScalingPolicy policy;
  EXPECT_DOUBLE_EQ(scale_factor(SeriesKind::kPv, policy, 2), 0.9955);
  for (int y = 1; y <= kHorizonYears; ++y) {
    const auto pv = pow(cpp_dec_float_50("0.9955"), y - 1).convert_to<double>();
    const auto load = pow(cpp_dec_float_50("1.02"), y - 1).convert_to<double>();
    EXPECT_NEAR(scale_factor(SeriesKind::kPv, policy, y), pv, 1e-15);
    EXPECT_NEAR(scale_factor(SeriesKind::kLoad, policy, y), load, 1e-15);
  }
  EXPECT_NEAR(scale_factor(SeriesKind::kLoad, policy, 15), 1.3194787630628721, 1e-15);
}

TEST(Scaling, EnergyScalesByFactor) {
  const auto base = synthetic_load_profile();
  for (int y : {2, 7, 15}) {
    const double f = scale_factor(SeriesKind::kLoad, {}, y);
    const auto scaled = scale_to_year(base, {}, y);
    EXPECT_EQ(scaled.year_index(), y);
    EXPECT_NEAR(scaled.energy_wh(), f * base.energy_wh(), 1e-12 * f * base.energy_wh());
  }
}

TEST(Scaling, RejectsOutOfRange) {
  const auto base = synthetic_pv_profile();
  EXPECT_EQ(code_of([&] { scale_to_year(base, {}, 0); }), ErrorCode::kRange);
  EXPECT_EQ(code_of([&] { scale_to_year(base, {}, 16); }), ErrorCode::kRange);
  EXPECT_EQ(code_of([&] { scale_to_year(scale_to_year(base, {}, 2), {}, 3); }), ErrorCode::kRange);
  ScalingPolicy bad;
  bad.load_growth_rate = 0.5;
  EXPECT_EQ(code_of([&] { bad.validate(); }), ErrorCode::kRange);
}

TEST(Synthetic, ProfilesAreDeterministicAndPlausible) {
  const auto pv = synthetic_pv_profile();
  EXPECT_EQ(pv, synthetic_pv_profile());
  EXPECT_EQ(pv[0], 0.0);  // midnight
  EXPECT_GT(pv.energy_wh(), 5e6);
  EXPECT_GT(synthetic_load_profile().energy_wh(), 1e6);
}

}  // namespace
}  // namespace hess
