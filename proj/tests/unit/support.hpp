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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "hess/error.hpp"
#include "hess/profiles.hpp"

namespace hess::test {

// Non-leap year; second_of_year -> "YYYY-MM-DD HH:MM:SS".
inline std::string timestamp(long second_of_year, int year = 2021) {
  static constexpr int kDays[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  long day = second_of_year / 86400;
  const long in_day = second_of_year % 86400;
  int month = 0;
  while (day >= kDays[month]) day -= kDays[month++];
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02ld %02ld:%02ld:%02ld", year, month + 1, day + 1, in_day / 3600,
                (in_day / 60) % 60, in_day % 60);
  return buf;
}

// A CSV at `step_s` covering the year. Rows whose second-of-year fails
// `keep` are left out.
inline std::string year_csv(int step_s, const std::function<double(long)>& value,
                            const std::function<bool(long)>& keep = {}) {
  std::string out = "timestamp,power_w\n";
  out.reserve(static_cast<std::size_t>(365L * 86400 / step_s) * 28);
  for (long s = 0; s < 365L * 86400; s += step_s) {
    if (keep && !keep(s)) continue;
    out += timestamp(s);
    out += ',';
    out += std::to_string(value(s));
    out += '\n';
  }
  return out;
}

inline MinuteSeries constant_series(double w, SeriesKind kind) {
  return MinuteSeries(std::vector<double>(kMinutesPerYear, w), kind);
}

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected hess::Error";
  return ErrorCode::kIo;
}

template <class F>
std::string message_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    std::random_device rd;
    path = std::filesystem::temp_directory_path() / ("hess-test-" + std::to_string(rd()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace hess::test
