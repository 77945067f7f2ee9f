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

#include <stdexcept>
#include <string>

namespace hess {

enum class ErrorCode {
  kParse,       // malformed input row or document
  kGap,         // missing data too long to fill
  kLength,      // resampled series has the wrong number of samples
  kRange,       // argument outside its admissible interval
  kDomain,      // math domain violation (e.g. non-positive temperature)
  kNumeric,     // NaN / inf where a finite number is required
  kConfig,      // invalid run configuration
  kNoSolution,  // root finder could not bracket a root
  kUndefined,   // quantity undefined for the inputs (e.g. LCOE with zero energy)
  kIo,
};

const char* to_string(ErrorCode code) noexcept;

// Single exception type for the library; the code carries the category.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hess
