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

#include "hess/error.hpp"

namespace hess {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kGap: return "gap";
    case ErrorCode::kLength: return "length";
    case ErrorCode::kRange: return "range";
    case ErrorCode::kDomain: return "domain";
    case ErrorCode::kNumeric: return "numeric";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kNoSolution: return "no-solution";
    case ErrorCode::kUndefined: return "undefined";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

}  // namespace hess
