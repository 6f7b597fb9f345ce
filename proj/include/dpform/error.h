//
// Copyright 2026 The dpform Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef DPFORM_ERROR_H_
#define DPFORM_ERROR_H_

#include <stdexcept>
#include <string>

namespace dpform {

enum class ErrorCode {
  kInvalidArgument,
  // Step size violates gamma * d_i < 1 for some node.
  kStepSizeTooLarge,
  kDisconnectedGraph,
  kDomain,
  kNumerical,
  kIo,
  kInternal,
};

// All library failures are reported through this exception. The C API maps
// the code onto dpf_status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void Require(bool condition, const std::string& message) {
  if (!condition) Fail(ErrorCode::kInvalidArgument, message);
}

}  // namespace dpform

#endif  // DPFORM_ERROR_H_
