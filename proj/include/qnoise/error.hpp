// Copyright 2026 The qnoise Authors
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

#ifndef QNOISE_ERROR_HPP
#define QNOISE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace qnoise {

/// Failure categories. The numeric values are shared with the C API status
/// codes in qnoise.h.
enum class ErrorCode : int {
    InvalidArgument = 1,
    Config = 2,
    NonConvergence = 3,
    Numerical = 4,
    Io = 5,
    Unbalanceable = 6,
    Degenerate = 7,
};

class Error : public std::runtime_error {
   public:
    Error(ErrorCode code, const std::string &message);
    ErrorCode code() const noexcept { return code_; }

   private:
    ErrorCode code_;
};

const char *error_code_name(ErrorCode code) noexcept;

}  // namespace qnoise

#endif
