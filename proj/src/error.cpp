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

#include "qnoise/error.hpp"

namespace qnoise {

Error::Error(ErrorCode code, const std::string &message) : std::runtime_error(message), code_(code) {}

const char *error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument:
            return "invalid argument";
        case ErrorCode::Config:
            return "config error";
        case ErrorCode::NonConvergence:
            return "non-convergence";
        case ErrorCode::Numerical:
            return "numerical failure";
        case ErrorCode::Io:
            return "i/o error";
        case ErrorCode::Unbalanceable:
            return "unbalanceable";
        case ErrorCode::Degenerate:
            return "degenerate configuration";
    }
    return "unknown error";
}

}  // namespace qnoise
