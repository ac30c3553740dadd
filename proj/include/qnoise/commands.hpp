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

#ifndef QNOISE_COMMANDS_HPP
#define QNOISE_COMMANDS_HPP

#include <filesystem>
#include <span>

#include "json.hpp"
#include "qnoise/config.hpp"

namespace qnoise {

// Each command validates the config, writes its CSV/binary outputs plus a JSON
// sidecar (resolved config and results) into out_dir, and returns the results.
// Outputs are a pure function of the config, so reruns are byte-identical.

/// fringe.csv, fringe.json
nlohmann::json cmd_fringe(const RunConfig &config, const std::filesystem::path &out_dir);

/// balance_trace.csv, balance.json. Throws Error(NonConvergence) after
/// writing both files when the loop does not settle.
nlohmann::json cmd_balance(const RunConfig &config, const std::filesystem::path &out_dir);

/// psd.csv, clearance.csv, psd.json
nlohmann::json cmd_psd(const RunConfig &config, const std::filesystem::path &out_dir);

/// power_scan.csv, power_scan.json
nlohmann::json cmd_power_scan(const RunConfig &config, const std::filesystem::path &out_dir);

/// bits.bin (MSB-first), qrng.json
nlohmann::json cmd_qrng(const RunConfig &config, const std::filesystem::path &out_dir);

/// Least-squares fits of y against x without an intercept.
struct OriginFit {
    double linear = 0.0;     // y = a x
    double r_squared = 0.0;  // centred R^2 of the linear fit
    double quad_linear = 0.0;  // y = b x + c x^2
    double quad_quadratic = 0.0;
    double quad_quadratic_se = 0.0;  // standard error of c
};

OriginFit fit_through_origin(std::span<const double> x, std::span<const double> y);

}  // namespace qnoise

#endif
