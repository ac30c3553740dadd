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

#ifndef QNOISE_SERIES_IO_HPP
#define QNOISE_SERIES_IO_HPP

#include <iosfwd>
#include <string>

#include "qnoise/sampler.hpp"

namespace qnoise {

// Binary layout, little-endian:
//   char[4] "QNTS" | u32 version (=1) | f64 sample_rate | u64 n | f64 samples[n]
inline constexpr char kSeriesMagic[4] = {'Q', 'N', 'T', 'S'};
inline constexpr unsigned kSeriesVersion = 1;

void write_series_binary(std::ostream &out, const NoiseTimeSeries &series);
NoiseTimeSeries read_series_binary(std::istream &in);

/// CSV with header "index,time_s,current".
void write_series_csv(std::ostream &out, const NoiseTimeSeries &series);

void save_series_binary(const std::string &path, const NoiseTimeSeries &series);
NoiseTimeSeries load_series_binary(const std::string &path);

}  // namespace qnoise

#endif
