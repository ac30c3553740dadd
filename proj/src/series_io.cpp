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

#include "qnoise/series_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "qnoise/error.hpp"

namespace qnoise {

namespace {

void put_le(std::ostream &out, std::uint64_t value, int bytes) {
    char buf[8];
    for (int i = 0; i < bytes; ++i) {
        buf[i] = static_cast<char>((value >> (8 * i)) & 0xffu);
    }
    out.write(buf, bytes);
}

std::uint64_t get_le(std::istream &in, int bytes) {
    unsigned char buf[8] = {};
    if (!in.read(reinterpret_cast<char *>(buf), bytes)) {
        throw Error(ErrorCode::Io, "series file truncated");
    }
    std::uint64_t value = 0;
    for (int i = 0; i < bytes; ++i) {
        value |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    }
    return value;
}

}  // namespace

void write_series_binary(std::ostream &out, const NoiseTimeSeries &series) {
    out.write(kSeriesMagic, 4);
    put_le(out, kSeriesVersion, 4);
    put_le(out, std::bit_cast<std::uint64_t>(series.sample_rate), 8);
    put_le(out, series.samples.size(), 8);
    for (double v : series.samples) {
        put_le(out, std::bit_cast<std::uint64_t>(v), 8);
    }
    if (!out) {
        throw Error(ErrorCode::Io, "failed writing series");
    }
}

NoiseTimeSeries read_series_binary(std::istream &in) {
    char magic[4];
    if (!in.read(magic, 4) || !std::equal(magic, magic + 4, kSeriesMagic)) {
        throw Error(ErrorCode::Io, "not a QNTS series file");
    }
    const auto version = static_cast<unsigned>(get_le(in, 4));
    if (version != kSeriesVersion) {
        throw Error(ErrorCode::Io, "unsupported QNTS version " + std::to_string(version));
    }
    NoiseTimeSeries series;
    series.sample_rate = std::bit_cast<double>(get_le(in, 8));
    const std::uint64_t n = get_le(in, 8);
    series.samples.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(n, 1u << 26)));
    for (std::uint64_t i = 0; i < n; ++i) {
        const double v = std::bit_cast<double>(get_le(in, 8));
        if (!std::isfinite(v)) {
            throw Error(ErrorCode::Io, "non-finite sample in series file");
        }
        series.samples.push_back(v);
    }
    return series;
}

void write_series_csv(std::ostream &out, const NoiseTimeSeries &series) {
    out << "index,time_s,current\n";
    char line[96];
    for (std::size_t i = 0; i < series.samples.size(); ++i) {
        std::snprintf(line, sizeof line, "%zu,%.17g,%.17g\n", i, static_cast<double>(i) / series.sample_rate,
                      series.samples[i]);
        out << line;
    }
    if (!out) {
        throw Error(ErrorCode::Io, "failed writing series csv");
    }
}

void save_series_binary(const std::string &path, const NoiseTimeSeries &series) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::Io, "cannot open " + path + " for writing");
    }
    write_series_binary(out, series);
}

NoiseTimeSeries load_series_binary(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open " + path);
    }
    return read_series_binary(in);
}

}  // namespace qnoise
