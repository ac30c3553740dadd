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

#include "qnoise/qnoise.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "qnoise/commands.hpp"
#include "qnoise/config.hpp"
#include "qnoise/detector.hpp"
#include "qnoise/error.hpp"
#include "qnoise/homodyne.hpp"
#include "qnoise/interferometer.hpp"
#include "qnoise/qrng.hpp"
#include "qnoise/sampler.hpp"
#include "qnoise/series_io.hpp"

struct qn_config {
    qnoise::RunConfig value;
};

struct qn_series {
    qnoise::NoiseTimeSeries value;
};

namespace {

thread_local std::string last_error;

int fail(int status, const std::string &message) {
    last_error = message;
    return status;
}

template <class Fn>
int guarded(Fn &&fn) {
    try {
        last_error.clear();
        fn();
        return QN_OK;
    } catch (const qnoise::Error &e) {
        return fail(static_cast<int>(e.code()), e.what());
    } catch (const nlohmann::json::exception &e) {
        return fail(QN_ERR_CONFIG, e.what());
    } catch (const std::bad_alloc &) {
        return fail(QN_ERR_INTERNAL, "out of memory");
    } catch (const std::exception &e) {
        return fail(QN_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(QN_ERR_INTERNAL, "unknown error");
    }
}

char *copy_string(const std::string &s) {
    char *out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void require(bool ok, const char *what) {
    if (!ok) {
        throw qnoise::Error(qnoise::ErrorCode::InvalidArgument, what);
    }
}

using Command = nlohmann::json (*)(const qnoise::RunConfig &, const std::filesystem::path &);

int run_command(Command cmd, const qn_config *config, const char *out_dir, char **summary_json) {
    return guarded([&] {
        require(config && out_dir, "config and out_dir must not be null");
        const nlohmann::json summary = cmd(config->value, out_dir);
        if (summary_json) {
            *summary_json = copy_string(summary.dump());
        }
    });
}

}  // namespace

extern "C" {

const char *qn_version(void) { return "0.1.0"; }

const char *qn_last_error(void) { return last_error.c_str(); }

const char *qn_status_name(int status) {
    switch (status) {
        case QN_OK:
            return "ok";
        case QN_ERR_INTERNAL:
            return "internal";
        default:
            if (status >= 1 && status <= 7) {
                return qnoise::error_code_name(static_cast<qnoise::ErrorCode>(status));
            }
            return "unknown";
    }
}

void qn_string_free(char *s) { delete[] s; }

int qn_config_create_default(qn_config **out) {
    return guarded([&] {
        require(out, "out must not be null");
        *out = new qn_config{};
    });
}

int qn_config_load(const char *path, qn_config **out) {
    return guarded([&] {
        require(path && out, "path and out must not be null");
        *out = new qn_config{qnoise::load_run_config(path)};
    });
}

int qn_config_from_json(const char *text, qn_config **out) {
    return guarded([&] {
        require(text && out, "text and out must not be null");
        *out = new qn_config{qnoise::run_config_from_string(text)};
    });
}

int qn_config_to_json(const qn_config *config, char **out_json) {
    return guarded([&] {
        require(config && out_json, "config and out_json must not be null");
        *out_json = copy_string(qnoise::to_json(config->value).dump(2));
    });
}

int qn_config_set_seed(qn_config *config, uint64_t seed) {
    return guarded([&] {
        require(config, "config must not be null");
        config->value.sampler.seed = seed;
    });
}

int qn_config_get_seed(const qn_config *config, uint64_t *seed) {
    return guarded([&] {
        require(config && seed, "config and seed must not be null");
        *seed = config->value.sampler.seed;
    });
}

void qn_config_destroy(qn_config *config) { delete config; }

int qn_cmd_fringe(const qn_config *config, const char *out_dir, char **summary_json) {
    return run_command(qnoise::cmd_fringe, config, out_dir, summary_json);
}

int qn_cmd_balance(const qn_config *config, const char *out_dir, char **summary_json) {
    return run_command(qnoise::cmd_balance, config, out_dir, summary_json);
}

int qn_cmd_psd(const qn_config *config, const char *out_dir, char **summary_json) {
    return run_command(qnoise::cmd_psd, config, out_dir, summary_json);
}

int qn_cmd_power_scan(const qn_config *config, const char *out_dir, char **summary_json) {
    return run_command(qnoise::cmd_power_scan, config, out_dir, summary_json);
}

int qn_cmd_qrng(const qn_config *config, const char *out_dir, char **summary_json) {
    return run_command(qnoise::cmd_qrng, config, out_dir, summary_json);
}

int qn_transfer_matrix(double alpha1, double alpha2, double phi, double eta1, double eta2, double re[4],
                       double im[4]) {
    return guarded([&] {
        require(re && im, "output arrays must not be null");
        const qnoise::InterferometerConfig cfg{{alpha1}, {alpha2}, {phi}, qnoise::ArmLosses(eta1, eta2)};
        const qnoise::TransferMatrix u = qnoise::compose_transfer(cfg);
        const qnoise::Complex e[4] = {u.u11, u.u12, u.u21, u.u22};
        for (int i = 0; i < 4; ++i) {
            re[i] = e[i].real();
            im[i] = e[i].imag();
        }
    });
}

int qn_balance_phase(double alpha1, double alpha2, double eta1, double eta2, double *phi) {
    return guarded([&] {
        require(phi, "phi must not be null");
        *phi = qnoise::balance_phase({alpha1}, {alpha2}, qnoise::ArmLosses(eta1, eta2)).phi;
    });
}

int qn_shot_noise_psd(const qn_config *config, double f_hz, double p_opt_w, double *psd) {
    return guarded([&] {
        require(config && psd, "config and psd must not be null");
        *psd = qnoise::shot_noise_psd(f_hz, p_opt_w, qnoise::build_detector(config->value));
    });
}

int qn_min_entropy(int bits, double full_scale_sigma, double *h_min) {
    return guarded([&] {
        require(h_min, "h_min must not be null");
        *h_min = qnoise::min_entropy({bits, full_scale_sigma});
    });
}

int qn_series_generate(const qn_config *config, qn_series **out) {
    return guarded([&] {
        require(config && out, "config and out must not be null");
        const auto &c = config->value;
        c.validate();
        *out = new qn_series{qnoise::generate_timeseries(qnoise::build_interferometer(c),
                                                         qnoise::build_local_oscillator(c), qnoise::build_sampler(c))};
    });
}

int qn_series_load(const char *path, qn_series **out) {
    return guarded([&] {
        require(path && out, "path and out must not be null");
        *out = new qn_series{qnoise::load_series_binary(path)};
    });
}

int qn_series_save(const qn_series *series, const char *path) {
    return guarded([&] {
        require(series && path, "series and path must not be null");
        qnoise::save_series_binary(path, series->value);
    });
}

size_t qn_series_length(const qn_series *series) { return series ? series->value.samples.size() : 0; }

const double *qn_series_data(const qn_series *series) { return series ? series->value.samples.data() : nullptr; }

double qn_series_sample_rate(const qn_series *series) { return series ? series->value.sample_rate : 0.0; }

void qn_series_destroy(qn_series *series) { delete series; }

}  // extern "C"
