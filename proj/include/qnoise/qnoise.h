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

#ifndef QNOISE_H
#define QNOISE_H

#include <stddef.h>
#include <stdint.h>

#if defined(QNOISE_BUILDING_LIBRARY)
#define QNOISE_API __attribute__((visibility("default")))
#else
#define QNOISE_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Every function returning int returns one of these. */
enum {
    QN_OK = 0,
    QN_ERR_INVALID_ARGUMENT = 1,
    QN_ERR_CONFIG = 2,
    QN_ERR_NONCONVERGENCE = 3,
    QN_ERR_NUMERICAL = 4,
    QN_ERR_IO = 5,
    QN_ERR_UNBALANCEABLE = 6,
    QN_ERR_DEGENERATE = 7,
    QN_ERR_INTERNAL = 99
};

typedef struct qn_config qn_config;
typedef struct qn_series qn_series;

QNOISE_API const char *qn_version(void);

/* Message for the last failure on the calling thread; "" if none. */
QNOISE_API const char *qn_last_error(void);
QNOISE_API const char *qn_status_name(int status);

/* Strings returned through char** out-parameters are owned by the caller. */
QNOISE_API void qn_string_free(char *s);

QNOISE_API int qn_config_create_default(qn_config **out);
QNOISE_API int qn_config_load(const char *path, qn_config **out);
QNOISE_API int qn_config_from_json(const char *text, qn_config **out);
QNOISE_API int qn_config_to_json(const qn_config *config, char **out_json);
QNOISE_API int qn_config_set_seed(qn_config *config, uint64_t seed);
QNOISE_API int qn_config_get_seed(const qn_config *config, uint64_t *seed);
QNOISE_API void qn_config_destroy(qn_config *config);

/* Experiment commands. Files go to out_dir; summary_json may be NULL. */
QNOISE_API int qn_cmd_fringe(const qn_config *config, const char *out_dir, char **summary_json);
QNOISE_API int qn_cmd_balance(const qn_config *config, const char *out_dir, char **summary_json);
QNOISE_API int qn_cmd_psd(const qn_config *config, const char *out_dir, char **summary_json);
QNOISE_API int qn_cmd_power_scan(const qn_config *config, const char *out_dir, char **summary_json);
QNOISE_API int qn_cmd_qrng(const qn_config *config, const char *out_dir, char **summary_json);

/* Row-major 2x2 transfer matrix of the interferometer. */
QNOISE_API int qn_transfer_matrix(double alpha1, double alpha2, double phi, double eta1, double eta2,
                                  double re[4], double im[4]);
/* Phase that nulls the mean difference current. */
QNOISE_API int qn_balance_phase(double alpha1, double alpha2, double eta1, double eta2, double *phi);
/* Quantum-noise PSD (W/Hz) into the load for the config's detector. */
QNOISE_API int qn_shot_noise_psd(const qn_config *config, double f_hz, double p_opt_w, double *psd);
/* Min-entropy (bits/sample) of a Gaussian digitized over +-k sigma. */
QNOISE_API int qn_min_entropy(int bits, double full_scale_sigma, double *h_min);

/* Difference-current series of the config's sampler, in photoelectrons per sample. */
QNOISE_API int qn_series_generate(const qn_config *config, qn_series **out);
QNOISE_API int qn_series_load(const char *path, qn_series **out);
QNOISE_API int qn_series_save(const qn_series *series, const char *path);
QNOISE_API size_t qn_series_length(const qn_series *series);
QNOISE_API const double *qn_series_data(const qn_series *series);
QNOISE_API double qn_series_sample_rate(const qn_series *series);
QNOISE_API void qn_series_destroy(qn_series *series);

#ifdef __cplusplus
}
#endif

#endif
