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

#include <cstdio>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "qnoise/qnoise.h"

namespace {

using CommandFn = int (*)(const qn_config *, const char *, char **);

// Exit codes: 0 ok, 2 config, 3 non-convergence, 4 numerical/runtime.
int exit_code(int status) {
    switch (status) {
        case QN_OK:
            return 0;
        case QN_ERR_CONFIG:
        case QN_ERR_INVALID_ARGUMENT:
        case QN_ERR_UNBALANCEABLE:
        case QN_ERR_DEGENERATE:
            return 2;
        case QN_ERR_NONCONVERGENCE:
            return 3;
        default:
            return 4;
    }
}

int run(const std::string &name, CommandFn fn, const std::string &config_path, const std::string &out_dir,
        const std::optional<std::uint64_t> &seed, bool quiet) {
    qn_config *config = nullptr;
    int status = qn_config_load(config_path.c_str(), &config);
    if (status == QN_OK && seed) {
        status = qn_config_set_seed(config, *seed);
    }
    char *summary = nullptr;
    if (status == QN_OK) {
        status = fn(config, out_dir.c_str(), &summary);
    }
    qn_config_destroy(config);
    if (status != QN_OK) {
        std::fprintf(stderr, "qnoise %s: %s: %s\n", name.c_str(), qn_status_name(status), qn_last_error());
        return exit_code(status);
    }
    const auto doc = nlohmann::json::parse(summary);
    qn_string_free(summary);
    if (!quiet) {
        for (const auto &w : doc.value("warnings", nlohmann::json::array())) {
            std::fprintf(stderr, "warning: %s\n", w.get<std::string>().c_str());
        }
        nlohmann::json shown = doc;
        shown.erase("warnings");
        std::printf("%s\n", shown.dump(2).c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Balanced homodyne vacuum-noise simulator and QRNG"};
    app.require_subcommand(1);
    app.set_version_flag("--version", qn_version());

    const std::map<std::string, std::pair<CommandFn, const char *>> commands = {
        {"fringe", {qn_cmd_fringe, "Sweep the interferometer phase and export the fringe"}},
        {"balance", {qn_cmd_balance, "Run the operating-point controller to balance"}},
        {"psd", {qn_cmd_psd, "Noise spectrum after the detector and clearance over the floor"}},
        {"power-scan", {qn_cmd_power_scan, "Band noise power against LO power"}},
        {"qrng", {qn_cmd_qrng, "Generate extracted random bits"}},
    };

    std::string config_path, out_dir;
    std::optional<std::uint64_t> seed;
    bool quiet = false;
    for (const auto &[name, entry] : commands) {
        CLI::App *sub = app.add_subcommand(name, entry.second);
        sub->add_option("--config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "Output directory")->required();
        sub->add_option("--seed", seed, "Override sampler.seed");
        sub->add_flag("--quiet", quiet, "Suppress the summary and warnings");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    for (const auto &[name, entry] : commands) {
        if (app.got_subcommand(name)) {
            return run(name, entry.first, config_path, out_dir, seed, quiet);
        }
    }
    return 2;
}
