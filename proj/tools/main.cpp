// SPDX-License-Identifier: Apache-2.0
//
// bccm: secrecy rate regions for fading MISO broadcast channels
// with confidential messages under statistical CSIT
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <CLI11.hpp>
#include <iostream>

#include "bccm/classifier.hpp"
#include "bccm/config.hpp"
#include "bccm/optimizer.hpp"
#include "bccm/runner.hpp"

namespace {

struct CommonOptions {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::uint64_t samples = 0;
    bool samples_set = false;
    bool emit_raw = false;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--config", opts.config_path, "scenario config file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", opts.out_dir, "output directory for CSV files");
    cmd->add_option("--seed", opts.seed, "override the config seed")
        ->each([&opts](const std::string&) { opts.seed_set = true; });
    cmd->add_option("--samples", opts.samples, "override the Monte-Carlo sample count")
        ->each([&opts](const std::string&) { opts.samples_set = true; });
    cmd->add_flag("--raw", opts.emit_raw, "also write the unfiltered point sweeps");
}

bccm::RunConfig load(const CommonOptions& opts) {
    bccm::RunConfig config = bccm::load_config(opts.config_path);
    if (opts.seed_set) config.scenario.seed = opts.seed;
    if (opts.samples_set) {
        if (opts.samples == 0) throw bccm::ValidationError("--samples must be >= 1");
        config.scenario.mc_samples = opts.samples;
    }
    config.output_path = opts.out_dir;
    config.emit_raw = opts.emit_raw;
    return config;
}

void print_classification(const bccm::Classification& cls) {
    std::cout << "classification: " << bccm::to_string(cls.verdict) << "\n";
    for (const std::string& reason : cls.reasons) std::cout << "  - " << reason << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"achievable secrecy rate regions for fading MISO broadcast channels "
                 "with confidential messages"};
    app.require_subcommand(1);

    CommonOptions opts;
    CLI::App* cmd_classify = app.add_subcommand("classify", "degradedness screen from the statistics");
    CLI::App* cmd_region = app.add_subcommand("region", "sweep the configured schemes and write CSVs");
    CLI::App* cmd_lowsnr = app.add_subcommand("lowsnr", "low-SNR asymptote sweep");
    CLI::App* cmd_wiretap = app.add_subcommand("wiretap", "single-user wiretap endpoint rates");
    CLI::App* cmd_validate = app.add_subcommand("validate", "parse and validate a config file");
    for (CLI::App* cmd : {cmd_classify, cmd_region, cmd_lowsnr, cmd_wiretap, cmd_validate}) {
        add_common(cmd, opts);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        bccm::RunConfig config = load(opts);
        const bccm::Scenario& sc = config.scenario;

        if (cmd_validate->parsed()) {
            std::cout << "OK: " << opts.config_path << " (n_T=" << sc.user1.cov.n_rows
                      << ", p_t=" << sc.total_power << ", mc_samples=" << sc.mc_samples
                      << ", alpha_grid=" << sc.alpha_grid << ", schemes=" << config.schemes.size()
                      << ")\n";
            return 0;
        }
        if (cmd_classify->parsed()) {
            print_classification(bccm::classify(sc.user1, sc.user2));
            return 0;
        }
        if (cmd_lowsnr->parsed()) {
            config.schemes = {bccm::Scheme::LowSnr};
            return bccm::run(config, std::cout);
        }
        if (cmd_wiretap->parsed()) {
            std::vector<bccm::RatePair> rows;
            for (int user : {1, 2}) {
                bccm::McEstimate est;
                const double rate = bccm::wiretap_rate(sc, user, &est);
                bccm::RatePair row;
                row.meta.scheme = bccm::Scheme::Wiretap;
                row.meta.order = (user == 1) ? bccm::kOrder12 : bccm::kOrder21;
                row.meta.alpha = 1.0;
                (user == 1 ? row.r1 : row.r2) = rate;
                (user == 1 ? row.meta.r1_std_error : row.meta.r2_std_error) = est.std_error;
                rows.push_back(row);
                std::cout << "wiretap rate, user " << user << ": " << rate << " bits (stderr "
                          << est.std_error << ")\n";
            }
            std::filesystem::create_directories(config.output_path);
            std::ofstream out(config.output_path / "wiretap.csv", std::ios::binary);
            out << bccm::csv_text(rows);
            return 0;
        }
        // region
        return bccm::run(config, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return bccm::exit_code_for(e);
    }
}
