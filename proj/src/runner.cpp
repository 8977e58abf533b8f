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

#include "bccm/runner.hpp"

#include <cstdio>
#include <fstream>

#include "bccm/classifier.hpp"
#include "bccm/optimizer.hpp"

namespace bccm {

namespace {

std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write output file: " + path.string());
    out << content;
    if (!out) throw ValidationError("failed writing output file: " + path.string());
}

}  // namespace

std::string csv_text(const std::vector<RatePair>& rows) {
    std::string out =
        "scheme,order,alpha,r1_bits,r2_bits,r1_stderr,r2_stderr,b_iterations,b_residual,converged\n";
    for (const RatePair& p : rows) {
        out += to_string(p.meta.scheme);
        out += ',';
        out += p.meta.order ? p.meta.order->label() : "na";
        out += ',';
        out += fmt12(p.meta.alpha);
        out += ',';
        out += fmt12(p.r1);
        out += ',';
        out += fmt12(p.r2);
        out += ',';
        out += fmt12(p.meta.r1_std_error);
        out += ',';
        out += fmt12(p.meta.r2_std_error);
        out += ',';
        out += std::to_string(p.meta.b_iterations);
        out += ',';
        out += fmt12(p.meta.b_residual);
        out += ',';
        out += p.meta.b_converged ? "true" : "false";
        out += '\n';
    }
    return out;
}

std::vector<RatePair> low_snr_sweep(const Scenario& sc) {
    std::vector<RatePair> rows;
    for (double alpha : alpha_grid_points(sc.alpha_grid)) {
        rows.push_back(low_snr_region(sc.user1, sc.user2, sc.total_power, alpha));
    }
    return rows;
}

int run(const RunConfig& config, std::ostream& log) {
    const Scenario sc = validate_scenario(config.scenario);
    if (config.schemes.empty()) throw ValidationError("run: no schemes requested");

    const Classification cls = classify(sc.user1, sc.user2);
    log << "classification: " << to_string(cls.verdict) << "\n";
    for (const std::string& reason : cls.reasons) log << "  - " << reason << "\n";

    std::filesystem::create_directories(config.output_path);

    std::string summary;
    summary += "verdict: " + std::string(to_string(cls.verdict)) + "\n";
    summary += "low_snr_indefinite: " + std::string(to_string(cls.low_snr_indefinite)) + "\n";

    for (Scheme scheme : config.schemes) {
        const std::string name{to_string(scheme)};
        std::vector<RatePair> frontier;
        std::vector<RatePair> raw;
        if (scheme == Scheme::LowSnr) {
            raw = low_snr_sweep(sc);
            frontier = pareto_frontier(raw);
            for (RatePair& p : frontier) {
                if (p.meta.synthetic) p.meta.scheme = Scheme::LowSnr;
            }
        } else {
            RegionResult region = build_region(sc, scheme);
            frontier = std::move(region.frontier);
            raw = std::move(region.raw_points);
        }
        write_file(config.output_path / (name + ".csv"), csv_text(frontier));
        if (config.emit_raw) {
            write_file(config.output_path / (name + "_raw.csv"), csv_text(raw));
        }
        double r1max = 0.0, r2max = 0.0;
        for (const RatePair& p : frontier) {
            r1max = std::max(r1max, p.r1);
            r2max = std::max(r2max, p.r2);
        }
        summary += "scheme " + name + ": frontier_points=" + std::to_string(frontier.size()) +
                   " raw_points=" + std::to_string(raw.size()) + " max_r1=" + fmt12(r1max) +
                   " max_r2=" + fmt12(r2max) + "\n";
        log << "wrote " << (config.output_path / (name + ".csv")).string() << " ("
            << frontier.size() << " frontier points)\n";
    }
    write_file(config.output_path / "summary.txt", summary);
    return 0;
}

}  // namespace bccm
