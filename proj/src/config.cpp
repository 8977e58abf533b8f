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

#include "bccm/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace bccm {

namespace {

struct RawEntry {
    std::string value;
    int line = 0;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

const std::set<std::string, std::less<>> kKnownKeys = {
    "user1.mean_re", "user1.mean_im", "user1.cov",
    "user2.mean_re", "user2.mean_im", "user2.cov",
    "p_t", "mc_samples", "alpha_grid", "seed", "epsilon", "max_iters", "schemes",
};

class ConfigReader {
  public:
    ConfigReader(std::string_view text, std::string_view origin) : origin_(origin) {
        int line_no = 0;
        std::istringstream stream{std::string(text)};
        std::string line;
        while (std::getline(stream, line)) {
            ++line_no;
            std::string_view body = line;
            if (const auto hash = body.find('#'); hash != std::string_view::npos) {
                body = body.substr(0, hash);
            }
            body = trim(body);
            if (body.empty()) continue;
            const auto eq = body.find('=');
            if (eq == std::string_view::npos) {
                fail(line_no, "expected 'key = value'");
            }
            const std::string key{trim(body.substr(0, eq))};
            const std::string value{trim(body.substr(eq + 1))};
            if (kKnownKeys.find(key) == kKnownKeys.end()) {
                fail(line_no, "unknown key '" + key + "'");
            }
            if (entries_.count(key) != 0) {
                fail(line_no, "duplicate key '" + key + "' (first on line " +
                                  std::to_string(entries_[key].line) + ")");
            }
            entries_[key] = RawEntry{value, line_no};
        }
    }

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    std::vector<double> reals(const std::string& key) const {
        const RawEntry& e = entry(key);
        std::vector<double> out;
        std::string normalized = e.value;
        for (char& c : normalized) {
            if (c == ',') c = ' ';
        }
        std::istringstream s(normalized);
        std::string token;
        while (s >> token) {
            out.push_back(parse_double(key, e.line, token));
        }
        if (out.empty()) fail(e.line, "key '" + key + "' has no numeric values");
        return out;
    }

    double real(const std::string& key) const {
        const auto v = reals(key);
        if (v.size() != 1) fail(entry(key).line, "key '" + key + "' expects a single number");
        return v[0];
    }

    std::uint64_t unsigned_int(const std::string& key) const {
        const RawEntry& e = entry(key);
        const std::string_view sv = trim(e.value);
        std::uint64_t out = 0;
        const auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), out);
        if (ec != std::errc() || ptr != sv.data() + sv.size()) {
            fail(e.line, "key '" + key + "' expects a nonnegative integer, got '" + e.value + "'");
        }
        return out;
    }

    std::vector<std::string> list(const std::string& key) const {
        const RawEntry& e = entry(key);
        std::vector<std::string> out;
        std::istringstream s(e.value);
        std::string token;
        while (std::getline(s, token, ',')) {
            const std::string_view t = trim(token);
            if (!t.empty()) out.emplace_back(t);
        }
        if (out.empty()) fail(e.line, "key '" + key + "' has no values");
        return out;
    }

    int line_of(const std::string& key) const { return entry(key).line; }

    [[noreturn]] void fail(int line, const std::string& message) const {
        throw ParseError(std::string(origin_) + ":" + std::to_string(line) + ": " + message);
    }

  private:
    const RawEntry& entry(const std::string& key) const {
        const auto it = entries_.find(key);
        if (it == entries_.end()) throw ParseError(std::string(origin_) + ": missing required key '" + key + "'");
        return it->second;
    }

    double parse_double(const std::string& key, int line, const std::string& token) const {
        try {
            std::size_t used = 0;
            const double v = std::stod(token, &used);
            if (used != token.size() || !std::isfinite(v)) throw std::invalid_argument(token);
            return v;
        } catch (const std::exception&) {
            fail(line, "key '" + key + "': cannot parse number '" + token + "'");
        }
    }

    std::string origin_;
    std::map<std::string, RawEntry> entries_;
};

ChannelStats read_user(const ConfigReader& reader, const std::string& prefix) {
    const std::string cov_key = prefix + ".cov";
    if (!reader.has(cov_key)) {
        throw ParseError("missing required key '" + cov_key + "'");
    }
    const std::vector<double> flat = reader.reals(cov_key);
    if (flat.size() % 2 != 0) {
        reader.fail(reader.line_of(cov_key), "'" + cov_key + "' needs re,im pairs (even count)");
    }
    const auto n_sq = flat.size() / 2;
    const auto n = static_cast<arma::uword>(std::llround(std::sqrt(static_cast<double>(n_sq))));
    if (n * n != n_sq || n == 0) {
        reader.fail(reader.line_of(cov_key),
                    "'" + cov_key + "' needs 2*n^2 numbers for an n x n complex matrix, got " +
                        std::to_string(flat.size()));
    }
    ChannelStats stats;
    stats.label = prefix;
    stats.cov.set_size(n, n);
    for (arma::uword r = 0; r < n; ++r) {
        for (arma::uword c = 0; c < n; ++c) {
            const std::size_t k = 2 * (r * n + c);
            stats.cov(r, c) = arma::cx_double(flat[k], flat[k + 1]);
        }
    }
    arma::vec mean_re(n, arma::fill::zeros), mean_im(n, arma::fill::zeros);
    for (const auto& [key, target] : {std::pair{prefix + ".mean_re", &mean_re},
                                      std::pair{prefix + ".mean_im", &mean_im}}) {
        if (!reader.has(key)) continue;
        const std::vector<double> v = reader.reals(key);
        if (v.size() != n) {
            reader.fail(reader.line_of(key), "'" + key + "' needs " + std::to_string(n) +
                                                 " values to match the covariance, got " +
                                                 std::to_string(v.size()));
        }
        *target = arma::vec(v);
    }
    stats.mean = arma::cx_vec(mean_re, mean_im);
    return stats;
}

}  // namespace

RunConfig parse_config_text(std::string_view text, std::string_view origin) {
    const ConfigReader reader(text, origin);
    RunConfig config;

    Scenario sc;
    sc.user1 = read_user(reader, "user1");
    sc.user2 = read_user(reader, "user2");
    if (!reader.has("p_t")) throw ParseError(std::string(origin) + ": missing required key 'p_t'");
    sc.total_power = reader.real("p_t");
    if (reader.has("mc_samples")) sc.mc_samples = reader.unsigned_int("mc_samples");
    if (reader.has("alpha_grid")) sc.alpha_grid = reader.unsigned_int("alpha_grid");
    if (reader.has("seed")) sc.seed = reader.unsigned_int("seed");
    if (reader.has("epsilon")) sc.epsilon = reader.real("epsilon");
    if (reader.has("max_iters")) sc.max_iters = reader.unsigned_int("max_iters");

    try {
        config.scenario = validate_scenario(std::move(sc));
    } catch (const ValidationError&) {
        throw;
    } catch (const Error& e) {
        throw ValidationError(std::string(origin) + ": " + e.what());
    }

    if (reader.has("schemes")) {
        config.schemes.clear();
        for (const std::string& name : reader.list("schemes")) {
            try {
                config.schemes.push_back(scheme_from_string(name));
            } catch (const ParseError&) {
                reader.fail(reader.line_of("schemes"), "unknown scheme '" + name + "'");
            }
            if (config.schemes.back() == Scheme::Wiretap) {
                reader.fail(reader.line_of("schemes"),
                            "'wiretap' is a CLI subcommand, not a sweep scheme");
            }
        }
    }
    return config;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), path.string());
}

}  // namespace bccm
