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

#include "bccm/sampling.hpp"

#include <numbers>
#include <random>

namespace bccm {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

namespace {

// Box-Muller on explicit 53-bit uniforms. Pinned here instead of
// std::normal_distribution so a seed reproduces the same bytes everywhere.
class ComplexNormalStream {
  public:
    explicit ComplexNormalStream(std::uint64_t seed) : rng_(seed) {}

    arma::cx_double next() {
        const double u1 = 1.0 - to_unit(rng_());  // (0, 1], keeps the log finite
        const double u2 = to_unit(rng_());
        const double r = std::sqrt(-std::log(u1));  // |z|^2 ~ Exp(1), E|z|^2 = 1
        const double phi = 2.0 * std::numbers::pi * u2;
        return {r * std::cos(phi), r * std::sin(phi)};
    }

  private:
    static double to_unit(std::uint64_t v) { return static_cast<double>(v >> 11) * 0x1.0p-53; }
    std::mt19937_64 rng_;
};

}  // namespace

FadingBatch sample_channel(const ChannelStats& stats, std::size_t count, std::uint64_t seed) {
    if (count == 0) throw BadCountError("sample_channel: count must be >= 1");
    const arma::uword n = stats.cov.n_rows;

    arma::cx_mat chol_factor;
    if (!arma::chol(chol_factor, stats.cov, "lower")) {
        // Singular (or exactly zero) covariance: eigendecomposition square root.
        arma::vec eigval;
        arma::cx_mat eigvec;
        if (!arma::eig_sym(eigval, eigvec, stats.cov)) {
            throw NumericalError("sample_channel: eigendecomposition of cov failed");
        }
        eigval.transform([](double v) { return v > 0.0 ? std::sqrt(v) : 0.0; });
        chol_factor = eigvec * arma::diagmat(arma::cx_vec(eigval, arma::vec(n, arma::fill::zeros)));
    }

    FadingBatch batch;
    batch.source_seed = seed;
    batch.stats_label = stats.label;

    arma::cx_mat z(n, count);
    ComplexNormalStream stream(seed);
    arma::cx_double* ptr = z.memptr();
    for (arma::uword i = 0; i < n * count; ++i) ptr[i] = stream.next();

    batch.samples = chol_factor * z;
    batch.samples.each_col() += stats.mean;
    return batch;
}

double chunked_sum(std::span<const double> values) {
    constexpr std::size_t kChunk = 1024;
    if (values.size() <= kChunk) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t n_blocks = (values.size() + kChunk - 1) / kChunk;
    std::vector<double> partial(n_blocks);
    for (std::size_t b = 0; b < n_blocks; ++b) {
        const std::size_t lo = b * kChunk;
        const std::size_t hi = std::min(lo + kChunk, values.size());
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += values[i];
        partial[b] = s;
    }
    return chunked_sum(partial);
}

McEstimate estimate(std::span<const double> values) {
    McEstimate est;
    const std::size_t n = values.size();
    if (n == 0) return est;
    est.mean = chunked_mean(values);
    if (n == 1) return est;
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = values[i] - est.mean;
        sq[i] = d * d;
    }
    const double var = chunked_sum(sq) / static_cast<double>(n - 1);
    est.std_error = std::sqrt(var / static_cast<double>(n));
    return est;
}

}  // namespace bccm
