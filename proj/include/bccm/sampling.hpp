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

#pragma once

#include <armadillo>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "bccm/channel_model.hpp"
#include "bccm/errors.hpp"

namespace bccm {

/// A seeded batch of fading realizations, one column per draw. Regenerating
/// with the same (stats, count, seed) yields a bit-identical batch, which is
/// what makes objective surfaces smooth across power splits and solver
/// iterations (common random numbers).
struct FadingBatch {
    arma::cx_mat samples;       ///< n_T x count
    std::uint64_t source_seed = 0;
    std::string stats_label;

    arma::uword dim() const { return samples.n_rows; }
    arma::uword count() const { return samples.n_cols; }
};

/// splitmix64 scrambler, used to derive independent per-user seed streams.
std::uint64_t splitmix64(std::uint64_t x);

/// FNV-1a hash of a label.
std::uint64_t fnv1a(std::string_view s);

/// Seed for one user's stream. Tying the stream to the label (not the field
/// position) makes swapping the two users an exact relabeling.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view label) {
    return splitmix64(base ^ fnv1a(label));
}

/// Draws `count` realizations of the channel: mean + L z with L L^H = cov
/// (Cholesky, falling back to an eigendecomposition square root when the
/// covariance is singular) and z i.i.d. unit-variance circularly symmetric
/// complex Gaussian (independent real/imaginary parts of variance 1/2).
FadingBatch sample_channel(const ChannelStats& stats, std::size_t count, std::uint64_t seed);

/// Mean plus standard error of a Monte-Carlo estimate.
struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};

/// Fixed-shape reduction: sums blocks of 1024 values in order, then reduces
/// the block sums the same way. The result does not depend on how the values
/// were produced (thread count, scheduling), only on their order.
double chunked_sum(std::span<const double> values);

inline double chunked_mean(std::span<const double> values) {
    return chunked_sum(values) / static_cast<double>(values.size());
}

/// Mean and standard error with the same fixed reduction shape.
McEstimate estimate(std::span<const double> values);

namespace detail {

template <class F>
void evaluate_samples(const FadingBatch& batch, F&& f, std::vector<double>& out,
                      unsigned n_threads) {
    const arma::uword n = batch.count();
    const arma::uword d = batch.dim();
    out.resize(n);
    auto eval_range = [&](arma::uword lo, arma::uword hi) {
        for (arma::uword i = lo; i < hi; ++i) {
            out[i] = f(std::span<const arma::cx_double>(batch.samples.colptr(i), d));
        }
    };
    if (n_threads <= 1 || n < 2048) {
        eval_range(0, n);
    } else {
        std::vector<std::thread> pool;
        const arma::uword step = (n + n_threads - 1) / n_threads;
        for (unsigned t = 0; t < n_threads; ++t) {
            const arma::uword lo = std::min<arma::uword>(t * step, n);
            const arma::uword hi = std::min<arma::uword>(lo + step, n);
            if (lo < hi) pool.emplace_back(eval_range, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    for (arma::uword i = 0; i < n; ++i) {
        if (std::isnan(out[i])) {
            throw EvaluationError("mc_expect: NaN from per-sample function at sample index " +
                                  std::to_string(i));
        }
    }
}

}  // namespace detail

/// Arithmetic mean of f over the batch. f receives one sample as a span of
/// n_T complex values and returns a real number; a NaN raises an
/// EvaluationError naming the sample index. The reduction order is fixed, so
/// the result is bit-identical for any n_threads.
template <class F>
double mc_expect(const FadingBatch& batch, F&& f, unsigned n_threads = 1) {
    if (batch.count() == 0) throw BadCountError("mc_expect: empty batch");
    std::vector<double> values;
    detail::evaluate_samples(batch, std::forward<F>(f), values, n_threads);
    return chunked_mean(values);
}

/// Same as mc_expect, also reporting the Monte-Carlo standard error.
template <class F>
McEstimate mc_expect_est(const FadingBatch& batch, F&& f, unsigned n_threads = 1) {
    if (batch.count() == 0) throw BadCountError("mc_expect: empty batch");
    std::vector<double> values;
    detail::evaluate_samples(batch, std::forward<F>(f), values, n_threads);
    return estimate(values);
}

}  // namespace bccm
