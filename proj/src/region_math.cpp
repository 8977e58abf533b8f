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

#include "bccm/region_math.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bccm/detail/block_assembly.hpp"

namespace bccm {

std::string_view to_string(Scheme s) {
    switch (s) {
        case Scheme::StatisticalCsit: return "statistical-csit";
        case Scheme::FullCsit: return "full-csit";
        case Scheme::TimeSharing: return "time-sharing";
        case Scheme::InterferenceAsNoise: return "interference-as-noise";
        case Scheme::MeanMmseB: return "mean-mmse-b";
        case Scheme::LowSnr: return "low-snr";
        case Scheme::Wiretap: return "wiretap";
    }
    return "unknown";
}

Scheme scheme_from_string(std::string_view name) {
    for (Scheme s : {Scheme::StatisticalCsit, Scheme::FullCsit, Scheme::TimeSharing,
                     Scheme::InterferenceAsNoise, Scheme::MeanMmseB, Scheme::LowSnr,
                     Scheme::Wiretap}) {
        if (name == to_string(s)) return s;
    }
    throw ParseError("unknown scheme name: '" + std::string(name) + "'");
}

double quad_form(const arma::cx_mat& k, std::span<const arma::cx_double> h) {
    const arma::uword n = k.n_rows;
    arma::cx_double acc(0.0, 0.0);
    for (arma::uword j = 0; j < n; ++j) {
        arma::cx_double col(0.0, 0.0);
        for (arma::uword i = 0; i < n; ++i) col += std::conj(h[i]) * k(i, j);
        acc += col * h[j];
    }
    return acc.real();
}

namespace {

constexpr double kLog2e = std::numbers::log2e;

void check_batch_dim(const arma::cx_mat& k, const FadingBatch& batch, const char* where) {
    if (batch.dim() != k.n_rows || k.n_rows != k.n_cols) {
        throw DimensionMismatchError(std::string(where) + ": matrix is " + std::to_string(k.n_rows) +
                                     "x" + std::to_string(k.n_cols) + " but samples have length " +
                                     std::to_string(batch.dim()));
    }
    if (batch.count() == 0) throw BadCountError(std::string(where) + ": empty batch");
}

std::vector<double> log_quadratic_values(const arma::cx_mat& k, const FadingBatch& batch) {
    check_batch_dim(k, batch, "expect_log_quadratic");
    const arma::uword n = batch.count();
    const arma::uword d = batch.dim();
    std::vector<double> values(n);
    for (arma::uword i = 0; i < n; ++i) {
        const double q = std::max(0.0, quad_form(k, {batch.samples.colptr(i), d}));
        values[i] = std::log2(1.0 + q);
    }
    return values;
}

double checked_real_det(const arma::cx_double det, const char* where) {
    if (std::abs(det.imag()) > 1e-9) {
        throw NumericalError(std::string(where) + ": det(M) has imaginary residue " +
                             std::to_string(det.imag()));
    }
    return det.real();
}

// log2 det M per realization. When the second user sends nothing and b = 0
// the matrix has unit determinant identically (Schur complement
// 1 + h^H K1 h - h^H T1 T1^H h = 1), so the term is exactly zero.
std::vector<double> logdet_values(const TransmitCovariances& tc, const arma::cx_mat& b,
                                  const FadingBatch& batch) {
    check_batch_dim(tc.k_u1, batch, "secrecy_penalty");
    const arma::uword n = batch.count();
    if (b.is_zero(0.0) && tc.k_u2.is_zero(0.0)) {
        return std::vector<double>(n, 0.0);
    }
    const detail::BlockAssembly assembly(tc, b);
    std::vector<double> values(n);
    arma::cx_mat m;
    for (arma::uword i = 0; i < n; ++i) {
        assembly.fill({batch.samples.colptr(i), batch.dim()}, m);
        const double det = checked_real_det(lu_det(m), "secrecy_penalty");
        if (!(det > 0.0)) {
            throw NumericalError("secrecy_penalty: nonpositive det(M) = " + std::to_string(det) +
                                 " at sample " + std::to_string(i));
        }
        values[i] = std::log2(det);
    }
    return values;
}

}  // namespace

double expect_log_quadratic(const arma::cx_mat& k, const FadingBatch& batch) {
    return chunked_mean(log_quadratic_values(k, batch));
}

McEstimate expect_log_quadratic_est(const arma::cx_mat& k, const FadingBatch& batch) {
    return estimate(log_quadratic_values(k, batch));
}

BlockMatrix assemble_block_matrix(const TransmitCovariances& tc, const InflationFactor& b,
                                  const arma::cx_vec& h) {
    if (h.n_elem != tc.n_t()) {
        throw DimensionMismatchError("assemble_block_matrix: h has length " +
                                     std::to_string(h.n_elem) + ", expected " +
                                     std::to_string(tc.n_t()));
    }
    const detail::BlockAssembly assembly(tc, b.b);
    BlockMatrix m;
    assembly.fill({h.memptr(), h.n_elem}, m.mat);
    return m;
}

arma::cx_double lu_det(arma::cx_mat a) {
    const arma::uword n = a.n_rows;
    if (a.n_cols != n) throw DimensionMismatchError("lu_det: matrix is not square");
    int sign = 1;
    for (arma::uword k = 0; k < n; ++k) {
        arma::uword pivot = k;
        double best = std::abs(a(k, k));
        for (arma::uword i = k + 1; i < n; ++i) {
            const double v = std::abs(a(i, k));
            if (v > best) {
                best = v;
                pivot = i;
            }
        }
        if (best == 0.0) return {0.0, 0.0};
        if (pivot != k) {
            a.swap_rows(pivot, k);
            sign = -sign;
        }
        for (arma::uword i = k + 1; i < n; ++i) {
            const arma::cx_double f = a(i, k) / a(k, k);
            for (arma::uword j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
        }
    }
    arma::cx_double det(static_cast<double>(sign), 0.0);
    for (arma::uword k = 0; k < n; ++k) det *= a(k, k);
    return det;
}

double real_det(const BlockMatrix& m) {
    return checked_real_det(lu_det(m.mat), "real_det");
}

double secrecy_penalty(const TransmitCovariances& tc, const InflationFactor& b,
                       const FadingBatch& batch_pi1, const FadingBatch& batch_pi2) {
    return expect_log_quadratic(tc.k_u1, batch_pi2) +
           chunked_mean(logdet_values(tc, b.b, batch_pi1));
}

RatePair achievable_rates(const TransmitCovariances& tc, const InflationFactor& b,
                          const FadingBatch& batch_pi1, const FadingBatch& batch_pi2,
                          const EncodingOrder& order) {
    const arma::cx_mat ksum = tc.k_u1 + tc.k_u2;
    const std::vector<double> sum_rate_pi1 = log_quadratic_values(ksum, batch_pi1);
    const std::vector<double> sum_rate_pi2 = log_quadratic_values(ksum, batch_pi2);
    const std::vector<double> leak_pi2 = log_quadratic_values(tc.k_u1, batch_pi2);
    const std::vector<double> logdet_pi1 = logdet_values(tc, b.b, batch_pi1);

    // Same arithmetic as secrecy_penalty(), kept term-by-term so the
    // alpha = 1, b = 0 case reduces bit-exactly to the wiretap difference.
    const double penalty = chunked_mean(leak_pi2) + chunked_mean(logdet_pi1);
    const double pre1 = chunked_mean(sum_rate_pi1) - penalty;
    const double pre2 = chunked_mean(sum_rate_pi2) - penalty;

    // Batch-wise variances: terms over the same batch are combined per sample
    // first, the two batches are independent.
    const std::size_t n1 = sum_rate_pi1.size();
    const std::size_t n2 = sum_rate_pi2.size();
    std::vector<double> own1(n1);
    for (std::size_t i = 0; i < n1; ++i) own1[i] = sum_rate_pi1[i] - logdet_pi1[i];
    std::vector<double> own2(n2);
    for (std::size_t i = 0; i < n2; ++i) own2[i] = sum_rate_pi2[i] - leak_pi2[i];
    const McEstimate e_own1 = estimate(own1);
    const McEstimate e_own2 = estimate(own2);
    const McEstimate e_leak = estimate(leak_pi2);
    const McEstimate e_logdet = estimate(logdet_pi1);
    const double se1 = std::hypot(e_own1.std_error, e_leak.std_error);
    const double se2 = std::hypot(e_own2.std_error, e_logdet.std_error);

    RatePair pair;
    pair.meta.order = order;
    const double first_rate = std::max(0.0, pre1);
    const double second_rate = std::max(0.0, pre2);
    if (order.first == 1) {
        pair.r1 = first_rate;
        pair.r2 = second_rate;
        pair.meta.r1_std_error = se1;
        pair.meta.r2_std_error = se2;
        pair.meta.r1_preclamp = pre1;
        pair.meta.r2_preclamp = pre2;
    } else {
        pair.r1 = second_rate;
        pair.r2 = first_rate;
        pair.meta.r1_std_error = se2;
        pair.meta.r2_std_error = se1;
        pair.meta.r1_preclamp = pre2;
        pair.meta.r2_preclamp = pre1;
    }
    return pair;
}

InflationFactor mmse_inflation(const TransmitCovariances& tc, const arma::cx_vec& h) {
    if (h.n_elem != tc.n_t()) {
        throw DimensionMismatchError("mmse_inflation: h has length " + std::to_string(h.n_elem) +
                                     ", expected " + std::to_string(tc.n_t()));
    }
    const arma::cx_vec u = tc.t1.t() * h;                        // T1^H h
    const double denom = 1.0 + quad_form(tc.k_u1, {h.memptr(), h.n_elem});
    InflationFactor f;
    f.b = (u * h.t()) / denom;
    f.iterations = 0;
    f.residual = 0.0;
    f.converged = true;
    return f;
}

RatePair full_csit_rates(const TransmitCovariances& tc, const FadingBatch& batch_pi1,
                         const FadingBatch& batch_pi2, const EncodingOrder& order) {
    check_batch_dim(tc.k_u1, batch_pi1, "full_csit_rates");
    check_batch_dim(tc.k_u1, batch_pi2, "full_csit_rates");
    if (batch_pi1.count() != batch_pi2.count()) {
        throw DimensionMismatchError("full_csit_rates: batches must pair index-wise");
    }
    const arma::cx_mat ksum = tc.k_u1 + tc.k_u2;
    const arma::uword n = batch_pi1.count();
    const arma::uword d = batch_pi1.dim();
    std::vector<double> v1(n), v2(n);
    for (arma::uword i = 0; i < n; ++i) {
        const std::span<const arma::cx_double> h1{batch_pi1.samples.colptr(i), d};
        const std::span<const arma::cx_double> h2{batch_pi2.samples.colptr(i), d};
        const double own1 = 1.0 + std::max(0.0, quad_form(tc.k_u1, h1));
        const double leak1 = 1.0 + std::max(0.0, quad_form(tc.k_u1, h2));
        const double sum1 = 1.0 + std::max(0.0, quad_form(ksum, h1));
        const double sum2 = 1.0 + std::max(0.0, quad_form(ksum, h2));
        v1[i] = std::max(0.0, std::log2(own1 / leak1));
        v2[i] = std::max(0.0, std::log2((sum2 * own1) / (sum1 * leak1)));
    }
    const McEstimate e1 = estimate(v1);
    const McEstimate e2 = estimate(v2);

    RatePair pair;
    pair.meta.order = order;
    pair.meta.scheme = Scheme::FullCsit;
    if (order.first == 1) {
        pair.r1 = e1.mean;
        pair.r2 = e2.mean;
        pair.meta.r1_std_error = e1.std_error;
        pair.meta.r2_std_error = e2.std_error;
        pair.meta.r1_preclamp = e1.mean;
        pair.meta.r2_preclamp = e2.mean;
    } else {
        pair.r1 = e2.mean;
        pair.r2 = e1.mean;
        pair.meta.r1_std_error = e2.std_error;
        pair.meta.r2_std_error = e1.std_error;
        pair.meta.r1_preclamp = e2.mean;
        pair.meta.r2_preclamp = e1.mean;
    }
    return pair;
}

std::pair<double, double> covariance_difference_eigs(const ChannelStats& u1,
                                                     const ChannelStats& u2) {
    if (u1.cov.n_rows != u2.cov.n_rows) {
        throw DimensionMismatchError("covariance_difference_eigs: dimension mismatch");
    }
    const arma::cx_mat diff = u1.cov - u2.cov;
    arma::vec eigval;
    if (!arma::eig_sym(eigval, diff)) {
        throw NumericalError("covariance_difference_eigs: eigendecomposition failed");
    }
    return {eigval.min(), eigval.max()};
}

RatePair low_snr_region(const ChannelStats& user1, const ChannelStats& user2, double p_t,
                        double alpha) {
    const auto [lam_min, lam_max] = covariance_difference_eigs(user1, user2);
    RatePair pair;
    pair.meta.scheme = Scheme::LowSnr;
    pair.meta.alpha = alpha;
    pair.meta.r1_preclamp = alpha * p_t * kLog2e * lam_max;
    pair.meta.r2_preclamp = (1.0 - alpha) * p_t * kLog2e * (-lam_min);
    pair.r1 = std::max(0.0, pair.meta.r1_preclamp);
    pair.r2 = std::max(0.0, pair.meta.r2_preclamp);
    return pair;
}

}  // namespace bccm
