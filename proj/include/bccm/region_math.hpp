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
#include <optional>
#include <span>
#include <vector>

#include "bccm/channel_model.hpp"
#include "bccm/sampling.hpp"

namespace bccm {

enum class Scheme {
    StatisticalCsit,
    FullCsit,
    TimeSharing,
    InterferenceAsNoise,
    MeanMmseB,
    LowSnr,
    Wiretap,
};

std::string_view to_string(Scheme s);
Scheme scheme_from_string(std::string_view name);

/// Provenance and diagnostics attached to one computed rate pair.
struct RateMeta {
    Scheme scheme = Scheme::StatisticalCsit;
    std::optional<EncodingOrder> order;  ///< empty for order-free schemes
    double alpha = 0.0;                  ///< power split (time-sharing: the time fraction t)
    double ts_beta = 0.0;                ///< time-sharing inner power split
    double r1_std_error = 0.0;
    double r2_std_error = 0.0;
    double r1_preclamp = 0.0;            ///< bounds before the (.)^+ clamp
    double r2_preclamp = 0.0;
    std::size_t b_iterations = 0;
    double b_residual = 0.0;
    bool b_converged = true;
    bool synthetic = false;              ///< hull closure point, not an evaluated one
};

/// One achievable point, in bits per channel use. r1 always belongs to user 1
/// regardless of the encoding order.
struct RatePair {
    double r1 = 0.0;
    double r2 = 0.0;
    RateMeta meta;
};

/// Real part of h^H k h, evaluated in a fixed order.
double quad_form(const arma::cx_mat& k, std::span<const arma::cx_double> h);

/// E_H[log2(1 + H^H k H)] over the batch; never negative.
double expect_log_quadratic(const arma::cx_mat& k, const FadingBatch& batch);
McEstimate expect_log_quadratic_est(const arma::cx_mat& k, const FadingBatch& batch);

/// The (N+1) x (N+1) block matrix of the precoded user's rate penalty:
///
///   [ I + b K2 b^H          (T1^H + b K2) h          ]
///   [ h^H (T1 + K2 b^H)     1 + h^H (K1 + K2) h      ]
///
/// It is the covariance of the auxiliary codeword stacked with the first
/// user's channel output, so it is Hermitian and det >= 1.
struct BlockMatrix {
    arma::cx_mat mat;
};

BlockMatrix assemble_block_matrix(const TransmitCovariances& tc, const InflationFactor& b,
                                  const arma::cx_vec& h);

/// Determinant by LU with partial pivoting (the matrix is small).
arma::cx_double lu_det(arma::cx_mat a);

/// Determinant of the block matrix as a real number. An imaginary residue of
/// up to 1e-9 is discarded; anything larger raises a NumericalError.
double real_det(const BlockMatrix& m);

/// The penalty subtracted from both users' rate bounds:
///
///   E_{H_pi2}[log2(1 + H^H K1 H)] + E_{H_pi1}[log2 det M(H)]
///
/// batch_pi1 / batch_pi2 are the first- and second-encoded users' batches.
double secrecy_penalty(const TransmitCovariances& tc, const InflationFactor& b,
                       const FadingBatch& batch_pi1, const FadingBatch& batch_pi2);

/// Achievable rate pair under statistical CSIT for one power split, encoding
/// order and inflation factor:
///
///   R_pik = ( E_{H_pik}[log2(1 + H^H (K1 + K2) H)] - penalty )^+ ,  k = 1, 2
///
/// with the same penalty subtracted from both bounds. The clamp is applied
/// after the expectations. Standard errors combine per-sample variances of
/// the batch-wise terms.
RatePair achievable_rates(const TransmitCovariances& tc, const InflationFactor& b,
                          const FadingBatch& batch_pi1, const FadingBatch& batch_pi2,
                          const EncodingOrder& order);

/// MMSE inflation factor for a known channel realization h:
///   b = T1^H h h^H / (1 + h^H K1 h),  shape N x n_T.
InflationFactor mmse_inflation(const TransmitCovariances& tc, const arma::cx_vec& h);

/// Full-CSIT baseline rates. The clamp sits inside the expectation, one term
/// per joint realization (the batches are paired index-wise):
///
///   R_pi1 = E[( log2( (1 + H1^H K1 H1) / (1 + H2^H K1 H2) ) )^+]
///   R_pi2 = E[( log2( (1+H2^H S H2)(1+H1^H K1 H1) / ((1+H1^H S H1)(1+H2^H K1 H2)) ) )^+]
///
/// with S = K1 + K2 and H1/H2 the first-/second-encoded users' draws. The
/// per-realization MMSE precoder is already folded into these expressions.
RatePair full_csit_rates(const TransmitCovariances& tc, const FadingBatch& batch_pi1,
                         const FadingBatch& batch_pi2, const EncodingOrder& order);

/// Smallest and largest eigenvalue of cov1 - cov2. Shared by the low-SNR
/// asymptote and the classifier so their verdicts coincide exactly.
std::pair<double, double> covariance_difference_eigs(const ChannelStats& u1,
                                                     const ChannelStats& u2);

/// First-order (low SNR) asymptote of the rate region:
///   R1 <= ( alpha P / ln 2 * lambda_max(K_H1 - K_H2) )^+
///   R2 <= ( (1-alpha) P / ln 2 * lambda_max(K_H2 - K_H1) )^+
RatePair low_snr_region(const ChannelStats& user1, const ChannelStats& user2, double p_t,
                        double alpha);

}  // namespace bccm
