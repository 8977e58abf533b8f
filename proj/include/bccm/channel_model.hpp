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
#include <cstdint>
#include <optional>
#include <string>

#include "bccm/errors.hpp"

namespace bccm {

/// Second-order statistics of one user's fading vector. The channel is a
/// circularly symmetric complex Gaussian with the given mean and covariance;
/// the receiver noise variance is fixed to one.
struct ChannelStats {
    arma::cx_vec mean;   ///< length n_T
    arma::cx_mat cov;    ///< n_T x n_T, Hermitian PSD
    std::string label;   ///< user identifier, also selects the sampling stream
};

/// Tolerances for validating user-supplied matrices. Finite-precision input
/// needs explicit slack: deviations within these bounds are repaired rather
/// than rejected (symmetrization and eigenvalue clipping).
inline constexpr double kHermitianTol = 1e-12;  ///< max elementwise |K - K^H|
inline constexpr double kPsdFloor = -1e-10;     ///< smallest admissible eigenvalue

/// Checks the ChannelStats invariants and returns a cleaned copy: the
/// covariance is made exactly Hermitian and near-zero negative eigenvalues
/// are clipped to zero. Validating an already validated value returns it
/// unchanged.
///
/// Throws NonHermitianError, NotPsdError or DimensionMismatchError naming the
/// offending field.
ChannelStats validate_stats(ChannelStats stats);

/// Ratio of line-of-sight power to scattered power, ||mean||^2 / tr(cov).
/// Undefined (nullopt) when tr(cov) = 0.
std::optional<double> rician_k_factor(const ChannelStats& stats);

/// A complete experiment description: two users, a sum power budget and the
/// Monte-Carlo / solver settings.
struct Scenario {
    ChannelStats user1;
    ChannelStats user2;
    double total_power = 10.0;        ///< P_T, linear scale
    std::size_t mc_samples = 100000;  ///< fading draws per user
    std::uint64_t seed = 42;
    double epsilon = 1e-3;            ///< stop tolerance of the inflation-factor solver
    std::size_t alpha_grid = 41;      ///< number of power-split points in [0,1]
    std::size_t max_iters = 200;
};

/// Validates both users (see validate_stats) plus the cross-field invariants:
/// equal antenna count, nonnegative power, positive epsilon and counts.
Scenario validate_scenario(Scenario sc);

/// Which user's message is encoded first. The second encoder pre-cancels the
/// first one's signal through the linear-assignment precoder.
struct EncodingOrder {
    int first = 1;
    int second = 2;
    std::string label() const { return std::to_string(first) + std::to_string(second); }
};

inline constexpr EncodingOrder kOrder12{1, 2};
inline constexpr EncodingOrder kOrder21{2, 1};

/// Per-user transmit covariances for one power split. k_u1 belongs to the
/// first-encoded user and factors as t1 * t1^H with t1 of size n_T x N.
struct TransmitCovariances {
    arma::cx_mat k_u1;
    arma::cx_mat k_u2;
    arma::cx_mat t1;        ///< n_T x N, k_u1 = t1 t1^H
    double alpha = 0.0;     ///< fraction of the budget given to the first user
    arma::uword rank_n = 1; ///< N, the rank of k_u1

    arma::uword n_t() const { return k_u1.n_rows; }
};

/// Checks shapes, Hermitian/PSD structure, the factorization t1 t1^H = k_u1
/// (within 1e-10 elementwise) and tr(k_u1) + tr(k_u2) <= p_t + 1e-9.
void check_transmit_covariances(const TransmitCovariances& tc, double p_t);

/// The linear precoding weights of the secret linear-assignment coding,
/// together with solver diagnostics. b has shape N x n_T.
struct InflationFactor {
    arma::cx_mat b;
    std::size_t iterations = 0;
    double residual = 0.0;   ///< Frobenius norm of the last accepted update step
    bool converged = true;
};

/// All-zero inflation factor of the proper shape (treats interference as noise).
InflationFactor zero_inflation(arma::uword rank_n, arma::uword n_t);

}  // namespace bccm
