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

#include "bccm/channel_model.hpp"

#include <algorithm>
#include <cmath>

namespace bccm {

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const NonHermitianError*>(&e) != nullptr ||
        dynamic_cast<const NotPsdError*>(&e) != nullptr ||
        dynamic_cast<const DimensionMismatchError*>(&e) != nullptr ||
        dynamic_cast<const BadCountError*>(&e) != nullptr ||
        dynamic_cast<const ParseError*>(&e) != nullptr ||
        dynamic_cast<const ValidationError*>(&e) != nullptr) {
        return 1;
    }
    return 2;
}

namespace {

std::string field_name(const ChannelStats& stats, const char* field) {
    return (stats.label.empty() ? std::string("stats") : stats.label) + "." + field;
}

}  // namespace

ChannelStats validate_stats(ChannelStats stats) {
    const arma::uword n = stats.cov.n_rows;
    if (n == 0 || stats.cov.n_cols != n) {
        throw DimensionMismatchError(field_name(stats, "cov") + ": expected a square nonempty matrix, got " +
                                     std::to_string(stats.cov.n_rows) + "x" +
                                     std::to_string(stats.cov.n_cols));
    }
    if (stats.mean.n_elem != n) {
        throw DimensionMismatchError(field_name(stats, "mean") + ": length " +
                                     std::to_string(stats.mean.n_elem) + " does not match cov dimension " +
                                     std::to_string(n));
    }

    const double herm_dev = arma::abs(stats.cov - stats.cov.t()).max();
    if (herm_dev > kHermitianTol) {
        throw NonHermitianError(field_name(stats, "cov") + ": max |K - K^H| = " +
                                std::to_string(herm_dev) + " exceeds 1e-12");
    }
    if (herm_dev > 0.0) {
        stats.cov = (stats.cov + stats.cov.t()) / 2.0;  // exactly Hermitian afterwards
    }

    arma::vec eigval;
    arma::cx_mat eigvec;
    if (!arma::eig_sym(eigval, eigvec, stats.cov)) {
        throw NumericalError(field_name(stats, "cov") + ": eigendecomposition failed");
    }
    if (eigval.min() < kPsdFloor) {
        throw NotPsdError(field_name(stats, "cov") + ": min eigenvalue " +
                          std::to_string(eigval.min()) + " below the -1e-10 floor");
    }

    // Clip the roundoff-negative part of the spectrum. The threshold is looser
    // than zero so that a clipped matrix passes unchanged on revalidation.
    const double clip_tol = 1e-14 * std::max(1.0, std::abs(eigval.max()));
    if (eigval.min() < -clip_tol) {
        eigval.transform([](double v) { return std::max(v, 0.0); });
        stats.cov = eigvec * arma::diagmat(arma::cx_vec(eigval, arma::vec(n, arma::fill::zeros))) *
                    eigvec.t();
        stats.cov = (stats.cov + stats.cov.t()) / 2.0;
    }
    return stats;
}

std::optional<double> rician_k_factor(const ChannelStats& stats) {
    const double tr = arma::trace(stats.cov).real();
    if (tr <= 0.0) return std::nullopt;
    const double los = std::norm(arma::norm(stats.mean));
    return los / tr;
}

Scenario validate_scenario(Scenario sc) {
    if (sc.user1.label.empty()) sc.user1.label = "user1";
    if (sc.user2.label.empty()) sc.user2.label = "user2";
    sc.user1 = validate_stats(std::move(sc.user1));
    sc.user2 = validate_stats(std::move(sc.user2));
    if (sc.user1.cov.n_rows != sc.user2.cov.n_rows) {
        throw DimensionMismatchError("scenario: user1 has n_T = " + std::to_string(sc.user1.cov.n_rows) +
                                     " but user2 has n_T = " + std::to_string(sc.user2.cov.n_rows));
    }
    if (!(sc.total_power >= 0.0)) throw ValidationError("scenario: total_power must be >= 0");
    if (!(sc.epsilon > 0.0)) throw ValidationError("scenario: epsilon must be > 0");
    if (sc.mc_samples == 0) throw ValidationError("scenario: mc_samples must be >= 1");
    if (sc.alpha_grid == 0) throw ValidationError("scenario: alpha_grid must be >= 1");
    if (sc.max_iters == 0) throw ValidationError("scenario: max_iters must be >= 1");
    return sc;
}

void check_transmit_covariances(const TransmitCovariances& tc, double p_t) {
    const arma::uword n = tc.k_u1.n_rows;
    if (tc.k_u1.n_cols != n || tc.k_u2.n_rows != n || tc.k_u2.n_cols != n) {
        throw DimensionMismatchError("transmit covariances: k_u1 and k_u2 must be square of equal size");
    }
    if (tc.t1.n_rows != n || tc.t1.n_cols != tc.rank_n || tc.rank_n == 0) {
        throw DimensionMismatchError("transmit covariances: t1 must be n_T x N");
    }
    if (!(tc.alpha >= 0.0 && tc.alpha <= 1.0)) {
        throw ValidationError("transmit covariances: alpha outside [0, 1]");
    }
    for (const arma::cx_mat* k : {&tc.k_u1, &tc.k_u2}) {
        if (arma::abs(*k - k->t()).max() > 1e-10) {
            throw NonHermitianError("transmit covariances: covariance is not Hermitian");
        }
    }
    const double trace_sum = arma::trace(tc.k_u1).real() + arma::trace(tc.k_u2).real();
    if (trace_sum > p_t + 1e-9) {
        throw ValidationError("transmit covariances: tr(k_u1) + tr(k_u2) = " + std::to_string(trace_sum) +
                              " exceeds the power budget " + std::to_string(p_t));
    }
    const double factor_dev = arma::abs(tc.t1 * tc.t1.t() - tc.k_u1).max();
    if (factor_dev > 1e-10) {
        throw ValidationError("transmit covariances: t1 t1^H deviates from k_u1 by " +
                              std::to_string(factor_dev));
    }
}

InflationFactor zero_inflation(arma::uword rank_n, arma::uword n_t) {
    InflationFactor f;
    f.b = arma::cx_mat(rank_n, n_t, arma::fill::zeros);
    f.iterations = 0;
    f.residual = 0.0;
    f.converged = true;
    return f;
}

}  // namespace bccm
