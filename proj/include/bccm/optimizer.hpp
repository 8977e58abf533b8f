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
#include <vector>

#include "bccm/channel_model.hpp"
#include "bccm/region_math.hpp"
#include "bccm/sampling.hpp"

namespace bccm {

/// Generalized Rayleigh quotient e^H A e / e^H B e with A Hermitian PSD and
/// B Hermitian positive definite.
struct GrqProblem {
    arma::cx_mat numerator;
    arma::cx_mat denominator;
};

struct GrqSolution {
    arma::cx_vec direction;  ///< unit vector, phase-fixed
    double value = 0.0;      ///< the quotient at the maximizer
};

/// Maximizes the quotient over unit vectors by whitening: B = L L^H, take the
/// top eigenvector of L^-1 A L^-H and map it back. The phase is fixed so the
/// largest-magnitude component is real nonnegative; a fully degenerate pencil
/// (all eigenvalues equal) returns the first basis vector. Throws
/// SingularDenominatorError when B's smallest eigenvalue is below 1e-12.
GrqSolution grq_max(const GrqProblem& p);

/// Unit-rank covariance selection for one power split. The first-encoded
/// user's direction maximizes
///
///   e^H (I + a P (K_H_pi1 + mu_pi1 mu_pi1^H)) e
///   -------------------------------------------
///   e^H (I + a P (K_H_pi2 + mu_pi2 mu_pi2^H)) e
///
/// and the second direction maximizes the analogous quotient whose numerator
/// and denominator matrices are scaled down by the interference loading
/// 1 + a P e1^H (K_H + mu mu^H) e1 of the respective user. Returns unit-rank
/// covariances with traces a*P and (1-a)*P.
TransmitCovariances select_covariances(const Scenario& sc, double alpha,
                                       const EncodingOrder& order);

/// Covariance selection aligned with the low-SNR optimum: the first user's
/// direction is the top eigenvector of K_H1 - K_H2 (first-encoded minus
/// second-encoded), the second user's the top eigenvector of the negated
/// difference.
TransmitCovariances low_snr_aligned_covariances(const Scenario& sc, double alpha,
                                                const EncodingOrder& order);

/// One application of the fixed-point map
///   f(b) = -(E[A1^H])^-1 E[A2^H H^H],   [A1; A2] = M^-1 [I; 0],
/// with expectations over the first-encoded user's batch. Throws
/// SingularExpectationError when E[A1^H] has condition number above 1e12.
arma::cx_mat inflation_factor_map(const TransmitCovariances& tc, const arma::cx_mat& b,
                                  const FadingBatch& batch_pi1);

struct SolverOptions {
    bool relative_stop = false;  ///< divide successive rate changes by the previous rate
};

/// Iterates b <- f(b) from b = 0 until the larger of the two successive rate
/// changes drops below scenario.epsilon, or max_iters is hit. A step that
/// lowers the first user's pre-clamp rate is damped (b <- (1-g) b + g f(b),
/// halving g down to 1/16). Returns the best-rate iterate with diagnostics;
/// non-convergence is flagged, not fatal. batch_pi1 must belong to the
/// first-encoded user; the second user's batch is regenerated from the
/// scenario seed for the stopping rule.
InflationFactor solve_inflation_factor(const TransmitCovariances& tc,
                                       const FadingBatch& batch_pi1,
                                       const EncodingOrder& order, const Scenario& sc,
                                       const SolverOptions& options = {});

/// The batch used everywhere for the given user (1 or 2): seeded from the
/// scenario seed and the user's label, so every scheme, power split and
/// solver iteration sees the same draws.
FadingBatch scenario_batch(const Scenario& sc, int user);

/// Single-user secrecy rate when all power goes to `user` and the other user
/// acts as the eavesdropper, with the direction re-solved at the scenario
/// power. This is exactly the alpha = 1 endpoint of the statistical-CSIT
/// region.
double wiretap_rate(const Scenario& sc, int user, McEstimate* estimate = nullptr);

/// An achievable region: the evaluated point cloud and its upper-right
/// convex-hull frontier (sorted by r1 ascending, r2 strictly decreasing, no
/// point dominated by any raw point).
struct RegionResult {
    std::vector<RatePair> frontier;
    std::vector<RatePair> raw_points;
    Scenario scenario_echo;
    Scheme scheme = Scheme::StatisticalCsit;
};

/// Upper-right convex hull of the cloud (closed with the origin and the axis
/// projections), then filtered so no returned point is dominated.
std::vector<RatePair> pareto_frontier(const std::vector<RatePair>& raw);

/// Uniform grid of n power-split points covering [0, 1].
std::vector<double> alpha_grid_points(std::size_t n);

/// Sweeps the power split over the scenario grid and both encoding orders for
/// the requested scheme and assembles the frontier:
///  - statistical-csit:       solved inflation factor, achievable_rates
///  - interference-as-noise:  b forced to zero
///  - mean-mmse-b:            b from the MMSE expression at h = mean_pi1
///  - full-csit:              per-realization baseline rates
///  - time-sharing:           hull of (t R1(P1), (1-t) R2(P2)) over a 21x21
///                            (t, beta) grid with P1 = beta P/t, P2 = (1-beta) P/(1-t)
RegionResult build_region(const Scenario& sc, Scheme scheme);

}  // namespace bccm
