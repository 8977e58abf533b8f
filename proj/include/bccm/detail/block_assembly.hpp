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
#include <span>

#include "bccm/channel_model.hpp"
#include "bccm/region_math.hpp"

namespace bccm::detail {

/// Realization-independent pieces of the block matrix, precomputed once per
/// (covariances, inflation factor) pair so the per-sample fill is cheap.
struct BlockAssembly {
    arma::cx_mat top_left;  // I + b K2 b^H
    arma::cx_mat tf;        // T1^H + b K2
    arma::cx_mat ksum;      // K1 + K2
    arma::uword rank = 1;
    arma::uword n_t = 1;

    BlockAssembly(const TransmitCovariances& tc, const arma::cx_mat& b) {
        rank = tc.rank_n;
        n_t = tc.n_t();
        if (b.n_rows != rank || b.n_cols != n_t) {
            throw DimensionMismatchError("inflation factor: expected shape " + std::to_string(rank) +
                                         "x" + std::to_string(n_t) + ", got " +
                                         std::to_string(b.n_rows) + "x" + std::to_string(b.n_cols));
        }
        const arma::cx_mat bk2 = b * tc.k_u2;
        top_left = arma::cx_mat(rank, rank, arma::fill::eye) + bk2 * b.t();
        tf = tc.t1.t() + bk2;
        ksum = tc.k_u1 + tc.k_u2;
    }

    void fill(std::span<const arma::cx_double> h, arma::cx_mat& m) const {
        const arma::uword np = rank + 1;
        m.set_size(np, np);
        for (arma::uword c = 0; c < rank; ++c)
            for (arma::uword r = 0; r < rank; ++r) m(r, c) = top_left(r, c);
        for (arma::uword r = 0; r < rank; ++r) {
            arma::cx_double s(0.0, 0.0);
            for (arma::uword c = 0; c < n_t; ++c) s += tf(r, c) * h[c];
            m(r, rank) = s;
            m(rank, r) = std::conj(s);
        }
        m(rank, rank) = arma::cx_double(1.0 + quad_form(ksum, h), 0.0);
    }
};

}  // namespace bccm::detail
