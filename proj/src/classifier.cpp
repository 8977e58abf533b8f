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

#include "bccm/classifier.hpp"

#include <cmath>
#include <sstream>

#include "bccm/region_math.hpp"

namespace bccm {

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::NonTrivial: return "NonTrivial";
        case Verdict::DegradedUser1Silent: return "DegradedUser1Silent";
        case Verdict::DegradedUser2Silent: return "DegradedUser2Silent";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "unknown";
}

std::string_view to_string(TriState t) {
    switch (t) {
        case TriState::Yes: return "yes";
        case TriState::No: return "no";
        case TriState::Unknown: return "unknown";
    }
    return "unknown";
}

namespace {

constexpr double kRelTol = 1e-9;

bool zero_mean(const ChannelStats& s) {
    return s.mean.is_empty() || arma::abs(s.mean).max() <= 1e-12;
}

double trace_of(const ChannelStats& s) { return arma::trace(s.cov).real(); }

// cov = sigma^2 I within relative tolerance; sigma2 out-param.
bool scaled_identity(const ChannelStats& s, double& sigma2) {
    const arma::uword n = s.cov.n_rows;
    sigma2 = trace_of(s) / static_cast<double>(n);
    if (sigma2 <= 0.0) return false;
    const arma::cx_mat target = sigma2 * arma::cx_mat(n, n, arma::fill::eye);
    return arma::abs(s.cov - target).max() <= kRelTol * sigma2;
}

// K2 = c K1 for a positive scalar c, tested on Frobenius-normalized copies.
bool scaled_pair(const ChannelStats& u1, const ChannelStats& u2, double& c) {
    const double f1 = arma::norm(u1.cov, "fro");
    const double f2 = arma::norm(u2.cov, "fro");
    if (f1 <= 0.0 || f2 <= 0.0) return false;
    if (arma::abs(u2.cov / f2 - u1.cov / f1).max() > kRelTol) return false;
    c = trace_of(u2) / trace_of(u1);
    return true;
}

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

Classification classify(const ChannelStats& user1, const ChannelStats& user2) {
    if (user1.cov.n_rows != user2.cov.n_rows) {
        throw DimensionMismatchError("classify: users have different antenna counts");
    }
    const arma::uword n = user1.cov.n_rows;

    Classification cls;
    const std::pair<double, double> diff_eigs = covariance_difference_eigs(user1, user2);
    const double lam_min = diff_eigs.first;
    const double lam_max = diff_eigs.second;
    cls.low_snr_indefinite = (lam_max > 0.0 && lam_min < 0.0) ? TriState::Yes : TriState::No;

    const bool zm1 = zero_mean(user1);
    const bool zm2 = zero_mean(user2);
    const double tr1 = trace_of(user1);
    const double tr2 = trace_of(user2);

    auto degraded = [&cls](int silent_user, std::string reason) {
        cls.verdict = silent_user == 1 ? Verdict::DegradedUser1Silent : Verdict::DegradedUser2Silent;
        cls.reasons.push_back(std::move(reason));
    };

    const auto apply_rules = [&]() {
        // Zero-mean, scaled-identity covariances: the weaker user decodes
        // nothing secretly.
        double s1 = 0.0, s2 = 0.0;
        if (zm1 && zm2 && scaled_identity(user1, s1) && scaled_identity(user2, s2)) {
            if (std::abs(s1 - s2) <= kRelTol * std::max(s1, s2)) {
                degraded(2, "both channels are zero-mean i.i.d. with equal variance " + fmt(s1) +
                                "; the pair is mutually degraded and neither user can attain a "
                                "positive secrecy rate");
            } else if (s1 > s2) {
                degraded(2, "both channels are zero-mean i.i.d. with sigma1^2 = " + fmt(s1) +
                                " > sigma2^2 = " + fmt(s2) + "; user 2 observes a noisier copy");
            } else {
                degraded(1, "both channels are zero-mean i.i.d. with sigma2^2 = " + fmt(s2) +
                                " > sigma1^2 = " + fmt(s1) + "; user 1 observes a noisier copy");
            }
            return;
        }

        // Zero-mean with proportional covariances (including degenerate
        // zero-covariance users).
        if (zm1 && zm2) {
            if (tr1 == 0.0 && tr2 == 0.0) {
                degraded(2, "both zero-mean channels have zero covariance; no user receives signal");
                return;
            }
            if (tr1 == 0.0) {
                degraded(1, "user 1's zero-mean channel has zero covariance and carries no signal");
                return;
            }
            if (tr2 == 0.0) {
                degraded(2, "user 2's zero-mean channel has zero covariance and carries no signal");
                return;
            }
            double c = 0.0;
            if (scaled_pair(user1, user2, c)) {
                if (std::abs(c - 1.0) <= kRelTol) {
                    degraded(2, "zero-mean channels with identical covariances; the pair is "
                                "mutually degraded and neither user can attain a positive secrecy "
                                "rate");
                } else if (c < 1.0) {
                    degraded(2, "zero-mean channels with proportional covariances, K2 = " + fmt(c) +
                                    " * K1; the weaker user 2 is degraded");
                } else {
                    degraded(1, "zero-mean channels with proportional covariances, K2 = " + fmt(c) +
                                    " * K1; the weaker user 1 is degraded");
                }
                return;
            }
        }

        // Single-antenna zero-mean pairs always reduce to a wiretap channel.
        if (n == 1 && zm1 && zm2) {
            degraded(tr1 >= tr2 ? 2 : 1,
                     "single-antenna zero-mean fading pair; the smaller-variance user is degraded");
            return;
        }

        // Single-antenna pairs with equal Rician K-factor differ only by a
        // scale, so the weaker-power user is degraded.
        if (n == 1) {
            const auto k1 = rician_k_factor(user1);
            const auto k2 = rician_k_factor(user2);
            const double p1 = tr1 + std::norm(arma::norm(user1.mean));
            const double p2 = tr2 + std::norm(arma::norm(user2.mean));
            if (k1 && k2 &&
                std::abs(*k1 - *k2) <= kRelTol * std::max({1.0, std::abs(*k1), std::abs(*k2)})) {
                degraded(p1 >= p2 ? 2 : 1, "single-antenna Rician pair with equal K-factor " +
                                               fmt(*k1) + "; the weaker-power user is degraded");
                return;
            }
            if (!k1 && !k2) {
                degraded(p1 >= p2 ? 2 : 1,
                         "single-antenna deterministic pair (zero covariance); the weaker-power "
                         "user is degraded");
                return;
            }
        }

        // No degradedness rule fired; the eigenvalue signs of K_H1 - K_H2
        // decide what can still be said.
        if (cls.low_snr_indefinite == TriState::Yes) {
            cls.verdict = Verdict::NonTrivial;
            cls.reasons.push_back("K_H1 - K_H2 is indefinite (eigenvalues " + fmt(lam_min) + " and " +
                                  fmt(lam_max) + "); both users attain positive rates at low SNR");
        } else {
            cls.verdict = Verdict::Inconclusive;
            cls.reasons.push_back(
                "K_H1 - K_H2 is not indefinite and no degradedness rule fired; the known "
                "conditions are necessary only, so the verdict is inconclusive");
        }
    };
    apply_rules();

    cls.reasons.push_back(std::string("low-SNR indefiniteness criterion: ") +
                          std::string(to_string(cls.low_snr_indefinite)));
    return cls;
}

}  // namespace bccm
