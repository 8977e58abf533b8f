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

#include "bccm/optimizer.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <thread>

#include "bccm/detail/block_assembly.hpp"

namespace bccm {

namespace {

// Fixed-order parallel map: results land in caller-indexed slots, so the
// outcome does not depend on thread count or scheduling.
template <class Body>
void parallel_for(std::size_t n, const Body& body) {
    unsigned n_threads = std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min<unsigned>(n_threads, 8u);
    n_threads = std::min<std::size_t>(n_threads, n);
    if (n_threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

void phase_fix(arma::cx_vec& e) {
    const arma::uword idx = arma::index_max(arma::abs(e));
    const arma::cx_double c = e(idx);
    const double mag = std::abs(c);
    if (mag > 0.0) e *= std::conj(c) / mag;
}

double quotient_at(const GrqProblem& p, const arma::cx_vec& e) {
    const double num = arma::as_scalar(e.t() * p.numerator * e).real();
    const double den = arma::as_scalar(e.t() * p.denominator * e).real();
    return num / den;
}

// In-place LU with partial pivoting for the small block matrices.
bool lu_factor(arma::cx_mat& a, std::vector<arma::uword>& piv) {
    const arma::uword n = a.n_rows;
    piv.resize(n);
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
        if (best == 0.0) return false;
        piv[k] = pivot;
        if (pivot != k) a.swap_rows(pivot, k);
        for (arma::uword i = k + 1; i < n; ++i) {
            const arma::cx_double f = a(i, k) / a(k, k);
            a(i, k) = f;
            for (arma::uword j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
        }
    }
    return true;
}

void lu_solve(const arma::cx_mat& a, const std::vector<arma::uword>& piv, arma::cx_double* rhs) {
    const arma::uword n = a.n_rows;
    for (arma::uword k = 0; k < n; ++k) {
        if (piv[k] != k) std::swap(rhs[k], rhs[piv[k]]);
        for (arma::uword i = k + 1; i < n; ++i) rhs[i] -= a(i, k) * rhs[k];
    }
    for (arma::uword k = n; k-- > 0;) {
        arma::cx_double s = rhs[k];
        for (arma::uword j = k + 1; j < n; ++j) s -= a(k, j) * rhs[j];
        rhs[k] = s / a(k, k);
    }
}

const ChannelStats& user_stats(const Scenario& sc, int user) {
    if (user == 1) return sc.user1;
    if (user == 2) return sc.user2;
    throw ValidationError("user index must be 1 or 2");
}

void validate_order(const EncodingOrder& order) {
    if (order.first == order.second || order.first < 1 || order.first > 2 || order.second < 1 ||
        order.second > 2) {
        throw ValidationError("encoding order must name two distinct users");
    }
}

arma::cx_mat second_moment(const ChannelStats& s) {
    return s.cov + s.mean * s.mean.t();  // K_H + mu mu^H
}

TransmitCovariances unit_rank_covariances(const arma::cx_vec& e1, const arma::cx_vec& e2,
                                          double alpha, double p_t) {
    TransmitCovariances tc;
    tc.alpha = alpha;
    tc.rank_n = 1;
    tc.t1 = std::sqrt(alpha * p_t) * e1;
    tc.k_u1 = tc.t1 * tc.t1.t();
    tc.k_u2 = ((1.0 - alpha) * p_t) * (e2 * e2.t());
    return tc;
}

}  // namespace

GrqSolution grq_max(const GrqProblem& p) {
    const arma::uword n = p.numerator.n_rows;
    if (p.numerator.n_cols != n || p.denominator.n_rows != n || p.denominator.n_cols != n || n == 0) {
        throw DimensionMismatchError("grq_max: numerator and denominator must be square of equal size");
    }
    arma::vec den_eigs;
    if (!arma::eig_sym(den_eigs, p.denominator)) {
        throw NumericalError("grq_max: eigendecomposition of the denominator failed");
    }
    if (den_eigs.min() < 1e-12) {
        throw SingularDenominatorError("grq_max: denominator min eigenvalue " +
                                       std::to_string(den_eigs.min()) + " below 1e-12");
    }
    arma::cx_mat chol_lower;
    if (!arma::chol(chol_lower, p.denominator, "lower")) {
        throw SingularDenominatorError("grq_max: Cholesky of the denominator failed");
    }

    const arma::cx_mat white_inv = arma::inv(arma::trimatl(chol_lower));
    arma::cx_mat whitened = white_inv * p.numerator * white_inv.t();
    whitened = (whitened + whitened.t()) / 2.0;

    arma::vec eigval;
    arma::cx_mat eigvec;
    if (!arma::eig_sym(eigval, eigvec, whitened)) {
        throw NumericalError("grq_max: eigendecomposition of the whitened matrix failed");
    }

    GrqSolution sol;
    const double spread = eigval(n - 1) - eigval(0);
    if (spread <= 1e-12 * std::max(1.0, std::abs(eigval(n - 1)))) {
        // Fully degenerate pencil: every direction attains the same value.
        sol.direction = arma::cx_vec(n, arma::fill::zeros);
        sol.direction(0) = 1.0;
    } else {
        arma::cx_vec e = arma::solve(arma::trimatu(chol_lower.t()), eigvec.col(n - 1));
        e /= arma::norm(e);
        phase_fix(e);
        sol.direction = e;
    }
    sol.value = quotient_at(p, sol.direction);
    return sol;
}

TransmitCovariances select_covariances(const Scenario& sc, double alpha,
                                       const EncodingOrder& order) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("select_covariances: alpha outside [0, 1]");
    validate_order(order);
    const ChannelStats& s1 = user_stats(sc, order.first);
    const ChannelStats& s2 = user_stats(sc, order.second);
    const arma::uword n = s1.cov.n_rows;
    const arma::cx_mat eye(n, n, arma::fill::eye);
    const arma::cx_mat m1 = second_moment(s1);
    const arma::cx_mat m2 = second_moment(s2);

    const double ap = alpha * sc.total_power;
    const GrqProblem first{eye + ap * m1, eye + ap * m2};
    const arma::cx_vec e1 = grq_max(first).direction;

    // Interference loading seen by each receiver once the first user's
    // direction is fixed.
    const double load1 = 1.0 + ap * arma::as_scalar(e1.t() * m1 * e1).real();
    const double load2 = 1.0 + ap * arma::as_scalar(e1.t() * m2 * e1).real();
    const double bp = (1.0 - alpha) * sc.total_power;
    const GrqProblem second{eye + (bp / load2) * m2, eye + (bp / load1) * m1};
    const arma::cx_vec e2 = grq_max(second).direction;

    return unit_rank_covariances(e1, e2, alpha, sc.total_power);
}

TransmitCovariances low_snr_aligned_covariances(const Scenario& sc, double alpha,
                                                const EncodingOrder& order) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("low_snr_aligned_covariances: alpha outside [0, 1]");
    validate_order(order);
    const ChannelStats& s1 = user_stats(sc, order.first);
    const ChannelStats& s2 = user_stats(sc, order.second);
    const arma::cx_mat diff = s1.cov - s2.cov;
    arma::vec eigval;
    arma::cx_mat eigvec;
    if (!arma::eig_sym(eigval, eigvec, diff)) {
        throw NumericalError("low_snr_aligned_covariances: eigendecomposition failed");
    }
    const arma::uword n = diff.n_rows;
    arma::cx_vec e1 = eigvec.col(n - 1);  // top of K_H1 - K_H2
    arma::cx_vec e2 = eigvec.col(0);      // top of K_H2 - K_H1
    phase_fix(e1);
    phase_fix(e2);
    return unit_rank_covariances(e1, e2, alpha, sc.total_power);
}

arma::cx_mat inflation_factor_map(const TransmitCovariances& tc, const arma::cx_mat& b,
                                  const FadingBatch& batch_pi1) {
    if (batch_pi1.dim() != tc.n_t()) {
        throw DimensionMismatchError("inflation_factor_map: batch dimension mismatch");
    }
    const detail::BlockAssembly assembly(tc, b);
    const arma::uword rank = tc.rank_n;
    const arma::uword np = rank + 1;
    const arma::uword d = tc.n_t();
    const arma::uword n = batch_pi1.count();

    arma::cx_mat m(np, np);
    arma::cx_mat x(np, rank);
    std::vector<arma::uword> piv;
    arma::cx_mat sum_a1(rank, rank, arma::fill::zeros);
    arma::cx_mat sum_a2h(rank, d, arma::fill::zeros);

    for (arma::uword i = 0; i < n; ++i) {
        const std::span<const arma::cx_double> h{batch_pi1.samples.colptr(i), d};
        assembly.fill(h, m);
        if (!lu_factor(m, piv)) {
            throw NumericalError("inflation_factor_map: singular block matrix at sample " +
                                 std::to_string(i));
        }
        // Columns of M^-1 [I; 0]: the top rank x rank block is A1, the last
        // row is A2.
        for (arma::uword c = 0; c < rank; ++c) {
            arma::cx_double* col = x.colptr(c);
            for (arma::uword r = 0; r < np; ++r) col[r] = (r == c) ? 1.0 : 0.0;
            lu_solve(m, piv, col);
        }
        for (arma::uword i2 = 0; i2 < rank; ++i2)
            for (arma::uword j2 = 0; j2 < rank; ++j2) sum_a1(i2, j2) += std::conj(x(j2, i2));
        for (arma::uword r = 0; r < rank; ++r) {
            const arma::cx_double a2c = std::conj(x(np - 1, r));
            for (arma::uword c = 0; c < d; ++c) sum_a2h(r, c) += a2c * std::conj(h[c]);
        }
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    const arma::cx_mat ea1 = sum_a1 * inv_n;
    const arma::cx_mat ea2h = sum_a2h * inv_n;
    const double rc = arma::rcond(ea1);
    if (!std::isfinite(rc) || rc < 1e-12) {
        throw SingularExpectationError("inflation_factor_map: E[A1^H] condition number above 1e12");
    }
    return -arma::solve(ea1, ea2h);
}

FadingBatch scenario_batch(const Scenario& sc, int user) {
    const ChannelStats& stats = user_stats(sc, user);
    return sample_channel(stats, sc.mc_samples, derive_seed(sc.seed, stats.label));
}

InflationFactor solve_inflation_factor(const TransmitCovariances& tc,
                                       const FadingBatch& batch_pi1,
                                       const EncodingOrder& order, const Scenario& sc,
                                       const SolverOptions& options) {
    constexpr double kMinDamping = 1.0 / 16.0;
    if (tc.k_u2.is_zero(0.0)) {
        // Nothing to pre-cancel: the rates do not depend on b.
        InflationFactor f = zero_inflation(tc.rank_n, tc.n_t());
        f.iterations = 1;
        return f;
    }
    const FadingBatch batch_pi2 = scenario_batch(sc, order.second);

    const arma::cx_mat ksum = tc.k_u1 + tc.k_u2;
    const double own_first = expect_log_quadratic(ksum, batch_pi1);
    const double own_second = expect_log_quadratic(ksum, batch_pi2);

    struct Rates {
        double first = 0.0, second = 0.0, pre_first = 0.0;
    };
    auto rates_at = [&](const arma::cx_mat& b) {
        InflationFactor wrapped;
        wrapped.b = b;
        const double penalty = secrecy_penalty(tc, wrapped, batch_pi1, batch_pi2);
        Rates r;
        r.pre_first = own_first - penalty;
        r.first = std::max(0.0, r.pre_first);
        r.second = std::max(0.0, own_second - penalty);
        return r;
    };

    arma::cx_mat b(tc.rank_n, tc.n_t(), arma::fill::zeros);
    Rates prev = rates_at(b);
    arma::cx_mat best_b = b;
    double best_pre = prev.pre_first;

    InflationFactor out;
    double gamma = 1.0;
    for (std::size_t step = 1; step <= sc.max_iters; ++step) {
        const arma::cx_mat fb = inflation_factor_map(tc, b, batch_pi1);
        arma::cx_mat cand;
        Rates rc;
        for (;;) {
            cand = (1.0 - gamma) * b + gamma * fb;
            rc = rates_at(cand);
            if (rc.pre_first < prev.pre_first && gamma > kMinDamping + 1e-12) {
                gamma *= 0.5;  // dampen steps that regress the precoded user's rate
                continue;
            }
            break;
        }
        out.residual = arma::norm(cand - b, "fro");
        b = std::move(cand);
        ++out.iterations;
        if (rc.pre_first >= best_pre) {
            best_pre = rc.pre_first;
            best_b = b;
        }
        double d1 = rc.first - prev.first;
        double d2 = rc.second - prev.second;
        if (options.relative_stop) {
            d1 /= std::max(std::abs(prev.first), 1e-12);
            d2 /= std::max(std::abs(prev.second), 1e-12);
        }
        prev = rc;
        if (std::max(d1, d2) < sc.epsilon) {
            out.converged = true;
            break;
        }
        out.converged = false;
    }
    out.b = std::move(best_b);
    return out;
}

namespace {

struct WiretapEstimate {
    double rate = 0.0;
    double std_error = 0.0;
};

// alpha = 1 endpoint with precomputed batches; `own` belongs to the served
// user, `other` to the eavesdropping one.
WiretapEstimate wiretap_with_batches(const Scenario& sc, const EncodingOrder& order,
                                     const FadingBatch& own, const FadingBatch& other) {
    const TransmitCovariances tc = select_covariances(sc, 1.0, order);
    const McEstimate gain = expect_log_quadratic_est(tc.k_u1, own);
    const McEstimate leak = expect_log_quadratic_est(tc.k_u1, other);
    WiretapEstimate wt;
    wt.rate = std::max(0.0, gain.mean - leak.mean);
    wt.std_error = std::hypot(gain.std_error, leak.std_error);
    return wt;
}

std::vector<RatePair> time_sharing_points(const Scenario& sc, const FadingBatch& batch1,
                                          const FadingBatch& batch2) {
    constexpr int kGrid = 21;

    // Wiretap rates are needed at many inner power levels; evaluate each
    // distinct level once.
    std::map<double, WiretapEstimate> cache1, cache2;
    auto rate1 = [&](double power) -> const WiretapEstimate& {
        auto it = cache1.find(power);
        if (it == cache1.end()) {
            Scenario s = sc;
            s.total_power = power;
            it = cache1.emplace(power, wiretap_with_batches(s, kOrder12, batch1, batch2)).first;
        }
        return it->second;
    };
    auto rate2 = [&](double power) -> const WiretapEstimate& {
        auto it = cache2.find(power);
        if (it == cache2.end()) {
            Scenario s = sc;
            s.total_power = power;
            it = cache2.emplace(power, wiretap_with_batches(s, kOrder21, batch2, batch1)).first;
        }
        return it->second;
    };

    std::vector<RatePair> points;
    points.reserve(static_cast<std::size_t>(kGrid) * kGrid);
    const double p_t = sc.total_power;
    for (int ti = 0; ti < kGrid; ++ti) {
        const double t = static_cast<double>(ti) / (kGrid - 1);
        for (int bi = 0; bi < kGrid; ++bi) {
            const double beta = static_cast<double>(bi) / (kGrid - 1);
            RatePair p;
            p.meta.scheme = Scheme::TimeSharing;
            p.meta.alpha = t;
            p.meta.ts_beta = beta;
            if (t > 0.0) {
                const WiretapEstimate& wt = rate1(beta * p_t / t);
                p.r1 = t * wt.rate;
                p.meta.r1_std_error = t * wt.std_error;
            }
            if (t < 1.0) {
                const WiretapEstimate& wt = rate2((1.0 - beta) * p_t / (1.0 - t));
                p.r2 = (1.0 - t) * wt.rate;
                p.meta.r2_std_error = (1.0 - t) * wt.std_error;
            }
            p.meta.r1_preclamp = p.r1;
            p.meta.r2_preclamp = p.r2;
            points.push_back(p);
        }
    }
    return points;
}

}  // namespace

double wiretap_rate(const Scenario& sc_in, int user, McEstimate* estimate_out) {
    const Scenario sc = validate_scenario(sc_in);
    const int other = (user == 1) ? 2 : 1;
    const EncodingOrder order = (user == 1) ? kOrder12 : kOrder21;
    const WiretapEstimate wt =
        wiretap_with_batches(sc, order, scenario_batch(sc, user), scenario_batch(sc, other));
    if (estimate_out != nullptr) {
        estimate_out->mean = wt.rate;
        estimate_out->std_error = wt.std_error;
    }
    return wt.rate;
}

std::vector<double> alpha_grid_points(std::size_t n) {
    if (n == 0) throw ValidationError("alpha_grid_points: need at least one point");
    if (n == 1) return {0.5};
    std::vector<double> grid(n);
    for (std::size_t i = 0; i < n; ++i) {
        grid[i] = static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return grid;
}

namespace {

// Strict, deterministic ordering for hull construction.
bool point_less(const RatePair& a, const RatePair& b) {
    if (a.r1 != b.r1) return a.r1 < b.r1;
    if (a.r2 != b.r2) return a.r2 > b.r2;
    if (a.meta.synthetic != b.meta.synthetic) return !a.meta.synthetic;
    const int oa = a.meta.order ? a.meta.order->first : 3;
    const int ob = b.meta.order ? b.meta.order->first : 3;
    if (oa != ob) return oa < ob;
    if (a.meta.alpha != b.meta.alpha) return a.meta.alpha < b.meta.alpha;
    return a.meta.ts_beta < b.meta.ts_beta;
}

double cross(const RatePair& o, const RatePair& a, const RatePair& b) {
    return (a.r1 - o.r1) * (b.r2 - o.r2) - (a.r2 - o.r2) * (b.r1 - o.r1);
}

}  // namespace

std::vector<RatePair> pareto_frontier(const std::vector<RatePair>& raw) {
    auto synthetic_point = [](double r1, double r2) {
        RatePair p;
        p.r1 = r1;
        p.r2 = r2;
        p.meta.synthetic = true;
        return p;
    };
    if (raw.empty()) return {synthetic_point(0.0, 0.0)};

    double r1max = 0.0, r2max = 0.0;
    for (const RatePair& p : raw) {
        r1max = std::max(r1max, p.r1);
        r2max = std::max(r2max, p.r2);
    }
    std::vector<RatePair> pts = raw;
    pts.push_back(synthetic_point(0.0, 0.0));
    pts.push_back(synthetic_point(r1max, 0.0));
    pts.push_back(synthetic_point(0.0, r2max));

    std::sort(pts.begin(), pts.end(), point_less);
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const RatePair& a, const RatePair& b) {
                              return a.r1 == b.r1 && a.r2 == b.r2;
                          }),
              pts.end());

    // Upper hull, left to right; collinear interior points are dropped.
    std::vector<RatePair> hull;
    for (const RatePair& p : pts) {
        while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull[hull.size() - 1], p) >= 0.0) {
            hull.pop_back();
        }
        hull.push_back(p);
    }

    // Keep only points no raw point dominates.
    std::vector<RatePair> frontier;
    for (const RatePair& v : hull) {
        bool dominated = false;
        for (const RatePair& p : raw) {
            if (p.r1 >= v.r1 && p.r2 >= v.r2 && (p.r1 > v.r1 || p.r2 > v.r2)) {
                dominated = true;
                break;
            }
        }
        if (!dominated) frontier.push_back(v);
    }
    if (frontier.empty()) frontier.push_back(synthetic_point(0.0, 0.0));
    return frontier;
}

RegionResult build_region(const Scenario& sc_in, Scheme scheme) {
    const Scenario sc = validate_scenario(sc_in);
    if (scheme == Scheme::LowSnr || scheme == Scheme::Wiretap) {
        throw ValidationError(std::string("build_region: '") + std::string(to_string(scheme)) +
                              "' is not a region sweep scheme");
    }
    RegionResult result;
    result.scenario_echo = sc;
    result.scheme = scheme;

    const FadingBatch batch1 = scenario_batch(sc, 1);
    const FadingBatch batch2 = scenario_batch(sc, 2);

    if (scheme == Scheme::TimeSharing) {
        result.raw_points = time_sharing_points(sc, batch1, batch2);
    } else {
        const std::vector<double> alphas = alpha_grid_points(sc.alpha_grid);
        const std::array<EncodingOrder, 2> orders{kOrder12, kOrder21};
        std::vector<RatePair> points(alphas.size() * orders.size());
        parallel_for(points.size(), [&](std::size_t idx) {
            const double alpha = alphas[idx / orders.size()];
            const EncodingOrder order = orders[idx % orders.size()];
            const TransmitCovariances tc = select_covariances(sc, alpha, order);
            const FadingBatch& bp1 = (order.first == 1) ? batch1 : batch2;
            const FadingBatch& bp2 = (order.first == 1) ? batch2 : batch1;

            RatePair pair;
            switch (scheme) {
                case Scheme::StatisticalCsit: {
                    const InflationFactor inf = solve_inflation_factor(tc, bp1, order, sc);
                    pair = achievable_rates(tc, inf, bp1, bp2, order);
                    pair.meta.b_iterations = inf.iterations;
                    pair.meta.b_residual = inf.residual;
                    pair.meta.b_converged = inf.converged;
                    break;
                }
                case Scheme::InterferenceAsNoise: {
                    const InflationFactor inf = zero_inflation(tc.rank_n, tc.n_t());
                    pair = achievable_rates(tc, inf, bp1, bp2, order);
                    break;
                }
                case Scheme::MeanMmseB: {
                    const ChannelStats& first_user = (order.first == 1) ? sc.user1 : sc.user2;
                    const InflationFactor inf = mmse_inflation(tc, first_user.mean);
                    pair = achievable_rates(tc, inf, bp1, bp2, order);
                    break;
                }
                case Scheme::FullCsit: {
                    pair = full_csit_rates(tc, bp1, bp2, order);
                    break;
                }
                default:
                    throw ValidationError("build_region: unsupported scheme");
            }
            pair.meta.scheme = scheme;
            pair.meta.alpha = alpha;
            points[idx] = pair;
        });
        result.raw_points = std::move(points);
    }

    result.frontier = pareto_frontier(result.raw_points);
    for (RatePair& p : result.frontier) {
        if (p.meta.synthetic) p.meta.scheme = scheme;
    }
    return result;
}

}  // namespace bccm
