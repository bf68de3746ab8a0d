// SPDX-License-Identifier: Apache-2.0
//
// fasdep: dependability analysis for fluid antenna receivers
// Copyright (C) 2026 The fasdep authors
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

///
/// \file levelcross.hpp
///
/// Level-crossing rate, average fade and non-fade durations of the selected
/// envelope max_k alpha_k, with the closed-form special cases (independent
/// ports, identical ports, two ports) used as cross-checks.
///
/// The envelope derivative is zero-mean Gaussian with variance
/// pi^2 (sigma^2 / m) f_D^2, so every downward crossing term carries the
/// factor E[xdot^+] = sqrt(pi / (2 m)) sigma f_D. Selection crosses x_th
/// downward when the port at x_th falls while all others are already below;
/// summing over which port is at the threshold gives
///
///   L = sqrt(pi/(2m)) sigma f_D [ f1(x) prod_k P_k(x)
///        + sum_i int_0^x f1(x1) g(x | x1; mu_i) prod_{k != i} P_k(x1) dx1 ]
///
/// where g is the conditional port density given port 1 and
/// P_k(x1) = 1 - Q_m(a_k x1, b_k x) its conditional CDF.
///
#ifndef FASDEP_LEVELCROSS_HPP
#define FASDEP_LEVELCROSS_HPP

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "fasdep/channel.hpp"
#include "fasdep/errors.hpp"
#include "fasdep/specfun.hpp"

namespace fasdep::levelcross {

using channel::FasChannel;

struct CrossingContext
{
    FasChannel chan;
    double doppler = 10.0;  // f_D in Hz
    double threshold = 1.0; // x_th, envelope units

    void validate() const
    {
        fasdep::detail::require_finite(doppler, "CrossingContext: doppler");
        fasdep::detail::require(doppler > 0.0, "CrossingContext: doppler must be > 0");
        fasdep::detail::require_finite(threshold, "CrossingContext: threshold");
        fasdep::detail::require(threshold >= 0.0, "CrossingContext: threshold must be >= 0");
    }
};

struct RatePair
{
    double failure_rate = 0.0; // 1/s
    double repair_rate = 0.0;  // 1/s
};

struct LevelCrossNumerics
{
    channel::ChannelNumerics channel{};
    specfun::EvalTolerance series{1e-14, 500};
};

/// Everything the dependability chain needs at one threshold.
struct CrossingStatistics
{
    double cdf = 0.0;
    double ccdf = 1.0; // 1 - cdf, evaluated directly when cdf > 1/2
    double lcr = 0.0;
    double afd = 0.0;
    double anfd = 0.0;
};

namespace detail {

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();

// log of the single-port LCR, which is also the identical-ports LCR
inline double log_single_port_lcr(double x, double m, double power, double fd)
{
    if (x == 0.0 && m > 0.5)
        return neg_inf;
    const double sigma = std::sqrt(power);
    const double lx = x == 0.0 ? 0.0 : std::log(x);
    return 0.5 * std::log(2.0 * std::numbers::pi) + std::log(fd) + (m - 0.5) * std::log(m) +
           (2.0 * m - 1.0) * lx - m * x * x / power - specfun::detail::log_gamma(m) -
           (2.0 * m - 1.0) * std::log(sigma);
}

} // namespace detail

/// Identical ports (all mu_k = 1): the single-port Nakagami LCR, independent of N.
inline double lcr_fully_correlated(const CrossingContext &ctx)
{
    ctx.validate();
    const auto &c = ctx.chan;
    return std::exp(detail::log_single_port_lcr(ctx.threshold, c.nakagami_m(), c.power(), ctx.doppler));
}

/// Independent ports (all mu_k = 0): N L_1(x) P(m, m x^2/sigma^2)^{N-1}.
inline double lcr_iid(const CrossingContext &ctx)
{
    ctx.validate();
    const auto &c = ctx.chan;
    const double m = c.nakagami_m(), x = ctx.threshold;
    const double l1 = detail::log_single_port_lcr(x, m, c.power(), ctx.doppler);
    if (c.n_ports() == 1)
        return std::exp(l1);
    if (x == 0.0)
        return 0.0;
    const double lp = specfun::log_gamma_p(m, m * x * x / c.power(), {1e-14, 100000});
    return std::exp(std::log(static_cast<double>(c.n_ports())) + l1 +
                    static_cast<double>(c.n_ports() - 1) * lp);
}

/// Full N-port LCR by one-dimensional quadrature per interior term.
/// N = 1 reduces to the single-port formula. Rejects |mu_k| = 1; use
/// lcr_fully_correlated (or crossing_statistics, which dispatches).
inline double lcr(const CrossingContext &ctx, const LevelCrossNumerics &num = {})
{
    ctx.validate();
    const auto &c = ctx.chan;
    const int n = c.n_ports();
    if (n == 1)
        return lcr_fully_correlated(ctx);
    fasdep::detail::require(!c.any_unit_correlation(),
                            "lcr: a port with |mu_k| = 1 is singular here; use lcr_fully_correlated");
    const double x = ctx.threshold;
    if (x == 0.0)
        return 0.0;

    const double m = c.nakagami_m(), p = c.power(), sigma = c.sigma();
    const auto &mu = c.mu();
    const auto &tol = num.channel.marcum;

    // log P_k(x1) for every port, evaluated lazily per abscissa
    auto log_pk = [&](int k, double x1) {
        return channel::detail::log_conditional_cdf(x, x1, mu[static_cast<std::size_t>(k - 2)], m, p, tol);
    };

    // boundary term: reference port at the threshold
    double log_total = channel::log_nakagami_pdf(x, m, p);
    for (int k = 2; k <= n; ++k)
        log_total += log_pk(k, x);

    for (int i = 2; i <= n; ++i) {
        const double mui = std::abs(mu[static_cast<std::size_t>(i - 2)]);
        auto log_f = [&](double x1) {
            if (x1 <= 0.0)
                return detail::neg_inf;
            double v = channel::log_nakagami_pdf(x1, m, p);
            v += channel::detail::log_conditional_pdf(x, x1, mui, m, p, tol);
            for (int k = 2; k <= n; ++k)
                if (k != i)
                    v += log_pk(k, x1);
            return v;
        };
        std::vector<double> bps;
        channel::detail::add_window(bps, mui * x, sigma * std::sqrt((1.0 - mui * mui) / (2.0 * m)));
        channel::detail::add_window(bps, sigma * std::sqrt((2.0 * m - 1.0) / (2.0 * m)),
                                    sigma / std::sqrt(2.0 * m));
        double li;
        try {
            li = channel::detail::log_integrate(log_f, 0.0, x, bps, num.channel.quad, "lcr");
        } catch (const ConvergenceError &e) {
            throw ConvergenceError("lcr interior term i=" + std::to_string(i) + ": " + e.what(),
                                   e.achieved_error(), e.iterations());
        }
        log_total = specfun::detail::log_add_exp(log_total, li);
    }
    return std::sqrt(std::numbers::pi / (2.0 * m)) * sigma * ctx.doppler * std::exp(log_total);
}

/// Two-port LCR as a negative-binomial series; requires 0 < |mu_2| < 1.
inline double lcr_two_port_series(const CrossingContext &ctx, const LevelCrossNumerics &num = {})
{
    ctx.validate();
    const auto &c = ctx.chan;
    fasdep::detail::require(c.n_ports() == 2, "lcr_two_port_series: needs a two-port channel");
    const double mu2 = c.mu()[0] * c.mu()[0];
    fasdep::detail::require(mu2 > 0.0 && mu2 < 1.0, "lcr_two_port_series: requires 0 < |mu_2| < 1");
    const auto &tol = num.series;
    tol.validate();
    const double x = ctx.threshold;
    if (x == 0.0)
        return 0.0;

    using specfun::detail::log_gamma;
    const double m = c.nakagami_m(), p = c.power();
    const double a = m / (p * (1.0 - mu2));
    const double ax2 = a * x * x;
    const double lx = std::log(x);
    const double log_pref = std::log(2.0) + 0.5 * std::log(2.0 * std::numbers::pi) +
                            (m + 0.5) * std::log(m) + std::log(ctx.doppler) + m * lx - ax2 -
                            log_gamma(m) - (m + 0.5) * std::log(p) - std::log1p(-mu2);

    // term_k = mu^{2k} x^{2k+m-1} a^{k-1} P(k+m, a x^2) / k!
    const specfun::EvalTolerance inner{1e-14, 100000};
    double log_sum = detail::neg_inf, prev = detail::neg_inf;
    for (long k = 0;; ++k) {
        const double kd = static_cast<double>(k);
        const double lt = kd * std::log(mu2) + (2.0 * kd + m - 1.0) * lx + (kd - 1.0) * std::log(a) -
                          log_gamma(kd + 1.0) + specfun::log_gamma_p(kd + m, ax2, inner);
        log_sum = specfun::detail::log_add_exp(log_sum, lt);
        if (lt <= prev && lt - log_sum < std::log(tol.rel_tol))
            break;
        if (k + 1 >= tol.max_terms)
            throw ConvergenceError("lcr_two_port_series truncation", std::exp(lt - log_sum), k + 1);
        prev = lt;
    }
    return std::exp(log_pref + log_sum);
}

/// CDF, LCR, AFD and ANFD at ctx.threshold. Identical-port channels (and N = 1)
/// use the single-port closed forms; otherwise the quadrature formulas.
/// AFD at a zero threshold is 0 by convention.
inline CrossingStatistics crossing_statistics(const CrossingContext &ctx, const LevelCrossNumerics &num = {})
{
    ctx.validate();
    const auto &c = ctx.chan;
    CrossingStatistics s;
    if (c.fully_correlated()) {
        s.cdf = channel::nakagami_cdf(ctx.threshold, c.nakagami_m(), c.power());
        s.ccdf = 1.0 - s.cdf;
        if (s.cdf > 0.5) {
            s.ccdf = channel::nakagami_ccdf(ctx.threshold, c.nakagami_m(), c.power());
            s.cdf = 1.0 - s.ccdf;
        }
        s.lcr = lcr_fully_correlated(ctx);
    } else {
        fasdep::detail::require(!c.any_unit_correlation(),
                                "crossing_statistics: mixed identical and distinct ports are not supported");
        const auto pair = channel::max_cdf_pair(c, ctx.threshold, num.channel);
        s.cdf = pair.cdf;
        s.ccdf = pair.ccdf;
        s.lcr = lcr(ctx, num);
    }
    if (ctx.threshold == 0.0 || s.cdf == 0.0) {
        s.afd = 0.0;
        s.anfd = s.lcr > 0.0 ? 1.0 / s.lcr : std::numeric_limits<double>::infinity();
        return s;
    }
    if (!(s.lcr > 0.0)) {
        if (s.ccdf > 0.0)
            throw NumericalError("crossing_statistics: LCR underflows at threshold " +
                                 std::to_string(ctx.threshold));
        // permanently below the threshold
        s.afd = std::numeric_limits<double>::infinity();
        s.anfd = 0.0;
        return s;
    }
    s.afd = s.cdf / s.lcr;
    s.anfd = s.ccdf / s.lcr;
    return s;
}

/// Average fade duration CDF / LCR.
inline double afd(const CrossingContext &ctx, const LevelCrossNumerics &num = {})
{
    return crossing_statistics(ctx, num).afd;
}

/// Average non-fade duration (1 - CDF) / LCR.
inline double anfd(const CrossingContext &ctx, const LevelCrossNumerics &num = {})
{
    return crossing_statistics(ctx, num).anfd;
}

/// Failure rate 1/ANFD and repair rate 1/AFD of the two-state link at the threshold.
inline RatePair failure_repair_rates(const CrossingContext &ctx, const LevelCrossNumerics &num = {})
{
    const auto s = crossing_statistics(ctx, num);
    constexpr double inf = std::numeric_limits<double>::infinity();
    return {std::isinf(s.anfd) ? 0.0 : 1.0 / s.anfd, s.afd == 0.0 ? inf : 1.0 / s.afd};
}

/// Independent-port AFD: gamma(m, m x^2/sigma^2) sigma^{2m-1} / (sqrt(2 pi) f_D N m^{m-1/2} x^{2m-1} e^{-m x^2/sigma^2}).
inline double afd_iid(const CrossingContext &ctx)
{
    ctx.validate();
    const auto &c = ctx.chan;
    const double x = ctx.threshold, m = c.nakagami_m();
    if (x == 0.0)
        return 0.0;
    const double lg = specfun::detail::log_gamma(m) +
                      specfun::log_gamma_p(m, m * x * x / c.power(), {1e-14, 100000});
    // log_single_port_lcr already carries Gamma(m); add it back for the lower incomplete gamma
    const double l1 = detail::log_single_port_lcr(x, m, c.power(), ctx.doppler) + specfun::detail::log_gamma(m);
    return std::exp(lg - l1 - std::log(static_cast<double>(c.n_ports())));
}

/// Identical-port AFD (independent of N).
inline double afd_fully_correlated(const CrossingContext &ctx)
{
    ctx.validate();
    const auto &c = ctx.chan;
    const double x = ctx.threshold, m = c.nakagami_m();
    if (x == 0.0)
        return 0.0;
    const double lp = specfun::log_gamma_p(m, m * x * x / c.power(), {1e-14, 100000});
    return std::exp(lp - detail::log_single_port_lcr(x, m, c.power(), ctx.doppler));
}

/// Two-port AFD: joint CDF by quadrature over the series LCR.
inline double afd_two_port_series(const CrossingContext &ctx, const LevelCrossNumerics &num = {})
{
    ctx.validate();
    fasdep::detail::require(ctx.chan.n_ports() == 2, "afd_two_port_series: needs a two-port channel");
    if (ctx.threshold == 0.0)
        return 0.0;
    return channel::max_cdf(ctx.chan, ctx.threshold, num.channel) / lcr_two_port_series(ctx, num);
}

} // namespace fasdep::levelcross

#endif // FASDEP_LEVELCROSS_HPP
