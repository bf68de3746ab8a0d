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
/// \file channel.hpp
///
/// N-port fluid antenna channel: ports 2..N are correlated with the reference
/// port 1 through mu_k = J0(2 pi (k-1) W / (N-1)) and are conditionally
/// independent given port 1. Envelopes are Nakagami-m with E[alpha^2] = sigma^2.
///
/// The correlations enter every formula through mu_k^2 only; the signed value
/// is stored for reference.
///
#ifndef FASDEP_CHANNEL_HPP
#define FASDEP_CHANNEL_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fasdep/errors.hpp"
#include "fasdep/quadrature.hpp"
#include "fasdep/specfun.hpp"

namespace fasdep::channel {

/// Correlation of port k with port 1: J0(2 pi (k-1) W / (N-1)), k = 2..N.
inline double spatial_correlation(int k, int n_ports, double aperture)
{
    fasdep::detail::require(n_ports >= 2, "spatial_correlation: needs at least two ports");
    fasdep::detail::require(k >= 2 && k <= n_ports, "spatial_correlation: port index out of range");
    fasdep::detail::require_finite(aperture, "spatial_correlation: aperture");
    fasdep::detail::require(aperture >= 0.0, "spatial_correlation: aperture must be >= 0");
    return specfun::bessel_j0(2.0 * std::numbers::pi * static_cast<double>(k - 1) /
                              static_cast<double>(n_ports - 1) * aperture);
}

class FasChannel
{
public:
    FasChannel(int n_ports, double aperture, double nakagami_m, double power)
        : n_ports_(n_ports), aperture_(aperture), m_(nakagami_m), power_(power)
    {
        fasdep::detail::require(n_ports >= 1, "FasChannel: n_ports must be >= 1");
        fasdep::detail::require_finite(aperture, "FasChannel: aperture");
        fasdep::detail::require(aperture >= 0.0, "FasChannel: aperture must be >= 0");
        check_common();
        for (int k = 2; k <= n_ports; ++k)
            mu_.push_back(spatial_correlation(k, n_ports, aperture));
    }

    /// Channel with explicit correlations mu_2..mu_N (aperture left unset).
    static FasChannel with_correlations(double nakagami_m, double power, std::vector<double> mu)
    {
        FasChannel c;
        c.n_ports_ = static_cast<int>(mu.size()) + 1;
        c.m_ = nakagami_m;
        c.power_ = power;
        c.check_common();
        for (double v : mu) {
            fasdep::detail::require_finite(v, "FasChannel: correlation");
            fasdep::detail::require(std::abs(v) <= 1.0, "FasChannel: |mu_k| must be <= 1");
        }
        c.mu_ = std::move(mu);
        return c;
    }

    int n_ports() const noexcept { return n_ports_; }
    std::optional<double> aperture() const noexcept { return aperture_; }
    double nakagami_m() const noexcept { return m_; }
    double power() const noexcept { return power_; }
    double sigma() const noexcept { return std::sqrt(power_); }
    const std::vector<double> &mu() const noexcept { return mu_; }

    /// True when every port is identical to the reference (includes N = 1).
    bool fully_correlated() const noexcept
    {
        return std::all_of(mu_.begin(), mu_.end(), [](double v) { return std::abs(v) == 1.0; });
    }

    bool any_unit_correlation() const noexcept
    {
        return std::any_of(mu_.begin(), mu_.end(), [](double v) { return std::abs(v) == 1.0; });
    }

private:
    FasChannel() = default;

    void check_common() const
    {
        fasdep::detail::require_finite(m_, "FasChannel: nakagami_m");
        fasdep::detail::require_finite(power_, "FasChannel: power");
        fasdep::detail::require(m_ >= 0.5, "FasChannel: nakagami_m must be >= 0.5");
        fasdep::detail::require(power_ > 0.0, "FasChannel: power must be > 0");
    }

    int n_ports_ = 1;
    std::optional<double> aperture_;
    double m_ = 1.0;
    double power_ = 1.0;
    std::vector<double> mu_;
};

/// Numerical controls shared by the quadrature-based channel formulas.
struct ChannelNumerics
{
    quad::QuadOptions quad{};
    // Marcum series near mu -> 1 span a Poisson window of width ~ sqrt(lambda)
    specfun::EvalTolerance marcum{1e-12, 1000000};
};

inline double log_nakagami_pdf(double x, double m, double power)
{
    if (x < 0.0)
        return -std::numeric_limits<double>::infinity();
    if (x == 0.0)
        return m == 0.5 ? std::log(2.0) + 0.5 * std::log(m / power) - 0.5 * std::log(std::numbers::pi)
                        : -std::numeric_limits<double>::infinity();
    return std::log(2.0) + m * std::log(m) + (2.0 * m - 1.0) * std::log(x) - m * x * x / power -
           specfun::detail::log_gamma(m) - m * std::log(power);
}

/// Nakagami-m envelope density with E[alpha^2] = power.
inline double nakagami_pdf(double x, double m, double power)
{
    return std::exp(log_nakagami_pdf(x, m, power));
}

/// P(alpha < x) = gamma(m, m x^2 / power) / Gamma(m).
inline double nakagami_cdf(double x, double m, double power, const specfun::EvalTolerance &tol = {})
{
    if (x <= 0.0)
        return 0.0;
    if (std::isinf(x))
        return 1.0;
    return specfun::gamma_p(m, m * x * x / power, {tol.rel_tol, std::max(tol.max_terms, 100000L)});
}

/// P(alpha >= x), computed directly so it keeps relative accuracy in the tail.
inline double nakagami_ccdf(double x, double m, double power, const specfun::EvalTolerance &tol = {})
{
    if (x <= 0.0)
        return 1.0;
    if (std::isinf(x))
        return 0.0;
    return specfun::gamma_q(m, m * x * x / power, {tol.rel_tol, std::max(tol.max_terms, 100000L)});
}

namespace detail {

// Conditional log-density of port k's envelope x given port 1 at x1.
inline double log_conditional_pdf(double x, double x1, double mu, double m, double power,
                                  const specfun::EvalTolerance &tol)
{
    const double mu2 = mu * mu;
    if (mu2 == 0.0)
        return log_nakagami_pdf(x, m, power);
    const double s = power * (1.0 - mu2);
    const double z = 2.0 * m * std::sqrt(mu2) * x1 * x / s;
    return std::log(2.0 * m) + (1.0 - m) * std::log(x1) + m * std::log(x) - std::log(s) -
           0.5 * (m - 1.0) * std::log(mu2) - m * (x * x + x1 * x1 * mu2) / s +
           specfun::log_bessel_i(m - 1.0, z, tol);
}

// log P(alpha_k < upper | alpha_1 = x1) for |mu| < 1
inline double log_conditional_cdf(double upper, double x1, double mu, double m, double power,
                                  const specfun::EvalTolerance &tol)
{
    const double mu2 = mu * mu;
    if (upper <= 0.0)
        return -std::numeric_limits<double>::infinity();
    if (std::isinf(upper))
        return 0.0;
    const double s = power * (1.0 - mu2);
    const double a = std::sqrt(2.0 * m * mu2 / s) * x1;
    const double b = std::sqrt(2.0 * m / s) * upper;
    return specfun::log_marcum_p(m, a, b, tol);
}

// Integrate exp(log_f) over [lo, hi] after shifting by the largest sampled
// value, so the quadrature tolerance acts relative to the integrand scale.
// Returns the log of the integral.
template <class LogF>
double log_integrate(LogF &&log_f, double lo, double hi, std::vector<double> breakpoints,
                     const quad::QuadOptions &opts, const char *what)
{
    if (!(hi > lo))
        return -std::numeric_limits<double>::infinity();
    std::vector<double> probe = breakpoints;
    constexpr int grid = 64;
    for (int j = 0; j <= grid; ++j)
        probe.push_back(lo + (hi - lo) * (static_cast<double>(j) / grid));
    double shift = -std::numeric_limits<double>::infinity();
    for (double p : probe)
        if (p >= lo && p <= hi)
            shift = std::max(shift, log_f(p));
    if (!std::isfinite(shift)) {
        if (shift == -std::numeric_limits<double>::infinity()) {
            // every probe vanished; fall back to the midpoint-free quadrature of the raw integrand
            shift = 0.0;
        } else {
            throw NumericalError(std::string(what) + ": integrand is not finite");
        }
    }
    auto f = [&](double x) {
        const double v = log_f(x);
        return v == -std::numeric_limits<double>::infinity() ? 0.0 : std::exp(v - shift);
    };
    try {
        const auto r = quad::integrate(f, lo, hi, opts, breakpoints);
        if (r.value <= 0.0)
            return -std::numeric_limits<double>::infinity();
        return shift + std::log(r.value);
    } catch (const ConvergenceError &e) {
        throw ConvergenceError(std::string(what) + ": " + e.what(), e.achieved_error(), e.iterations());
    }
}

inline void add_window(std::vector<double> &pts, double center, double width)
{
    for (double c : {0.0, -10.0, -3.0, -1.0, 1.0, 3.0, 10.0})
        pts.push_back(center + c * width);
}

} // namespace detail

/// Joint density of (alpha_1, ..., alpha_N): the reference marginal
/// times the conditional densities of ports 2..N given port 1. For N = 1 the
/// Nakagami marginal. Rejects |mu_k| = 1 (singular density).
inline double joint_pdf(const FasChannel &chan, std::span<const double> x,
                        const ChannelNumerics &num = {})
{
    const int n = chan.n_ports();
    fasdep::detail::require(static_cast<int>(x.size()) == n, "joint_pdf: x must have one entry per port");
    for (double v : x) {
        fasdep::detail::require_finite(v, "joint_pdf: envelope");
        fasdep::detail::require(v >= 0.0, "joint_pdf: envelopes must be >= 0");
    }
    fasdep::detail::require(!chan.any_unit_correlation(),
                            "joint_pdf: |mu_k| = 1 makes the joint density singular");
    const double m = chan.nakagami_m(), p = chan.power();
    const bool has_zero = std::any_of(x.begin(), x.end(), [](double v) { return v == 0.0; });
    if (has_zero && m > 0.5)
        return 0.0;
    // for m = 1/2 the density is continuous at the axes; evaluate just inside
    auto at = [&](std::size_t i) { return x[i] == 0.0 ? 1e-300 : x[i]; };

    double lf = log_nakagami_pdf(at(0), m, p);
    for (int k = 2; k <= n; ++k)
        lf += detail::log_conditional_pdf(at(k - 1), at(0), chan.mu()[k - 2], m, p, num.marcum);
    return std::exp(lf);
}

/// P(alpha_1 < X_1, ..., alpha_N < X_N) by adaptive quadrature
/// over the reference envelope.
inline double joint_cdf(const FasChannel &chan, std::span<const double> upper,
                        const ChannelNumerics &num = {})
{
    const int n = chan.n_ports();
    fasdep::detail::require(static_cast<int>(upper.size()) == n,
                            "joint_cdf: upper must have one entry per port");
    for (double v : upper) {
        fasdep::detail::require(!std::isnan(v), "joint_cdf: upper bound is NaN");
        fasdep::detail::require(v >= 0.0, "joint_cdf: upper bounds must be >= 0");
    }
    const double m = chan.nakagami_m(), p = chan.power();
    if (std::any_of(upper.begin(), upper.end(), [](double v) { return v == 0.0; }))
        return 0.0;

    // identical ports act as a cap on the reference envelope
    double hi = upper[0];
    std::vector<int> active;
    for (int k = 2; k <= n; ++k) {
        if (std::abs(chan.mu()[k - 2]) == 1.0)
            hi = std::min(hi, upper[k - 1]);
        else if (!std::isinf(upper[k - 1]))
            active.push_back(k);
    }
    if (active.empty())
        return nakagami_cdf(hi, m, p, num.marcum);

    const double sigma = chan.sigma();
    // beyond ~40 sigma the reference density is below double range
    const double reach = sigma * std::sqrt(std::max(1.0, 1500.0 / m));
    const double lim = std::min(hi, reach);

    std::vector<double> bps;
    detail::add_window(bps, sigma * std::sqrt((2.0 * m - 1.0) / (2.0 * m)), sigma / std::sqrt(2.0 * m));
    for (int k : active) {
        const double mu = std::abs(chan.mu()[k - 2]);
        if (mu > 0.0)
            detail::add_window(bps, upper[k - 1] / mu, sigma * std::sqrt((1.0 - mu * mu) / (2.0 * m)));
    }

    auto log_f = [&](double x1) {
        double v = log_nakagami_pdf(x1, m, p);
        if (v == -std::numeric_limits<double>::infinity())
            return v;
        for (int k : active)
            v += detail::log_conditional_cdf(upper[k - 1], x1, chan.mu()[k - 2], m, p, num.marcum);
        return v;
    };
    const double lv = detail::log_integrate(log_f, 0.0, lim, bps, num.quad, "joint_cdf");
    return std::clamp(std::exp(lv), 0.0, 1.0);
}

/// P(max_k alpha_k >= x_th). Integrates the complement of the conditional
/// product directly, so it stays accurate where max_cdf rounds to 1.
inline double max_ccdf(const FasChannel &chan, double x_th, const ChannelNumerics &num = {})
{
    fasdep::detail::require(!std::isnan(x_th) && x_th >= 0.0, "max_ccdf: threshold must be >= 0");
    const double m = chan.nakagami_m(), p = chan.power();
    if (x_th == 0.0)
        return 1.0;
    std::vector<int> active;
    for (int k = 2; k <= chan.n_ports(); ++k)
        if (std::abs(chan.mu()[k - 2]) < 1.0)
            active.push_back(k);
    const double tail = nakagami_ccdf(x_th, m, p, num.marcum);
    if (active.empty() || std::isinf(x_th))
        return tail;

    const double sigma = chan.sigma();
    std::vector<double> bps;
    detail::add_window(bps, sigma * std::sqrt((2.0 * m - 1.0) / (2.0 * m)), sigma / std::sqrt(2.0 * m));
    for (int k : active) {
        const double mu = std::abs(chan.mu()[k - 2]);
        if (mu > 0.0)
            detail::add_window(bps, x_th / mu, sigma * std::sqrt((1.0 - mu * mu) / (2.0 * m)));
    }
    bps.push_back(x_th);

    auto log_f = [&](double x1) {
        const double lf = log_nakagami_pdf(x1, m, p);
        if (lf == -std::numeric_limits<double>::infinity())
            return lf;
        // log(1 - prod P_k) from per-port log P_k
        double log_all_below = 0.0;
        for (int k : active) {
            const double mu2 = chan.mu()[k - 2] * chan.mu()[k - 2];
            const double s = p * (1.0 - mu2);
            const double a = std::sqrt(2.0 * m * mu2 / s) * x1;
            const double b = std::sqrt(2.0 * m / s) * x_th;
            const double lq = specfun::log_marcum_q(m, a, b, num.marcum);
            log_all_below += lq < std::log(0.5) ? std::log1p(-std::exp(lq)) : specfun::log_marcum_p(m, a, b, num.marcum);
        }
        const double any_above = -std::expm1(log_all_below);
        return any_above > 0.0 ? lf + std::log(any_above) : -std::numeric_limits<double>::infinity();
    };
    const double lv = detail::log_integrate(log_f, 0.0, x_th, bps, num.quad, "max_ccdf");
    return std::clamp(tail + std::exp(lv), 0.0, 1.0);
}

struct CdfPair
{
    double cdf = 0.0;
    double ccdf = 1.0;
};

/// CDF and complement of the selected envelope at x_th. Whichever side is
/// below 1/2 is integrated and the other is its complement, so the two sum
/// to 1 and both keep relative accuracy.
inline CdfPair max_cdf_pair(const FasChannel &chan, double x_th, const ChannelNumerics &num = {})
{
    fasdep::detail::require(!std::isnan(x_th) && x_th >= 0.0, "max_cdf: threshold must be >= 0");
    std::vector<double> upper(static_cast<std::size_t>(chan.n_ports()), x_th);
    const double cdf = joint_cdf(chan, upper, num);
    if (cdf <= 0.5)
        return {cdf, 1.0 - cdf};
    const double ccdf = max_ccdf(chan, x_th, num);
    return {1.0 - ccdf, ccdf};
}

/// CDF of the selected envelope max_k alpha_k at x_th.
inline double max_cdf(const FasChannel &chan, double x_th, const ChannelNumerics &num = {})
{
    return max_cdf_pair(chan, x_th, num).cdf;
}

/// Two-port joint CDF as the negative-binomial mixture
/// sum_k NB_k P(m+k, y_1) P(m+k, y_2). Stops once past the mode with the
/// last term below tol.rel_tol of the running sum.
inline double bivariate_cdf_series(const FasChannel &chan, double x1, double x2,
                                   const specfun::EvalTolerance &tol = {1e-14, 500})
{
    fasdep::detail::require(chan.n_ports() == 2, "bivariate_cdf_series: needs a two-port channel");
    fasdep::detail::require(!std::isnan(x1) && !std::isnan(x2) && x1 >= 0.0 && x2 >= 0.0,
                            "bivariate_cdf_series: thresholds must be >= 0");
    const double mu2 = chan.mu()[0] * chan.mu()[0];
    fasdep::detail::require(mu2 < 1.0, "bivariate_cdf_series: requires |mu_2| < 1");
    tol.validate();
    if (x1 == 0.0 || x2 == 0.0)
        return 0.0;
    const double m = chan.nakagami_m();
    const double s = chan.power() * (1.0 - mu2);
    const double y1 = m * x1 * x1 / s, y2 = m * x2 * x2 / s;
    const specfun::EvalTolerance inner{1e-13, 100000};
    if (mu2 == 0.0)
        return specfun::gamma_p(m, y1, inner) * specfun::gamma_p(m, y2, inner);

    using specfun::detail::log_gamma;
    const double lg_m = log_gamma(m);
    const double mode = std::max(0.0, (m - 1.0) * mu2 / (1.0 - mu2));
    double sum = 0.0, prev = 0.0;
    for (long k = 0;; ++k) {
        const double kd = static_cast<double>(k);
        const double log_nb = m * std::log1p(-mu2) + log_gamma(m + kd) - lg_m - log_gamma(kd + 1.0) +
                              kd * std::log(mu2);
        const double t = std::exp(log_nb + specfun::log_gamma_p(m + kd, y1, inner) +
                                  specfun::log_gamma_p(m + kd, y2, inner));
        sum += t;
        if (kd > mode && t <= prev && t <= tol.rel_tol * sum)
            break;
        if (k + 1 >= tol.max_terms)
            throw ConvergenceError("bivariate_cdf_series truncation", sum > 0.0 ? t / sum : t, k + 1);
        prev = t;
    }
    return std::min(sum, 1.0);
}

} // namespace fasdep::channel

#endif // FASDEP_CHANNEL_HPP
