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
/// \file optimize.hpp
///
/// Single-ratio fractional maximization: Dinkelbach's parametric scheme with
/// a golden-section inner search and an optional lower-bound constraint.
///
#ifndef FASDEP_OPTIMIZE_HPP
#define FASDEP_OPTIMIZE_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "fasdep/errors.hpp"

namespace fasdep::optimize {

// 0.618...; reused interior points stay at the golden positions only with the exact value
inline constexpr double golden_ratio = 0.6180339887498949;

struct GoldenResult
{
    double x = 0.0;
    double value = 0.0;
    double lb = 0.0, ub = 0.0; // final bracket
    int iterations = 0;
    std::vector<double> widths; // bracket width after each iteration, starting with the initial one
};

/// Golden-section maximization of a unimodal f on [lb, ub]. Stops when
/// 2 (ub - lb) / (|ub| + |lb|) < tol and returns the midpoint of the final
/// bracket. Ties take the lb-moving branch. f may return -inf (used as a
/// penalty); NaN or +inf is reported with the offending x.
template <class F>
GoldenResult golden_section_max(F &&f, double lb, double ub, double tol, int max_iterations = 10000)
{
    fasdep::detail::require(std::isfinite(lb) && std::isfinite(ub) && lb < ub,
                            "golden_section_max: need finite lb < ub");
    fasdep::detail::require(tol > 0.0, "golden_section_max: tolerance must be > 0");
    auto eval = [&f](double x) {
        const double v = f(x);
        if (std::isnan(v) || v == std::numeric_limits<double>::infinity())
            throw NumericalError("golden_section_max: objective is not finite at x = " + std::to_string(x));
        return v;
    };
    auto rel_width = [&] { return 2.0 * (ub - lb) / (std::abs(ub) + std::abs(lb)); };

    GoldenResult out;
    double x1 = ub - (ub - lb) * golden_ratio;
    double x2 = lb + (ub - lb) * golden_ratio;
    double g1 = eval(x1), g2 = eval(x2);
    out.widths.push_back(ub - lb);
    while (rel_width() >= tol) {
        if (out.iterations >= max_iterations)
            throw ConvergenceError("golden_section_max: iteration limit", rel_width(), out.iterations);
        if (g1 > g2) {
            ub = x2;
            x2 = x1;
            g2 = g1;
            x1 = ub - (ub - lb) * golden_ratio;
            g1 = eval(x1);
        } else {
            lb = x1;
            x1 = x2;
            g1 = g2;
            x2 = lb + (ub - lb) * golden_ratio;
            g2 = eval(x2);
        }
        ++out.iterations;
        out.widths.push_back(ub - lb);
    }
    out.lb = lb;
    out.ub = ub;
    out.x = 0.5 * (lb + ub);
    out.value = eval(out.x);
    return out;
}

struct DinkelbachConfig
{
    double lb = 1e-2;
    double ub = 1e4;
    double inner_tol = 1e-6; // tau_1
    double outer_tol = 1e-8; // tau_2
    int max_outer_iters = 50;

    void validate() const
    {
        fasdep::detail::require(std::isfinite(lb) && std::isfinite(ub) && 0.0 <= lb && lb < ub,
                                "DinkelbachConfig: need 0 <= lb < ub");
        fasdep::detail::require(inner_tol > 0.0 && outer_tol > 0.0,
                                "DinkelbachConfig: tolerances must be > 0");
        fasdep::detail::require(max_outer_iters >= 1, "DinkelbachConfig: max_outer_iters must be >= 1");
    }
};

/// g(x) >= omega.
struct Constraint
{
    std::function<double(double)> g;
    double omega = 0.0;
};

enum class ConstraintHandling {
    none,
    clipped,   // g monotone on the probe grid: search only the feasible sub-interval
    penalized, // otherwise: infeasible points score -inf
};

struct OptResult
{
    double phi_star = std::numeric_limits<double>::quiet_NaN();
    double value_star = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> kappa_trace; // kappa used by each inner search, starting at 0
    bool feasible = false;
    bool converged = false;
    double residual = std::numeric_limits<double>::quiet_NaN(); // F(x*, kappa) at the last inner search
    double search_lb = 0.0, search_ub = 0.0;
    ConstraintHandling handling = ConstraintHandling::none;
};

namespace detail {

inline constexpr int probe_points = 64;

// Bisect on a monotone g between a feasible and an infeasible point; returns
// the feasible end.
inline double feasible_edge(const Constraint &c, double feasible, double infeasible)
{
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (feasible + infeasible);
        if (mid == feasible || mid == infeasible)
            break;
        (c.g(mid) >= c.omega ? feasible : infeasible) = mid;
        if (std::abs(feasible - infeasible) <= 1e-14 * std::abs(feasible))
            break;
    }
    return feasible;
}

} // namespace detail

/// Maximize f1(x) / f2(x) over [cfg.lb, cfg.ub] subject to an optional
/// constraint. Each outer step maximizes F(x, kappa) = f1 - kappa f2 by golden
/// section and then sets kappa = f1(x*) / f2(x*); the loop ends once
/// |F(x*, kappa)| <= tau_2.
template <class F1, class F2>
OptResult dinkelbach_maximize(F1 &&f1, F2 &&f2, const DinkelbachConfig &cfg,
                              const std::optional<Constraint> &constraint = std::nullopt)
{
    cfg.validate();
    OptResult out;
    double lo = cfg.lb, hi = cfg.ub;

    if (constraint) {
        const auto &c = *constraint;
        // logarithmic probe grid when the range allows it
        std::vector<double> xs, gs;
        const bool log_grid = cfg.lb > 0.0;
        const double step = (log_grid ? std::log(cfg.ub / cfg.lb) : cfg.ub - cfg.lb) / (detail::probe_points - 1);
        for (int j = 0; j < detail::probe_points; ++j) {
            const double x = j + 1 == detail::probe_points ? cfg.ub
                             : log_grid                    ? cfg.lb * std::exp(step * j)
                                                           : cfg.lb + step * j;
            xs.push_back(x);
            gs.push_back(c.g(x));
            if (std::isnan(gs.back()))
                throw NumericalError("dinkelbach_maximize: constraint is NaN at x = " + std::to_string(x));
        }
        bool up = true, down = true, any = false;
        for (std::size_t j = 0; j < gs.size(); ++j) {
            any = any || gs[j] >= c.omega;
            if (j > 0) {
                up = up && gs[j] >= gs[j - 1];
                down = down && gs[j] <= gs[j - 1];
            }
        }
        if (!any) {
            out.search_lb = lo;
            out.search_ub = hi;
            out.handling = up || down ? ConstraintHandling::clipped : ConstraintHandling::penalized;
            return out;
        }
        if (up || down) {
            out.handling = ConstraintHandling::clipped;
            if (up) {
                std::size_t j = 0;
                while (gs[j] < c.omega)
                    ++j;
                if (j > 0)
                    lo = detail::feasible_edge(c, xs[j], xs[j - 1]);
            } else {
                std::size_t j = gs.size() - 1;
                while (gs[j] < c.omega)
                    --j;
                if (j + 1 < gs.size())
                    hi = detail::feasible_edge(c, xs[j], xs[j + 1]);
            }
        } else {
            out.handling = ConstraintHandling::penalized;
        }
    }
    out.search_lb = lo;
    out.search_ub = hi;

    auto feasible_at = [&](double x) { return !constraint || constraint->g(x) >= constraint->omega; };
    const bool penalize = out.handling == ConstraintHandling::penalized;

    double kappa = 0.0;
    double x = lo;
    for (int it = 0; it < cfg.max_outer_iters; ++it) {
        out.kappa_trace.push_back(kappa);
        auto parametric = [&](double t) {
            if (penalize && !feasible_at(t))
                return -std::numeric_limits<double>::infinity();
            return f1(t) - kappa * f2(t);
        };
        if (hi == lo) {
            x = lo;
        } else {
            const auto g = golden_section_max(parametric, lo, hi, cfg.inner_tol);
            x = g.x;
            // a midpoint straddling the feasible edge falls back to the better feasible end
            if (penalize && !feasible_at(x)) {
                const double a = parametric(g.lb), b = parametric(g.ub);
                if (a > -std::numeric_limits<double>::infinity() || b > -std::numeric_limits<double>::infinity())
                    x = a >= b ? g.lb : g.ub;
            }
        }
        const double n = f1(x), d = f2(x);
        if (!(d > 0.0) || !std::isfinite(n) || !std::isfinite(d))
            throw NumericalError("dinkelbach_maximize: invalid ratio at x = " + std::to_string(x));
        out.residual = n - kappa * d;
        out.phi_star = x;
        out.value_star = n / d;
        if (std::abs(out.residual) <= cfg.outer_tol) {
            out.converged = true;
            break;
        }
        kappa = n / d;
    }
    out.feasible = feasible_at(out.phi_star);
    return out;
}

} // namespace fasdep::optimize

#endif // FASDEP_OPTIMIZE_HPP
