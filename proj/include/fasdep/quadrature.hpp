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
/// \file quadrature.hpp
///
/// Globally adaptive 7/15-point Gauss-Kronrod integration over a finite
/// interval. The interval with the largest error estimate is bisected until
/// the summed estimate meets max(abs_tol, rel_tol * |I|). Optional interior
/// breakpoints seed the initial partition, which is how callers hand over
/// known peaks and kinks.
///
#ifndef FASDEP_QUADRATURE_HPP
#define FASDEP_QUADRATURE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <tuple>
#include <utility>
#include <string>
#include <vector>

#include "fasdep/errors.hpp"

namespace fasdep::quad {

struct QuadOptions
{
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_subdivisions = 2000;
};

struct QuadResult
{
    double value = 0.0;
    double abs_error = 0.0;
    int n_intervals = 0;
    long n_evals = 0;
};

namespace detail {

inline constexpr std::array<double, 8> xgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> wgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the nodes xgk[1], xgk[3], xgk[5], xgk[7]
inline constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment
{
    double a, b, value, error;
};

inline bool by_error(const Segment &l, const Segment &r)
{
    return l.error < r.error;
}

template <class F>
Segment gk15(F &f, double a, double b)
{
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double abs_half = std::abs(half);

    auto eval = [&f](double x) {
        const double y = f(x);
        if (!std::isfinite(y))
            throw NumericalError("integrand is not finite at x = " + std::to_string(x));
        return y;
    };

    std::array<double, 7> f1{}, f2{};
    const double fc = eval(center);
    double resg = fc * wg[3];
    double resk = fc * wgk[7];
    double resabs = std::abs(resk);
    for (int j = 0; j < 7; ++j) {
        const double dx = half * xgk[j];
        f1[j] = eval(center - dx);
        f2[j] = eval(center + dx);
        const double s = f1[j] + f2[j];
        resk += wgk[j] * s;
        resabs += wgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
        if (j % 2 == 1)
            resg += wg[j / 2] * s;
    }
    const double mean = 0.5 * resk;
    double resasc = wgk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j)
        resasc += wgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));

    const double result = resk * half;
    resabs *= abs_half;
    resasc *= abs_half;
    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr double uflow = std::numeric_limits<double>::min();
    if (resabs > uflow / (50.0 * eps))
        err = std::max(50.0 * eps * resabs, err);
    return {a, b, result, err};
}

} // namespace detail

/// Integrate f over [a, b]. Throws ConvergenceError (carrying the achieved
/// error estimate) when the subdivision budget runs out, and NumericalError
/// if the integrand returns a non-finite value.
template <class F>
QuadResult integrate(F &&f, double a, double b, const QuadOptions &opts = {},
                     std::span<const double> breakpoints = {})
{
    fasdep::detail::require_finite(a, "integrate: lower limit");
    fasdep::detail::require_finite(b, "integrate: upper limit");
    fasdep::detail::require(opts.abs_tol >= 0.0 && opts.rel_tol >= 0.0 &&
                                (opts.abs_tol > 0.0 || opts.rel_tol > 0.0),
                            "integrate: tolerances must be nonnegative and not both zero");
    fasdep::detail::require(opts.max_subdivisions >= 1, "integrate: max_subdivisions must be >= 1");

    QuadResult out;
    if (a == b)
        return out;
    const double sign = a < b ? 1.0 : -1.0;
    const double lo = std::min(a, b), hi = std::max(a, b);

    std::vector<double> cuts{lo};
    for (double p : breakpoints)
        if (std::isfinite(p) && p > lo && p < hi)
            cuts.push_back(p);
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<detail::Segment> heap;
    heap.reserve(static_cast<std::size_t>(opts.max_subdivisions) + cuts.size());
    // intervals too narrow to bisect further keep their estimate here
    double frozen_value = 0.0, frozen_error = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        heap.push_back(detail::gk15(f, cuts[i], cuts[i + 1]));
        out.n_evals += 15;
    }
    std::make_heap(heap.begin(), heap.end(), detail::by_error);

    auto totals = [&] {
        double v = frozen_value, e = frozen_error;
        for (const auto &s : heap) {
            v += s.value;
            e += s.error;
        }
        return std::pair{v, e};
    };

    auto [value, error] = totals();
    int splits = 0;
    while (error > std::max(opts.abs_tol, opts.rel_tol * std::abs(value)) && !heap.empty()) {
        if (splits >= opts.max_subdivisions)
            throw ConvergenceError("adaptive quadrature on [" + std::to_string(lo) + ", " +
                                       std::to_string(hi) + "] hit the subdivision limit",
                                   error, splits);
        std::pop_heap(heap.begin(), heap.end(), detail::by_error);
        const detail::Segment worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b) ||
            (worst.b - worst.a) < 64.0 * std::numeric_limits<double>::epsilon() *
                                      std::max(std::abs(worst.a), std::abs(worst.b))) {
            frozen_value += worst.value;
            frozen_error += worst.error;
        } else {
            heap.push_back(detail::gk15(f, worst.a, mid));
            std::push_heap(heap.begin(), heap.end(), detail::by_error);
            heap.push_back(detail::gk15(f, mid, worst.b));
            std::push_heap(heap.begin(), heap.end(), detail::by_error);
            out.n_evals += 30;
        }
        ++splits;
        std::tie(value, error) = totals();
    }
    if (error > std::max(opts.abs_tol, opts.rel_tol * std::abs(value)))
        throw ConvergenceError("adaptive quadrature stalled at roundoff level on [" +
                                   std::to_string(lo) + ", " + std::to_string(hi) + "]",
                               error, splits);

    out.value = sign * value;
    out.abs_error = error;
    out.n_intervals = static_cast<int>(heap.size());
    return out;
}

} // namespace fasdep::quad

#endif // FASDEP_QUADRATURE_HPP
