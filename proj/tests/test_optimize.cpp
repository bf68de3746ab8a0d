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

#include <cmath>
#include <limits>
#include <numbers>

#include <gtest/gtest.h>

#include "fasdep/optimize.hpp"

namespace opt = fasdep::optimize;

TEST(GoldenSection, SymmetricParabola)
{
    const auto r = opt::golden_section_max([](double x) { return -(x - 2.0) * (x - 2.0); }, 0.0, 5.0, 1e-8);
    EXPECT_NEAR(r.x, 2.0, 1e-7);
    EXPECT_NEAR(r.value, 0.0, 1e-13);
}

TEST(GoldenSection, StationaryPointOfLogRatio)
{
    const auto r = opt::golden_section_max([](double x) { return std::log1p(x) / (1.0 + x); }, 0.0, 10.0, 1e-10);
    EXPECT_NEAR(r.x, std::numbers::e - 1.0, 1e-8);
}

TEST(GoldenSection, BracketContractsByFixedRatio)
{
    const auto r = opt::golden_section_max([](double x) { return std::sin(x); }, 0.5, 3.0, 1e-9);
    ASSERT_GT(r.widths.size(), 10u);
    // endpoints carry rounding of order eps * |x|, which dominates once the bracket is narrow
    const double eps = std::numeric_limits<double>::epsilon();
    for (std::size_t i = 1; i < r.widths.size(); ++i) {
        const double tol = std::max(1e-12, 16.0 * eps * 3.0 / r.widths[i]);
        EXPECT_NEAR(r.widths[i] / r.widths[i - 1], opt::golden_ratio, tol) << i;
    }
    const double lb_final = r.x - 0.5 * r.widths.back(), ub_final = r.x + 0.5 * r.widths.back();
    EXPECT_LT(2.0 * (ub_final - lb_final) / (ub_final + lb_final), 1e-9);
}

TEST(GoldenSection, ConstantObjectiveTakesTieBranch)
{
    // every tie moves lb, so the bracket collapses toward ub
    const auto r = opt::golden_section_max([](double) { return 3.0; }, 1.0, 2.0, 1e-6);
    EXPECT_EQ(r.value, 3.0);
    EXPECT_GE(r.x, 1.0);
    EXPECT_LE(r.x, 2.0);
    EXPECT_GT(r.x, 1.999);
}

TEST(GoldenSection, ReportsNonFiniteObjective)
{
    auto f = [](double x) { return x > 0.3 ? std::numeric_limits<double>::quiet_NaN() : x; };
    try {
        (void)opt::golden_section_max(f, 0.0, 1.0, 1e-6);
        FAIL() << "expected NumericalError";
    } catch (const fasdep::NumericalError &e) {
        EXPECT_NE(std::string(e.what()).find("x = "), std::string::npos);
    }
    EXPECT_THROW((void)opt::golden_section_max(f, 1.0, 0.0, 1e-6), fasdep::DomainError);
}

TEST(Dinkelbach, ClosedFormBenchmark)
{
    opt::DinkelbachConfig cfg{0.0, 10.0, 1e-10, 1e-12, 50};
    const auto r = opt::dinkelbach_maximize([](double x) { return std::log1p(x); },
                                            [](double x) { return 1.0 + x; }, cfg);
    ASSERT_TRUE(r.converged);
    EXPECT_NEAR(r.phi_star, std::numbers::e - 1.0, 1e-6);
    EXPECT_NEAR(r.value_star, 1.0 / std::numbers::e, 1e-12);
    for (std::size_t i = 1; i < r.kappa_trace.size(); ++i)
        EXPECT_GE(r.kappa_trace[i], r.kappa_trace[i - 1]);
    EXPECT_LE(std::abs(r.residual), cfg.outer_tol);
    EXPECT_NEAR(r.kappa_trace.back(), r.value_star, 1e-10);
}

TEST(Dinkelbach, ConstantRatioNeedsOneUpdate)
{
    const auto r = opt::dinkelbach_maximize([](double x) { return 0.7 * (x + 1.0); },
                                            [](double x) { return x + 1.0; }, {1.0, 5.0, 1e-8, 1e-10, 50});
    ASSERT_TRUE(r.converged);
    ASSERT_EQ(r.kappa_trace.size(), 2u);
    EXPECT_EQ(r.kappa_trace[0], 0.0);
    EXPECT_NEAR(r.kappa_trace[1], 0.7, 1e-15);
    EXPECT_NEAR(r.value_star, 0.7, 1e-15);
}

TEST(Dinkelbach, MonotoneConstraintClipsInterval)
{
    // unconstrained optimum at e-1; g(x) = x >= 3 moves it to the boundary
    opt::DinkelbachConfig cfg{0.1, 10.0, 1e-10, 1e-12, 50};
    const opt::Constraint c{[](double x) { return x; }, 3.0};
    const auto r = opt::dinkelbach_maximize([](double x) { return std::log1p(x); },
                                            [](double x) { return 1.0 + x; }, cfg, c);
    EXPECT_EQ(r.handling, opt::ConstraintHandling::clipped);
    EXPECT_TRUE(r.feasible);
    EXPECT_GE(r.phi_star, 3.0);
    EXPECT_NEAR(r.phi_star, 3.0, 1e-8);
    EXPECT_NEAR(r.search_lb, 3.0, 1e-12);
}

TEST(Dinkelbach, NonMonotoneConstraintIsPenalized)
{
    // feasible only inside [2, 6]
    opt::DinkelbachConfig cfg{0.1, 10.0, 1e-10, 1e-12, 50};
    const opt::Constraint c{[](double x) { return -(x - 4.0) * (x - 4.0); }, -4.0};
    const auto r = opt::dinkelbach_maximize([](double x) { return std::log1p(x); },
                                            [](double x) { return 1.0 + x; }, cfg, c);
    EXPECT_EQ(r.handling, opt::ConstraintHandling::penalized);
    EXPECT_TRUE(r.feasible);
    EXPECT_NEAR(r.phi_star, 2.0, 1e-6);
    EXPECT_GE(c.g(r.phi_star), c.omega - 1e-12);
}

TEST(Dinkelbach, InfeasibleProblemIsFlagged)
{
    const opt::Constraint c{[](double x) { return x; }, 100.0};
    const auto r = opt::dinkelbach_maximize([](double x) { return std::log1p(x); },
                                            [](double x) { return 1.0 + x; }, {0.1, 10.0, 1e-8, 1e-10, 50}, c);
    EXPECT_FALSE(r.feasible);
    EXPECT_TRUE(std::isnan(r.phi_star));
    EXPECT_TRUE(r.kappa_trace.empty());
}

TEST(Dinkelbach, IterationBudgetExhaustion)
{
    const auto r = opt::dinkelbach_maximize([](double x) { return std::log1p(x); },
                                            [](double x) { return 1.0 + x; }, {0.0, 10.0, 1e-10, 1e-300, 2});
    EXPECT_FALSE(r.converged);
    EXPECT_EQ(r.kappa_trace.size(), 2u);
    EXPECT_TRUE(std::isfinite(r.phi_star));
}

TEST(Dinkelbach, RejectsBadConfig)
{
    auto f = [](double x) { return x; };
    EXPECT_THROW((void)opt::dinkelbach_maximize(f, f, {2.0, 1.0, 1e-6, 1e-8, 50}), fasdep::DomainError);
    EXPECT_THROW((void)opt::dinkelbach_maximize(f, f, {1.0, 2.0, 0.0, 1e-8, 50}), fasdep::DomainError);
    EXPECT_THROW((void)opt::dinkelbach_maximize(f, f, {1.0, 2.0, 1e-6, 1e-8, 0}), fasdep::DomainError);
}
