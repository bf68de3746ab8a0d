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

#include <gtest/gtest.h>

#include "fasdep/meee_opt.hpp"

namespace mo = fasdep::meee_opt;
namespace qos = fasdep::qos;
namespace ch = fasdep::channel;
namespace opt = fasdep::optimize;

namespace {

qos::MeeeSetup narrow_aperture(int n)
{
    qos::MeeeSetup s;
    s.chan = ch::FasChannel(n, 0.03, 5.0, 1.0);
    s.mission_duration = 5.0;
    return s;
}

} // namespace

TEST(MeeeObjective, CachesOneEvaluationPerPoint)
{
    mo::MeeeObjective obj(narrow_aperture(2));
    const double a = obj.numerator(3.0), b = obj.denominator(3.0), r = obj.reliability(3.0);
    EXPECT_EQ(obj.evaluations(), 1u);
    EXPECT_DOUBLE_EQ(obj.value(3.0), a / b);
    EXPECT_GT(r, 0.0);
    EXPECT_LE(r, 1.0);
}

TEST(OptimizeMeee, AgreesWithDenseGrid)
{
    const auto setup = narrow_aperture(2);
    const double omega = 0.9999;
    const opt::DinkelbachConfig cfg{0.1, 1000.0, 1e-6, 1e-8, 50};
    const auto r = mo::optimize_meee(setup, omega, cfg);
    ASSERT_TRUE(r.result.feasible);
    EXPECT_TRUE(r.result.converged);
    EXPECT_GE(r.at_star.dependability.mission_reliability, omega);
    for (std::size_t i = 1; i < r.result.kappa_trace.size(); ++i)
        EXPECT_GE(r.result.kappa_trace[i], r.result.kappa_trace[i - 1]);

    double best = 0.0;
    const int points = 2000;
    for (int i = 0; i < points; ++i) {
        const double x = cfg.lb * std::pow(cfg.ub / cfg.lb, i / (points - 1.0));
        const auto b = qos::meee_breakdown(setup, x);
        if (b.dependability.mission_reliability >= omega)
            best = std::max(best, b.meee);
    }
    // a finite grid can only undershoot the constrained optimum
    EXPECT_GE(r.result.value_star, best * (1.0 - 1e-3));
}

TEST(OptimizeMeee, MorePortsRaiseTheOptimum)
{
    const opt::DinkelbachConfig cfg{0.1, 1000.0, 1e-6, 1e-8, 50};
    double prev = 0.0, prev_snr = 1e300;
    for (int n : {1, 2, 3}) {
        const auto r = mo::optimize_meee(narrow_aperture(n), 0.9999, cfg);
        ASSERT_TRUE(r.result.feasible);
        EXPECT_GT(r.result.value_star, prev);
        EXPECT_LT(r.result.phi_star, prev_snr);
        prev = r.result.value_star;
        prev_snr = r.result.phi_star;
    }
}

TEST(OptimizeMeee, UnreachableReliabilityIsInfeasible)
{
    const opt::DinkelbachConfig cfg{0.1, 1.0, 1e-6, 1e-8, 50};
    const auto r = mo::optimize_meee(narrow_aperture(1), 0.9999, cfg);
    EXPECT_FALSE(r.result.feasible);
    EXPECT_THROW((void)mo::optimize_meee(narrow_aperture(1), 1.5), fasdep::DomainError);
}
