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

#include <boost/math/special_functions/erf.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <gtest/gtest.h>

#include "fasdep/dependability.hpp"

namespace dep = fasdep::dependability;
namespace ch = fasdep::channel;
namespace lc = fasdep::levelcross;
using boost::multiprecision::cpp_bin_float_50;

namespace {

struct OracleRun
{
    cpp_bin_float_50 eta;
    int iterations;
};

// Same fixed-point recursion in 50-digit arithmetic with Q^{-1}(e) = sqrt(2) erfc^{-1}(2e).
OracleRun fbl_oracle(double rate, long n, double eps, double tol)
{
    using F = cpp_bin_float_50;
    const F qinv = sqrt(F(2)) * boost::math::erfc_inv(F(2) * F(eps));
    const F log2e = 1 / log(F(2));
    const F scale = log2e * qinv / sqrt(F(n));
    auto step = [&](const F &radical) { return pow(F(2), F(rate) + scale * radical) - 1; };
    F eta = step(F(1));
    for (int i = 2; i < 100000; ++i) {
        const F next = step(sqrt(1 - 1 / ((1 + eta) * (1 + eta))));
        const F diff = abs(next - eta);
        eta = next;
        if (diff < F(tol))
            return {eta, i};
    }
    return {F(-1), -1};
}

} // namespace

TEST(FblThreshold, HalfErrorTargetGivesShannonThreshold)
{
    for (double r : {0.1, 0.5, 1.0, 2.0}) {
        const auto s = dep::solve_fbl_threshold({1000, 0.5, r, 10.0, 1e-4});
        EXPECT_EQ(s.eta, std::exp2(r) - 1.0);
        EXPECT_EQ(s.iterates.front(), s.eta);
        EXPECT_EQ(s.residual, 0.0);
    }
}

TEST(FblThreshold, LongBlocksApproachCapacityThreshold)
{
    EXPECT_NEAR(dep::fbl_threshold_eta({1'000'000'000'000L, 1e-2, 1.0, 10.0, 1e-12}), 1.0, 1e-5);
}

TEST(FblThreshold, PaperPointAgainstExtendedPrecisionOracle)
{
    const auto s = dep::solve_fbl_threshold({1000, 1e-2, 0.1, 10.0, 1e-4});
    const auto o = fbl_oracle(0.1, 1000, 1e-2, 1e-4);
    ASSERT_GT(o.iterations, 0);
    EXPECT_EQ(s.iterations, o.iterations);
    EXPECT_LT(s.iterations, 100);
    EXPECT_LT(s.residual, 1e-4);
    EXPECT_NEAR(s.eta / static_cast<double>(o.eta), 1.0, 1e-12);
    EXPECT_NEAR(s.eta, 0.1060052396, 1e-9);
}

TEST(FblThreshold, ConvergedFixedPointMatchesOracle)
{
    for (double eps : {1e-5, 1e-3, 0.1, 0.4})
        for (double r : {0.05, 0.5, 2.0}) {
            const auto o = fbl_oracle(r, 200, eps, 1e-30);
            const double got = dep::fbl_threshold_eta({200, eps, r, 1.0, 1e-15});
            EXPECT_NEAR(got / static_cast<double>(o.eta), 1.0, 1e-13) << eps << " " << r;
        }
}

TEST(FblThreshold, IteratesDecreaseMonotonically)
{
    for (double eps : {1e-5, 1e-2, 0.3})
        for (long n : {50L, 1000L}) {
            const auto s = dep::solve_fbl_threshold({n, eps, 0.5, 1.0, 1e-12});
            for (std::size_t i = 1; i < s.iterates.size(); ++i)
                EXPECT_LE(s.iterates[i], s.iterates[i - 1]);
            EXPECT_GE(s.eta, std::exp2(0.5) - 1.0);
        }
}

TEST(FblThreshold, IncreasingInRateDecreasingInErrorTarget)
{
    double prev_r = 0.0;
    for (int i = 0; i <= 20; ++i) {
        const double r = 0.05 + (2.0 - 0.05) * i / 20.0;
        double prev_e = std::numeric_limits<double>::infinity();
        for (int j = 0; j <= 20; ++j) {
            const double eps = std::pow(10.0, -5.0 + j * (std::log10(0.4) + 5.0) / 20.0);
            const double eta = dep::fbl_threshold_eta({1000, eps, r, 1.0, 1e-12});
            EXPECT_LT(eta, prev_e);
            prev_e = eta;
            if (j == 10) {
                EXPECT_GT(eta, prev_r);
                prev_r = eta;
            }
        }
    }
}

TEST(FblThreshold, RejectsInvalidLinks)
{
    EXPECT_THROW((void)dep::fbl_threshold_eta({0, 1e-2, 0.1, 10.0, 1e-4}), fasdep::DomainError);
    EXPECT_THROW((void)dep::fbl_threshold_eta({100, 1.0, 0.1, 10.0, 1e-4}), fasdep::DomainError);
    EXPECT_THROW((void)dep::fbl_threshold_eta({100, 1e-2, 0.0, 10.0, 1e-4}), fasdep::DomainError);
    EXPECT_THROW((void)dep::fbl_threshold_eta({100, 1e-2, 0.1, 10.0, 0.0}), fasdep::DomainError);
}

TEST(DecisionThreshold, ValuesAndStateBoundary)
{
    EXPECT_EQ(dep::decision_threshold_rho(1.0, 1.0), 1.0);
    EXPECT_EQ(dep::decision_threshold_rho(0.3, 1.2), 0.5);
    const double eta = dep::fbl_threshold_eta({});
    EXPECT_DOUBLE_EQ(dep::decision_threshold_rho(eta, 10.0), std::sqrt(eta / 10.0));
    EXPECT_THROW((void)dep::decision_threshold_rho(1.0, 0.0), fasdep::DomainError);

    const double rho = 0.37;
    EXPECT_EQ(dep::channel_state(rho, rho), dep::ChannelState::operational);
    EXPECT_EQ(dep::channel_state(0.0, rho), dep::ChannelState::failed);
    EXPECT_EQ(dep::channel_state(2 * rho, rho), dep::ChannelState::operational);
    EXPECT_EQ(dep::channel_state(std::nextafter(rho, 0.0), rho), dep::ChannelState::failed);
}

TEST(Mttff, ReciprocalAndInfiniteAtZeroRate)
{
    EXPECT_DOUBLE_EQ(dep::mttff(0.1), 10.0);
    EXPECT_TRUE(std::isinf(dep::mttff(0.0)));
    EXPECT_THROW((void)dep::mttff(-1.0), fasdep::DomainError);

    const lc::CrossingContext ctx{ch::FasChannel(3, 0.4, 2.0, 1.0), 10.0, 0.5};
    const double anfd = lc::anfd(ctx);
    EXPECT_NEAR(dep::mttff(lc::failure_repair_rates(ctx).failure_rate), anfd, 4e-16 * anfd);
}

TEST(MissionReliability, ExponentialLaw)
{
    EXPECT_EQ(dep::mission_reliability(0.0, 3.0), 1.0);
    EXPECT_NEAR(dep::mission_reliability(3.0, 3.0), std::exp(-1.0), 1e-16);
    EXPECT_EQ(dep::mission_reliability(5.0, std::numeric_limits<double>::infinity()), 1.0);
    EXPECT_THROW((void)dep::mission_reliability(-1.0, 1.0), fasdep::DomainError);
    EXPECT_EQ(dep::mission_reliability(1.0, 0.0), 0.0);
    EXPECT_EQ(dep::mission_reliability(0.0, 0.0), 1.0);
    EXPECT_THROW((void)dep::mission_reliability(1.0, -1.0), fasdep::DomainError);
    for (double a : {0.1, 1.0, 7.0})
        for (double b : {0.3, 2.0})
            EXPECT_NEAR(dep::mission_reliability(a + b, 4.0),
                        dep::mission_reliability(a, 4.0) * dep::mission_reliability(b, 4.0), 1e-15);
}

TEST(Assessment, PipelineComposition)
{
    const ch::FasChannel c(4, 0.3, 2.0, 1.0);
    const dep::FblLink link{1000, 1e-2, 0.1, 10.0, 1e-4};
    const auto a = dep::assess(c, link, 10.0, 5.0);
    const double eta = dep::fbl_threshold_eta(link);
    EXPECT_EQ(a.eta, eta);
    EXPECT_EQ(a.threshold, std::sqrt(eta / 10.0));
    const auto s = lc::crossing_statistics({c, 10.0, a.threshold});
    EXPECT_EQ(a.crossing.lcr, s.lcr);
    EXPECT_EQ(a.state.mttff, 1.0 / a.state.failure_rate);
    EXPECT_EQ(a.mission_reliability, std::exp(-5.0 / a.state.mttff));

    const auto b = dep::assess(c, link, 10.0, 5.0, dep::ThresholdMode::sqrt_eta);
    EXPECT_EQ(b.threshold, std::sqrt(eta));
    EXPECT_LT(b.mission_reliability, a.mission_reliability);
}

TEST(Assessment, ReliabilityTrends)
{
    // decreasing in mission duration, increasing in ports and aperture; at
    // 0 dB none of these saturate to 1 in double precision
    const dep::FblLink link{1000, 1e-2, 0.1, 1.0, 1e-4};
    double prev_n = 0.0;
    for (int n : {1, 2, 3, 4}) {
        const ch::FasChannel c(n, 0.3, 2.0, 1.0);
        double prev_t = 1.0;
        for (double dt : {0.5, 1.0, 2.0, 5.0, 10.0}) {
            const double r = dep::assess(c, link, 10.0, dt).mission_reliability;
            EXPECT_LT(r, prev_t);
            prev_t = r;
        }
        const double r5 = dep::assess(c, link, 10.0, 5.0).mission_reliability;
        EXPECT_GT(r5, prev_n) << n;
        prev_n = r5;
    }
    double prev_w = 0.0;
    for (double w : {0.05, 0.1, 0.2, 0.4}) {
        const double r = dep::assess(ch::FasChannel(4, w, 2.0, 1.0), link, 10.0, 5.0).mission_reliability;
        EXPECT_GT(r, prev_w) << w;
        prev_w = r;
    }
}
