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

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <gtest/gtest.h>

#include "fasdep/qos.hpp"

namespace qos = fasdep::qos;
namespace ch = fasdep::channel;
using boost::multiprecision::cpp_bin_float_50;

namespace {

// Perron root of the nonnegative 2x2 matrix [[V11, (1-V11) e], [1-V22, V22 e]]
// with e = exp(-theta R), by long-double power iteration.
double ec_power_iteration(double theta, double rate, double v11, double v22)
{
    using L = long double;
    const L e = std::exp(-static_cast<L>(theta) * rate);
    const std::array<std::array<L, 2>, 2> a{{{v11, (1 - static_cast<L>(v11)) * e},
                                              {1 - static_cast<L>(v22), static_cast<L>(v22) * e}}};
    std::array<L, 2> v{1, 1};
    L lambda = 0;
    for (int i = 0; i < 100000; ++i) {
        const std::array<L, 2> w{a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1]};
        const L norm = std::max(std::abs(w[0]), std::abs(w[1]));
        const L next = norm / std::max(std::abs(v[0]), std::abs(v[1]));
        v = {w[0] / norm, w[1] / norm};
        if (i > 10 && std::abs(next - lambda) <= 1e-19L * next)
            return static_cast<double>(-std::log(next) / theta);
        lambda = next;
    }
    return static_cast<double>(-std::log(lambda) / theta);
}

double rate_from_eb_bisection(double theta, double s, double target)
{
    double lo = 0.0, hi = 1.0;
    while (qos::effective_bandwidth(theta, hi, s) < target)
        hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (qos::effective_bandwidth(theta, mid, s) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST(EffectiveCapacity, AlwaysOnLinkDeliversRate)
{
    EXPECT_NEAR(qos::effective_capacity_onoff(0.01, 1.0, 0.0, 1.0), 1.0, 1e-13);
    EXPECT_NEAR(qos::effective_capacity_onoff(5.0, 0.3, 0.2, 1.0), 0.3, 1e-13);
}

TEST(EffectiveCapacity, SmallThetaGivesMeanRate)
{
    const double v11 = 0.3, v22 = 0.8;
    const double mean = (1.0 - v11) / (2.0 - v11 - v22);
    EXPECT_NEAR(qos::effective_capacity_onoff(1e-7, 1.0, v11, v22), mean, 1e-6);
    EXPECT_LT(qos::effective_capacity_onoff(1.0, 1.0, v11, v22), mean);
}

TEST(EffectiveCapacity, SpectralRadiusOracle)
{
    EXPECT_NEAR(qos::effective_capacity_onoff(0.01, 1.0, 0.3, 0.8), ec_power_iteration(0.01, 1.0, 0.3, 0.8), 1e-10);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double v11 = u(rng), v22 = u(rng);
        const double theta = std::pow(10.0, -3.0 + 3.0 * u(rng));
        const double r = 0.1 + 2.0 * u(rng);
        const double got = qos::effective_capacity_onoff(theta, r, v11, v22);
        EXPECT_NEAR(got, ec_power_iteration(theta, r, v11, v22), 1e-10 * std::max(1.0, std::abs(got)))
            << v11 << " " << v22 << " " << theta << " " << r;
    }
}

TEST(EffectiveBandwidth, Limits)
{
    EXPECT_EQ(qos::effective_bandwidth(1e-3, 0.0, 0.5), 0.0);
    EXPECT_NEAR(qos::effective_bandwidth(1e-3, 0.37, 1.0), 0.37, 1e-15);
    EXPECT_NEAR(qos::effective_bandwidth(1e-9, 0.8, 0.3), 0.3 * 0.8, 1e-9);
    EXPECT_GT(qos::effective_bandwidth(1.0, 0.8, 0.3), 0.3 * 0.8);
    EXPECT_THROW((void)qos::effective_bandwidth(0.0, 1.0, 0.5), fasdep::DomainError);
    EXPECT_THROW((void)qos::effective_bandwidth(1e-3, 1.0, 0.0), fasdep::DomainError);
}

TEST(MissionEffectiveCapacity, BoundaryIdentities)
{
    EXPECT_EQ(qos::mission_effective_capacity(1e-3, 1000, 0.1, 1.0), 0.1);
    EXPECT_EQ(qos::mission_effective_capacity(1e-3, 1000, 0.1, 0.0), 0.0);
}

TEST(MissionEffectiveCapacity, ExtendedPrecisionOracle)
{
    using F = cpp_bin_float_50;
    const F theta("1e-3"), rm("0.9999");
    const F want = -log(1 - rm * (1 - exp(-theta * 1000 * F("0.1")))) / (1000 * theta);
    const double got = qos::mission_effective_capacity(1e-3, 1000, 0.1, 0.9999);
    EXPECT_NEAR(got, static_cast<double>(want), 1e-16);
}

TEST(MissionEffectiveCapacity, MonotoneAndBounded)
{
    double prev = -1.0;
    for (int i = 0; i <= 100; ++i) {
        const double rm = i / 100.0;
        const double v = qos::mission_effective_capacity(1e-3, 1000, 0.1, rm);
        EXPECT_GT(v, prev);
        EXPECT_LE(v, 0.1);
        prev = v;
    }
    double prev_r = 0.0, prev_theta = 1.0;
    for (double r : {0.05, 0.1, 0.5, 1.0}) {
        const double v = qos::mission_effective_capacity(1e-3, 1000, r, 0.9);
        EXPECT_GT(v, prev_r);
        prev_r = v;
    }
    for (double theta : {1e-4, 1e-3, 1e-2, 1e-1}) {
        const double v = qos::mission_effective_capacity(theta, 1000, 0.1, 0.9);
        EXPECT_LT(v, prev_theta);
        prev_theta = v;
    }
}

TEST(MaxArrivalRate, InvertsEffectiveBandwidth)
{
    for (double theta : {1e-4, 1e-3, 1e-2, 1e-1})
        for (double s : {0.1, 0.25, 0.5, 0.9, 1.0})
            for (double mec : {0.001, 0.01, 0.05, 0.09, 1.0}) {
                const double rbar = qos::max_arrival_rate(theta, s, mec);
                EXPECT_NEAR(qos::effective_bandwidth(theta, rbar / s, s), mec, 1e-12 * std::max(1.0, mec));
                EXPECT_LE(rbar, mec * (1.0 + 1e-15));
            }
}

TEST(MaxArrivalRate, BisectionOracle)
{
    const double want = 0.5 * rate_from_eb_bisection(1e-3, 0.5, 0.08);
    EXPECT_NEAR(qos::max_arrival_rate(1e-3, 0.5, 0.08), want, 1e-14);
}

TEST(MaxArrivalRate, PrintedVariant)
{
    EXPECT_NEAR(qos::max_arrival_rate(1e-3, 1.0, 0.07, qos::RmaxMode::paper_printed), 0.07, 1e-14);
    const double printed = qos::max_arrival_rate(1e-3, 0.5, 0.08, qos::RmaxMode::paper_printed);
    EXPECT_NEAR(printed, 0.5 / 1e-3 * std::log(std::exp(0.08e-3) / 0.5 - 0.5), 1e-12);
    // the printed form does not invert the effective bandwidth when S < 1
    EXPECT_GT(std::abs(qos::effective_bandwidth(1e-3, printed / 0.5, 0.5) - 0.08), 1.0);
}

TEST(TotalPower, RefinedModel)
{
    qos::QosProfile p;
    EXPECT_NEAR(qos::total_power(5.0, p, 0.04, 0.1), 0.2 * 5 - (0.2 * 5 - 0.03) * 0.5 * (1 - 0.4) + 0.2, 1e-15);
    EXPECT_NEAR(qos::total_power(5.0, p, 0.1, 0.1), 0.2 * 5 + 0.2, 1e-15);
    p.burstiness = 1.0;
    EXPECT_NEAR(qos::total_power(5.0, p, 0.02, 0.1), 0.2 * 5 + 0.2, 1e-15);
    EXPECT_THROW((void)qos::total_power(5.0, p, 0.2, 0.1), fasdep::DomainError);

    const qos::QosProfile d;
    const double slope = qos::total_power(2.0, d, 0.05, 0.1) - qos::total_power(1.0, d, 0.05, 0.1);
    EXPECT_GT(slope, 0.0);
    EXPECT_NEAR(qos::total_power(3.0, d, 0.05, 0.1) - qos::total_power(2.0, d, 0.05, 0.1), slope, 1e-14);
    EXPECT_FALSE(d.idle_within_active(0.1));
    EXPECT_TRUE(d.idle_within_active(1.0));
}

TEST(Meee, RatioHomogeneity)
{
    qos::MeeeSetup s;
    s.chan = ch::FasChannel(4, 0.3, 2.0, 1.0);
    const auto b = qos::meee_breakdown(s, 10.0);
    EXPECT_DOUBLE_EQ(b.meee, b.mec / b.power);
    EXPECT_DOUBLE_EQ(b.mec / (2.0 * b.power), 0.5 * b.meee);
}

TEST(Meee, UnimodalInSnrWithPeakGrowingInPorts)
{
    double prev_peak = 0.0;
    for (int n : {1, 2, 4, 8}) {
        qos::MeeeSetup s;
        s.chan = ch::FasChannel(n, 0.3, 2.0, 1.0);
        std::vector<double> v;
        for (int i = 0; i <= 100; ++i)
            v.push_back(qos::meee(s, std::pow(10.0, (-10.0 + 0.5 * i) / 10.0)));
        const auto peak = std::max_element(v.begin(), v.end());
        EXPECT_NE(peak, v.begin());
        EXPECT_NE(peak, v.end() - 1);
        for (auto it = v.begin(); it != peak; ++it)
            EXPECT_LE(*it, *(it + 1));
        for (auto it = peak; it + 1 != v.end(); ++it)
            EXPECT_GE(*it, *(it + 1));
        EXPECT_GT(*peak, prev_peak) << n;
        prev_peak = *peak;
    }
}

TEST(Meee, VanishesAtHighSnr)
{
    qos::MeeeSetup s;
    s.chan = ch::FasChannel(2, 0.3, 2.0, 1.0);
    EXPECT_LT(qos::meee(s, 1e6), 1e-6);
    EXPECT_LT(qos::meee(s, 1e8), qos::meee(s, 1e6));
}
