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
/// \file dependability.hpp
///
/// Short-packet decoding threshold, the two-state channel abstraction and the
/// time-to-failure metrics derived from it.
///
#ifndef FASDEP_DEPENDABILITY_HPP
#define FASDEP_DEPENDABILITY_HPP

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "fasdep/channel.hpp"
#include "fasdep/errors.hpp"
#include "fasdep/levelcross.hpp"
#include "fasdep/specfun.hpp"

namespace fasdep::dependability {

/// Finite-blocklength link parameters.
struct FblLink
{
    long blocklength = 1000;    // n, channel uses
    double error_target = 1e-2; // epsilon
    double rate = 0.1;          // R, bits per channel use
    double avg_snr = 10.0;      // Phi, linear
    double eta_tol = 1e-4;      // stop when successive iterates differ by less

    void validate() const
    {
        fasdep::detail::require(blocklength >= 1, "FblLink: blocklength must be >= 1");
        fasdep::detail::require(error_target > 0.0 && error_target < 1.0,
                                "FblLink: error_target must lie in (0, 1)");
        fasdep::detail::require_finite(rate, "FblLink: rate");
        fasdep::detail::require(rate > 0.0, "FblLink: rate must be > 0");
        fasdep::detail::require_finite(avg_snr, "FblLink: avg_snr");
        fasdep::detail::require(avg_snr > 0.0, "FblLink: avg_snr must be > 0");
        fasdep::detail::require_finite(eta_tol, "FblLink: eta_tol");
        fasdep::detail::require(eta_tol > 0.0, "FblLink: eta_tol must be > 0");
    }
};

struct FblThreshold
{
    double eta = 0.0;
    int iterations = 0;
    double residual = 0.0; // |eta_i - eta_{i-1}| at the last step
    std::vector<double> iterates;
};

/// Fixed-point iteration for the SNR threshold eta. The first iterate is the
/// eta -> infinity limit, where the dispersion radical equals 1.
inline FblThreshold solve_fbl_threshold(const FblLink &link, int max_iterations = 10000)
{
    link.validate();
    fasdep::detail::require(max_iterations >= 2, "solve_fbl_threshold: max_iterations must be >= 2");
    const double scale = std::numbers::log2e * specfun::qfunc_inv(link.error_target) /
                         std::sqrt(static_cast<double>(link.blocklength));
    auto step = [&](double radical) { return std::exp2(link.rate + scale * radical) - 1.0; };

    FblThreshold out;
    double eta = step(1.0);
    out.iterates.push_back(eta);
    for (int i = 2; i <= max_iterations; ++i) {
        const double inv = 1.0 / (1.0 + eta);
        const double next = step(std::sqrt(1.0 - inv * inv));
        out.iterates.push_back(next);
        const double diff = std::abs(next - eta);
        eta = next;
        if (!std::isfinite(eta))
            throw NumericalError("solve_fbl_threshold: iterate is not finite");
        if (diff < link.eta_tol) {
            out.eta = eta;
            out.iterations = i;
            out.residual = diff;
            return out;
        }
    }
    throw ConvergenceError("solve_fbl_threshold: no convergence",
                           std::abs(out.iterates.back() - out.iterates[out.iterates.size() - 2]),
                           max_iterations);
}

inline double fbl_threshold_eta(const FblLink &link)
{
    return solve_fbl_threshold(link).eta;
}

/// Envelope decision threshold sqrt(eta / Phi).
inline double decision_threshold_rho(double eta, double avg_snr)
{
    fasdep::detail::require(eta >= 0.0 && std::isfinite(eta), "decision_threshold_rho: eta must be >= 0");
    fasdep::detail::require(avg_snr > 0.0 && std::isfinite(avg_snr),
                            "decision_threshold_rho: avg_snr must be > 0");
    return std::sqrt(eta / avg_snr);
}

enum class ChannelState { failed, operational };

/// The link is operational when the envelope reaches the threshold (inclusive).
inline ChannelState channel_state(double envelope, double rho)
{
    return envelope >= rho ? ChannelState::operational : ChannelState::failed;
}

/// Mean time to first failure 1/Upsilon; infinite when the failure rate is 0.
inline double mttff(double failure_rate)
{
    fasdep::detail::require(failure_rate >= 0.0 && !std::isnan(failure_rate),
                            "mttff: failure rate must be >= 0");
    if (failure_rate == 0.0)
        return std::numeric_limits<double>::infinity();
    return 1.0 / failure_rate;
}

/// exp(-dT / MTTFF). A zero MTTFF is a link that is never up, so any
/// mission of positive length fails.
inline double mission_reliability(double mission_duration, double mean_ttff)
{
    fasdep::detail::require(mission_duration >= 0.0 && std::isfinite(mission_duration),
                            "mission_reliability: duration must be finite and >= 0");
    fasdep::detail::require(mean_ttff >= 0.0, "mission_reliability: MTTFF must be >= 0");
    if (mission_duration == 0.0)
        return 1.0;
    if (mean_ttff == 0.0)
        return 0.0;
    return std::exp(-mission_duration / mean_ttff);
}

/// Which envelope threshold the rates are evaluated at.
enum class ThresholdMode {
    rho,      // sqrt(eta / Phi)
    sqrt_eta, // sqrt(eta)
};

inline double envelope_threshold(double eta, double avg_snr, ThresholdMode mode)
{
    return mode == ThresholdMode::rho ? decision_threshold_rho(eta, avg_snr) : std::sqrt(eta);
}

struct DependabilityState
{
    double failure_rate = 0.0;
    double repair_rate = 0.0;
    double mttff = 0.0;
    double mission_duration = 0.0;
};

struct Assessment
{
    double eta = 0.0;
    double threshold = 0.0;
    levelcross::CrossingStatistics crossing;
    DependabilityState state;
    double mission_reliability = 0.0;
};

/// Phi -> eta -> threshold -> crossing statistics -> rates -> MTTFF -> R_M.
inline Assessment assess(const channel::FasChannel &chan, const FblLink &link, double doppler,
                         double mission_duration, ThresholdMode mode = ThresholdMode::rho,
                         const levelcross::LevelCrossNumerics &num = {})
{
    Assessment a;
    a.eta = fbl_threshold_eta(link);
    a.threshold = envelope_threshold(a.eta, link.avg_snr, mode);
    const levelcross::CrossingContext ctx{chan, doppler, a.threshold};
    a.crossing = levelcross::crossing_statistics(ctx, num);
    const auto &s = a.crossing;
    a.state.failure_rate = std::isinf(s.anfd) ? 0.0 : 1.0 / s.anfd;
    a.state.repair_rate = s.afd == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / s.afd;
    a.state.mttff = mttff(a.state.failure_rate);
    a.state.mission_duration = mission_duration;
    a.mission_reliability = mission_reliability(mission_duration, a.state.mttff);
    return a;
}

} // namespace fasdep::dependability

#endif // FASDEP_DEPENDABILITY_HPP
