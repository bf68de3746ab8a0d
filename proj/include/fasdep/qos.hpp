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
/// \file qos.hpp
///
/// Statistical-QoS link metrics: effective capacity and bandwidth, the
/// mission effective capacity of a short-packet link, the burst-aware power
/// model and the resulting energy efficiency.
///
/// Rates are in bits per channel use and theta in 1/bits, so theta * n * R
/// is dimensionless.
///
#ifndef FASDEP_QOS_HPP
#define FASDEP_QOS_HPP

#include <cmath>
#include <string>

#include "fasdep/channel.hpp"
#include "fasdep/dependability.hpp"
#include "fasdep/errors.hpp"
#include "fasdep/levelcross.hpp"

namespace fasdep::qos {

struct QosProfile
{
    double qos_exponent = 1e-3;  // theta
    double burstiness = 0.5;     // S, probability the source is ON
    double drain_eff = 0.2;      // vartheta
    double circuit_power = 0.2;  // P_c, W
    double idle_power = 0.03;    // xi_idl, W

    void validate() const
    {
        fasdep::detail::require(qos_exponent > 0.0 && std::isfinite(qos_exponent),
                                "QosProfile: qos_exponent must be > 0");
        fasdep::detail::require(burstiness > 0.0 && burstiness <= 1.0,
                                "QosProfile: burstiness must lie in (0, 1]");
        fasdep::detail::require(drain_eff > 0.0 && std::isfinite(drain_eff),
                                "QosProfile: drain_eff must be > 0");
        fasdep::detail::require(circuit_power >= 0.0 && std::isfinite(circuit_power),
                                "QosProfile: circuit_power must be >= 0");
        fasdep::detail::require(idle_power >= 0.0 && std::isfinite(idle_power),
                                "QosProfile: idle_power must be >= 0");
    }

    /// The power model reads idle power as a fraction of the active draw.
    bool idle_within_active(double avg_snr) const { return idle_power <= drain_eff * avg_snr; }
};

namespace detail {

inline void check_theta(double theta, const char *who)
{
    fasdep::detail::require(theta > 0.0 && std::isfinite(theta), std::string(who) + ": theta must be > 0");
}

} // namespace detail

/// Effective capacity of a two-state service process that delivers R in the
/// ON state (state 2) and nothing in state 1. V11 and V22 are the probabilities
/// of staying in each state.
inline double effective_capacity_onoff(double theta, double rate, double v11, double v22)
{
    detail::check_theta(theta, "effective_capacity_onoff");
    fasdep::detail::require(rate > 0.0 && std::isfinite(rate), "effective_capacity_onoff: rate must be > 0");
    fasdep::detail::require(v11 >= 0.0 && v11 <= 1.0 && v22 >= 0.0 && v22 <= 1.0,
                            "effective_capacity_onoff: V11, V22 must lie in [0, 1]");
    // spectral radius of P diag(1, e^{-theta R})
    const double e = std::exp(-theta * rate);
    const double tr = v11 + v22 * e;
    const double det = (v11 + v22 - 1.0) * e;
    const double disc = std::max(tr * tr - 4.0 * det, 0.0);
    const double lambda = 0.5 * (tr + std::sqrt(disc));
    return -std::log(lambda) / theta;
}

/// Effective bandwidth of the ON-OFF source with peak rate r and ON probability S.
inline double effective_bandwidth(double theta, double r, double burstiness)
{
    detail::check_theta(theta, "effective_bandwidth");
    fasdep::detail::require(r >= 0.0 && std::isfinite(r), "effective_bandwidth: r must be >= 0");
    fasdep::detail::require(burstiness > 0.0 && burstiness <= 1.0,
                            "effective_bandwidth: burstiness must lie in (0, 1]");
    return std::log1p(burstiness * std::expm1(r * theta)) / theta;
}

/// -(1/(n theta)) ln[1 - R_M (1 - e^{-theta n R})].
inline double mission_effective_capacity(double theta, long blocklength, double rate, double reliability)
{
    detail::check_theta(theta, "mission_effective_capacity");
    fasdep::detail::require(blocklength >= 1, "mission_effective_capacity: blocklength must be >= 1");
    fasdep::detail::require(rate > 0.0 && std::isfinite(rate), "mission_effective_capacity: rate must be > 0");
    fasdep::detail::require(reliability >= 0.0 && reliability <= 1.0,
                            "mission_effective_capacity: reliability must lie in [0, 1]");
    if (reliability == 1.0)
        return rate; // ln e^{-theta n R}
    const double nt = static_cast<double>(blocklength) * theta;
    return -std::log1p(reliability * std::expm1(-nt * rate)) / nt;
}

enum class RmaxMode {
    derived,       // inverts the effective bandwidth exactly
    paper_printed, // literal variant without the 1/S on the (1-S) term
};

/// Largest mean arrival rate S r whose effective bandwidth equals mEC.
inline double max_arrival_rate(double theta, double burstiness, double mec, RmaxMode mode = RmaxMode::derived)
{
    detail::check_theta(theta, "max_arrival_rate");
    fasdep::detail::require(burstiness > 0.0 && burstiness <= 1.0,
                            "max_arrival_rate: burstiness must lie in (0, 1]");
    fasdep::detail::require(mec >= 0.0 && std::isfinite(mec), "max_arrival_rate: mEC must be >= 0");
    const double s = burstiness;
    if (mode == RmaxMode::derived)
        return s / theta * std::log1p(std::expm1(theta * mec) / s);
    // ln(e^{theta mEC}/S - (1-S)) written as log1p of the excess over 1
    const double excess = std::expm1(theta * mec) / s + (1.0 - s) * (1.0 - s) / s;
    if (!(excess > -1.0))
        throw DomainError("max_arrival_rate: logarithm argument is not positive");
    return s / theta * std::log1p(excess);
}

/// Transmit plus circuit power; the amplifier idles at xi_idl while the
/// buffer is empty, which happens with probability (1-S)(1 - r/R).
inline double total_power(double avg_snr, const QosProfile &profile, double rbar_max, double rate)
{
    profile.validate();
    fasdep::detail::require(avg_snr >= 0.0 && std::isfinite(avg_snr), "total_power: avg_snr must be >= 0");
    fasdep::detail::require(rate > 0.0 && std::isfinite(rate), "total_power: rate must be > 0");
    fasdep::detail::require(rbar_max >= 0.0, "total_power: arrival rate must be >= 0");
    if (rbar_max > rate)
        throw DomainError("total_power: arrival rate " + std::to_string(rbar_max) +
                          " exceeds the service rate " + std::to_string(rate));
    const double active = profile.drain_eff * avg_snr;
    return active - (active - profile.idle_power) * (1.0 - profile.burstiness) * (1.0 - rbar_max / rate) +
           profile.circuit_power;
}

struct MeeeBreakdown
{
    dependability::Assessment dependability;
    double mec = 0.0;
    double rbar_max = 0.0;
    double power = 0.0;
    double meee = 0.0;
    bool idle_within_active = true;
};

/// Everything held fixed while the mEEE is studied as a function of Phi.
struct MeeeSetup
{
    channel::FasChannel chan{1, 0.0, 1.0, 1.0};
    dependability::FblLink link{};
    QosProfile profile{};
    double doppler = 10.0;
    double mission_duration = 5.0;
    dependability::ThresholdMode threshold_mode = dependability::ThresholdMode::rho;
    RmaxMode rmax_mode = RmaxMode::derived;
    levelcross::LevelCrossNumerics numerics{};
};

/// mEC(Phi) / P_t(Phi) through the full dependability chain.
inline MeeeBreakdown meee_breakdown(const MeeeSetup &setup, double avg_snr)
{
    setup.profile.validate();
    auto link = setup.link;
    link.avg_snr = avg_snr;
    MeeeBreakdown b;
    b.dependability = dependability::assess(setup.chan, link, setup.doppler, setup.mission_duration,
                                            setup.threshold_mode, setup.numerics);
    const auto &p = setup.profile;
    b.mec = mission_effective_capacity(p.qos_exponent, link.blocklength, link.rate,
                                       b.dependability.mission_reliability);
    b.rbar_max = max_arrival_rate(p.qos_exponent, p.burstiness, b.mec, setup.rmax_mode);
    b.power = total_power(avg_snr, p, b.rbar_max, link.rate);
    b.meee = b.mec / b.power;
    b.idle_within_active = p.idle_within_active(avg_snr);
    return b;
}

inline double meee(const MeeeSetup &setup, double avg_snr)
{
    return meee_breakdown(setup, avg_snr).meee;
}

} // namespace fasdep::qos

#endif // FASDEP_QOS_HPP
