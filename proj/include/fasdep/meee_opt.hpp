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
/// \file meee_opt.hpp
///
/// Reliability-constrained mEEE maximization over the average SNR.
///
#ifndef FASDEP_MEEE_OPT_HPP
#define FASDEP_MEEE_OPT_HPP

#include <cmath>
#include <unordered_map>
#include <utility>

#include "fasdep/optimize.hpp"
#include "fasdep/qos.hpp"

namespace fasdep::meee_opt {

/// Caches the full breakdown per SNR so numerator, denominator and
/// constraint share one pipeline evaluation.
class MeeeObjective
{
public:
    explicit MeeeObjective(qos::MeeeSetup setup) : setup_(std::move(setup)) {}

    const qos::MeeeBreakdown &at(double avg_snr)
    {
        auto it = cache_.find(avg_snr);
        if (it == cache_.end())
            it = cache_.emplace(avg_snr, qos::meee_breakdown(setup_, avg_snr)).first;
        return it->second;
    }

    double numerator(double avg_snr) { return at(avg_snr).mec; }
    double denominator(double avg_snr) { return at(avg_snr).power; }
    double reliability(double avg_snr) { return at(avg_snr).dependability.mission_reliability; }
    double value(double avg_snr) { return at(avg_snr).meee; }

    const qos::MeeeSetup &setup() const noexcept { return setup_; }
    std::size_t evaluations() const noexcept { return cache_.size(); }

private:
    qos::MeeeSetup setup_;
    std::unordered_map<double, qos::MeeeBreakdown> cache_;
};

struct MeeeOptimum
{
    optimize::OptResult result;
    qos::MeeeBreakdown at_star; // valid when result.feasible
};

/// max_Phi mEC(Phi) / P_t(Phi) subject to R_M(Phi) >= omega.
inline MeeeOptimum optimize_meee(const qos::MeeeSetup &setup, double omega,
                                 const optimize::DinkelbachConfig &cfg = {})
{
    fasdep::detail::require(omega >= 0.0 && omega <= 1.0, "optimize_meee: omega must lie in [0, 1]");
    MeeeObjective obj(setup);
    const optimize::Constraint c{[&obj](double x) { return obj.reliability(x); }, omega};
    MeeeOptimum out;
    out.result = optimize::dinkelbach_maximize([&obj](double x) { return obj.numerator(x); },
                                               [&obj](double x) { return obj.denominator(x); }, cfg, c);
    if (out.result.feasible)
        out.at_star = obj.at(out.result.phi_star);
    return out;
}

} // namespace fasdep::meee_opt

#endif // FASDEP_MEEE_OPT_HPP
