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


// Walks one operating point through the library: channel statistics,
// dependability, energy efficiency, the reliability-constrained optimum and
// a short simulation of the same channel.

#include <cstdio>

#include "fasdep/dependability.hpp"
#include "fasdep/levelcross.hpp"
#include "fasdep/mcsim.hpp"
#include "fasdep/meee_opt.hpp"
#include "fasdep/qos.hpp"

int main()
{
    using namespace fasdep;

    // 4 ports over 0.3 wavelengths, Nakagami m = 2, unit power
    const channel::FasChannel chan(4, 0.3, 2.0, 1.0);
    const double doppler = 10.0;

    dependability::FblLink link; // n = 1000, eps = 1e-2, R = 0.1
    link.avg_snr = 3.0;          // about 4.8 dB
    const auto a = dependability::assess(chan, link, doppler, 5.0);
    std::printf("eta %.6g, threshold %.6g\n", a.eta, a.threshold);
    std::printf("LCR %.6g /s, AFD %.6g s, ANFD %.6g s\n", a.crossing.lcr, a.crossing.afd, a.crossing.anfd);
    std::printf("MTTFF %.6g s, mission reliability over 5 s %.8f\n", a.state.mttff, a.mission_reliability);

    qos::MeeeSetup setup;
    setup.chan = chan;
    setup.link = link;
    const auto b = qos::meee_breakdown(setup, link.avg_snr);
    std::printf("mEC %.6g, power %.6g W, mEEE %.6g\n", b.mec, b.power, b.meee);

    const optimize::DinkelbachConfig cfg{0.1, 1000.0, 1e-6, 1e-8, 50};
    const auto best = meee_opt::optimize_meee(setup, 0.9999, cfg);
    if (best.result.feasible)
        std::printf("optimum: mEEE %.6g at SNR %.6g (R_M %.6f)\n", best.result.value_star, best.result.phi_star,
                    best.at_star.dependability.mission_reliability);

    mcsim::SimConfig sim;
    sim.chan = chan;
    sim.doppler = doppler;
    sim.sample_rate = 64.0 * doppler;
    sim.duration = 2000.0;
    // deep thresholds cross too rarely to count; compare at a moderate level
    const double x = 0.7;
    const auto s = mcsim::simulate(sim, {x});
    std::printf("LCR at x = %.2g: simulated %.6g /s from %lld crossings, analytic %.6g /s\n", x,
                s.crossings[0].lcr(), static_cast<long long>(s.crossings[0].down_crossings),
                levelcross::lcr({chan, doppler, x}));
    return 0;
}
