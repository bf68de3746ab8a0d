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
#include <sstream>

#include <gtest/gtest.h>

#include "fasdep/experiment.hpp"

namespace ex = fasdep::experiment;
namespace csv = fasdep::csv;

namespace {

fasdep::config::Config conf(const std::string &text)
{
    std::istringstream in(text);
    return fasdep::config::Config::parse(in);
}

} // namespace

TEST(Sweep, ParsesAndExpandsScales)
{
    const auto s = ex::Sweep::parse("snr:0:20:3");
    EXPECT_EQ(s.scale, ex::Scale::db);
    const auto v = s.values();
    ASSERT_EQ(v.size(), 3u);
    EXPECT_DOUBLE_EQ(v[0], 1.0);
    EXPECT_DOUBLE_EQ(v[1], 10.0);
    EXPECT_DOUBLE_EQ(v[2], 100.0);
    EXPECT_EQ(s.axis_name(), "snr_db");

    const auto l = ex::Sweep::parse("theta:1e-4:1e-2:3:log").values();
    EXPECT_NEAR(l[1], 1e-3, 1e-18);
    const auto n = ex::Sweep::parse("omega:1:3:3:nines").values();
    EXPECT_NEAR(n[0], 0.9, 1e-15);
    EXPECT_NEAR(n[2], 0.999, 1e-15);
    EXPECT_EQ(ex::Sweep::parse("m:1:5:5").scale, ex::Scale::linear);
    EXPECT_EQ(ex::Sweep::parse(s.to_string()).values(), v);

    for (const char *bad : {"snr:0:20", "foo:0:1:2", "snr:a:1:2", "snr:0:1:0", "theta:0:1:3:log", "m:1:2:2:cubic"})
        EXPECT_THROW(ex::Sweep::parse(bad), fasdep::DomainError) << bad;
}

TEST(Params, ConfigOverlayAndValidation)
{
    ex::Params p;
    p.apply(conf("channel.n_ports = 2\nlink.snr_db = 10\nmode.threshold = sqrt-eta\nmode.rmax = paper\n"));
    EXPECT_EQ(p.n_ports, 2);
    EXPECT_NEAR(p.link.avg_snr, 10.0, 1e-12);
    EXPECT_EQ(p.threshold_mode, fasdep::dependability::ThresholdMode::sqrt_eta);
    EXPECT_EQ(p.rmax_mode, fasdep::qos::RmaxMode::paper_printed);
    EXPECT_THROW(p.apply(conf("mode.threshold = other\n")), fasdep::DomainError);
    ex::Params q;
    q.omega = 1.5;
    EXPECT_THROW(q.validate(), fasdep::DomainError);
    EXPECT_THROW(q.set("n_ports", 2.5), fasdep::DomainError);
    EXPECT_THROW(q.set("nothing", 1.0), fasdep::DomainError);
}

TEST(Run, LcrTableCarriesParametersAndGrid)
{
    ex::ExperimentSpec spec;
    spec.command = ex::Command::lcr;
    spec.sweep = ex::Sweep::parse("snr:0:20:5");
    const auto t = ex::run(spec);
    EXPECT_EQ(t.columns, (std::vector<std::string>{"snr_db", "snr", "threshold", "cdf", "lcr", "nlcr"}));
    ASSERT_EQ(t.rows.size(), 5u);
    EXPECT_EQ(t.meta_value("command"), "lcr");
    EXPECT_EQ(t.meta_value("channel.n_ports"), "4");
    const auto x = t.column_values("threshold");
    for (std::size_t i = 1; i < x.size(); ++i)
        EXPECT_LT(x[i], x[i - 1]);
    const auto &r = t.rows[2];
    const fasdep::levelcross::CrossingContext ctx{spec.params.channel(), 10.0, r[t.column("threshold")]};
    EXPECT_EQ(r[t.column("lcr")], fasdep::levelcross::lcr(ctx));
}

TEST(Run, OutputIsByteStable)
{
    ex::ExperimentSpec spec;
    spec.command = ex::Command::meee;
    spec.sweep = ex::Sweep::parse("snr:-5:25:4");
    const auto a = csv::to_string(ex::run(spec));
    spec.params.threads = 3;
    EXPECT_EQ(csv::to_string(ex::run(spec)), a);
}

TEST(Run, FixedThresholdSweep)
{
    ex::ExperimentSpec spec;
    spec.command = ex::Command::reliability;
    spec.sweep = ex::Sweep::parse("threshold:0.1:0.5:3");
    const auto t = ex::run(spec);
    EXPECT_EQ(t.columns.front(), "threshold");
    const auto r = t.column_values("mission_reliability");
    EXPECT_GT(r[0], r[2]);
    spec.command = ex::Command::mec;
    EXPECT_THROW(ex::run(spec), fasdep::DomainError);
}

TEST(Run, ErrorsNameTheGridPoint)
{
    ex::ExperimentSpec spec;
    spec.command = ex::Command::lcr;
    spec.sweep = ex::Sweep::parse("m:1:0.2:2");
    try {
        ex::run(spec);
        FAIL();
    } catch (const fasdep::DomainError &e) {
        EXPECT_NE(std::string(e.what()).find("m = 0.2"), std::string::npos) << e.what();
    }
}

TEST(Run, InfeasibleOptimizationKeepsTheTable)
{
    ex::ExperimentSpec spec;
    spec.command = ex::Command::optimize;
    spec.params.n_ports = 1;
    spec.params.snr_ub_db = 0.0;
    spec.sweep = ex::Sweep::parse("omega:0.5:0.9999:2");
    try {
        ex::run(spec);
        FAIL();
    } catch (const ex::InfeasibleError &e) {
        const auto f = e.table().column_values("feasible");
        EXPECT_EQ(f.back(), 0.0);
    }
}

TEST(Run, SimulateAgreesWithAnalyticCdf)
{
    ex::ExperimentSpec spec;
    spec.command = ex::Command::simulate;
    spec.params.n_ports = 2;
    spec.params.aperture = 0.5;
    spec.params.nakagami_m = 1.0;
    spec.params.sim.min_samples = 5e5;
    spec.sweep = ex::Sweep::parse("threshold:0.8:0.8:1");
    const auto t = ex::run(spec);
    EXPECT_NEAR(t.rows[0][t.column("sim_cdf")] / t.rows[0][t.column("cdf")], 1.0, 0.05);
    EXPECT_NEAR(t.rows[0][t.column("sim_lcr")] / t.rows[0][t.column("lcr")], 1.0, 0.1);
}

TEST(Figures, PresetsExistAndRejectUnknown)
{
    for (const auto &n : ex::figure_names())
        EXPECT_NO_THROW((void)ex::figure_preset(n));
    EXPECT_THROW((void)ex::figure_preset("fig9"), fasdep::DomainError);
}

TEST(Figures, Fig4ReliabilityOrdering)
{
    const auto t = ex::run_figure("fig4", conf(""), ex::Sweep::parse("mission_duration:0.5:50:5"));
    const auto n1 = t.column_values("reliability_N1");
    const auto n2a = t.column_values("reliability_N2_W0.1");
    const auto n4b = t.column_values("reliability_N4_W0.3");
    for (std::size_t i = 0; i < n1.size(); ++i) {
        EXPECT_LT(n1[i], n2a[i]);
        EXPECT_LT(n2a[i], n4b[i]);
        if (i) {
            EXPECT_LT(n1[i], n1[i - 1]);
        }
    }
    EXPECT_EQ(t.meta_value("figure"), "fig4");
}

TEST(Figures, Fig3AnalyticOnlyAndPortOverride)
{
    const auto t = ex::run_figure("fig3", conf("sim.enabled = false\nfigure.ports = 1,2\nfigure.apertures = 0,0.5\n"));
    EXPECT_EQ(t.columns, (std::vector<std::string>{"snr_db", "snr", "nlcr_N1", "nlcr_N2_W0.5"}));
    EXPECT_EQ(t.rows.size(), 7u);
    EXPECT_THROW(ex::run_figure("fig3", conf("figure.ports = 1,2\nfigure.apertures = 0\n")), fasdep::DomainError);
}

TEST(Validate, QuickPresetPasses)
{
    EXPECT_THROW(ex::validate(""), fasdep::DomainError);
    EXPECT_THROW(ex::validate("medium"), fasdep::DomainError);
    const auto r = ex::validate("quick");
    std::ostringstream os;
    r.write(os);
    EXPECT_TRUE(r.all_pass()) << os.str();
    EXPECT_GE(r.checks.size(), 8u);
}
