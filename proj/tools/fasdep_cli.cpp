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


// Command-line runner for sweeps, figure presets, Monte Carlo runs and the
// validation report. Exit codes: 0 success, 1 invalid input, 2 numerical
// failure, 3 infeasible optimization.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "fasdep/experiment.hpp"

namespace ex = fasdep::experiment;

namespace {

constexpr int exit_domain = 1;
constexpr int exit_numerical = 2;
constexpr int exit_infeasible = 3;

struct CommonOptions
{
    std::string config_path;
    std::string out_path;
    std::string sweep;
    std::optional<long long> seed;
    std::string threshold_mode;
    std::string rmax_mode;
    std::vector<std::string> sets;
    int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
};

void add_common(CLI::App *app, CommonOptions &o, bool with_sweep)
{
    app->add_option("-c,--config", o.config_path, "key = value parameter file");
    app->add_option("-o,--out", o.out_path, "output file (default: stdout)");
    if (with_sweep)
        app->add_option("-s,--sweep", o.sweep, "var:start:stop:points[:linear|db|log|nines]");
    app->add_option("--seed", o.seed, "Monte Carlo master seed");
    app->add_option("--threshold-mode", o.threshold_mode, "envelope threshold: rho or sqrt-eta")
        ->check(CLI::IsMember({"rho", "sqrt-eta"}));
    app->add_option("--rmax-mode", o.rmax_mode, "arrival-rate inversion: derived or paper")
        ->check(CLI::IsMember({"derived", "paper"}));
    app->add_option("--set", o.sets, "override one parameter, key=value (repeatable)");
    app->add_option("--threads", o.threads, "worker threads for grid points")->check(CLI::PositiveNumber);
}

// Config file first, then --set, then dedicated flags.
fasdep::config::Config build_config(const CommonOptions &o)
{
    auto c = o.config_path.empty() ? fasdep::config::Config{} : fasdep::config::Config::load(o.config_path);
    for (const auto &kv : o.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw fasdep::DomainError("--set expects key=value, got '" + kv + "'");
        c.set(fasdep::config::detail::trim(kv.substr(0, eq)), fasdep::config::detail::trim(kv.substr(eq + 1)));
    }
    if (o.seed)
        c.set("sim.seed", std::to_string(*o.seed));
    if (!o.threshold_mode.empty())
        c.set("mode.threshold", o.threshold_mode);
    if (!o.rmax_mode.empty())
        c.set("mode.rmax", o.rmax_mode);
    c.set("run.threads", std::to_string(o.threads));
    return c;
}

void warn_unused(const fasdep::config::Config &c)
{
    for (const auto &k : c.unused_keys())
        std::cerr << "warning: parameter '" << k << "' was not used\n";
}

template <class Writer>
void emit(const std::string &path, Writer &&w)
{
    if (path.empty() || path == "-") {
        w(std::cout);
        return;
    }
    std::ofstream f(path);
    if (!f)
        throw fasdep::DomainError("cannot open output file '" + path + "'");
    w(f);
}

void emit_table(const std::string &path, const fasdep::csv::Table &t)
{
    emit(path, [&](std::ostream &os) { fasdep::csv::write(os, t); });
}

void export_trace(const ex::Params &p, const std::string &path, double samples)
{
    fasdep::mcsim::SimConfig cfg;
    cfg.chan = p.channel();
    cfg.doppler = p.doppler;
    cfg.sample_rate = ex::resolving_sample_rate(cfg.chan, p.doppler, p.envelope_threshold(), p.sim.resolution);
    cfg.n_oscillators = p.sim.oscillators;
    cfg.seed = p.sim.seed;
    cfg.duration = samples / cfg.sample_rate;
    cfg.validate();
    const auto tr = fasdep::mcsim::generate_fading(cfg, 0);
    emit(path, [&](std::ostream &os) { fasdep::mcsim::write_trace(os, tr); });
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"fasdep: dependability and energy efficiency of fluid antenna receivers"};
    app.require_subcommand(1);

    const std::vector<std::string> commands{"lcr", "afd", "reliability", "mec", "meee", "optimize", "simulate"};
    const std::vector<std::string> help{
        "level crossing rate of the selected envelope",
        "average fade and non-fade durations",
        "failure rate, MTTFF and mission reliability",
        "mission effective capacity",
        "mission energy efficiency and its components",
        "maximize mEEE subject to a mission reliability target",
        "Monte Carlo crossing statistics next to the analytic values"};
    std::vector<CommonOptions> opts(commands.size() + 2);
    std::vector<CLI::App *> subs;
    std::string trace_path;
    double trace_samples = 10000;
    for (std::size_t i = 0; i < commands.size(); ++i) {
        auto *s = app.add_subcommand(commands[i], help[i]);
        add_common(s, opts[i], true);
        subs.push_back(s);
    }
    subs.back()->add_option("--export-trace", trace_path, "also write one fading trace (CSV) to this file");
    subs.back()->add_option("--trace-samples", trace_samples, "length of the exported trace")
        ->check(CLI::Range(2.0, 1e8));

    std::string figure_name;
    auto *fig = app.add_subcommand("figure", "regenerate one figure preset as CSV");
    fig->add_option("name", figure_name, "fig2 .. fig7")->required()->check(CLI::IsMember(ex::figure_names()));
    add_common(fig, opts[commands.size()], true);

    std::string preset;
    auto *val = app.add_subcommand("validate", "cross-module consistency report");
    val->add_option("-p,--preset", preset, "quick or full")->required();
    val->add_option("-o,--out", opts.back().out_path, "output file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_domain;
    }

    try {
        if (val->parsed()) {
            const auto r = ex::validate(preset);
            emit(opts.back().out_path, [&](std::ostream &os) { r.write(os); });
            return 0;
        }
        if (fig->parsed()) {
            const auto &o = opts[commands.size()];
            const auto c = build_config(o);
            std::optional<ex::Sweep> sweep;
            if (!o.sweep.empty())
                sweep = ex::Sweep::parse(o.sweep);
            const auto t = ex::run_figure(figure_name, c, sweep);
            warn_unused(c);
            emit_table(o.out_path, t);
            return 0;
        }
        for (std::size_t i = 0; i < commands.size(); ++i) {
            if (!subs[i]->parsed())
                continue;
            const auto &o = opts[i];
            const auto c = build_config(o);
            ex::ExperimentSpec spec;
            spec.command = ex::parse_command(commands[i]);
            spec.params.apply(c);
            spec.sweep = ex::Sweep::parse(o.sweep.empty() ? "snr:-10:30:41:db" : o.sweep);
            warn_unused(c);
            try {
                emit_table(o.out_path, ex::run(spec));
            } catch (const ex::InfeasibleError &e) {
                emit_table(o.out_path, e.table());
                std::cerr << "infeasible: " << e.what() << '\n';
                return exit_infeasible;
            }
            if (!trace_path.empty() && spec.command == ex::Command::simulate)
                export_trace(spec.params, trace_path, trace_samples);
            return 0;
        }
    } catch (const fasdep::DomainError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_domain;
    } catch (const fasdep::NumericalError &e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return exit_numerical;
    }
    return exit_domain;
}
