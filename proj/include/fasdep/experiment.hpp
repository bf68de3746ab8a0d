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
/// \file experiment.hpp
///
/// Parameter sweeps over the analysis pipeline, the figure presets and the
/// cross-module validation report. Every run produces a csv::Table whose
/// metadata lists all fixed parameters.
///
#ifndef FASDEP_EXPERIMENT_HPP
#define FASDEP_EXPERIMENT_HPP

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "fasdep/channel.hpp"
#include "fasdep/config.hpp"
#include "fasdep/csv.hpp"
#include "fasdep/dependability.hpp"
#include "fasdep/levelcross.hpp"
#include "fasdep/mcsim.hpp"
#include "fasdep/meee_opt.hpp"
#include "fasdep/optimize.hpp"
#include "fasdep/qos.hpp"

namespace fasdep::experiment {

/// Thrown when a sweep point has no feasible SNR; carries the partial table.
class InfeasibleError : public std::runtime_error
{
public:
    InfeasibleError(const std::string &what, csv::Table table)
        : std::runtime_error(what), table_(std::move(table))
    {
    }
    const csv::Table &table() const noexcept { return table_; }

private:
    csv::Table table_;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

// ---------------------------------------------------------------- sweeps

enum class Scale {
    linear,
    db,    // start and stop in dB, values converted to linear
    log,   // geometric spacing
    nines, // start and stop count nines: k -> 1 - 10^-k
};

struct Sweep
{
    std::string variable = "snr";
    double start = -10.0;
    double stop = 30.0;
    int points = 41;
    Scale scale = Scale::db;

    static inline const std::vector<std::string> variables{
        "snr",  "threshold", "n_ports",  "aperture",    "m",           "doppler", "mission_duration",
        "theta", "burstiness", "rate", "blocklength", "error_target", "omega"};

    void validate() const
    {
        if (std::find(variables.begin(), variables.end(), variable) == variables.end())
            throw DomainError("sweep: unknown variable '" + variable + "'");
        fasdep::detail::require(points >= 1, "sweep: points must be >= 1");
        fasdep::detail::require(std::isfinite(start) && std::isfinite(stop), "sweep: bounds must be finite");
        if (scale == Scale::log)
            fasdep::detail::require(start > 0.0 && stop > 0.0, "sweep: log scale needs positive bounds");
        if (scale == Scale::nines)
            fasdep::detail::require(start > 0.0 && stop > 0.0, "sweep: nines scale needs positive bounds");
    }

    /// Grid in the variable's native units.
    std::vector<double> values() const
    {
        validate();
        std::vector<double> v;
        for (int i = 0; i < points; ++i) {
            const double u = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
            const double a = start * (1.0 - u) + stop * u;
            switch (scale) {
            case Scale::linear: v.push_back(a); break;
            case Scale::db: v.push_back(db_to_linear(a)); break;
            case Scale::log: v.push_back(start * std::pow(stop / start, u)); break;
            case Scale::nines: v.push_back(-std::expm1(-a * std::log(10.0))); break;
            }
        }
        return v;
    }

    /// Grid as written by the user (dB or nines count where applicable).
    std::vector<double> axis() const
    {
        std::vector<double> v;
        for (int i = 0; i < points; ++i) {
            const double u = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
            v.push_back(scale == Scale::log ? start * std::pow(stop / start, u) : start * (1.0 - u) + stop * u);
        }
        return v;
    }

    std::string axis_name() const
    {
        if (scale == Scale::db)
            return variable + "_db";
        if (scale == Scale::nines)
            return variable + "_nines";
        return variable;
    }

    /// "var:start:stop:points[:scale]"
    static Sweep parse(const std::string &text)
    {
        std::vector<std::string> f;
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ':'))
            f.push_back(item);
        if (f.size() != 4 && f.size() != 5)
            throw DomainError("sweep: expected var:start:stop:points[:scale], got '" + text + "'");
        Sweep s;
        s.variable = f[0];
        try {
            s.start = std::stod(f[1]);
            s.stop = std::stod(f[2]);
            s.points = std::stoi(f[3]);
        } catch (const std::exception &) {
            throw DomainError("sweep: non-numeric field in '" + text + "'");
        }
        const std::string sc = f.size() == 5 ? f[4] : (s.variable == "snr" ? "db" : "linear");
        if (sc == "linear")
            s.scale = Scale::linear;
        else if (sc == "db" || sc == "dB")
            s.scale = Scale::db;
        else if (sc == "log")
            s.scale = Scale::log;
        else if (sc == "nines")
            s.scale = Scale::nines;
        else
            throw DomainError("sweep: unknown scale '" + sc + "'");
        s.validate();
        return s;
    }

    std::string to_string() const
    {
        const char *names[] = {"linear", "db", "log", "nines"};
        return variable + ":" + csv::format_double(start) + ":" + csv::format_double(stop) + ":" +
               std::to_string(points) + ":" + names[static_cast<int>(scale)];
    }
};

// ------------------------------------------------------------ parameters

struct SimParams
{
    std::uint64_t seed = 1;
    double min_samples = 1e6;
    double max_samples = 1e7;
    long long target_crossings = 2500;
    double resolution = 20.0; // samples per characteristic fade time
    double trial_samples = 5e5;
    int oscillators = 64;
    bool enabled = true;
    std::string export_trace; // empty: no export
};

struct Params
{
    int n_ports = 4;
    double aperture = 0.3;
    double nakagami_m = 2.0;
    double power = 1.0;
    dependability::FblLink link{};
    qos::QosProfile profile{};
    double doppler = 10.0;
    double mission_duration = 5.0;
    double omega = 0.9999;
    std::optional<double> threshold; // fixed envelope threshold instead of the SNR-derived one
    dependability::ThresholdMode threshold_mode = dependability::ThresholdMode::rho;
    qos::RmaxMode rmax_mode = qos::RmaxMode::derived;
    double snr_lb_db = -10.0, snr_ub_db = 30.0;
    double inner_tol = 1e-6, outer_tol = 1e-8;
    int max_outer_iters = 50;
    SimParams sim{};
    int threads = 1;

    channel::FasChannel channel() const { return channel::FasChannel(n_ports, aperture, nakagami_m, power); }

    double eta() const { return dependability::fbl_threshold_eta(link); }

    double envelope_threshold() const
    {
        if (threshold)
            return *threshold;
        return dependability::envelope_threshold(eta(), link.avg_snr, threshold_mode);
    }

    qos::MeeeSetup meee_setup() const
    {
        qos::MeeeSetup s;
        s.chan = channel();
        s.link = link;
        s.profile = profile;
        s.doppler = doppler;
        s.mission_duration = mission_duration;
        s.threshold_mode = threshold_mode;
        s.rmax_mode = rmax_mode;
        return s;
    }

    optimize::DinkelbachConfig dinkelbach() const
    {
        return {db_to_linear(snr_lb_db), db_to_linear(snr_ub_db), inner_tol, outer_tol, max_outer_iters};
    }

    /// Assigns one sweep variable in native units.
    void set(const std::string &var, double v)
    {
        auto as_int = [&](const char *what) {
            if (v != std::floor(v))
                throw DomainError(std::string(what) + " must be an integer, got " + csv::format_short(v));
            return v;
        };
        if (var == "snr")
            link.avg_snr = v;
        else if (var == "threshold")
            threshold = v;
        else if (var == "n_ports")
            n_ports = static_cast<int>(as_int("n_ports"));
        else if (var == "aperture")
            aperture = v;
        else if (var == "m")
            nakagami_m = v;
        else if (var == "doppler")
            doppler = v;
        else if (var == "mission_duration")
            mission_duration = v;
        else if (var == "theta")
            profile.qos_exponent = v;
        else if (var == "burstiness")
            profile.burstiness = v;
        else if (var == "rate")
            link.rate = v;
        else if (var == "blocklength")
            link.blocklength = static_cast<long>(as_int("blocklength"));
        else if (var == "error_target")
            link.error_target = v;
        else if (var == "omega")
            omega = v;
        else
            throw DomainError("unknown parameter '" + var + "'");
    }

    void validate() const
    {
        (void)channel();
        link.validate();
        profile.validate();
        fasdep::detail::require(doppler > 0.0, "channel.doppler must be > 0");
        fasdep::detail::require(mission_duration >= 0.0, "mission.duration must be >= 0");
        fasdep::detail::require(omega >= 0.0 && omega <= 1.0, "mission.omega must lie in [0, 1]");
        if (threshold)
            fasdep::detail::require(*threshold >= 0.0, "crossing.threshold must be >= 0");
        fasdep::detail::require(snr_lb_db < snr_ub_db, "optimize.snr_lb_db must be below optimize.snr_ub_db");
        fasdep::detail::require(threads >= 1, "run.threads must be >= 1");
        fasdep::detail::require(sim.min_samples >= 1 && sim.max_samples >= sim.min_samples,
                                "sim.max_samples must be >= sim.min_samples >= 1");
        fasdep::detail::require(sim.trial_samples >= 1024, "sim.trial_samples must be >= 1024");
        fasdep::detail::require(sim.resolution > 0.0, "sim.resolution must be > 0");
    }

    /// Overlays config values on this parameter set.
    void apply(const config::Config &c)
    {
        n_ports = static_cast<int>(c.get_int("channel.n_ports", n_ports));
        aperture = c.get_double("channel.aperture", aperture);
        nakagami_m = c.get_double("channel.m", nakagami_m);
        power = c.get_double("channel.power", power);
        doppler = c.get_double("channel.doppler", doppler);
        if (c.has("link.snr_db"))
            link.avg_snr = db_to_linear(c.get_double("link.snr_db", 0.0));
        link.blocklength = static_cast<long>(c.get_int("link.blocklength", link.blocklength));
        link.error_target = c.get_double("link.error_target", link.error_target);
        link.rate = c.get_double("link.rate", link.rate);
        link.eta_tol = c.get_double("link.eta_tol", link.eta_tol);
        profile.qos_exponent = c.get_double("qos.theta", profile.qos_exponent);
        profile.burstiness = c.get_double("qos.burstiness", profile.burstiness);
        profile.drain_eff = c.get_double("power.drain_eff", profile.drain_eff);
        profile.circuit_power = c.get_double("power.circuit", profile.circuit_power);
        profile.idle_power = c.get_double("power.idle", profile.idle_power);
        mission_duration = c.get_double("mission.duration", mission_duration);
        omega = c.get_double("mission.omega", omega);
        if (c.has("crossing.threshold"))
            threshold = c.get_double("crossing.threshold", 0.0);
        const auto tm = c.get_string("mode.threshold", threshold_mode == dependability::ThresholdMode::rho ? "rho"
                                                                                                            : "sqrt-eta");
        if (tm == "rho")
            threshold_mode = dependability::ThresholdMode::rho;
        else if (tm == "sqrt-eta" || tm == "sqrt_eta")
            threshold_mode = dependability::ThresholdMode::sqrt_eta;
        else
            throw DomainError("mode.threshold: expected rho or sqrt-eta, got '" + tm + "'");
        const auto rm = c.get_string("mode.rmax", rmax_mode == qos::RmaxMode::derived ? "derived" : "paper");
        if (rm == "derived")
            rmax_mode = qos::RmaxMode::derived;
        else if (rm == "paper")
            rmax_mode = qos::RmaxMode::paper_printed;
        else
            throw DomainError("mode.rmax: expected derived or paper, got '" + rm + "'");
        snr_lb_db = c.get_double("optimize.snr_lb_db", snr_lb_db);
        snr_ub_db = c.get_double("optimize.snr_ub_db", snr_ub_db);
        inner_tol = c.get_double("optimize.inner_tol", inner_tol);
        outer_tol = c.get_double("optimize.outer_tol", outer_tol);
        max_outer_iters = static_cast<int>(c.get_int("optimize.max_outer_iters", max_outer_iters));
        const long long seed = c.get_int("sim.seed", static_cast<long long>(sim.seed));
        fasdep::detail::require(seed >= 0, "sim.seed must be >= 0");
        sim.seed = static_cast<std::uint64_t>(seed);
        sim.min_samples = c.get_double("sim.min_samples", sim.min_samples);
        sim.max_samples = c.get_double("sim.max_samples", sim.max_samples);
        sim.target_crossings = c.get_int("sim.target_crossings", sim.target_crossings);
        sim.resolution = c.get_double("sim.resolution", sim.resolution);
        sim.trial_samples = c.get_double("sim.trial_samples", sim.trial_samples);
        sim.oscillators = static_cast<int>(c.get_int("sim.oscillators", sim.oscillators));
        sim.enabled = c.get_bool("sim.enabled", sim.enabled);
        sim.export_trace = c.get_string("sim.export_trace", sim.export_trace);
        threads = static_cast<int>(c.get_int("run.threads", threads));
    }

    /// Header block listing every fixed parameter.
    void describe(csv::Table &t) const
    {
        t.add_meta("channel.n_ports", n_ports);
        t.add_meta("channel.aperture", aperture);
        t.add_meta("channel.m", nakagami_m);
        t.add_meta("channel.power", power);
        t.add_meta("channel.doppler", doppler);
        t.add_meta("link.snr_db", linear_to_db(link.avg_snr));
        t.add_meta("link.blocklength", static_cast<double>(link.blocklength));
        t.add_meta("link.error_target", link.error_target);
        t.add_meta("link.rate", link.rate);
        t.add_meta("link.eta_tol", link.eta_tol);
        t.add_meta("qos.theta", profile.qos_exponent);
        t.add_meta("qos.burstiness", profile.burstiness);
        t.add_meta("power.drain_eff", profile.drain_eff);
        t.add_meta("power.circuit", profile.circuit_power);
        t.add_meta("power.idle", profile.idle_power);
        t.add_meta("mission.duration", mission_duration);
        t.add_meta("mission.omega", omega);
        if (threshold)
            t.add_meta("crossing.threshold", *threshold);
        t.add_meta("mode.threshold", threshold_mode == dependability::ThresholdMode::rho ? "rho" : "sqrt-eta");
        t.add_meta("mode.rmax", rmax_mode == qos::RmaxMode::derived ? "derived" : "paper");
        t.add_meta("optimize.snr_lb_db", snr_lb_db);
        t.add_meta("optimize.snr_ub_db", snr_ub_db);
    }

    void describe_sim(csv::Table &t) const
    {
        t.add_meta("sim.seed", std::to_string(sim.seed));
        t.add_meta("sim.min_samples", sim.min_samples);
        t.add_meta("sim.max_samples", sim.max_samples);
        t.add_meta("sim.target_crossings", static_cast<double>(sim.target_crossings));
        t.add_meta("sim.resolution", sim.resolution);
        t.add_meta("sim.trial_samples", sim.trial_samples);
        t.add_meta("sim.oscillators", sim.oscillators);
    }
};

// -------------------------------------------------------------- helpers

/// Evaluates f(0..n-1) on up to `threads` workers; results stay in index
/// order and the lowest failing index is rethrown.
template <class F>
auto parallel_map(std::size_t n, int threads, F &&f) -> std::vector<decltype(f(std::size_t{}))>
{
    using R = decltype(f(std::size_t{}));
    std::vector<std::optional<R>> out(n);
    std::vector<std::exception_ptr> err(n);
    auto work = [&](std::size_t w, std::size_t stride) {
        for (std::size_t i = w; i < n; i += stride) {
            try {
                out[i] = f(i);
            } catch (...) {
                err[i] = std::current_exception();
            }
        }
    };
    const std::size_t t = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), std::max<std::size_t>(n, 1));
    if (t <= 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < t; ++w)
            pool.emplace_back(work, w, t);
        for (auto &th : pool)
            th.join();
    }
    for (auto &e : err)
        if (e)
            std::rethrow_exception(e);
    std::vector<R> res;
    res.reserve(n);
    for (auto &o : out)
        res.push_back(std::move(*o));
    return res;
}

/// Re-throws a module error with the failing grid point prepended, keeping its category.
template <class F>
auto at_point(const std::string &where, F &&f) -> decltype(f())
{
    try {
        return f();
    } catch (const DomainError &e) {
        throw DomainError(where + ": " + e.what());
    } catch (const NumericalError &e) {
        throw NumericalError(where + ": " + e.what());
    }
}

struct NlcrSimResult
{
    double nlcr = 0.0;
    double cdf = 0.0;
    long long crossings = 0;
    long long samples = 0;
    double sample_rate = 0.0;
};

/// Sample rate resolving fades at level x: `resolution` samples over the
/// time one port's envelope takes to move by x at its rms slope
/// pi sigma f_D / sqrt(m), times N since selection shortens fades about N-fold.
inline double resolving_sample_rate(const channel::FasChannel &c, double doppler, double x, double resolution)
{
    const double slope = std::numbers::pi * c.sigma() * doppler / std::sqrt(c.nakagami_m());
    const double floor_rate = 32.0 * doppler;
    if (x <= 0.0)
        return floor_rate;
    return std::max(floor_rate, resolution * c.n_ports() * slope / x);
}

struct CrossingRun
{
    mcsim::CrossingTally tally;
    double sample_rate = 0.0;
};

/// Crossing tally at x from independent trials; stops once both the sample
/// floor and the crossing target are met, or at the sample cap.
inline CrossingRun simulate_crossings(const channel::FasChannel &c, double doppler, double x, const SimParams &sp)
{
    mcsim::SimConfig cfg;
    cfg.chan = c;
    cfg.doppler = doppler;
    cfg.sample_rate = resolving_sample_rate(c, doppler, x, sp.resolution);
    cfg.n_oscillators = sp.oscillators;
    cfg.seed = sp.seed;
    const auto trial_len = static_cast<std::size_t>(sp.trial_samples);
    cfg.duration = static_cast<double>(trial_len) / cfg.sample_rate;
    cfg.validate();
    CrossingRun run{mcsim::CrossingTally{x, cfg.dt()}, cfg.sample_rate};
    auto &total = run.tally;
    std::vector<double> best;
    for (int trial = 0;; ++trial) {
        const bool enough = static_cast<double>(total.samples) >= sp.min_samples &&
                            total.down_crossings >= sp.target_crossings;
        if (enough || static_cast<double>(total.samples) >= sp.max_samples)
            break;
        mcsim::FadingGenerator gen(cfg, trial);
        mcsim::CrossingCounter cc(x, cfg.dt());
        best.clear();
        gen.generate(trial_len, best);
        cc.push(best.begin(), best.end());
        total += cc.tally();
    }
    return run;
}

/// Empirical LCR / f_D at x, see simulate_crossings.
inline NlcrSimResult simulate_nlcr(const channel::FasChannel &c, double doppler, double x, const SimParams &sp)
{
    const auto run = simulate_crossings(c, doppler, x, sp);
    NlcrSimResult r;
    r.nlcr = run.tally.lcr() / doppler;
    r.cdf = run.tally.cdf();
    r.crossings = run.tally.down_crossings;
    r.samples = run.tally.samples;
    r.sample_rate = run.sample_rate;
    return r;
}

// -------------------------------------------------------------- commands

enum class Command { lcr, afd, reliability, mec, meee, optimize, simulate };

inline Command parse_command(const std::string &s)
{
    if (s == "lcr") return Command::lcr;
    if (s == "afd") return Command::afd;
    if (s == "reliability") return Command::reliability;
    if (s == "mec") return Command::mec;
    if (s == "meee") return Command::meee;
    if (s == "optimize") return Command::optimize;
    if (s == "simulate") return Command::simulate;
    throw DomainError("unknown command '" + s + "'");
}

inline const char *command_name(Command c)
{
    switch (c) {
    case Command::lcr: return "lcr";
    case Command::afd: return "afd";
    case Command::reliability: return "reliability";
    case Command::mec: return "mec";
    case Command::meee: return "meee";
    case Command::optimize: return "optimize";
    case Command::simulate: return "simulate";
    }
    return "?";
}

struct ExperimentSpec
{
    Command command = Command::lcr;
    Sweep sweep{};
    Params params{};
};

namespace detail {

inline std::vector<std::string> command_columns(Command c)
{
    switch (c) {
    case Command::lcr: return {"threshold", "cdf", "lcr", "nlcr"};
    case Command::afd: return {"threshold", "afd", "anfd", "failure_rate", "repair_rate"};
    case Command::reliability: return {"threshold", "failure_rate", "mttff", "mission_reliability"};
    case Command::mec: return {"mission_reliability", "mec", "rbar_max"};
    case Command::meee: return {"mission_reliability", "mec", "rbar_max", "power", "meee", "idle_within_active"};
    case Command::optimize:
        return {"snr_star", "snr_star_db", "meee_star", "reliability_star", "feasible", "converged", "outer_iterations"};
    case Command::simulate:
        return {"threshold", "sample_rate", "samples", "crossings", "sim_cdf", "sim_lcr", "sim_afd", "sim_anfd",
                "cdf", "lcr", "afd", "anfd"};
    }
    return {};
}

inline std::vector<double> evaluate_point(Command cmd, const Params &p, std::size_t index)
{
    const double nan = std::numeric_limits<double>::quiet_NaN();
    switch (cmd) {
    case Command::lcr: {
        const double x = p.envelope_threshold();
        const auto s = levelcross::crossing_statistics({p.channel(), p.doppler, x});
        return {x, s.cdf, s.lcr, s.lcr / p.doppler};
    }
    case Command::afd: {
        const double x = p.envelope_threshold();
        const auto s = levelcross::crossing_statistics({p.channel(), p.doppler, x});
        const double fail = std::isinf(s.anfd) ? 0.0 : 1.0 / s.anfd;
        const double repair = s.afd == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / s.afd;
        return {x, s.afd, s.anfd, fail, repair};
    }
    case Command::reliability: {
        const double x = p.envelope_threshold();
        const auto s = levelcross::crossing_statistics({p.channel(), p.doppler, x});
        const double fail = std::isinf(s.anfd) ? 0.0 : 1.0 / s.anfd;
        const double t = dependability::mttff(fail);
        return {x, fail, t, dependability::mission_reliability(p.mission_duration, t)};
    }
    case Command::mec:
    case Command::meee: {
        auto setup = p.meee_setup();
        if (p.threshold)
            throw DomainError("crossing.threshold cannot be fixed for the mEC and mEEE commands");
        const auto b = qos::meee_breakdown(setup, p.link.avg_snr);
        if (cmd == Command::mec)
            return {b.dependability.mission_reliability, b.mec, b.rbar_max};
        return {b.dependability.mission_reliability, b.mec, b.rbar_max, b.power, b.meee,
                b.idle_within_active ? 1.0 : 0.0};
    }
    case Command::optimize: {
        const auto r = meee_opt::optimize_meee(p.meee_setup(), p.omega, p.dinkelbach());
        const auto &o = r.result;
        if (!o.feasible)
            return {nan, nan, nan, nan, 0.0, 0.0, 0.0};
        return {o.phi_star, linear_to_db(o.phi_star), o.value_star, r.at_star.dependability.mission_reliability,
                1.0, o.converged ? 1.0 : 0.0, static_cast<double>(o.kappa_trace.size())};
    }
    case Command::simulate: {
        const double x = p.envelope_threshold();
        const auto c = p.channel();
        auto sp = p.sim;
        sp.seed = mcsim::trial_seed(p.sim.seed, static_cast<int>(index));
        const auto run = simulate_crossings(c, p.doppler, x, sp);
        const auto &t = run.tally;
        const auto a = levelcross::crossing_statistics({c, p.doppler, x});
        return {x, run.sample_rate, static_cast<double>(t.samples), static_cast<double>(t.down_crossings),
                t.cdf(), t.lcr(), t.afd().value_or(nan), t.anfd().value_or(nan), a.cdf, a.lcr, a.afd, a.anfd};
    }
    }
    return {};
}

} // namespace detail

/// Runs one command over the sweep grid.
inline csv::Table run(const ExperimentSpec &spec)
{
    spec.params.validate();
    spec.sweep.validate();
    csv::Table t;
    t.add_meta("command", command_name(spec.command));
    t.add_meta("sweep", spec.sweep.to_string());
    spec.params.describe(t);
    if (spec.command == Command::simulate)
        spec.params.describe_sim(t);
    const auto values = spec.sweep.values();
    const auto axis = spec.sweep.axis();
    t.columns = {spec.sweep.axis_name()};
    if (spec.sweep.scale != Scale::linear && spec.sweep.scale != Scale::log)
        t.columns.push_back(spec.sweep.variable);
    // a threshold sweep already carries the threshold in its axis column
    auto cols = detail::command_columns(spec.command);
    const bool drop_x = spec.sweep.variable == "threshold" && cols.front() == "threshold";
    for (std::size_t k = drop_x ? 1 : 0; k < cols.size(); ++k)
        t.columns.push_back(cols[k]);

    const auto rows = parallel_map(values.size(), spec.params.threads, [&](std::size_t i) {
        Params p = spec.params;
        const std::string where = spec.sweep.variable + " = " + csv::format_short(axis[i]);
        return at_point(where, [&] {
            p.set(spec.sweep.variable, values[i]);
            p.validate();
            return detail::evaluate_point(spec.command, p, i);
        });
    });
    bool infeasible = false;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::vector<double> row{axis[i]};
        if (spec.sweep.scale != Scale::linear && spec.sweep.scale != Scale::log)
            row.push_back(values[i]);
        row.insert(row.end(), rows[i].begin() + (drop_x ? 1 : 0), rows[i].end());
        if (spec.command == Command::optimize && row[t.column("feasible")] == 0.0)
            infeasible = true;
        t.add_row(std::move(row));
    }
    if (infeasible)
        throw InfeasibleError("optimize: no SNR in the search interval meets the reliability target at some grid points",
                              t);
    return t;
}

// --------------------------------------------------------------- figures

inline const std::vector<std::string> &figure_names()
{
    static const std::vector<std::string> names{"fig2", "fig3", "fig4", "fig5", "fig6", "fig7"};
    return names;
}

struct PortConfig
{
    int n_ports;
    double aperture;
    std::string label() const
    {
        if (n_ports == 1)
            return "N1";
        return "N" + std::to_string(n_ports) + "_W" + csv::format_short(aperture);
    }
};

/// Base parameters and sweep of each figure preset.
struct FigurePreset
{
    std::string name;
    std::string description;
    Params params;
    Sweep sweep;
    std::vector<PortConfig> columns;
};

inline FigurePreset figure_preset(const std::string &name)
{
    FigurePreset f;
    f.name = name;
    Params &p = f.params;
    if (name == "fig2") {
        f.description = "mEEE against average SNR";
        p.aperture = 0.3;
        p.nakagami_m = 2.0;
        f.sweep = {"snr", -10.0, 30.0, 81, Scale::db};
        f.columns = {{1, 0.3}, {2, 0.3}, {4, 0.3}, {8, 0.3}};
    } else if (name == "fig3") {
        f.description = "normalized LCR against average SNR, analytic and simulated";
        p.nakagami_m = 1.0;
        p.link.rate = 1.0;
        f.sweep = {"snr", 0.0, 30.0, 7, Scale::db};
        f.columns = {{1, 0.0}, {2, 0.5}, {4, 0.3}};
    } else if (name == "fig4") {
        f.description = "mission reliability against mission duration";
        p.nakagami_m = 2.0;
        p.link.avg_snr = db_to_linear(5.0);
        f.sweep = {"mission_duration", 0.5, 50.0, 100, Scale::linear};
        f.columns = {{1, 0.1}, {2, 0.1}, {2, 0.3}, {4, 0.1}, {4, 0.3}};
    } else if (name == "fig5") {
        f.description = "optimized mEEE against mission duration";
        p.aperture = 0.03;
        p.nakagami_m = 5.0;
        p.omega = 0.9999;
        f.sweep = {"mission_duration", 1.0, 10.0, 10, Scale::linear};
        f.columns = {{1, 0.03}, {2, 0.03}, {4, 0.03}};
    } else if (name == "fig6") {
        f.description = "optimized mEEE against QoS exponent";
        p.aperture = 0.03;
        p.nakagami_m = 5.0;
        p.omega = 0.9999;
        p.mission_duration = 5.0;
        f.sweep = {"theta", 1e-4, 1e-1, 10, Scale::log};
        f.columns = {{1, 0.03}, {2, 0.03}, {4, 0.03}};
    } else if (name == "fig7") {
        f.description = "optimized mEEE against target mission reliability";
        p.aperture = 0.03;
        p.nakagami_m = 4.0;
        p.mission_duration = 5.0;
        f.sweep = {"omega", 1.0, 6.0, 6, Scale::nines};
        f.columns = {{1, 0.03}, {2, 0.03}, {4, 0.03}};
    } else {
        throw DomainError("unknown figure preset '" + name + "' (expected fig2..fig7)");
    }
    return f;
}

namespace detail {

inline std::vector<double> figure_point(const std::string &fig, const Params &p)
{
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (fig == "fig2")
        return {qos::meee(p.meee_setup(), p.link.avg_snr)};
    if (fig == "fig3") {
        const double x = p.envelope_threshold();
        const auto c = p.channel();
        const double analytic = levelcross::lcr({c, p.doppler, x}) / p.doppler;
        if (!p.sim.enabled)
            return {analytic};
        const auto s = simulate_nlcr(c, p.doppler, x, p.sim);
        return {analytic, s.nlcr, static_cast<double>(s.crossings), static_cast<double>(s.samples)};
    }
    if (fig == "fig4")
        return {dependability::assess(p.channel(), p.link, p.doppler, p.mission_duration, p.threshold_mode)
                    .mission_reliability};
    const auto r = meee_opt::optimize_meee(p.meee_setup(), p.omega, p.dinkelbach());
    if (!r.result.feasible)
        return {nan, nan};
    return {r.result.value_star, linear_to_db(r.result.phi_star)};
}

inline std::vector<std::string> figure_column_names(const std::string &fig, const PortConfig &pc, bool sim)
{
    const auto l = pc.label();
    if (fig == "fig2")
        return {"meee_" + l};
    if (fig == "fig3") {
        if (!sim)
            return {"nlcr_" + l};
        return {"nlcr_" + l, "sim_nlcr_" + l, "sim_crossings_" + l, "sim_samples_" + l};
    }
    if (fig == "fig4")
        return {"reliability_" + l};
    return {"meee_star_" + l, "snr_star_db_" + l};
}

} // namespace detail

/// Runs a figure preset; `overrides` is applied on top of the preset's
/// parameters and may replace the sweep. Port configurations are fixed per
/// figure unless figure.ports / figure.apertures are given.
inline csv::Table run_figure(const std::string &name, const config::Config &overrides = {},
                             const std::optional<Sweep> &sweep = std::nullopt)
{
    auto f = figure_preset(name);
    f.params.apply(overrides);
    if (sweep)
        f.sweep = *sweep;
    if (overrides.has("figure.ports")) {
        const auto ports = overrides.get_list("figure.ports", {});
        const auto aps = overrides.get_list("figure.apertures", std::vector<double>(ports.size(), f.params.aperture));
        if (aps.size() != ports.size())
            throw DomainError("figure.apertures must have one entry per figure.ports entry");
        f.columns.clear();
        for (std::size_t i = 0; i < ports.size(); ++i) {
            if (ports[i] < 1 || ports[i] != std::floor(ports[i]))
                throw DomainError("figure.ports entries must be positive integers");
            f.columns.push_back({static_cast<int>(ports[i]), aps[i]});
        }
    }
    f.params.validate();
    f.sweep.validate();

    csv::Table t;
    t.add_meta("figure", f.name);
    t.add_meta("description", f.description);
    t.add_meta("sweep", f.sweep.to_string());
    f.params.describe(t);
    if (name == "fig3" && f.params.sim.enabled)
        f.params.describe_sim(t);
    std::string cols;
    for (const auto &c : f.columns)
        cols += (cols.empty() ? "" : ";") + std::to_string(c.n_ports) + "@" + csv::format_short(c.aperture);
    t.add_meta("figure.columns", cols);

    const auto values = f.sweep.values();
    const auto axis = f.sweep.axis();
    t.columns = {f.sweep.axis_name()};
    const bool extra = f.sweep.scale == Scale::db || f.sweep.scale == Scale::nines;
    if (extra)
        t.columns.push_back(f.sweep.variable);
    for (const auto &c : f.columns)
        for (const auto &n : detail::figure_column_names(name, c, f.params.sim.enabled))
            t.columns.push_back(n);

    const std::size_t nc = f.columns.size();
    const auto cells = parallel_map(values.size() * nc, f.params.threads, [&](std::size_t idx) {
        const std::size_t i = idx / nc, j = idx % nc;
        Params p = f.params;
        p.n_ports = f.columns[j].n_ports;
        p.aperture = f.columns[j].n_ports == 1 ? 0.0 : f.columns[j].aperture;
        p.sim.seed = mcsim::trial_seed(f.params.sim.seed, static_cast<int>(idx));
        const std::string where = f.sweep.variable + " = " + csv::format_short(axis[i]) + ", " + f.columns[j].label();
        return at_point(where, [&] {
            p.set(f.sweep.variable, values[i]);
            p.validate();
            return detail::figure_point(name, p);
        });
    });
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::vector<double> row{axis[i]};
        if (extra)
            row.push_back(values[i]);
        for (std::size_t j = 0; j < nc; ++j)
            row.insert(row.end(), cells[i * nc + j].begin(), cells[i * nc + j].end());
        t.add_row(std::move(row));
    }
    return t;
}

// -------------------------------------------------------------- validate

struct Check
{
    std::string name;
    bool pass = false;
    std::string detail;
};

struct Report
{
    std::string preset;
    std::vector<Check> checks;

    bool all_pass() const
    {
        return std::all_of(checks.begin(), checks.end(), [](const Check &c) { return c.pass; });
    }

    void write(std::ostream &os) const
    {
        os << "# validate preset = " << preset << '\n';
        for (const auto &c : checks)
            os << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.detail << '\n';
        const auto passed = std::count_if(checks.begin(), checks.end(), [](const Check &c) { return c.pass; });
        os << "# " << passed << " of " << checks.size() << " checks passed\n";
    }
};

namespace detail {

inline double rel_err(double got, double want)
{
    return want == 0.0 ? std::abs(got) : std::abs(got / want - 1.0);
}

// Runs body and records its worst relative error against tol; exceptions are failures.
template <class F>
void check(Report &r, const std::string &name, double tol, F &&body)
{
    Check c;
    c.name = name;
    try {
        const double worst = body();
        c.pass = worst <= tol;
        c.detail = "worst relative error " + csv::format_short(worst) + " (tolerance " + csv::format_short(tol) + ")";
    } catch (const std::exception &e) {
        c.pass = false;
        c.detail = std::string("error: ") + e.what();
    }
    r.checks.push_back(std::move(c));
}

} // namespace detail

/// Cross-module consistency suite. "quick" keeps the Monte Carlo checks to
/// about 10^6 samples; "full" uses 10^7 and a wider grid.
inline Report validate(const std::string &preset)
{
    if (preset.empty())
        throw DomainError("validate: preset name must not be empty");
    if (preset != "quick" && preset != "full")
        throw DomainError("validate: unknown preset '" + preset + "' (expected quick or full)");
    const bool full = preset == "full";
    Report rep;
    rep.preset = preset;
    using detail::rel_err;

    const std::vector<double> ms = full ? std::vector<double>{1, 2, 5} : std::vector<double>{1, 2};
    const std::vector<double> xs = full ? std::vector<double>{0.25, 0.5, 1, 1.5, 2} : std::vector<double>{0.5, 1, 2};
    const std::vector<int> ns = full ? std::vector<int>{2, 3, 4} : std::vector<int>{2, 3};

    detail::check(rep, "independent-port limit of the correlated LCR", 1e-3, [&] {
        double worst = 0.0;
        for (double m : ms)
            for (double x : xs)
                for (int n : ns) {
                    const auto c = channel::FasChannel::with_correlations(m, 1.0, std::vector<double>(n - 1, 1e-7));
                    const levelcross::CrossingContext ctx{c, 10.0, x};
                    worst = std::max(worst, rel_err(levelcross::lcr(ctx), levelcross::lcr_iid(ctx)));
                }
        return worst;
    });
    detail::check(rep, "single-port LCR against the Rayleigh closed form", 1e-12, [&] {
        double worst = 0.0;
        for (double x : xs) {
            const double want = std::sqrt(2.0 * std::numbers::pi) * 10.0 * x * std::exp(-x * x);
            worst = std::max(worst, rel_err(levelcross::lcr({channel::FasChannel(1, 0.0, 1.0, 1.0), 10.0, x}), want));
        }
        return worst;
    });
    const std::vector<double> mus = full ? std::vector<double>{0.1, 0.5, 0.9} : std::vector<double>{0.5, 0.9};
    const std::vector<double> ms2 = full ? std::vector<double>{1, 2, 4} : std::vector<double>{1, 2};
    detail::check(rep, "two-port series against quadrature (LCR, AFD, CDF)", 1e-6, [&] {
        double worst = 0.0;
        for (double m : ms2)
            for (double mu : mus)
                for (double x : {0.5, 1.0, 2.0}) {
                    const auto c = channel::FasChannel::with_correlations(m, 1.0, {mu});
                    const levelcross::CrossingContext ctx{c, 10.0, x};
                    worst = std::max(worst, rel_err(levelcross::lcr_two_port_series(ctx), levelcross::lcr(ctx)));
                    worst = std::max(worst, rel_err(levelcross::afd_two_port_series(ctx), levelcross::afd(ctx)));
                    worst = std::max(worst, rel_err(channel::bivariate_cdf_series(c, x, x), channel::max_cdf(c, x)));
                }
        return worst;
    });
    detail::check(rep, "fade-duration identities", 1e-13, [&] {
        double worst = 0.0;
        for (double m : ms)
            for (double x : xs)
                for (int n : ns) {
                    const auto s = levelcross::crossing_statistics({channel::FasChannel(n, 0.3, m, 1.0), 10.0, x});
                    worst = std::max(worst, rel_err(s.afd * s.lcr, s.cdf));
                    worst = std::max(worst, rel_err(s.afd + s.anfd, 1.0 / s.lcr));
                }
        return worst;
    });
    detail::check(rep, "finite-blocklength threshold at half error target", 0.0, [&] {
        double worst = 0.0;
        for (double r : {0.1, 1.0, 2.0})
            worst = std::max(worst, rel_err(dependability::fbl_threshold_eta({1000, 0.5, r, 10.0, 1e-4}),
                                             std::exp2(r) - 1.0));
        return worst;
    });
    detail::check(rep, "effective-bandwidth inversion of the arrival rate", 1e-12, [&] {
        double worst = 0.0;
        for (double th : {1e-4, 1e-3, 1e-2})
            for (double s : {0.25, 0.5, 1.0})
                for (double mec : {0.01, 0.05, 0.09}) {
                    const double r = qos::max_arrival_rate(th, s, mec);
                    worst = std::max(worst, rel_err(qos::effective_bandwidth(th, r / s, s), mec));
                }
        return worst;
    });

    SimParams sp;
    sp.min_samples = full ? 1e7 : 1e6;
    sp.max_samples = full ? 1e7 : 1e6;
    sp.target_crossings = 0;
    struct McCase
    {
        int n;
        double w, m, x;
    };
    const std::vector<McCase> cases = full ? std::vector<McCase>{{1, 0.0, 1.0, 1.0}, {2, 0.5, 1.0, 0.7},
                                                                 {4, 0.3, 1.0, 0.7}, {4, 0.3, 2.0, 0.8}}
                                           : std::vector<McCase>{{1, 0.0, 1.0, 1.0}, {2, 0.5, 1.0, 0.8}};
    detail::check(rep, "Monte Carlo LCR against the analytic LCR", 0.05, [&] {
        double worst = 0.0;
        std::uint64_t seed = 7;
        for (const auto &k : cases) {
            const channel::FasChannel c(k.n, k.w, k.m, 1.0);
            sp.seed = mcsim::splitmix64(seed);
            const auto s = simulate_nlcr(c, 10.0, k.x, sp);
            worst = std::max(worst, rel_err(s.nlcr, levelcross::lcr({c, 10.0, k.x}) / 10.0));
        }
        return worst;
    });
    detail::check(rep, "Monte Carlo outage against the analytic CDF", 0.03, [&] {
        double worst = 0.0;
        std::uint64_t seed = 11;
        for (const auto &k : cases) {
            const channel::FasChannel c(k.n, k.w, k.m, 1.0);
            sp.seed = mcsim::splitmix64(seed);
            const auto s = simulate_nlcr(c, 10.0, k.x, sp);
            worst = std::max(worst, rel_err(s.cdf, channel::max_cdf(c, k.x)));
        }
        return worst;
    });
    return rep;
}

} // namespace fasdep::experiment

#endif // FASDEP_EXPERIMENT_HPP
