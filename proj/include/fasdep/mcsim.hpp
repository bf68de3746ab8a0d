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
/// \file mcsim.hpp
///
/// Monte Carlo generator for time-varying, spatially correlated Nakagami-m
/// port envelopes and the empirical crossing and reliability statistics
/// measured on them.
///
/// Each complex branch is a Zheng-Xiao sum-of-sinusoids process with a Jakes
/// spectrum. Port k mixes a shared reference with its own innovation,
/// h_k = mu_k h_1 + sqrt(1 - mu_k^2) w_k, and the envelope sums m branch
/// powers, so the marginal is Nakagami-m for integer m.
///
#ifndef FASDEP_MCSIM_HPP
#define FASDEP_MCSIM_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "fasdep/channel.hpp"
#include "fasdep/errors.hpp"

namespace fasdep::mcsim {

struct SimConfig
{
    channel::FasChannel chan{1, 0.0, 1.0, 1.0};
    double doppler = 10.0;      // f_D, Hz
    double sample_rate = 640.0; // f_s, Hz
    double duration = 100.0;    // seconds per trial
    int n_oscillators = 64;
    std::uint64_t seed = 1;
    int n_trials = 1;

    void validate() const
    {
        fasdep::detail::require(doppler > 0.0 && std::isfinite(doppler), "SimConfig: doppler must be > 0");
        fasdep::detail::require(sample_rate >= 32.0 * doppler && std::isfinite(sample_rate),
                                "SimConfig: sample_rate must be at least 32 * doppler");
        fasdep::detail::require(duration > 0.0 && std::isfinite(duration), "SimConfig: duration must be > 0");
        fasdep::detail::require(n_oscillators >= 16, "SimConfig: n_oscillators must be >= 16");
        fasdep::detail::require(n_trials >= 1, "SimConfig: n_trials must be >= 1");
        const double m = chan.nakagami_m();
        fasdep::detail::require(m == std::floor(m) && m >= 1.0 && m <= 64.0,
                                "SimConfig: simulation needs an integer Nakagami m in [1, 64]");
    }

    double dt() const noexcept { return 1.0 / sample_rate; }
    std::size_t samples_per_trial() const
    {
        return static_cast<std::size_t>(std::llround(duration * sample_rate));
    }
};

/// splitmix64 step; advances the state and returns the next output.
inline std::uint64_t splitmix64(std::uint64_t &state) noexcept
{
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed of trial i, derived from the master seed only.
inline std::uint64_t trial_seed(std::uint64_t master, int trial) noexcept
{
    std::uint64_t s = master;
    std::uint64_t out = splitmix64(s);
    for (int i = 0; i < trial; ++i)
        out = splitmix64(s);
    return out;
}

namespace detail {

// One real sum-of-sinusoids component advanced by complex rotation. The
// phasors are re-anchored from the absolute time at every block start.
class SosComponent
{
public:
    SosComponent(std::vector<double> omega, std::vector<double> phase, double amplitude)
        : omega_(std::move(omega)), phase_(std::move(phase)), amp_(amplitude), c_(omega_.size()), s_(omega_.size()),
          rc_(omega_.size()), rs_(omega_.size())
    {
    }

    void anchor(double t, double dt)
    {
        for (std::size_t i = 0; i < omega_.size(); ++i) {
            const double a = omega_[i] * t + phase_[i];
            c_[i] = std::cos(a);
            s_[i] = std::sin(a);
            rc_[i] = std::cos(omega_[i] * dt);
            rs_[i] = std::sin(omega_[i] * dt);
        }
    }

    // writes count samples into out and advances the phasors
    void emit(double *out, std::size_t count)
    {
        const std::size_t n = omega_.size();
        double *c = c_.data(), *s = s_.data();
        const double *rc = rc_.data(), *rs = rs_.data();
        for (std::size_t t = 0; t < count; ++t) {
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                acc += c[i];
                const double cn = c[i] * rc[i] - s[i] * rs[i];
                s[i] = s[i] * rc[i] + c[i] * rs[i];
                c[i] = cn;
            }
            out[t] = amp_ * acc;
        }
    }

private:
    std::vector<double> omega_, phase_;
    double amp_;
    std::vector<double> c_, s_, rc_, rs_;
};

// Zheng-Xiao complex process with unit-free variance `var` per quadrature.
struct ComplexSos
{
    SosComponent re, im;
};

inline ComplexSos make_complex_sos(std::mt19937_64 &rng, int n_osc, double doppler, double var)
{
    std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
    const double wd = 2.0 * std::numbers::pi * doppler;
    const double theta = u(rng);
    std::vector<double> w_re(n_osc), w_im(n_osc), p_re(n_osc), p_im(n_osc);
    for (int i = 0; i < n_osc; ++i) {
        const double alpha = (2.0 * std::numbers::pi * (i + 1) - std::numbers::pi + theta) / (4.0 * n_osc);
        w_re[i] = wd * std::cos(alpha);
        w_im[i] = wd * std::sin(alpha);
        p_re[i] = u(rng);
        p_im[i] = u(rng);
    }
    // each cosine has variance 1/2, so sqrt(2/M) gives unit variance
    const double amp = std::sqrt(2.0 * var / n_osc);
    return {SosComponent(std::move(w_re), std::move(p_re), amp), SosComponent(std::move(w_im), std::move(p_im), amp)};
}

} // namespace detail

/// Streams the envelopes of one trial block by block.
class FadingGenerator
{
public:
    static constexpr std::size_t block = 1024;

    FadingGenerator(const SimConfig &cfg, int trial) : cfg_(cfg), dt_(cfg.dt())
    {
        cfg_.validate();
        const auto &c = cfg_.chan;
        n_ = c.n_ports();
        m_ = static_cast<int>(c.nakagami_m());
        std::mt19937_64 rng(trial_seed(cfg_.seed, trial));
        const double var = c.power() / (2.0 * m_);
        for (int b = 0; b < m_; ++b) {
            ref_.push_back(detail::make_complex_sos(rng, cfg_.n_oscillators, cfg_.doppler, var));
            for (int k = 2; k <= n_; ++k) {
                const double mu = c.mu()[k - 2];
                if (mu * mu < 1.0)
                    innov_.push_back(detail::make_complex_sos(rng, cfg_.n_oscillators, cfg_.doppler, var));
            }
        }
        for (int k = 2; k <= n_; ++k) {
            const double mu = c.mu()[k - 2];
            mix_.push_back({mu, mu * mu < 1.0 ? std::sqrt(1.0 - mu * mu) : 0.0, mu * mu < 1.0});
        }
        buf_re_.resize(block);
        buf_im_.resize(block);
        ref_re_.assign(static_cast<std::size_t>(m_), std::vector<double>(block));
        ref_im_.assign(static_cast<std::size_t>(m_), std::vector<double>(block));
    }

    int n_ports() const noexcept { return n_; }
    double dt() const noexcept { return dt_; }
    std::size_t position() const noexcept { return pos_; }

    /// Appends `count` samples of the selected envelope to best and, when
    /// ports is non-null, of each port envelope to (*ports)[k].
    void generate(std::size_t count, std::vector<double> &best, std::vector<std::vector<double>> *ports = nullptr)
    {
        if (ports)
            ports->resize(static_cast<std::size_t>(n_));
        std::vector<double> pw(static_cast<std::size_t>(n_) * block);
        while (count > 0) {
            const std::size_t len = std::min(count, block);
            const double t0 = static_cast<double>(pos_) * dt_;
            std::fill(pw.begin(), pw.end(), 0.0);
            std::size_t innov_idx = 0;
            for (int b = 0; b < m_; ++b) {
                auto &r = ref_[static_cast<std::size_t>(b)];
                auto &rre = ref_re_[static_cast<std::size_t>(b)];
                auto &rim = ref_im_[static_cast<std::size_t>(b)];
                r.re.anchor(t0, dt_);
                r.im.anchor(t0, dt_);
                r.re.emit(rre.data(), len);
                r.im.emit(rim.data(), len);
                for (std::size_t t = 0; t < len; ++t)
                    pw[t] += rre[t] * rre[t] + rim[t] * rim[t];
                for (int k = 2; k <= n_; ++k) {
                    const auto &mx = mix_[static_cast<std::size_t>(k - 2)];
                    double *dst = pw.data() + static_cast<std::size_t>(k - 1) * block;
                    if (!mx.independent_part) {
                        for (std::size_t t = 0; t < len; ++t)
                            dst[t] += mx.mu * mx.mu * (rre[t] * rre[t] + rim[t] * rim[t]);
                        continue;
                    }
                    auto &w = innov_[innov_idx++];
                    w.re.anchor(t0, dt_);
                    w.im.anchor(t0, dt_);
                    w.re.emit(buf_re_.data(), len);
                    w.im.emit(buf_im_.data(), len);
                    for (std::size_t t = 0; t < len; ++t) {
                        const double hr = mx.mu * rre[t] + mx.scale * buf_re_[t];
                        const double hi = mx.mu * rim[t] + mx.scale * buf_im_[t];
                        dst[t] += hr * hr + hi * hi;
                    }
                }
            }
            for (std::size_t t = 0; t < len; ++t) {
                double mx = 0.0;
                for (int k = 0; k < n_; ++k)
                    mx = std::max(mx, pw[static_cast<std::size_t>(k) * block + t]);
                best.push_back(std::sqrt(mx));
            }
            if (ports)
                for (int k = 0; k < n_; ++k) {
                    auto &dst = (*ports)[static_cast<std::size_t>(k)];
                    for (std::size_t t = 0; t < len; ++t)
                        dst.push_back(std::sqrt(pw[static_cast<std::size_t>(k) * block + t]));
                }
            pos_ += len;
            count -= len;
        }
    }

private:
    struct Mix
    {
        double mu, scale;
        bool independent_part;
    };

    SimConfig cfg_;
    double dt_;
    int n_ = 1, m_ = 1;
    std::size_t pos_ = 0;
    std::vector<detail::ComplexSos> ref_, innov_;
    std::vector<Mix> mix_;
    std::vector<double> buf_re_, buf_im_;
    std::vector<std::vector<double>> ref_re_, ref_im_;
};

struct FadingTrace
{
    std::vector<std::vector<double>> samples; // N x T port envelopes
    std::vector<double> best;                 // max over ports at each instant
    double dt = 0.0;

    double duration() const noexcept { return dt * static_cast<double>(best.size()); }
};

/// One full trial held in memory; use FadingGenerator for long runs.
inline FadingTrace generate_fading(const SimConfig &cfg, int trial = 0)
{
    FadingGenerator gen(cfg, trial);
    FadingTrace tr;
    tr.dt = gen.dt();
    const std::size_t n = cfg.samples_per_trial();
    tr.best.reserve(n);
    gen.generate(n, tr.best, &tr.samples);
    return tr;
}

/// Integer tallies of the envelope against one threshold. Every mean is a
/// ratio of exact counts, so merging trials in any order gives the same result.
struct CrossingTally
{
    double threshold = 0.0;
    double dt = 0.0;
    long long samples = 0;
    long long below = 0;
    long long down_crossings = 0;
    long long fades = 0;        // completed below-threshold intervals
    long long fade_samples = 0; // samples inside completed fades
    long long up_runs = 0;      // completed above-threshold intervals
    long long up_samples = 0;
    // sum over up samples of the number of steps to the next below sample,
    // counted only where that sample exists
    long long passage_steps = 0;
    long long passage_starts = 0;

    CrossingTally &operator+=(const CrossingTally &o)
    {
        samples += o.samples;
        below += o.below;
        down_crossings += o.down_crossings;
        fades += o.fades;
        fade_samples += o.fade_samples;
        up_runs += o.up_runs;
        up_samples += o.up_samples;
        passage_steps += o.passage_steps;
        passage_starts += o.passage_starts;
        return *this;
    }

    double duration() const noexcept { return dt * static_cast<double>(samples); }
    double lcr() const { return static_cast<double>(down_crossings) / duration(); }
    double cdf() const { return static_cast<double>(below) / static_cast<double>(samples); }
    /// Mean completed fade length; empty when no fade was observed.
    std::optional<double> afd() const
    {
        if (fades == 0)
            return std::nullopt;
        return dt * static_cast<double>(fade_samples) / static_cast<double>(fades);
    }
    std::optional<double> anfd() const
    {
        if (up_runs == 0)
            return std::nullopt;
        return dt * static_cast<double>(up_samples) / static_cast<double>(up_runs);
    }
    /// Mean time from an up-state instant to the next sample below the threshold.
    std::optional<double> mean_first_passage() const
    {
        if (passage_starts == 0)
            return std::nullopt;
        return dt * static_cast<double>(passage_steps) / static_cast<double>(passage_starts);
    }
};

/// Streaming counter. A down-crossing is best[t-1] >= x > best[t].
class CrossingCounter
{
public:
    CrossingCounter(double threshold, double dt)
    {
        t_.threshold = threshold;
        t_.dt = dt;
    }

    void push(double v)
    {
        const bool down = v < t_.threshold;
        ++t_.samples;
        t_.below += down;
        if (have_prev_ && down != prev_down_) {
            // close the interval that just ended; only fully observed ones count
            if (observed_start_) {
                if (prev_down_) {
                    ++t_.fades;
                    t_.fade_samples += len_;
                } else {
                    ++t_.up_runs;
                    t_.up_samples += len_;
                }
            }
            t_.down_crossings += down;
            observed_start_ = true;
            len_ = 0;
        }
        ++len_;
        if (down) {
            // every pending up sample now knows its distance to this one
            t_.passage_steps += pending_ * (pending_ + 1) / 2;
            t_.passage_starts += pending_;
            pending_ = 0;
        } else {
            ++pending_;
        }
        prev_down_ = down;
        have_prev_ = true;
    }

    template <class It>
    void push(It first, It last)
    {
        for (; first != last; ++first)
            push(*first);
    }

    void push(const std::vector<double> &v) { push(v.begin(), v.end()); }

    const CrossingTally &tally() const noexcept { return t_; }

private:
    CrossingTally t_;
    bool have_prev_ = false;
    bool prev_down_ = false;
    bool observed_start_ = false; // current interval began at a transition
    long long len_ = 0;
    long long pending_ = 0;
};

/// Disjoint windows of a fixed length; a window counts only if its first
/// sample is up, and succeeds if no sample inside it is below the threshold.
struct MissionTally
{
    double threshold = 0.0;
    double mission_duration = 0.0;
    long long windows = 0;
    long long survived = 0;

    MissionTally &operator+=(const MissionTally &o)
    {
        windows += o.windows;
        survived += o.survived;
        return *this;
    }
};

struct MissionEstimate
{
    double reliability = 0.0;
    long long windows = 0;
    bool low_confidence = true; // fewer than 100 windows
};

inline MissionEstimate estimate(const MissionTally &t)
{
    MissionEstimate e;
    e.windows = t.windows;
    e.low_confidence = t.windows < 100;
    e.reliability = t.windows == 0 ? std::numeric_limits<double>::quiet_NaN()
                                   : static_cast<double>(t.survived) / static_cast<double>(t.windows);
    return e;
}

class MissionCounter
{
public:
    MissionCounter(double threshold, double mission_duration, double dt)
        : len_(std::max<long long>(1, std::llround(mission_duration / dt)))
    {
        fasdep::detail::require(mission_duration >= 0.0, "MissionCounter: mission duration must be >= 0");
        t_.threshold = threshold;
        t_.mission_duration = mission_duration;
        zero_ = mission_duration == 0.0;
    }

    void push(double v)
    {
        const bool down = v < t_.threshold;
        if (pos_ == 0) {
            active_ = !down;
            ok_ = true;
        } else if (down) {
            ok_ = false;
        }
        if (++pos_ == len_) {
            if (active_) {
                ++t_.windows;
                t_.survived += ok_ || zero_;
            }
            pos_ = 0;
        }
    }

    const MissionTally &tally() const noexcept { return t_; }

private:
    long long len_;
    long long pos_ = 0;
    bool active_ = false, ok_ = true, zero_ = false;
    MissionTally t_;
};

/// Down-crossings per second of the selected envelope.
inline double empirical_lcr(const FadingTrace &tr, double threshold)
{
    fasdep::detail::require(!tr.best.empty(), "empirical_lcr: empty trace");
    CrossingCounter c(threshold, tr.dt);
    c.push(tr.best.begin(), tr.best.end());
    return c.tally().lcr();
}

/// Mean length of completed fades; empty when the trace has none.
inline std::optional<double> empirical_afd(const FadingTrace &tr, double threshold)
{
    fasdep::detail::require(!tr.best.empty(), "empirical_afd: empty trace");
    CrossingCounter c(threshold, tr.dt);
    c.push(tr.best.begin(), tr.best.end());
    return c.tally().afd();
}

/// Fraction of samples below the threshold.
inline double empirical_cdf(const FadingTrace &tr, double threshold)
{
    fasdep::detail::require(!tr.best.empty(), "empirical_cdf: empty trace");
    const auto below = std::count_if(tr.best.begin(), tr.best.end(), [&](double v) { return v < threshold; });
    return static_cast<double>(below) / static_cast<double>(tr.best.size());
}

inline MissionEstimate empirical_mission_reliability(const FadingTrace &tr, double threshold,
                                                     double mission_duration)
{
    fasdep::detail::require(!tr.best.empty(), "empirical_mission_reliability: empty trace");
    fasdep::detail::require(mission_duration <= tr.duration(),
                            "empirical_mission_reliability: mission longer than the trace");
    MissionCounter c(threshold, mission_duration, tr.dt);
    for (double v : tr.best)
        c.push(v);
    return estimate(c.tally());
}

struct SimSummary
{
    std::vector<CrossingTally> crossings; // one per threshold
    std::vector<MissionTally> missions;   // one per (threshold, duration) pair
    long long samples = 0;
};

struct MissionQuery
{
    double threshold;
    double mission_duration;
};

/// Runs every trial in constant memory and merges the tallies in trial order.
inline SimSummary simulate(const SimConfig &cfg, const std::vector<double> &thresholds,
                           const std::vector<MissionQuery> &missions = {})
{
    cfg.validate();
    SimSummary out;
    for (double x : thresholds)
        out.crossings.push_back(CrossingTally{x, cfg.dt()});
    for (const auto &q : missions)
        out.missions.push_back(MissionTally{q.threshold, q.mission_duration});
    const std::size_t total = cfg.samples_per_trial();
    std::vector<double> best;
    for (int trial = 0; trial < cfg.n_trials; ++trial) {
        FadingGenerator gen(cfg, trial);
        std::vector<CrossingCounter> cc;
        std::vector<MissionCounter> mc;
        for (double x : thresholds)
            cc.emplace_back(x, cfg.dt());
        for (const auto &q : missions)
            mc.emplace_back(q.threshold, q.mission_duration, cfg.dt());
        std::size_t left = total;
        while (left > 0) {
            const std::size_t len = std::min<std::size_t>(left, 64 * FadingGenerator::block);
            best.clear();
            gen.generate(len, best);
            for (auto &c : cc)
                c.push(best.begin(), best.end());
            for (auto &c : mc)
                for (double v : best)
                    c.push(v);
            left -= len;
        }
        for (std::size_t i = 0; i < cc.size(); ++i)
            out.crossings[i] += cc[i].tally();
        for (std::size_t i = 0; i < mc.size(); ++i)
            out.missions[i] += mc[i].tally();
        out.samples += static_cast<long long>(total);
    }
    return out;
}

/// Delimited text export: time, each port envelope, best.
inline void write_trace(std::ostream &os, const FadingTrace &tr)
{
    os << "time";
    for (std::size_t k = 0; k < tr.samples.size(); ++k)
        os << ",port" << (k + 1);
    os << ",best\n";
    os.precision(17);
    for (std::size_t t = 0; t < tr.best.size(); ++t) {
        os << tr.dt * static_cast<double>(t);
        for (const auto &p : tr.samples)
            os << ',' << p[t];
        os << ',' << tr.best[t] << '\n';
    }
}

} // namespace fasdep::mcsim

#endif // FASDEP_MCSIM_HPP
