// Copyright 2026 The qmem Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Memory trials: Alice prepares, the environment and Igor act, Bob guesses. Integrity
// estimation, interruption sweeps and milestone verdicts are built on top.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "qmem/codes.hpp"
#include "qmem/ec_cycles.hpp"
#include "qmem/endpoints.hpp"
#include "qmem/noise.hpp"

namespace qmem {

/// One memory channel. `code` empty means a bare physical qubit.
struct ExperimentConfig {
    std::optional<CodeName> code;
    double tau = 0.0;
    int m = 0;
    EcStyle ec_style = EcStyle::NonFT;
    EcOptions ec;
    NoiseParams noise;
    EndpointStyle alice = EndpointStyle::Ideal;
    EndpointStyle bob = EndpointStyle::Ideal;
    /// Axes to test; empty selects every axis the endpoints support.
    std::vector<PauliAxis> axes;
    double alpha = 1.0;
    double delta = 0.0;
    std::uint64_t n_runs = 1000000;
    std::uint64_t seed = 1;
    std::string label;

    bool physical() const {
        return !code.has_value();
    }

    /// Wall-clock duration the memory is held for: tau, stretched by alpha when encoded.
    double duration() const {
        return physical() ? tau : alpha * tau;
    }

    std::vector<PauliAxis> active_axes() const {
        if (!axes.empty()) {
            return axes;
        }
        std::vector<PauliAxis> out;
        for (auto a : kAllAxes) {
            if (supports(a)) {
                out.push_back(a);
            }
        }
        return out;
    }

    bool supports(PauliAxis a) const {
        if (physical()) {
            return true;
        }
        return endpoint_supports(alice, *code, a) && endpoint_supports(bob, *code, a);
    }

    void validate() const {
        noise.validate();
        if (!(tau >= 0) || !std::isfinite(tau)) {
            throw ConfigError("tau: must be a non-negative finite duration");
        }
        if (m < 0) {
            throw ConfigError("m: must be >= 0");
        }
        if (!(alpha >= 1) || !std::isfinite(alpha)) {
            throw ConfigError("alpha: must be >= 1");
        }
        if (!(delta >= 0) || !std::isfinite(delta)) {
            throw ConfigError("delta: must be >= 0");
        }
        if (n_runs == 0) {
            throw ConfigError("n_runs: must be positive");
        }
        if (physical()) {
            if (m != 0) {
                throw ConfigError("m: a physical qubit has no error-correction cycles");
            }
        } else {
            if (!style_supported(*code, ec_style)) {
                throw ConfigError(std::string("ec_style: ") + ec_style_label(ec_style) + " is not available for the " +
                                  code_label(*code) + " code (valid: " + kValidEcStyles + ")");
            }
            if (m * delta > duration() + 1e-12) {
                throw ConfigError("delta: m * delta exceeds the memory duration");
            }
        }
        if (!physical()) {
            for (auto [key, st] : {std::pair{"alice_style", alice}, std::pair{"bob_style", bob}}) {
                bool any = false;
                for (auto a : {PauliAxis::X, PauliAxis::Y, PauliAxis::Z}) {
                    any = any || endpoint_supports(st, *code, a);
                }
                if (!any) {
                    throw ConfigError(std::string(key) + ": " + endpoint_style_label(st) + " is not available for the " +
                                      code_label(*code) + " code");
                }
            }
        }
        auto ax = active_axes();
        if (ax.empty()) {
            throw ConfigError("axes: the chosen endpoints share no measurable axis");
        }
        for (auto a : ax) {
            if (!supports(a)) {
                throw ConfigError(std::string("axes: ") + axis_char(a) + " is not supported by the endpoints");
            }
        }
    }
};

/// Outcome of one trial. `syndrome` is what an ideal Bob measured (0 for other Bobs).
struct TrialRecord {
    bool success = false;
    std::uint32_t syndrome = 0;
};

/// Validated config plus the prebuilt error-correction cycle.
class Experiment {
  public:
    explicit Experiment(ExperimentConfig cfg) : cfg_(std::move(cfg)) {
        cfg_.validate();
        axes_ = cfg_.active_axes();
        if (!cfg_.physical()) {
            code_ = &code_by_name(*cfg_.code);
            cycle_.emplace(*code_, cfg_.ec_style, cfg_.ec);
            std::uint32_t extra = std::max({cycle_->ancillas(), endpoint_ancillas(cfg_.alice),
                                            endpoint_ancillas(cfg_.bob)});
            register_size_ = code_->n + extra;
        }
    }

    const ExperimentConfig& config() const {
        return cfg_;
    }
    const std::vector<PauliAxis>& axes() const {
        return axes_;
    }

    /// Start times of the Igor cycles.
    std::vector<double> cycle_starts() const {
        std::vector<double> out;
        double seg = segment();
        for (int k = 1; k <= cfg_.m; ++k) {
            out.push_back(k * seg + (k - 1) * cfg_.delta);
        }
        return out;
    }

    /// One trial; Bob steps in at `stop` (the full duration when empty). True iff his guess is right.
    bool trial(PauliAxis axis, std::uint64_t index, std::optional<double> stop = std::nullopt) const {
        return record(axis, index, stop).success;
    }

    TrialRecord record(PauliAxis axis, std::uint64_t index, std::optional<double> stop = std::nullopt) const {
        RandomStream rng(stream_seed(cfg_.seed, static_cast<std::uint64_t>(axis), index));
        int sign = rng.coin() ? -1 : 1;
        SampledFaults faults{cfg_.noise.p_e, &rng};
        const double end = stop ? *stop : cfg_.duration();
        if (cfg_.physical()) {
            return {physical_trial(axis, sign, end, faults, rng), 0};
        }
        StabilizerTableau t(register_size_);
        alice_prepare(cfg_.alice, *code_, axis, sign, t, faults, rng, cfg_.ec.cz);
        const double seg = segment();
        double now = 0;
        for (int k = 0;; ++k) {
            idle(t, std::min(seg, end - now), rng);
            now += seg;
            if (k == cfg_.m || now > end + kTimeSlack) {
                break;
            }
            cycle_->run(t, faults, rng);
            now += cfg_.delta;
        }
        if (cfg_.bob == EndpointStyle::Ideal) {
            TrialRecord r;
            r.syndrome = measure_syndrome(*code_, t, rng);
            t.apply_pauli(code_->correction(r.syndrome).widened(t.num_qubits()));
            r.success = t.measure(code_->logical(axis).widened(t.num_qubits()), rng) == sign;
            return r;
        }
        return {bob_guess(cfg_.bob, *code_, t, axis, faults, rng) == sign, 0};
    }

    /// Syndrome count an ideal Bob can observe (1 for a bare qubit).
    std::uint32_t syndrome_space() const {
        return cfg_.physical() ? 1u : 1u << code_->num_checks();
    }
    const CodeSpec* code() const {
        return code_;
    }
    const EcCycle* cycle() const {
        return cycle_ ? &*cycle_ : nullptr;
    }
    std::uint32_t register_size() const {
        return register_size_;
    }

    /// Successes among trials [begin, end) on one axis.
    std::uint64_t run_block(PauliAxis axis, std::uint64_t begin, std::uint64_t end,
                            std::optional<double> stop = std::nullopt) const {
        std::uint64_t ok = 0;
        for (std::uint64_t i = begin; i < end; ++i) {
            ok += trial(axis, i, stop) ? 1 : 0;
        }
        return ok;
    }

  private:
    static constexpr double kTimeSlack = 1e-12;

    double segment() const {
        return (cfg_.duration() - cfg_.m * cfg_.delta) / (cfg_.m + 1);
    }

    void idle(StabilizerTableau& t, double len, RandomStream& rng) const {
        if (len <= 0) {
            return;
        }
        apply_env_noise(t, 0, code_->n, env_error_prob(len, cfg_.noise.T), cfg_.noise.env, rng);
    }

    bool physical_trial(PauliAxis axis, int sign, double end, SampledFaults& faults, RandomStream& rng) const {
        StabilizerTableau t(1);
        NoFaults none;
        Element prep = Element::prep(0, axis, sign < 0);
        if (cfg_.alice == EndpointStyle::Ideal) {
            execute(prep, t, none, rng);
        } else {
            execute(prep, t, faults, rng);
        }
        if (end > 0) {
            apply_env_noise(t, 0, 1, env_error_prob(end, cfg_.noise.T), cfg_.noise.env, rng);
        }
        Element meas = Element::meas(0, axis);
        int bit = cfg_.bob == EndpointStyle::Ideal ? execute(meas, t, none, rng) : execute(meas, t, faults, rng);
        return (bit ? -1 : 1) == sign;
    }

    ExperimentConfig cfg_;
    std::vector<PauliAxis> axes_;
    const CodeSpec* code_ = nullptr;
    std::optional<EcCycle> cycle_;
    std::uint32_t register_size_ = 1;
};

inline constexpr double kZ95 = 1.959963984540054;

struct AxisTally {
    PauliAxis axis = PauliAxis::Z;
    std::uint64_t successes = 0;
    std::uint64_t trials = 0;

    double p_g() const {
        return trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0;
    }
};

/// Wilson score interval for a binomial proportion.
inline std::pair<double, double> wilson_interval(std::uint64_t k, std::uint64_t n, double z = kZ95) {
    if (n == 0) {
        return {0.0, 1.0};
    }
    double nn = static_cast<double>(n);
    double p = static_cast<double>(k) / nn;
    double z2 = z * z;
    double denom = 1 + z2 / nn;
    double center = (p + z2 / (2 * nn)) / denom;
    double half = z / denom * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn));
    double lo = k == 0 ? 0.0 : std::max(0.0, center - half);
    double hi = k == n ? 1.0 : std::min(1.0, center + half);
    return {lo, hi};
}

struct IntegrityEstimate {
    std::vector<AxisTally> per_axis;
    PauliAxis worst = PauliAxis::Z;
    double R_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    /// Another axis lies within 2 sigma of the worst one.
    bool near_tie = false;
    std::uint64_t n_runs = 0;

    /// Standard error of R_hat from the worst axis.
    double sigma() const {
        for (const auto& a : per_axis) {
            if (a.axis == worst) {
                double p = a.p_g();
                return 2 * std::sqrt(std::max(p * (1 - p), 0.25 / static_cast<double>(a.trials)) /
                                     static_cast<double>(a.trials));
            }
        }
        return 0.0;
    }
};

inline IntegrityEstimate summarize(std::vector<AxisTally> tallies) {
    IntegrityEstimate est;
    est.per_axis = std::move(tallies);
    const AxisTally* worst = nullptr;
    for (const auto& a : est.per_axis) {
        est.n_runs += a.trials;
        if (!worst || a.p_g() < worst->p_g()) {
            worst = &a;
        }
    }
    est.worst = worst->axis;
    est.R_hat = 2 * worst->p_g() - 1;
    auto [lo, hi] = wilson_interval(worst->successes, worst->trials);
    est.ci_low = 2 * lo - 1;
    est.ci_high = 2 * hi - 1;
    for (const auto& a : est.per_axis) {
        if (&a == worst) {
            continue;
        }
        double n1 = static_cast<double>(a.trials);
        double n2 = static_cast<double>(worst->trials);
        double s = std::sqrt(a.p_g() * (1 - a.p_g()) / n1 + worst->p_g() * (1 - worst->p_g()) / n2);
        if (a.p_g() - worst->p_g() <= 2 * s) {
            est.near_tie = true;
        }
    }
    return est;
}

struct RunOptions {
    unsigned threads = 1;
    /// Called with (trials done, trials total), serialized.
    std::function<void(std::uint64_t, std::uint64_t)> progress;
};

/// Integrity estimate of one channel, Bob stepping in at `stop` (default: full duration).
///
/// Trials are split evenly over the axes; the split and every trial's randomness depend only on
/// the config, so the result is the same for any thread count.
inline IntegrityEstimate estimate_integrity(const Experiment& exp, const RunOptions& opts = {},
                                            std::optional<double> stop = std::nullopt) {
    const auto& axes = exp.axes();
    const std::uint64_t n = exp.config().n_runs;
    struct Block {
        std::size_t axis;
        std::uint64_t begin, end;
    };
    constexpr std::uint64_t kBlock = 2048;
    std::vector<Block> blocks;
    std::vector<AxisTally> tallies;
    for (std::size_t i = 0; i < axes.size(); ++i) {
        std::uint64_t share = n / axes.size() + (i < n % axes.size() ? 1 : 0);
        tallies.push_back({axes[i], 0, share});
        for (std::uint64_t b = 0; b < share; b += kBlock) {
            blocks.push_back({i, b, std::min(share, b + kBlock)});
        }
    }
    std::vector<std::uint64_t> result(blocks.size(), 0);
    std::atomic<std::size_t> next{0};
    std::atomic<std::uint64_t> done{0};
    std::mutex progress_mu;
    auto worker = [&] {
        for (;;) {
            std::size_t b = next.fetch_add(1);
            if (b >= blocks.size()) {
                return;
            }
            const Block& blk = blocks[b];
            result[b] = exp.run_block(axes[blk.axis], blk.begin, blk.end, stop);
            std::uint64_t d = done.fetch_add(blk.end - blk.begin) + (blk.end - blk.begin);
            if (opts.progress) {
                std::lock_guard<std::mutex> lock(progress_mu);
                opts.progress(d, n);
            }
        }
    };
    unsigned threads = std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(blocks.size())));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < threads; ++i) {
            pool.emplace_back(worker);
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        tallies[blocks[b].axis].successes += result[b];
    }
    return summarize(std::move(tallies));
}

inline IntegrityEstimate estimate_integrity(const ExperimentConfig& cfg, const RunOptions& opts = {}) {
    return estimate_integrity(Experiment(cfg), opts);
}

/// Integrity if Bob stepped in at each grid time. Each point uses its own truncated trajectories.
inline std::vector<std::pair<double, IntegrityEstimate>> interruption_sweep(const ExperimentConfig& cfg,
                                                                            const std::vector<double>& grid,
                                                                            const RunOptions& opts = {}) {
    Experiment exp(cfg);
    std::vector<std::pair<double, IntegrityEstimate>> out;
    for (double t : grid) {
        if (!(t >= 0) || t > cfg.duration() + 1e-12) {
            throw ConfigError("grid: interruption times must lie in [0, tau]");
        }
        out.emplace_back(t, estimate_integrity(exp, opts, t));
    }
    return out;
}

// Milestones ---------------------------------------------------------------------------------

enum class Verdict : std::uint8_t { Met, NotMet, Inconclusive };

inline const char* verdict_label(Verdict v) {
    switch (v) {
        case Verdict::Met:
            return "met";
        case Verdict::NotMet:
            return "not-met";
        case Verdict::Inconclusive:
            return "inconclusive";
    }
    return "?";
}

struct MilestoneResult {
    Verdict verdict = Verdict::Inconclusive;
    std::optional<double> witness_tau;
    std::optional<int> witness_m;
    std::string detail;
};

struct MilestoneReport {
    MilestoneResult m1, m2, m3, m4;
};

/// Grid of integrity estimates: theta[i] for the bare qubit at tau_grid[i], phi[m][i] for m cycles.
struct MilestoneData {
    std::vector<double> tau_grid;
    std::vector<IntegrityEstimate> theta;
    std::vector<std::vector<IntegrityEstimate>> phi;
};

namespace detail {

/// z-score of a - b.
inline double gap_z(const IntegrityEstimate& a, const IntegrityEstimate& b) {
    double s = std::hypot(a.sigma(), b.sigma());
    return s > 0 ? (a.R_hat - b.R_hat) / s : (a.R_hat > b.R_hat ? INFINITY : -INFINITY);
}

/// "Met" needs some significant positive gap; "not-met" needs no positive point estimate at all.
inline MilestoneResult exists_gap(const std::vector<std::tuple<double, int, double, double>>& gaps) {
    MilestoneResult r;
    bool any_positive = false;
    for (auto [tau, m, diff, z] : gaps) {
        any_positive = any_positive || diff > 0;
        if (z > kZ95) {
            r.verdict = Verdict::Met;
            r.witness_tau = tau;
            r.witness_m = m;
            return r;
        }
    }
    r.verdict = any_positive ? Verdict::Inconclusive : Verdict::NotMet;
    return r;
}

}  // namespace detail

/// Verdicts for M1 (one cycle beats none), M2 (m cycles beat m - 1), M3 (some encoded memory
/// beats the bare qubit) and M4 (for every tau > 0 some m beats the bare qubit).
inline MilestoneReport evaluate_milestones(const MilestoneData& d) {
    if (d.theta.size() != d.tau_grid.size() || d.phi.size() < 2) {
        throw ConfigError("family: needs the bare qubit and at least m = 0 and m = 1");
    }
    for (const auto& row : d.phi) {
        if (row.size() != d.tau_grid.size()) {
            throw ConfigError("family: every member needs the full tau grid");
        }
    }
    using Gap = std::tuple<double, int, double, double>;
    MilestoneReport rep;
    std::vector<Gap> g1, g2, g3;
    for (std::size_t i = 0; i < d.tau_grid.size(); ++i) {
        const double tau = d.tau_grid[i];
        g1.emplace_back(tau, 1, d.phi[1][i].R_hat - d.phi[0][i].R_hat, detail::gap_z(d.phi[1][i], d.phi[0][i]));
        for (std::size_t m = 2; m < d.phi.size(); ++m) {
            g2.emplace_back(tau, static_cast<int>(m), d.phi[m][i].R_hat - d.phi[m - 1][i].R_hat,
                            detail::gap_z(d.phi[m][i], d.phi[m - 1][i]));
        }
        for (std::size_t m = 1; m < d.phi.size(); ++m) {
            g3.emplace_back(tau, static_cast<int>(m), d.phi[m][i].R_hat - d.theta[i].R_hat,
                            detail::gap_z(d.phi[m][i], d.theta[i]));
        }
    }
    rep.m1 = detail::exists_gap(g1);
    if (d.phi.size() >= 3) {
        rep.m2 = detail::exists_gap(g2);
    } else {
        rep.m2.detail = "family has no m >= 2";
    }
    rep.m3 = detail::exists_gap(g3);

    // M4: every tau > 0 needs a significantly better encoded memory.
    bool all_met = true;
    bool refuted = false;
    std::size_t points = 0;
    for (std::size_t i = 0; i < d.tau_grid.size(); ++i) {
        if (d.tau_grid[i] <= 0) {
            continue;
        }
        ++points;
        double best_z = -INFINITY;
        double best_diff = -INFINITY;
        for (std::size_t m = 0; m < d.phi.size(); ++m) {
            best_z = std::max(best_z, detail::gap_z(d.phi[m][i], d.theta[i]));
            best_diff = std::max(best_diff, d.phi[m][i].R_hat - d.theta[i].R_hat);
        }
        if (best_z <= kZ95) {
            all_met = false;
            if (best_z < -kZ95 && !refuted) {
                refuted = true;
                rep.m4.witness_tau = d.tau_grid[i];
                rep.m4.detail = "bare qubit better by " + std::to_string(-best_diff);
            }
        }
    }
    if (points == 0) {
        rep.m4.detail = "grid has no tau > 0";
    } else if (refuted) {
        rep.m4.verdict = Verdict::NotMet;
    } else if (all_met) {
        rep.m4.verdict = Verdict::Met;
    }
    return rep;
}

/// Runs the bare qubit and m = 0..max_m for every grid tau; `base` supplies everything else.
inline MilestoneData run_milestone_family(const ExperimentConfig& base, int max_m, const std::vector<double>& tau_grid,
                                          const RunOptions& opts = {}) {
    if (base.physical()) {
        throw ConfigError("code: milestone families need an encoded memory");
    }
    if (max_m < 1) {
        throw ConfigError("max_m: must be >= 1");
    }
    if (tau_grid.empty()) {
        throw ConfigError("tau_grid: must not be empty");
    }
    MilestoneData d;
    d.tau_grid = tau_grid;
    d.phi.resize(static_cast<std::size_t>(max_m) + 1);
    for (double tau : tau_grid) {
        ExperimentConfig theta = base;
        theta.code.reset();
        theta.m = 0;
        theta.tau = tau;
        theta.alice = theta.bob = EndpointStyle::Ideal;
        theta.axes.clear();
        d.theta.push_back(estimate_integrity(theta, opts));
        for (int m = 0; m <= max_m; ++m) {
            ExperimentConfig phi = base;
            phi.m = m;
            phi.tau = tau;
            d.phi[static_cast<std::size_t>(m)].push_back(estimate_integrity(phi, opts));
        }
    }
    return d;
}

}  // namespace qmem
