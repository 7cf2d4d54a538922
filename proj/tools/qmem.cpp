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

// qmem: command-line driver for memory-integrity experiments.
//
//   qmem integrity    --config c.json [--exact]
//   qmem sweep        --config c.json --out r.csv
//   qmem interruption --config c.json
//   qmem milestones   --config c.json
//   qmem oracle-compare --config c.json [--require-exact]
//
// Exit codes: 0 ok, 2 config error, 3 oracle unavailable.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "qmem/config.hpp"
#include "qmem/oracle.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr std::uint64_t kFastRuns = 100000;

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> runs;
    std::optional<unsigned> threads;
    std::string out;
    bool fast = false;
    bool progress = false;
};

struct Output {
    std::string text;
    nlohmann::json results = nlohmann::json::array();
};

qmem::Document load(const Common& c) {
    std::ifstream in(c.config);
    if (!in) {
        throw qmem::ConfigError("config: cannot read '" + c.config + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    auto doc = qmem::parse_document_text(ss.str());
    for (auto& ch : doc.channels) {
        if (c.runs) {
            ch.n_runs = *c.runs;
        } else if (c.fast) {
            ch.n_runs = kFastRuns;
        }
        if (c.seed) {
            ch.seed = *c.seed;
        }
        if (ch.n_runs == 0) {
            throw qmem::ConfigError("n_runs: must be positive");
        }
    }
    return doc;
}

qmem::RunOptions run_options(const Common& c) {
    qmem::RunOptions o;
    if (c.threads) {
        o.threads = *c.threads;
    } else if (const char* env = std::getenv("QMEM_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1) {
            throw qmem::ConfigError(std::string("QMEM_THREADS: expected a positive integer, got '") + env + "'");
        }
        o.threads = static_cast<unsigned>(v);
    } else {
        o.threads = std::max(1u, std::thread::hardware_concurrency());
    }
    if (o.threads == 0) {
        throw qmem::ConfigError("threads: must be positive");
    }
    if (c.progress) {
        o.progress = [](std::uint64_t done, std::uint64_t total) {
            std::cerr << "\r" << done << "/" << total << (done == total ? "\n" : "") << std::flush;
        };
    }
    return o;
}

nlohmann::json channel_echo(const qmem::ExperimentConfig& c) {
    nlohmann::json j{{"label", c.label},
                     {"code", c.code ? qmem::code_label(*c.code) : "physical_qubit"},
                     {"tau", c.tau},
                     {"m", c.m},
                     {"ec_style", qmem::ec_style_label(c.ec_style)},
                     {"p_e", c.noise.p_e},
                     {"T", c.noise.T},
                     {"env", qmem::env_kind_label(c.noise.env)},
                     {"cz", c.ec.cz == qmem::CzRealization::Native ? "native" : "basis_change"},
                     {"noisy_correction", c.ec.noisy_correction},
                     {"alice_style", qmem::endpoint_style_label(c.alice)},
                     {"bob_style", qmem::endpoint_style_label(c.bob)},
                     {"alpha", c.alpha},
                     {"delta", c.delta},
                     {"n_runs", c.n_runs},
                     {"seed", c.seed}};
    nlohmann::json axes = nlohmann::json::array();
    for (auto a : c.active_axes()) {
        axes.push_back(std::string(1, qmem::axis_char(a)));
    }
    j["axes"] = axes;
    return j;
}

std::vector<double> or_single(const std::vector<double>& grid, double fallback) {
    return grid.empty() ? std::vector<double>{fallback} : grid;
}

Output cmd_integrity(const qmem::Document& doc, const qmem::RunOptions& opts, bool exact) {
    Output o;
    for (const auto& c : doc.channels) {
        auto e = qmem::estimate_integrity(c, opts);
        auto j = qmem::estimate_json(e);
        j["label"] = c.label;
        j["config_hash"] = qmem::config_hash(channel_echo(c));
        if (exact) {
            j["R_exact"] = qmem::exact_channel(c).R;
        }
        o.results.push_back(j);
    }
    o.text = (o.results.size() == 1 ? o.results[0] : o.results).dump(2) + "\n";
    return o;
}

Output cmd_sweep(const qmem::Document& doc, const qmem::RunOptions& opts) {
    Output o;
    o.text = std::string(qmem::kIntegrityCsvHeader) + "\n";
    for (const auto& base : doc.channels) {
        for (double p : or_single(doc.p_e_grid, base.noise.p_e)) {
            for (double tau : or_single(doc.tau_grid, base.tau)) {
                auto c = base;
                c.noise.p_e = p;
                c.tau = tau;
                auto e = qmem::estimate_integrity(c, opts);
                o.text += qmem::integrity_csv_row(c, tau, e) + "\n";
                auto j = qmem::estimate_json(e);
                j["label"] = c.label;
                j["tau"] = tau;
                j["p_e"] = p;
                j["config_hash"] = qmem::config_hash(channel_echo(c));
                o.results.push_back(j);
            }
        }
    }
    return o;
}

Output cmd_interruption(const qmem::Document& doc, const qmem::RunOptions& opts) {
    Output o;
    o.text = "channel_label,tau_over_T,interrupt_t_over_T,R_hat,ci_low,ci_high,n_runs,seed,p_e\n";
    for (const auto& c : doc.channels) {
        std::vector<double> grid = doc.interrupt_grid;
        if (grid.empty()) {
            for (int i = 0; i <= 20; ++i) {
                grid.push_back(c.duration() * i / 20.0);
            }
        }
        for (double t : grid) {
            if (!(t >= 0) || t > c.duration() + 1e-12) {
                throw qmem::ConfigError("interrupt_grid: " + qmem::format_double(t) + " lies outside [0, " +
                                        qmem::format_double(c.duration()) + "] for channel '" + c.label + "'");
            }
        }
        for (const auto& [t, e] : qmem::interruption_sweep(c, grid, opts)) {
            o.text += c.label + "," + qmem::format_double(c.tau) + "," + qmem::format_double(t) + "," +
                      qmem::format_double(e.R_hat) + "," + qmem::format_double(e.ci_low) + "," +
                      qmem::format_double(e.ci_high) + "," + std::to_string(e.n_runs) + "," + std::to_string(c.seed) +
                      "," + qmem::format_double(c.noise.p_e) + "\n";
            auto j = qmem::estimate_json(e);
            j["label"] = c.label;
            j["interrupt_t"] = t;
            j["config_hash"] = qmem::config_hash(channel_echo(c));
            o.results.push_back(j);
        }
    }
    return o;
}

Output cmd_milestones(const qmem::Document& doc, const qmem::RunOptions& opts) {
    if (doc.channels.size() != 1) {
        throw qmem::ConfigError("channels: a milestone family is built from exactly one encoded channel");
    }
    if (doc.tau_grid.empty()) {
        throw qmem::ConfigError("tau_grid: a milestone family needs a nonempty tau grid");
    }
    if (doc.max_m < 1) {
        throw qmem::ConfigError("max_m: a milestone family needs max_m >= 1");
    }
    const auto& base = doc.channels[0];
    auto data = qmem::run_milestone_family(base, doc.max_m, doc.tau_grid, opts);
    auto rep = qmem::evaluate_milestones(data);
    nlohmann::json points = nlohmann::json::array();
    for (std::size_t i = 0; i < data.tau_grid.size(); ++i) {
        nlohmann::json phi = nlohmann::json::array();
        for (const auto& row : data.phi) {
            phi.push_back(qmem::estimate_json(row[i]));
        }
        points.push_back({{"tau", data.tau_grid[i]}, {"theta", qmem::estimate_json(data.theta[i])}, {"phi", phi}});
    }
    nlohmann::json j{{"M1", qmem::verdict_label(rep.m1.verdict)},
                     {"M2", qmem::verdict_label(rep.m2.verdict)},
                     {"M3", qmem::verdict_label(rep.m3.verdict)},
                     {"M4", qmem::verdict_label(rep.m4.verdict)},
                     {"detail",
                      {{"M1", qmem::milestone_json(rep.m1)},
                       {"M2", qmem::milestone_json(rep.m2)},
                       {"M3", qmem::milestone_json(rep.m3)},
                       {"M4", qmem::milestone_json(rep.m4)}}},
                     {"label", base.label},
                     {"max_m", doc.max_m},
                     {"config_hash", qmem::config_hash(channel_echo(base))},
                     {"points", points}};
    Output o;
    o.results.push_back(j);
    o.text = j.dump(2) + "\n";
    return o;
}

Output cmd_oracle_compare(const qmem::Document& doc, const qmem::RunOptions& opts, bool require_exact) {
    Output o;
    o.text = "channel_label,tau_over_T,axis,p_g,p_B,gap,gap_sigma,R_hat,R_exact,n_runs,seed,p_e\n";
    for (const auto& base : doc.channels) {
        for (double tau : or_single(doc.tau_grid, base.tau)) {
            auto c = base;
            c.tau = tau;
            double r_exact = std::nan("");
            try {
                r_exact = qmem::exact_channel(c).R;
            } catch (const qmem::OracleUnavailable&) {
                if (require_exact) {
                    throw;
                }
            }
            auto pb = qmem::powerful_bob(c, opts);
            double r_hat = 2 * pb.worst().p_standard() - 1;
            for (const auto& a : pb.per_axis) {
                o.text += c.label + "," + qmem::format_double(tau) + "," + std::string(1, qmem::axis_char(a.axis)) +
                          "," + qmem::format_double(a.p_standard()) + "," + qmem::format_double(a.p_powerful()) +
                          "," + qmem::format_double(a.gap()) + "," + qmem::format_double(a.gap_sigma()) + "," +
                          qmem::format_double(r_hat) + "," + qmem::format_double(r_exact) + "," +
                          std::to_string(c.n_runs) + "," + std::to_string(c.seed) + "," +
                          qmem::format_double(c.noise.p_e) + "\n";
                o.results.push_back({{"label", c.label},
                                     {"tau", tau},
                                     {"axis", std::string(1, qmem::axis_char(a.axis))},
                                     {"p_g", a.p_standard()},
                                     {"p_B", a.p_powerful()},
                                     {"gap", a.gap()},
                                     {"gap_sigma", a.gap_sigma()},
                                     {"config_hash", qmem::config_hash(channel_echo(c))}});
            }
        }
    }
    return o;
}

void emit(const Common& c, const std::string& command, const qmem::Document& doc, const Output& o, double wall) {
    if (c.out.empty()) {
        std::cout << o.text;
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) {
        throw qmem::ConfigError("out: cannot write '" + c.out + "'");
    }
    f << o.text;
    nlohmann::json channels = nlohmann::json::array();
    for (const auto& ch : doc.channels) {
        channels.push_back(channel_echo(ch));
    }
    nlohmann::json manifest{{"command", command},
                            {"version", kVersion},
                            {"schema", qmem::kSchema},
                            {"config", doc.source},
                            {"config_hash", qmem::config_hash(doc.source)},
                            {"channels", channels},
                            {"seed", c.seed ? nlohmann::json(*c.seed) : nlohmann::json(doc.channels.front().seed)},
                            {"wall_seconds", wall},
                            {"results", o.results}};
    std::ofstream m(c.out + ".manifest.json", std::ios::binary);
    m << manifest.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum memory integrity experiments"};
    app.require_subcommand(1);
    Common common;
    bool exact = false;
    bool require_exact = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config, "JSON experiment document")->required();
        sub->add_option("--seed", common.seed, "Master seed (overrides the document)");
        sub->add_option("--runs", common.runs, "Trials per point (overrides the document and --fast)");
        sub->add_option("--threads", common.threads, "Worker threads (default: QMEM_THREADS, else all cores)");
        sub->add_option("--out", common.out, "Output file; a manifest is written next to it");
        sub->add_flag("--fast", common.fast, "Use 1e5 trials per point");
        sub->add_flag("--progress", common.progress, "Report progress on stderr");
    };
    auto* integrity = app.add_subcommand("integrity", "Integrity estimate as JSON");
    add_common(integrity);
    integrity->add_flag("--exact", exact, "Also compute the exact integrity (exit 3 if unreachable)");
    auto* sweep = app.add_subcommand("sweep", "Integrity over tau and p_e grids as CSV");
    add_common(sweep);
    auto* interruption = app.add_subcommand("interruption", "Integrity at interruption as CSV");
    add_common(interruption);
    auto* milestones = app.add_subcommand("milestones", "Milestone verdicts for a family as JSON");
    add_common(milestones);
    auto* oracle = app.add_subcommand("oracle-compare", "Standard vs unconstrained Bob, with the exact value");
    add_common(oracle);
    oracle->add_flag("--require-exact", require_exact, "Fail with exit 3 if the exact oracle cannot run");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        auto doc = load(common);
        auto opts = run_options(common);
        auto start = std::chrono::steady_clock::now();
        Output o;
        std::string name;
        if (integrity->parsed()) {
            name = "integrity";
            o = cmd_integrity(doc, opts, exact);
        } else if (sweep->parsed()) {
            name = "sweep";
            o = cmd_sweep(doc, opts);
        } else if (interruption->parsed()) {
            name = "interruption";
            o = cmd_interruption(doc, opts);
        } else if (milestones->parsed()) {
            name = "milestones";
            o = cmd_milestones(doc, opts);
        } else {
            name = "oracle-compare";
            o = cmd_oracle_compare(doc, opts, require_exact);
        }
        double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        emit(common, name, doc, o, wall);
    } catch (const qmem::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const qmem::OracleUnavailable& e) {
        std::cerr << "oracle unavailable: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
