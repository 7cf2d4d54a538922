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

// JSON experiment documents (schema "qmem/1") and fixed-format CSV output.

#pragma once

#include <cstdio>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "qmem/protocol.hpp"

namespace qmem {

inline constexpr const char* kSchema = "qmem/1";

/// A parsed document: channels with their settings merged over the defaults, plus grids.
struct Document {
    std::vector<ExperimentConfig> channels;
    std::vector<double> tau_grid;
    std::vector<double> interrupt_grid;
    /// Optional error-rate sweep; each point overrides the channel's p_e.
    std::vector<double> p_e_grid;
    int max_m = -1;
    nlohmann::json source;
};

namespace detail {

inline const std::set<std::string>& channel_keys() {
    static const std::set<std::string> kKeys{"label", "code", "tau", "m", "ec_style", "p_e", "T", "env", "cz",
                                             "noisy_correction", "alice_style", "bob_style", "axes", "alpha",
                                             "delta", "n_runs", "seed"};
    return kKeys;
}

inline const std::set<std::string>& document_keys() {
    static const std::set<std::string> kKeys{"schema", "description", "defaults", "channels", "tau_grid",
                                             "interrupt_grid", "p_e_grid", "max_m"};
    return kKeys;
}

template <class T>
T get_as(const nlohmann::json& v, const std::string& key) {
    try {
        return v.get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(key + ": wrong type (" + v.dump() + ")");
    }
}

inline double get_number(const nlohmann::json& v, const std::string& key) {
    if (!v.is_number()) {
        throw ConfigError(key + ": expected a number, got " + v.dump());
    }
    return v.get<double>();
}

inline std::uint64_t get_count(const nlohmann::json& v, const std::string& key) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
        throw ConfigError(key + ": expected a non-negative integer, got " + v.dump());
    }
    return v.get<std::uint64_t>();
}

inline void apply_channel_key(ExperimentConfig& c, const std::string& key, const nlohmann::json& v) {
    if (key == "label") {
        c.label = get_as<std::string>(v, key);
    } else if (key == "code") {
        auto s = get_as<std::string>(v, key);
        if (s == "physical_qubit") {
            c.code.reset();
        } else if (auto name = parse_code_name(s)) {
            c.code = *name;
        } else {
            throw ConfigError("code: unknown code '" + s + "' (valid: five, steane, surface9, physical_qubit)");
        }
    } else if (key == "tau") {
        c.tau = get_number(v, key);
    } else if (key == "m") {
        if (!v.is_number_integer()) {
            throw ConfigError("m: expected an integer, got " + v.dump());
        }
        c.m = v.get<int>();
    } else if (key == "ec_style") {
        auto s = get_as<std::string>(v, key);
        auto st = parse_ec_style(s);
        if (!st) {
            throw ConfigError("ec_style: unknown style '" + s + "' (valid: " + kValidEcStyles + ")");
        }
        c.ec_style = *st;
    } else if (key == "p_e") {
        c.noise.p_e = get_number(v, key);
    } else if (key == "T") {
        c.noise.T = get_number(v, key);
    } else if (key == "env") {
        auto s = get_as<std::string>(v, key);
        auto e = parse_env_kind(s);
        if (!e) {
            throw ConfigError("env: unknown environment '" + s + "' (valid: depolarizing, dephasing)");
        }
        c.noise.env = *e;
    } else if (key == "cz") {
        auto s = get_as<std::string>(v, key);
        if (s == "native") {
            c.ec.cz = CzRealization::Native;
        } else if (s == "basis_change") {
            c.ec.cz = CzRealization::BasisChange;
        } else {
            throw ConfigError("cz: unknown realization '" + s + "' (valid: native, basis_change)");
        }
    } else if (key == "noisy_correction") {
        if (!v.is_boolean()) {
            throw ConfigError("noisy_correction: expected true or false");
        }
        c.ec.noisy_correction = v.get<bool>();
    } else if (key == "alice_style" || key == "bob_style") {
        auto s = get_as<std::string>(v, key);
        auto st = parse_endpoint_style(s);
        if (!st) {
            throw ConfigError(key + ": unknown style '" + s + "' (valid: " + kValidEndpointStyles + ")");
        }
        (key == "alice_style" ? c.alice : c.bob) = *st;
    } else if (key == "axes") {
        if (!v.is_array()) {
            throw ConfigError("axes: expected an array such as [\"X\", \"Z\"]");
        }
        c.axes.clear();
        for (const auto& a : v) {
            auto s = get_as<std::string>(a, key);
            if (s == "X") {
                c.axes.push_back(PauliAxis::X);
            } else if (s == "Y") {
                c.axes.push_back(PauliAxis::Y);
            } else if (s == "Z") {
                c.axes.push_back(PauliAxis::Z);
            } else {
                throw ConfigError("axes: unknown axis '" + s + "' (valid: X, Y, Z)");
            }
        }
    } else if (key == "alpha") {
        c.alpha = get_number(v, key);
    } else if (key == "delta") {
        c.delta = get_number(v, key);
    } else if (key == "n_runs") {
        c.n_runs = get_count(v, key);
    } else if (key == "seed") {
        c.seed = get_count(v, key);
    } else {
        throw ConfigError(key + ": unknown key");
    }
}

inline void apply_channel_object(ExperimentConfig& c, const nlohmann::json& obj) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!channel_keys().count(it.key())) {
            throw ConfigError(it.key() + ": unknown key");
        }
        apply_channel_key(c, it.key(), it.value());
    }
}

/// An array of numbers, or {"start", "stop", "points"} for an inclusive linear grid.
inline std::vector<double> parse_grid(const nlohmann::json& v, const std::string& key) {
    std::vector<double> out;
    if (v.is_array()) {
        for (const auto& x : v) {
            out.push_back(get_number(x, key));
        }
        return out;
    }
    if (!v.is_object() || !v.contains("start") || !v.contains("stop") || !v.contains("points")) {
        throw ConfigError(key + ": expected an array or {\"start\", \"stop\", \"points\"}");
    }
    double a = get_number(v["start"], key);
    double b = get_number(v["stop"], key);
    auto n = get_count(v["points"], key);
    if (n == 0) {
        throw ConfigError(key + ": points must be positive");
    }
    for (std::uint64_t i = 0; i < n; ++i) {
        out.push_back(n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    return out;
}

}  // namespace detail

/// Parses and validates a document. Errors name the offending key.
inline Document parse_document(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw ConfigError("schema: the document must be a JSON object");
    }
    if (!j.contains("schema") || j["schema"] != kSchema) {
        throw ConfigError(std::string("schema: expected \"") + kSchema + "\"");
    }
    Document doc;
    doc.source = j;
    ExperimentConfig defaults;
    defaults.code = CodeName::Five;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (detail::document_keys().count(it.key())) {
            continue;
        }
        if (!detail::channel_keys().count(it.key())) {
            throw ConfigError(it.key() + ": unknown key");
        }
        detail::apply_channel_key(defaults, it.key(), it.value());
    }
    if (j.contains("defaults")) {
        if (!j["defaults"].is_object()) {
            throw ConfigError("defaults: expected an object");
        }
        detail::apply_channel_object(defaults, j["defaults"]);
    }
    if (j.contains("channels")) {
        if (!j["channels"].is_array()) {
            throw ConfigError("channels: expected an array");
        }
        for (std::size_t i = 0; i < j["channels"].size(); ++i) {
            const auto& ch = j["channels"][i];
            if (!ch.is_object()) {
                throw ConfigError("channels: entry " + std::to_string(i) + " is not an object");
            }
            ExperimentConfig c = defaults;
            detail::apply_channel_object(c, ch);
            if (c.label.empty()) {
                c.label = "channel" + std::to_string(i);
            }
            doc.channels.push_back(std::move(c));
        }
    } else {
        if (defaults.label.empty()) {
            defaults.label = "channel0";
        }
        doc.channels.push_back(defaults);
    }
    if (j.contains("tau_grid")) {
        doc.tau_grid = detail::parse_grid(j["tau_grid"], "tau_grid");
    }
    if (j.contains("interrupt_grid")) {
        doc.interrupt_grid = detail::parse_grid(j["interrupt_grid"], "interrupt_grid");
    }
    if (j.contains("p_e_grid")) {
        doc.p_e_grid = detail::parse_grid(j["p_e_grid"], "p_e_grid");
    }
    if (j.contains("max_m")) {
        if (!j["max_m"].is_number_integer()) {
            throw ConfigError("max_m: expected an integer");
        }
        doc.max_m = j["max_m"].get<int>();
    }
    for (const auto& c : doc.channels) {
        try {
            c.validate();
            for (double tau : doc.tau_grid) {
                ExperimentConfig probe = c;
                probe.tau = tau;
                probe.validate();
            }
            for (double p : doc.p_e_grid) {
                ExperimentConfig probe = c;
                probe.noise.p_e = p;
                probe.validate();
            }
        } catch (const ConfigError& e) {
            throw ConfigError(std::string(e.what()) + " (channel '" + c.label + "')");
        }
    }
    return doc;
}

inline Document parse_document_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("schema: not valid JSON: ") + e.what());
    }
    return parse_document(j);
}

/// Fixed float formatting for CSV and JSON text: 17 significant digits.
inline std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// 64-bit FNV-1a of a canonical dump; identifies the config behind a result file.
inline std::string config_hash(const nlohmann::json& j) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : j.dump()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline const char* kIntegrityCsvHeader = "channel_label,tau_over_T,R_hat,ci_low,ci_high,n_runs,seed,p_e";

inline std::string integrity_csv_row(const ExperimentConfig& c, double tau, const IntegrityEstimate& e) {
    return c.label + "," + format_double(tau) + "," + format_double(e.R_hat) + "," + format_double(e.ci_low) + "," +
           format_double(e.ci_high) + "," + std::to_string(e.n_runs) + "," + std::to_string(c.seed) + "," +
           format_double(c.noise.p_e);
}

inline nlohmann::json estimate_json(const IntegrityEstimate& e) {
    nlohmann::json per = nlohmann::json::object();
    for (const auto& a : e.per_axis) {
        per[std::string(1, axis_char(a.axis))] = {
            {"successes", a.successes}, {"trials", a.trials}, {"p_g", a.p_g()}};
    }
    return {{"R_hat", e.R_hat},
            {"ci_low", e.ci_low},
            {"ci_high", e.ci_high},
            {"worst_axis", std::string(1, axis_char(e.worst))},
            {"near_tie", e.near_tie},
            {"n_runs", e.n_runs},
            {"per_axis", per}};
}

inline nlohmann::json milestone_json(const MilestoneResult& r) {
    nlohmann::json j{{"verdict", verdict_label(r.verdict)}};
    if (r.witness_tau) {
        j["witness_tau"] = *r.witness_tau;
    }
    if (r.witness_m) {
        j["witness_m"] = *r.witness_m;
    }
    if (!r.detail.empty()) {
        j["detail"] = r.detail;
    }
    return j;
}

}  // namespace qmem
