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

// The three distance-3 codes: stabilizers, logical operators, encoders and lookup decoders.
// Syndrome bit i is the outcome of stabilizer i in list order (1 = anticommutes).

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qmem/clifford.hpp"
#include "qmem/pauli.hpp"
#include "qmem/rng.hpp"
#include "qmem/synthesis.hpp"
#include "qmem/tableau.hpp"

namespace qmem {

enum class CodeName : std::uint8_t { Five, Steane, Surface9 };

inline const char* code_label(CodeName c) {
    static constexpr const char* kLabels[] = {"five", "steane", "surface9"};
    return kLabels[static_cast<int>(c)];
}

/// Type of a stabilizer: pure X, pure Z, or mixed.
enum class CheckType : std::uint8_t { X, Z, Mixed };

struct CodeSpec {
    CodeName name = CodeName::Five;
    std::uint32_t n = 0;
    std::vector<PauliString> stabilizers;
    PauliString logical_x;
    PauliString logical_z;
    /// Maps (qubit-0 state) (x) |0...0> to the encoded state.
    Circuit encoder;
    /// Correction indexed by syndrome.
    std::vector<PauliString> syndrome_table;
    bool css = false;

    std::uint32_t num_checks() const {
        return static_cast<std::uint32_t>(stabilizers.size());
    }

    CheckType check_type(std::uint32_t i) const {
        const auto& s = stabilizers[i];
        if (s.z == 0) {
            return CheckType::X;
        }
        if (s.x == 0) {
            return CheckType::Z;
        }
        return CheckType::Mixed;
    }

    PauliString logical(PauliAxis axis) const {
        switch (axis) {
            case PauliAxis::X:
                return logical_x;
            case PauliAxis::Z:
                return logical_z;
            case PauliAxis::Y: {
                // Y_L = i X_L Z_L
                PauliString y = logical_x * logical_z;
                y.phase = static_cast<std::uint8_t>((y.phase + 1) & 3);
                return y;
            }
        }
        return logical_z;
    }

    std::uint32_t syndrome_of(const PauliString& e) const {
        if (e.n != n) {
            throw ConfigError("error size does not match code length");
        }
        std::uint32_t s = 0;
        for (std::uint32_t i = 0; i < stabilizers.size(); ++i) {
            if (!stabilizers[i].commutes(e)) {
                s |= 1u << i;
            }
        }
        return s;
    }

    const PauliString& correction(std::uint32_t syndrome) const {
        return syndrome_table.at(syndrome);
    }

    /// True iff e acts as a non-trivial logical operator (commutes with all stabilizers assumed).
    bool is_logical_error(const PauliString& e) const {
        return !e.commutes(logical_x) || !e.commutes(logical_z);
    }

    /// True iff lookup decoding of e leaves a non-trivial logical operator.
    bool decodes_to_logical_error(const PauliString& e) const {
        PauliString residual = e * correction(syndrome_of(e));
        return is_logical_error(residual);
    }
};

namespace detail {

inline void for_each_support(std::uint32_t n, std::uint32_t w, std::uint64_t start, std::uint32_t left,
                             std::uint64_t acc, const auto& fn) {
    if (left == 0) {
        fn(acc);
        return;
    }
    for (std::uint32_t q = static_cast<std::uint32_t>(start); q < n; ++q) {
        for_each_support(n, w, q + 1, left - 1, acc | (std::uint64_t{1} << q), fn);
    }
}

/// Calls fn on every Pauli of exactly weight w whose components are drawn from `types`
/// (1=X, 2=Y, 3=Z), in increasing support order then type order.
inline void for_each_pauli_of_weight(std::uint32_t n, std::uint32_t w, const std::vector<int>& types,
                                     const auto& fn) {
    for_each_support(n, w, 0, w, 0, [&](std::uint64_t support) {
        std::vector<std::uint32_t> qs;
        for (std::uint32_t q = 0; q < n; ++q) {
            if ((support >> q) & 1) {
                qs.push_back(q);
            }
        }
        std::uint64_t combos = 1;
        for (std::uint32_t i = 0; i < w; ++i) {
            combos *= types.size();
        }
        for (std::uint64_t c = 0; c < combos; ++c) {
            PauliString p(n);
            std::uint64_t rest = c;
            for (std::uint32_t i = w; i-- > 0;) {
                int t = types[rest % types.size()];
                rest /= types.size();
                std::uint64_t bit = std::uint64_t{1} << qs[i];
                if (t == 1 || t == 2) {
                    p.x |= bit;
                }
                if (t == 2 || t == 3) {
                    p.z |= bit;
                }
            }
            fn(p);
        }
    });
}

/// Minimum-weight table over errors with the given component types, keyed by the syndrome
/// restricted to `check_mask`.
inline std::vector<std::optional<PauliString>> min_weight_table(const CodeSpec& code, const std::vector<int>& types,
                                                                std::uint32_t check_mask) {
    std::vector<std::optional<PauliString>> table(std::size_t{1} << code.num_checks());
    std::size_t needed = std::size_t{1} << std::popcount(check_mask);
    std::size_t filled = 0;
    for (std::uint32_t w = 0; w <= code.n && filled < needed; ++w) {
        if (w == 0) {
            table[0] = PauliString(code.n);
            ++filled;
            continue;
        }
        for_each_pauli_of_weight(code.n, w, types, [&](const PauliString& p) {
            std::uint32_t s = code.syndrome_of(p) & check_mask;
            if (!table[s]) {
                table[s] = p;
                ++filled;
            }
        });
    }
    if (filled != needed) {
        throw ConfigError("stabilizers do not admit a complete lookup table");
    }
    return table;
}

inline void build_tables(CodeSpec& code) {
    const std::uint32_t all = (1u << code.num_checks()) - 1;
    code.syndrome_table.assign(std::size_t{1} << code.num_checks(), PauliString(code.n));
    if (!code.css) {
        auto t = min_weight_table(code, {1, 2, 3}, all);
        for (std::size_t s = 0; s < t.size(); ++s) {
            code.syndrome_table[s] = *t[s];
        }
        return;
    }
    // CSS: X errors are seen only by Z checks and vice versa, so decode the two halves apart.
    std::uint32_t zmask = 0;
    std::uint32_t xmask = 0;
    for (std::uint32_t i = 0; i < code.num_checks(); ++i) {
        if (code.check_type(i) == CheckType::Z) {
            zmask |= 1u << i;
        } else {
            xmask |= 1u << i;
        }
    }
    auto xt = min_weight_table(code, {1}, zmask);
    auto zt = min_weight_table(code, {3}, xmask);
    for (std::uint32_t s = 0; s <= all; ++s) {
        code.syndrome_table[s] = *xt[s & zmask] * *zt[s & xmask];
    }
}

inline Circuit build_encoder(const CodeSpec& code) {
    std::vector<PauliString> zs{code.logical_z};
    for (const auto& s : code.stabilizers) {
        zs.push_back(s);
    }
    std::vector<std::optional<PauliString>> xs(code.n);
    xs[0] = code.logical_x;
    return synthesize_clifford(complete_x_images(zs, xs), zs);
}

inline CodeSpec make_code(CodeName name, std::uint32_t n, const std::vector<std::string_view>& stabs,
                          std::string_view lx, std::string_view lz) {
    CodeSpec c;
    c.name = name;
    c.n = n;
    for (auto s : stabs) {
        c.stabilizers.push_back(PauliString::parse(s));
    }
    c.logical_x = PauliString::parse(lx);
    c.logical_z = PauliString::parse(lz);
    c.css = true;
    for (std::uint32_t i = 0; i < c.num_checks(); ++i) {
        if (c.check_type(i) == CheckType::Mixed) {
            c.css = false;
        }
    }
    c.encoder = build_encoder(c);
    build_tables(c);
    return c;
}

}  // namespace detail

inline const CodeSpec& five_qubit_code() {
    static const CodeSpec kCode = detail::make_code(CodeName::Five, 5, {"XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"},
                                                    "XXXXX", "ZZZZZ");
    return kCode;
}

/// Qubit k here is qubit k+1 of the usual Hamming labelling.
inline const CodeSpec& steane_code() {
    static const CodeSpec kCode =
        detail::make_code(CodeName::Steane, 7, {"XIXIXIX", "IXXIIXX", "IIIXXXX", "ZIZIZIZ", "IZZIIZZ", "IIIZZZZ"},
                          "XXXXXXX", "ZZZZZZZ");
    return kCode;
}

/// Rotated distance-3 surface code on a 3x3 grid, qubit = 3 * row + col.
inline const CodeSpec& surface9_code() {
    static const CodeSpec kCode = detail::make_code(
        CodeName::Surface9, 9,
        {"XXIXXIIII", "IIIIXXIXX", "IXXIIIIII", "IIIIIIXXI", "IZZIZZIII", "IIIZZIZZI", "ZIIZIIIII", "IIIIIZIIZ"},
        "XIIXIIXII", "ZZZIIIIII");
    return kCode;
}

inline const CodeSpec& code_by_name(CodeName name) {
    switch (name) {
        case CodeName::Five:
            return five_qubit_code();
        case CodeName::Steane:
            return steane_code();
        case CodeName::Surface9:
            return surface9_code();
    }
    return five_qubit_code();
}

inline std::optional<CodeName> parse_code_name(std::string_view s) {
    if (s == "five") {
        return CodeName::Five;
    }
    if (s == "steane") {
        return CodeName::Steane;
    }
    if (s == "surface9") {
        return CodeName::Surface9;
    }
    return std::nullopt;
}

/// Gates preparing the `sign` eigenstate of `axis` on qubit q from |0>.
inline Circuit axis_eigenstate_prep(std::uint32_t q, PauliAxis axis, int sign) {
    Circuit c;
    if (sign < 0) {
        c.push_back({GateKind::X, q, 0});
    }
    if (axis != PauliAxis::Z) {
        c.push_back({GateKind::H, q, 0});
    }
    if (axis == PauliAxis::Y) {
        c.push_back({GateKind::S, q, 0});
    }
    return c;
}

/// Encoded `sign` eigenstate of the logical `axis` operator, padded with `ancillas` qubits in |0>.
inline StabilizerTableau encode_ideal(const CodeSpec& code, PauliAxis axis, int sign, std::uint32_t ancillas = 0) {
    StabilizerTableau t(code.n + ancillas);
    t.apply(axis_eigenstate_prep(0, axis, sign));
    t.apply(code.encoder);
    return t;
}

/// Noiseless syndrome measurement on the data qubits of a (possibly larger) register.
inline std::uint32_t measure_syndrome(const CodeSpec& code, StabilizerTableau& t, RandomStream& rng) {
    std::uint32_t s = 0;
    for (std::uint32_t i = 0; i < code.num_checks(); ++i) {
        if (t.measure(code.stabilizers[i].widened(t.num_qubits()), rng) < 0) {
            s |= 1u << i;
        }
    }
    return s;
}

/// Perfect correction followed by a perfect logical measurement. Returns +1 or -1.
inline int ideal_correct_and_decode(const CodeSpec& code, StabilizerTableau& t, PauliAxis axis, RandomStream& rng) {
    std::uint32_t s = measure_syndrome(code, t, rng);
    t.apply_pauli(code.correction(s).widened(t.num_qubits()));
    return t.measure(code.logical(axis).widened(t.num_qubits()), rng);
}

/// Weight-2 Paulis that lookup decoding fixes, out of 9 * C(n, 2).
inline std::size_t harmless_weight2_count(const CodeSpec& code) {
    std::size_t harmless = 0;
    detail::for_each_pauli_of_weight(code.n, 2, {1, 2, 3}, [&](const PauliString& e) {
        if (!code.decodes_to_logical_error(e)) {
            ++harmless;
        }
    });
    return harmless;
}

}  // namespace qmem
