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

// State preparation (Alice) and readout (Bob), either ideal or built from noisy elements.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "qmem/circuit.hpp"
#include "qmem/codes.hpp"
#include "qmem/ec_cycles.hpp"
#include "qmem/noise.hpp"

namespace qmem {

enum class EndpointStyle : std::uint8_t { Ideal, NoisyFT, NoisyNonFT };

inline const char* endpoint_style_label(EndpointStyle s) {
    switch (s) {
        case EndpointStyle::Ideal:
            return "ideal";
        case EndpointStyle::NoisyFT:
            return "noisy_ft";
        case EndpointStyle::NoisyNonFT:
            return "noisy_non_ft";
    }
    return "?";
}

inline constexpr const char* kValidEndpointStyles = "ideal, noisy_ft, noisy_non_ft";

inline std::optional<EndpointStyle> parse_endpoint_style(std::string_view s) {
    for (auto st : {EndpointStyle::Ideal, EndpointStyle::NoisyFT, EndpointStyle::NoisyNonFT}) {
        if (s == endpoint_style_label(st)) {
            return st;
        }
    }
    return std::nullopt;
}

/// Noisy endpoints exist only for the Steane code in Z and the five-qubit code in X.
inline bool endpoint_supports(EndpointStyle style, CodeName code, PauliAxis axis) {
    switch (style) {
        case EndpointStyle::Ideal:
            return true;
        case EndpointStyle::NoisyFT:
            return code == CodeName::Steane && axis == PauliAxis::Z;
        case EndpointStyle::NoisyNonFT:
            return code == CodeName::Five && axis == PauliAxis::X;
    }
    return false;
}

/// Extra register qubits an endpoint needs beyond the data block.
inline std::uint32_t endpoint_ancillas(EndpointStyle style) {
    return style == EndpointStyle::NoisyFT ? 1 : 0;
}

namespace detail {

inline void append_cz(NoisyCircuit& c, std::uint32_t a, std::uint32_t b, CzRealization cz) {
    if (cz == CzRealization::Native) {
        c.push_back(Element::gate2(GateKind::CZ, a, b));
        return;
    }
    c.push_back(Element::gate1(GateKind::H, b));
    c.push_back(Element::gate2(GateKind::CX, a, b));
    c.push_back(Element::gate1(GateKind::H, b));
}

/// Ring graph state on five qubits from X-basis preparations; qubit q starts in |-> when bit q of
/// `minus_mask` is set.
inline NoisyCircuit five_ring_encoder(std::uint32_t minus_mask, CzRealization cz) {
    NoisyCircuit c;
    for (std::uint32_t q = 0; q < 5; ++q) {
        c.push_back(Element::prep(q, PauliAxis::X, (minus_mask >> q) & 1));
    }
    for (std::uint32_t q = 0; q < 5; ++q) {
        append_cz(c, q, (q + 1) % 5, cz);
    }
    return c;
}

/// Noisy |+_L> (sign > 0) or |-_L> encoder for the five-qubit code.
inline const NoisyCircuit& five_plus_encoder(int sign, CzRealization cz) {
    static const auto kCircuits = [] {
        const CodeSpec& code = five_qubit_code();
        std::array<NoisyCircuit, 4> out;
        for (int s : {1, -1}) {
            for (auto r : {CzRealization::Native, CzRealization::BasisChange}) {
                for (std::uint32_t mask = 0; mask < 32; ++mask) {
                    NoisyCircuit c = five_ring_encoder(mask, r);
                    StabilizerTableau t(5);
                    NoFaults none;
                    RandomStream rng(0);
                    Outcomes unused;
                    execute(c, t, none, rng, unused);
                    bool ok = t.peek(code.logical_x) == s;
                    for (const auto& g : code.stabilizers) {
                        ok = ok && t.peek(g) == 1;
                    }
                    if (ok) {
                        out[(s < 0 ? 2 : 0) + (r == CzRealization::Native ? 0 : 1)] = c;
                        break;
                    }
                }
            }
        }
        return out;
    }();
    return kCircuits[(sign < 0 ? 2 : 0) + (cz == CzRealization::Native ? 0 : 1)];
}

/// Weight-3 representative of the five-qubit logical X with its sign.
inline const PauliString& five_short_logical_x() {
    static const PauliString kRep = [] {
        const CodeSpec& code = five_qubit_code();
        std::optional<PauliString> best;
        for (std::uint32_t mask = 0; mask < (1u << code.num_checks()); ++mask) {
            PauliString p = code.logical_x;
            for (std::uint32_t i = 0; i < code.num_checks(); ++i) {
                if ((mask >> i) & 1) {
                    p = p * code.stabilizers[i];
                }
            }
            if (!best || p.weight() < best->weight()) {
                best = p;
            }
        }
        return *best;
    }();
    return kRep;
}

/// Qubits whose Z product is the Steane logical Z checked by the verification ancilla.
inline constexpr std::array<std::uint32_t, 3> kSteaneVerifySupport{2, 3, 6};
/// Qubits carrying a weight-3 logical X used to turn |0_L> into |1_L>.
inline constexpr std::array<std::uint32_t, 3> kSteaneFlipSupport{0, 1, 2};

/// Noisy |0_L> encoder for the Steane code followed by the verification ancilla at `anc`.
///
/// The last two CX gates are ordered so that every single fault leaving a weight-2 X error also
/// flips the verification.
inline NoisyCircuit steane_zero_encoder(std::uint32_t anc) {
    NoisyCircuit c;
    for (std::uint32_t q = 0; q < 7; ++q) {
        c.push_back(Element::prep(q, q == 0 || q == 1 || q == 3 ? PauliAxis::X : PauliAxis::Z));
    }
    static constexpr std::uint32_t kTargets[3][3] = {{2, 4, 6}, {2, 5, 6}, {4, 6, 5}};
    static constexpr std::uint32_t kPivots[3] = {0, 1, 3};
    for (int i = 0; i < 3; ++i) {
        for (auto t : kTargets[i]) {
            c.push_back(Element::gate2(GateKind::CX, kPivots[i], t));
        }
    }
    c.push_back(Element::prep(anc));
    for (auto q : kSteaneVerifySupport) {
        c.push_back(Element::gate2(GateKind::CX, q, anc));
    }
    c.push_back(Element::meas(anc));
    return c;
}

}  // namespace detail

/// Prepares the `sign` eigenstate of the logical `axis` operator on data qubits [0, n).
///
/// The register is overwritten. Returns the number of rejected noisy encodings.
template <class Faults>
std::uint32_t alice_prepare(EndpointStyle style, const CodeSpec& code, PauliAxis axis, int sign,
                            StabilizerTableau& t, Faults& faults, RandomStream& rng,
                            CzRealization cz = CzRealization::Native) {
    if (!endpoint_supports(style, code.name, axis)) {
        throw ConfigError(std::string("alice_style: ") + endpoint_style_label(style) + " cannot prepare " +
                          axis_char(axis) + " states of the " + code_label(code.name) + " code");
    }
    const std::uint32_t nq = t.num_qubits();
    if (nq < code.n + endpoint_ancillas(style)) {
        throw ConfigError("register too small for endpoint");
    }
    t = StabilizerTableau(nq);
    switch (style) {
        case EndpointStyle::Ideal:
            t.apply(axis_eigenstate_prep(0, axis, sign));
            t.apply(code.encoder);
            return 0;
        case EndpointStyle::NoisyNonFT: {
            Outcomes unused;
            execute(detail::five_plus_encoder(sign, cz), t, faults, rng, unused);
            return 0;
        }
        case EndpointStyle::NoisyFT: {
            static const NoisyCircuit kEncoder = detail::steane_zero_encoder(7);
            Outcomes bits;
            std::uint32_t rejected = 0;
            for (;;) {
                bits.clear();
                execute(kEncoder, t, faults, rng, bits);
                if (!bits.back()) {
                    break;
                }
                if (++rejected >= 100000) {
                    throw ConfigError("p_e: state verification never succeeded");
                }
            }
            if (sign < 0) {
                for (auto q : detail::kSteaneFlipSupport) {
                    execute(Element::gate1(GateKind::X, q), t, faults, rng);
                }
            }
            return rejected;
        }
    }
    return 0;
}

/// Bob's guess (+1 or -1) of the sign Alice prepared along `axis`.
template <class Faults>
int bob_guess(EndpointStyle style, const CodeSpec& code, StabilizerTableau& t, PauliAxis axis, Faults& faults,
              RandomStream& rng) {
    if (!endpoint_supports(style, code.name, axis)) {
        throw ConfigError(std::string("bob_style: ") + endpoint_style_label(style) + " cannot measure " +
                          axis_char(axis) + " for the " + code_label(code.name) + " code");
    }
    switch (style) {
        case EndpointStyle::Ideal:
            return ideal_correct_and_decode(code, t, axis, rng);
        case EndpointStyle::NoisyNonFT: {
            const PauliString& rep = detail::five_short_logical_x();
            int parity = 0;
            for (std::uint32_t q = 0; q < rep.n; ++q) {
                int c = rep.component(q);
                if (c) {
                    parity ^= execute(Element::meas(q, static_cast<PauliAxis>(c - 1)), t, faults, rng);
                }
            }
            return parity ? -rep.sign() : rep.sign();
        }
        case EndpointStyle::NoisyFT: {
            std::uint32_t bits = 0;
            for (std::uint32_t q = 0; q < code.n; ++q) {
                if (execute(Element::meas(q), t, faults, rng)) {
                    bits |= 1u << q;
                }
            }
            // Z-check parities locate a single flipped bit.
            std::uint32_t syndrome = 0;
            for (std::uint32_t i = 0; i < code.num_checks(); ++i) {
                const auto& g = code.stabilizers[i];
                if (g.x == 0 && (std::popcount(g.z & bits) & 1)) {
                    syndrome |= 1u << i;
                }
            }
            if (syndrome) {
                for (std::uint32_t q = 0; q < code.n; ++q) {
                    if (code.syndrome_of(PauliString::single(code.n, q, PauliAxis::X)) == syndrome) {
                        bits ^= 1u << q;
                        break;
                    }
                }
            }
            return (std::popcount(bits & static_cast<std::uint32_t>(code.logical_z.z)) & 1) ? -1 : 1;
        }
    }
    return 1;
}

}  // namespace qmem
