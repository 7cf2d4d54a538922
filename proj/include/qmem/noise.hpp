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

// Pauli noise: environmental decoherence on idle qubits and faults on circuit elements.

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qmem/pauli.hpp"
#include "qmem/rng.hpp"
#include "qmem/tableau.hpp"

namespace qmem {

enum class EnvKind : std::uint8_t { Depolarizing, Dephasing };

inline const char* env_kind_label(EnvKind k) {
    return k == EnvKind::Depolarizing ? "depolarizing" : "dephasing";
}

inline std::optional<EnvKind> parse_env_kind(std::string_view s) {
    if (s == "depolarizing") {
        return EnvKind::Depolarizing;
    }
    if (s == "dephasing") {
        return EnvKind::Dephasing;
    }
    return std::nullopt;
}

struct NoiseParams {
    double T = 1.0;
    double p_e = 0.0;
    EnvKind env = EnvKind::Depolarizing;

    void validate() const {
        if (!(T > 0) || !std::isfinite(T)) {
            throw ConfigError("T: must be a positive finite time");
        }
        if (!(p_e >= 0 && p_e <= 1)) {
            throw ConfigError("p_e: must lie in [0, 1]");
        }
    }
};

/// Probability that an idle qubit suffers an error over duration t: (1 - exp(-t/T)) / 2.
inline double env_error_prob(double t, double T) {
    if (t < 0 || !std::isfinite(t)) {
        throw ConfigError("duration must be non-negative");
    }
    if (!(T > 0)) {
        throw ConfigError("T: must be positive");
    }
    return 0.5 * -std::expm1(-t / T);
}

/// Applies environmental noise with per-qubit error probability p to qubits [first, first + count).
///
/// Each qubit takes one uniform draw for occurrence and, under depolarizing noise, one more for
/// the error type. p == 0 consumes no draws.
inline void apply_env_noise(StabilizerTableau& t, std::uint32_t first, std::uint32_t count, double p, EnvKind kind,
                            RandomStream& rng) {
    if (p <= 0) {
        return;
    }
    for (std::uint32_t q = first; q < first + count; ++q) {
        if (rng.uniform() >= p) {
            continue;
        }
        if (kind == EnvKind::Dephasing) {
            t.z(q);
        } else {
            t.apply_pauli1(q, 1 + static_cast<int>(rng.below(3)));
        }
    }
}

enum class ElementKind : std::uint8_t { Prep, Gate1, Gate2, Meas };

/// Number of distinct faults an element can suffer: 3 Paulis, 15 two-qubit Paulis, or one flip.
inline int fault_choices(ElementKind k) {
    switch (k) {
        case ElementKind::Prep:
        case ElementKind::Gate1:
            return 3;
        case ElementKind::Gate2:
            return 15;
        case ElementKind::Meas:
            return 1;
    }
    return 0;
}

/// Fault code for one element, 0 meaning no fault.
///
/// Prep/Gate1: 1..3 is X, Y, Z. Gate2: code = a + 4 b with a, b in 0..3 the components on the
/// first and second qubit. Meas: 1 is the basis-inverting flip.
inline int sample_element_error(ElementKind kind, double p_e, RandomStream& rng) {
    if (p_e <= 0) {
        return 0;
    }
    if (rng.uniform() >= p_e) {
        return 0;
    }
    int k = fault_choices(kind);
    return k == 1 ? 1 : 1 + static_cast<int>(rng.below(static_cast<std::uint32_t>(k)));
}

/// Fault source drawing from the trajectory stream.
struct SampledFaults {
    double p_e = 0.0;
    RandomStream* rng = nullptr;

    int next(ElementKind kind) {
        return sample_element_error(kind, p_e, *rng);
    }
};

/// Fault source that never faults. Counts elements and can record their kinds.
struct NoFaults {
    std::uint64_t count = 0;
    std::vector<ElementKind>* kinds = nullptr;

    int next(ElementKind kind) {
        ++count;
        if (kinds) {
            kinds->push_back(kind);
        }
        return 0;
    }
};

/// Fault source injecting exactly one fault at the `target`-th executed element.
struct InjectedFault {
    std::uint64_t target = 0;
    int code = 0;
    std::uint64_t count = 0;

    int next(ElementKind) {
        return count++ == target ? code : 0;
    }
};

}  // namespace qmem
