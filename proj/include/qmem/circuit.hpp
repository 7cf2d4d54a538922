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

// Noisy circuits as flat element lists, executed on a tableau with a pluggable fault source.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qmem/clifford.hpp"
#include "qmem/noise.hpp"
#include "qmem/pauli.hpp"
#include "qmem/rng.hpp"
#include "qmem/tableau.hpp"

namespace qmem {

/// One faulty circuit element.
///
/// Prep resets q0 and prepares the +1 (or, with `minus`, the -1) eigenstate of `basis`; Meas
/// measures q0 in `basis`.
struct Element {
    ElementKind kind = ElementKind::Gate1;
    GateKind gate = GateKind::H;
    std::uint32_t q0 = 0;
    std::uint32_t q1 = 0;
    PauliAxis basis = PauliAxis::Z;
    bool minus = false;

    static Element prep(std::uint32_t q, PauliAxis basis = PauliAxis::Z, bool minus = false) {
        return {ElementKind::Prep, GateKind::H, q, 0, basis, minus};
    }
    static Element meas(std::uint32_t q, PauliAxis basis = PauliAxis::Z) {
        return {ElementKind::Meas, GateKind::H, q, 0, basis};
    }
    static Element gate1(GateKind g, std::uint32_t q) {
        return {ElementKind::Gate1, g, q, 0, PauliAxis::Z};
    }
    static Element gate2(GateKind g, std::uint32_t a, std::uint32_t b) {
        return {ElementKind::Gate2, g, a, b, PauliAxis::Z};
    }

    CliffordOp op() const {
        return {gate, q0, q1};
    }

    std::string str() const {
        switch (kind) {
            case ElementKind::Prep:
                return std::string("PREP_") + (minus ? "-" : "") + axis_char(basis) + " " + std::to_string(q0);
            case ElementKind::Meas:
                return std::string("MEAS_") + axis_char(basis) + " " + std::to_string(q0);
            default:
                return op().str();
        }
    }
};

using NoisyCircuit = std::vector<Element>;

/// Measurement outcomes in order of the Meas elements, as bits (1 = outcome -1).
using Outcomes = std::vector<std::uint8_t>;

namespace detail {

inline void apply_two_qubit_fault(StabilizerTableau& t, std::uint32_t a, std::uint32_t b, int code) {
    t.apply_pauli1(a, code & 3);
    t.apply_pauli1(b, code >> 2);
}

inline int measure_in_basis(StabilizerTableau& t, std::uint32_t q, PauliAxis basis, RandomStream& rng) {
    if (basis == PauliAxis::X) {
        t.h(q);
        int r = t.measure_z(q, rng);
        t.h(q);
        return r;
    }
    return t.measure_axis(q, basis, rng);
}

/// The Pauli that inverts outcomes in `basis`.
inline int flip_for_basis(PauliAxis basis) {
    return basis == PauliAxis::X ? 3 : 1;
}

}  // namespace detail

/// Executes one element. Returns the measurement bit for Meas, otherwise -1.
template <class Faults>
int execute(const Element& e, StabilizerTableau& t, Faults& faults, RandomStream& rng) {
    switch (e.kind) {
        case ElementKind::Prep: {
            t.reset(e.q0, rng);
            if (e.basis != PauliAxis::Z) {
                t.h(e.q0);
            }
            if (e.basis == PauliAxis::Y) {
                t.s(e.q0);
            }
            if (e.minus) {
                t.apply_pauli1(e.q0, detail::flip_for_basis(e.basis));
            }
            t.apply_pauli1(e.q0, faults.next(e.kind));
            return -1;
        }
        case ElementKind::Gate1:
            t.apply(e.op());
            t.apply_pauli1(e.q0, faults.next(e.kind));
            return -1;
        case ElementKind::Gate2:
            t.apply(e.op());
            detail::apply_two_qubit_fault(t, e.q0, e.q1, faults.next(e.kind));
            return -1;
        case ElementKind::Meas: {
            if (faults.next(e.kind)) {
                t.apply_pauli1(e.q0, detail::flip_for_basis(e.basis));
            }
            return detail::measure_in_basis(t, e.q0, e.basis, rng) < 0 ? 1 : 0;
        }
    }
    return -1;
}

template <class Faults>
void execute(const NoisyCircuit& c, StabilizerTableau& t, Faults& faults, RandomStream& rng, Outcomes& out) {
    for (const auto& e : c) {
        int r = execute(e, t, faults, rng);
        if (r >= 0) {
            out.push_back(static_cast<std::uint8_t>(r));
        }
    }
}

}  // namespace qmem
