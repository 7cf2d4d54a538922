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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qmem/pauli.hpp"

namespace qmem {

enum class GateKind : std::uint8_t { H, S, SDag, X, Y, Z, CX, CZ };

inline bool is_two_qubit(GateKind k) {
    return k == GateKind::CX || k == GateKind::CZ;
}

inline const char* gate_name(GateKind k) {
    static constexpr const char* kNames[] = {"H", "S", "S_DAG", "X", "Y", "Z", "CX", "CZ"};
    return kNames[static_cast<int>(k)];
}

/// One Clifford gate. For CX, q0 is the control and q1 the target.
struct CliffordOp {
    GateKind kind = GateKind::H;
    std::uint32_t q0 = 0;
    std::uint32_t q1 = 0;

    bool operator==(const CliffordOp&) const = default;

    CliffordOp inverse() const {
        CliffordOp r = *this;
        if (kind == GateKind::S) {
            r.kind = GateKind::SDag;
        } else if (kind == GateKind::SDag) {
            r.kind = GateKind::S;
        }
        return r;
    }

    void validate(std::uint32_t n) const {
        if (q0 >= n || (is_two_qubit(kind) && q1 >= n)) {
            throw ConfigError(std::string("gate ") + gate_name(kind) + " targets qubit out of range");
        }
        if (is_two_qubit(kind) && q0 == q1) {
            throw ConfigError(std::string("gate ") + gate_name(kind) + " needs distinct targets");
        }
    }

    std::string str() const {
        std::string s = gate_name(kind);
        s += " " + std::to_string(q0);
        if (is_two_qubit(kind)) {
            s += " " + std::to_string(q1);
        }
        return s;
    }
};

using Circuit = std::vector<CliffordOp>;

inline Circuit inverse(const Circuit& c) {
    Circuit r;
    r.reserve(c.size());
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        r.push_back(it->inverse());
    }
    return r;
}

/// p <- g p g^dagger
inline void conjugate(PauliString& p, const CliffordOp& g) {
    g.validate(p.n);
    auto bit = [](std::uint64_t w, std::uint32_t q) { return (w >> q) & 1; };
    auto flip_sign = [&p](std::uint64_t f) {
        if (f) {
            p.phase = static_cast<std::uint8_t>((p.phase + 2) & 3);
        }
    };
    const std::uint64_t a = std::uint64_t{1} << g.q0;
    const std::uint64_t b = std::uint64_t{1} << g.q1;
    std::uint64_t xa = bit(p.x, g.q0);
    std::uint64_t za = bit(p.z, g.q0);
    switch (g.kind) {
        case GateKind::H:
            flip_sign(xa & za);
            p.x = (p.x & ~a) | (za ? a : 0);
            p.z = (p.z & ~a) | (xa ? a : 0);
            break;
        case GateKind::S:
            flip_sign(xa & za);
            if (xa) {
                p.z ^= a;
            }
            break;
        case GateKind::SDag:
            flip_sign(xa & (za ^ 1));
            if (xa) {
                p.z ^= a;
            }
            break;
        case GateKind::X:
            flip_sign(za);
            break;
        case GateKind::Y:
            flip_sign(xa ^ za);
            break;
        case GateKind::Z:
            flip_sign(xa);
            break;
        case GateKind::CX: {
            std::uint64_t xt = bit(p.x, g.q1);
            std::uint64_t zt = bit(p.z, g.q1);
            flip_sign(xa & zt & (xt ^ za ^ 1));
            if (xa) {
                p.x ^= b;
            }
            if (zt) {
                p.z ^= a;
            }
            break;
        }
        case GateKind::CZ: {
            std::uint64_t xb = bit(p.x, g.q1);
            std::uint64_t zb = bit(p.z, g.q1);
            flip_sign(xa & xb & (za ^ zb));
            if (xb) {
                p.z ^= a;
            }
            if (xa) {
                p.z ^= b;
            }
            break;
        }
    }
}

inline void conjugate(PauliString& p, const Circuit& c) {
    for (const auto& g : c) {
        conjugate(p, g);
    }
}

}  // namespace qmem
