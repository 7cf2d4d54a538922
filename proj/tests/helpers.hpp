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

#include <cmath>
#include <cstdint>

#include "qmem/clifford.hpp"
#include "qmem/dense.hpp"
#include "qmem/pauli.hpp"
#include "qmem/rng.hpp"

namespace qmem::testing {

inline PauliString random_pauli(std::uint32_t n, RandomStream& rng, bool hermitian = false) {
    PauliString p(n);
    std::uint64_t mask = n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
    p.x = rng() & mask;
    p.z = rng() & mask;
    p.phase = static_cast<std::uint8_t>(hermitian ? 2 * rng.below(2) : rng.below(4));
    return p;
}

inline CliffordOp random_gate(std::uint32_t n, RandomStream& rng) {
    auto kind = static_cast<GateKind>(rng.below(n > 1 ? 8 : 6));
    CliffordOp g{kind, rng.below(n), 0};
    if (is_two_qubit(kind)) {
        do {
            g.q1 = rng.below(n);
        } while (g.q1 == g.q0);
    }
    return g;
}

inline Circuit random_circuit(std::uint32_t n, std::size_t len, RandomStream& rng) {
    Circuit c;
    for (std::size_t i = 0; i < len; ++i) {
        c.push_back(random_gate(n, rng));
    }
    return c;
}

/// Dense unitary of a gate, built column by column.
inline CMatrix gate_unitary(std::uint32_t n, const CliffordOp& g) {
    auto d = static_cast<Eigen::Index>(std::uint64_t{1} << n);
    CMatrix u = CMatrix::Identity(d, d);
    detail::apply_gate_rows(u, g);
    return u;
}

inline bool near(const CMatrix& a, const CMatrix& b, double tol = 1e-10) {
    return (a - b).cwiseAbs().maxCoeff() < tol;
}

/// Binomial standard deviation of a frequency.
inline double binom_sigma(double p, double n) {
    return std::sqrt(std::max(p * (1 - p), 1e-12) / n);
}

}  // namespace qmem::testing
