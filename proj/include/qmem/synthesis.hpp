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

#include <bit>
#include <cstdint>
#include <optional>
#include <vector>

#include "qmem/clifford.hpp"
#include "qmem/pauli.hpp"

namespace qmem {

namespace detail {

/// Solves A v = b over GF(2) for up to 64 unknowns. Each row is (coefficients, rhs).
inline std::optional<std::uint64_t> solve_gf2(std::vector<std::pair<std::uint64_t, bool>> rows,
                                              std::uint32_t num_vars) {
    std::vector<int> pivot_col;
    std::size_t rank = 0;
    for (std::uint32_t col = 0; col < num_vars && rank < rows.size(); ++col) {
        std::uint64_t bit = std::uint64_t{1} << col;
        std::size_t sel = rank;
        while (sel < rows.size() && !(rows[sel].first & bit)) {
            ++sel;
        }
        if (sel == rows.size()) {
            continue;
        }
        std::swap(rows[sel], rows[rank]);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r != rank && (rows[r].first & bit)) {
                rows[r].first ^= rows[rank].first;
                rows[r].second ^= rows[rank].second;
            }
        }
        pivot_col.push_back(static_cast<int>(col));
        ++rank;
    }
    for (std::size_t r = rank; r < rows.size(); ++r) {
        if (rows[r].second) {
            return std::nullopt;
        }
    }
    std::uint64_t v = 0;
    for (std::size_t r = 0; r < rank; ++r) {
        if (rows[r].second) {
            v |= std::uint64_t{1} << pivot_col[r];
        }
    }
    return v;
}

/// Coefficients of the symplectic form <D, p> as a linear function of D's (x | z << n) bits.
inline std::uint64_t symplectic_row(const PauliString& p) {
    return p.z | (p.x << p.n);
}

}  // namespace detail

/// True iff the 2n images satisfy the canonical commutation relations of X_i, Z_i.
inline bool is_symplectic_basis(const std::vector<PauliString>& xs, const std::vector<PauliString>& zs) {
    std::size_t n = xs.size();
    if (zs.size() != n) {
        return false;
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (xs[i].commutes(xs[j]) != true || zs[i].commutes(zs[j]) != true) {
                return false;
            }
            if (xs[i].commutes(zs[j]) != (i != j)) {
                return false;
            }
        }
    }
    return true;
}

/// Fills in X images for the indices where `xs[i]` is empty, given a full set of commuting,
/// independent Z images. Solutions anticommute only with their partner Z image and commute
/// with all other images.
inline std::vector<PauliString> complete_x_images(const std::vector<PauliString>& zs,
                                                  std::vector<std::optional<PauliString>> xs) {
    const std::uint32_t n = static_cast<std::uint32_t>(zs.size());
    if (n > 32) {
        throw ConfigError("symplectic completion supports at most 32 qubits");
    }
    xs.resize(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        if (xs[i]) {
            continue;
        }
        std::vector<std::pair<std::uint64_t, bool>> rows;
        for (std::uint32_t l = 0; l < n; ++l) {
            rows.emplace_back(detail::symplectic_row(zs[l]), l == i);
        }
        for (std::uint32_t m = 0; m < n; ++m) {
            if (xs[m]) {
                rows.emplace_back(detail::symplectic_row(*xs[m]), false);
            }
        }
        auto v = detail::solve_gf2(rows, 2 * n);
        if (!v) {
            throw ConfigError("Z images do not admit a symplectic completion");
        }
        std::uint64_t mask = n == 32 ? 0xFFFFFFFFULL : ((std::uint64_t{1} << n) - 1);
        xs[i] = PauliString(n, *v & mask, (*v >> n) & mask);
    }
    std::vector<PauliString> out;
    for (auto& x : xs) {
        out.push_back(*x);
    }
    return out;
}

/// Circuit U with U X_i U^dag = xs[i] and U Z_i U^dag = zs[i] (signs included).
///
/// Greedy reduction: each anticommuting pair is pushed down to (X_k, Z_k) by local Cliffords
/// and CXs; the recorded gates are then inverted.
inline Circuit synthesize_clifford(std::vector<PauliString> xs, std::vector<PauliString> zs) {
    if (!is_symplectic_basis(xs, zs)) {
        throw ConfigError("images do not form a symplectic basis");
    }
    const std::uint32_t n = static_cast<std::uint32_t>(xs.size());
    Circuit reduction;
    auto apply = [&](CliffordOp g) {
        reduction.push_back(g);
        for (auto& p : xs) {
            conjugate(p, g);
        }
        for (auto& p : zs) {
            conjugate(p, g);
        }
    };
    for (std::uint32_t k = 0; k < n; ++k) {
        // Make the X image a pure X string, then collapse it onto one qubit.
        {
            const PauliString& a = xs[k];
            std::uint64_t support = a.x | a.z;
            for (std::uint32_t j = 0; j < n; ++j) {
                if (!((support >> j) & 1)) {
                    continue;
                }
                int c = xs[k].component(j);
                if (c == 3) {
                    apply({GateKind::H, j, 0});
                } else if (c == 2) {
                    apply({GateKind::SDag, j, 0});
                }
            }
        }
        std::uint64_t support = xs[k].x;
        std::uint32_t pivot = ((support >> k) & 1) ? k : static_cast<std::uint32_t>(std::countr_zero(support));
        for (std::uint32_t j = 0; j < n; ++j) {
            if (j != pivot && ((support >> j) & 1)) {
                apply({GateKind::CX, pivot, j});
            }
        }
        if (pivot != k) {
            apply({GateKind::CX, pivot, k});
            apply({GateKind::CX, k, pivot});
            apply({GateKind::CX, pivot, k});
        }
        // The Z image now anticommutes with X_k: clear its other qubits.
        for (std::uint32_t j = 0; j < n; ++j) {
            if (j == k) {
                continue;
            }
            int c = zs[k].component(j);
            if (c == 0) {
                continue;
            }
            if (c == 1) {
                apply({GateKind::H, j, 0});
            } else if (c == 2) {
                apply({GateKind::S, j, 0});
                apply({GateKind::H, j, 0});
            }
            apply({GateKind::CX, j, k});
        }
        if (zs[k].component(k) == 2) {
            apply({GateKind::H, k, 0});
            apply({GateKind::S, k, 0});
            apply({GateKind::H, k, 0});
        }
        if (xs[k].negative()) {
            apply({GateKind::Z, k, 0});
        }
        if (zs[k].negative()) {
            apply({GateKind::X, k, 0});
        }
    }
    return inverse(reduction);
}

/// Circuit taking |0...0> to the stabilizer state with the given generators (signs included).
inline Circuit prepare_state_circuit(const std::vector<PauliString>& stabilizers) {
    std::vector<std::optional<PauliString>> none(stabilizers.size());
    auto xs = complete_x_images(stabilizers, none);
    return synthesize_clifford(xs, stabilizers);
}

}  // namespace qmem
