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

#include <array>
#include <bit>
#include <cstdint>

#include "qmem/clifford.hpp"
#include "qmem/pauli.hpp"
#include "qmem/rng.hpp"

namespace qmem {

/// Stabilizer state of up to 32 qubits with destabilizer bookkeeping.
///
/// Storage is column-major and bit-sliced over generator rows: bit r of `xs_[q]` is the X
/// component of row r on qubit q. Destabilizer i lives in row i, stabilizer i in row 32 + i,
/// so every gate touches O(1) words and a row multiplication touches O(n) words.
class StabilizerTableau {
  public:
    static constexpr std::uint32_t kMaxQubits = 32;
    static constexpr std::uint64_t kDestabRows = 0x00000000FFFFFFFFULL;
    static constexpr std::uint64_t kStabRows = 0xFFFFFFFF00000000ULL;

    StabilizerTableau() = default;

    /// The all-zero computational basis state.
    explicit StabilizerTableau(std::uint32_t n) : n_(n) {
        if (n > kMaxQubits) {
            throw ConfigError("tableau supports at most 32 qubits");
        }
        for (std::uint32_t q = 0; q < n; ++q) {
            xs_[q] = std::uint64_t{1} << q;
            zs_[q] = std::uint64_t{1} << (32 + q);
        }
    }

    std::uint32_t num_qubits() const {
        return n_;
    }

    void h(std::uint32_t q) {
        check(q);
        std::uint64_t x = xs_[q];
        std::uint64_t z = zs_[q];
        signs_ ^= x & z;
        xs_[q] = z;
        zs_[q] = x;
    }
    void s(std::uint32_t q) {
        check(q);
        signs_ ^= xs_[q] & zs_[q];
        zs_[q] ^= xs_[q];
    }
    void s_dag(std::uint32_t q) {
        check(q);
        signs_ ^= xs_[q] & ~zs_[q];
        zs_[q] ^= xs_[q];
    }
    void x(std::uint32_t q) {
        check(q);
        signs_ ^= zs_[q];
    }
    void y(std::uint32_t q) {
        check(q);
        signs_ ^= xs_[q] ^ zs_[q];
    }
    void z(std::uint32_t q) {
        check(q);
        signs_ ^= xs_[q];
    }
    void cx(std::uint32_t c, std::uint32_t t) {
        check(c);
        check(t);
        if (c == t) {
            throw ConfigError("CX needs distinct qubits");
        }
        signs_ ^= xs_[c] & zs_[t] & ~(xs_[t] ^ zs_[c]);
        xs_[t] ^= xs_[c];
        zs_[c] ^= zs_[t];
    }
    void cz(std::uint32_t a, std::uint32_t b) {
        check(a);
        check(b);
        if (a == b) {
            throw ConfigError("CZ needs distinct qubits");
        }
        signs_ ^= xs_[a] & xs_[b] & (zs_[a] ^ zs_[b]);
        zs_[a] ^= xs_[b];
        zs_[b] ^= xs_[a];
    }

    void apply(const CliffordOp& g) {
        switch (g.kind) {
            case GateKind::H:
                h(g.q0);
                break;
            case GateKind::S:
                s(g.q0);
                break;
            case GateKind::SDag:
                s_dag(g.q0);
                break;
            case GateKind::X:
                x(g.q0);
                break;
            case GateKind::Y:
                y(g.q0);
                break;
            case GateKind::Z:
                z(g.q0);
                break;
            case GateKind::CX:
                cx(g.q0, g.q1);
                break;
            case GateKind::CZ:
                cz(g.q0, g.q1);
                break;
        }
    }
    void apply(const Circuit& c) {
        for (const auto& g : c) {
            apply(g);
        }
    }

    /// Conjugates the state by a Pauli: only generator signs change.
    void apply_pauli(const PauliString& p) {
        if (p.n != n_) {
            throw ConfigError("Pauli size does not match tableau");
        }
        signs_ ^= anticommuting_rows(p);
    }

    /// Applies a single-qubit Pauli (0=I, 1=X, 2=Y, 3=Z).
    void apply_pauli1(std::uint32_t q, int which) {
        switch (which) {
            case 1:
                x(q);
                break;
            case 2:
                y(q);
                break;
            case 3:
                z(q);
                break;
            default:
                break;
        }
    }

    /// Outcome of measuring p without disturbing the state: +1/-1 if deterministic, else 0.
    int peek(const PauliString& p) const {
        validate_observable(p);
        std::uint64_t anti = anticommuting_rows(p);
        if (anti & kStabRows) {
            return 0;
        }
        return deterministic_outcome(p, anti);
    }

    /// Projective measurement of the Hermitian Pauli p. Consumes one coin flip iff random.
    int measure(const PauliString& p, RandomStream& rng) {
        validate_observable(p);
        std::uint64_t anti = anticommuting_rows(p);
        std::uint64_t stab_anti = anti & kStabRows;
        if (!stab_anti) {
            return deterministic_outcome(p, anti);
        }
        int k = std::countr_zero(stab_anti);
        multiply_row_into(anti & ~(std::uint64_t{1} << k), k);
        copy_row(k, k - 32);
        int outcome = rng.coin() ? -1 : 1;
        PauliString row = p;
        if (outcome < 0) {
            row = -row;
        }
        set_row(k, row);
        return outcome;
    }

    int measure_z(std::uint32_t q, RandomStream& rng) {
        check(q);
        std::uint64_t anti = xs_[q];
        std::uint64_t stab_anti = anti & kStabRows;
        if (!stab_anti) {
            return deterministic_outcome(PauliString::single(n_, q, PauliAxis::Z), anti);
        }
        int k = std::countr_zero(stab_anti);
        multiply_row_into(anti & ~(std::uint64_t{1} << k), k);
        copy_row(k, k - 32);
        int outcome = rng.coin() ? -1 : 1;
        clear_row(k);
        zs_[q] |= std::uint64_t{1} << k;
        if (outcome < 0) {
            signs_ |= std::uint64_t{1} << k;
        }
        return outcome;
    }

    int measure_axis(std::uint32_t q, PauliAxis axis, RandomStream& rng) {
        if (axis == PauliAxis::Z) {
            return measure_z(q, rng);
        }
        return measure(PauliString::single(n_, q, axis), rng);
    }

    /// Returns qubit q to |0>.
    void reset(std::uint32_t q, RandomStream& rng) {
        if (measure_z(q, rng) < 0) {
            x(q);
        }
    }

    PauliString stabilizer(std::uint32_t i) const {
        return row(32 + static_cast<int>(i));
    }
    PauliString destabilizer(std::uint32_t i) const {
        return row(static_cast<int>(i));
    }

    bool operator==(const StabilizerTableau& o) const = default;

  private:
    void check(std::uint32_t q) const {
        if (q >= n_) {
            throw ConfigError("qubit index out of range for tableau");
        }
    }

    void validate_observable(const PauliString& p) const {
        if (p.n != n_) {
            throw ConfigError("Pauli size does not match tableau");
        }
        if (!p.is_hermitian()) {
            throw ConfigError("measured Pauli must be Hermitian");
        }
    }

    std::uint64_t anticommuting_rows(const PauliString& p) const {
        std::uint64_t m = 0;
        std::uint64_t support = p.x | p.z;
        while (support) {
            int q = std::countr_zero(support);
            support &= support - 1;
            if ((p.z >> q) & 1) {
                m ^= xs_[q];
            }
            if ((p.x >> q) & 1) {
                m ^= zs_[q];
            }
        }
        return m;
    }

    PauliString row(int r) const {
        PauliString p(n_);
        for (std::uint32_t q = 0; q < n_; ++q) {
            p.x |= ((xs_[q] >> r) & 1) << q;
            p.z |= ((zs_[q] >> r) & 1) << q;
        }
        p.phase = ((signs_ >> r) & 1) ? 2 : 0;
        return p;
    }

    void clear_row(int r) {
        std::uint64_t keep = ~(std::uint64_t{1} << r);
        for (std::uint32_t q = 0; q < n_; ++q) {
            xs_[q] &= keep;
            zs_[q] &= keep;
        }
        signs_ &= keep;
    }

    void set_row(int r, const PauliString& p) {
        clear_row(r);
        std::uint64_t bit = std::uint64_t{1} << r;
        for (std::uint32_t q = 0; q < n_; ++q) {
            if ((p.x >> q) & 1) {
                xs_[q] |= bit;
            }
            if ((p.z >> q) & 1) {
                zs_[q] |= bit;
            }
        }
        if (p.negative()) {
            signs_ |= bit;
        }
    }

    void copy_row(int from, int to) {
        std::uint64_t tbit = std::uint64_t{1} << to;
        for (std::uint32_t q = 0; q < n_; ++q) {
            xs_[q] = (xs_[q] & ~tbit) | (((xs_[q] >> from) & 1) << to);
            zs_[q] = (zs_[q] & ~tbit) | (((zs_[q] >> from) & 1) << to);
        }
        signs_ = (signs_ & ~tbit) | (((signs_ >> from) & 1) << to);
    }

    /// Every row in `targets` becomes row * row[src], all lanes at once.
    ///
    /// A two-bit counter per lane accumulates the power of i picked up on each qubit. Stabilizer
    /// lanes always commute with the source so their counter ends even; destabilizer signs are
    /// not meaningful and are left as whatever falls out.
    void multiply_row_into(std::uint64_t targets, int src) {
        if (!targets) {
            return;
        }
        std::uint64_t c1 = 0;
        std::uint64_t c2 = 0;
        for (std::uint32_t q = 0; q < n_; ++q) {
            std::uint64_t x2 = 0 - ((xs_[q] >> src) & 1);
            std::uint64_t z2 = 0 - ((zs_[q] >> src) & 1);
            if (!(x2 | z2)) {
                continue;
            }
            std::uint64_t old_x = xs_[q];
            std::uint64_t old_z = zs_[q];
            std::uint64_t new_x = old_x ^ x2;
            std::uint64_t new_z = old_z ^ z2;
            std::uint64_t x1z2 = old_x & z2;
            std::uint64_t anti = ((x2 & old_z) ^ x1z2) & targets;
            std::uint64_t minus = anti & (new_x ^ new_z ^ x1z2);
            c2 ^= (c1 ^ minus) & anti;
            c1 ^= anti;
            xs_[q] = (old_x & ~targets) | (new_x & targets);
            zs_[q] = (old_z & ~targets) | (new_z & targets);
        }
        std::uint64_t src_sign = 0 - ((signs_ >> src) & 1);
        signs_ ^= targets & (src_sign ^ c2);
    }

    /// Sign of the stabilizer-group element equal to +-p, given the destabilizer rows that
    /// anticommute with p.
    int deterministic_outcome(const PauliString& p, std::uint64_t anti) const {
        std::uint64_t rows = anti & kDestabRows;
        PauliString acc(n_);
        while (rows) {
            int j = std::countr_zero(rows);
            rows &= rows - 1;
            acc *= row(32 + j);
        }
        return acc.phase == p.phase ? 1 : -1;
    }

    std::uint32_t n_ = 0;
    std::array<std::uint64_t, kMaxQubits> xs_{};
    std::array<std::uint64_t, kMaxQubits> zs_{};
    std::uint64_t signs_ = 0;
};

}  // namespace qmem
