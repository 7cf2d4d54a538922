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
#include <stdexcept>
#include <string>
#include <string_view>

namespace qmem {

/// Thrown for malformed inputs: out-of-range qubits, size mismatches, bad configs.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Single-qubit Pauli axis. Doubles as the measurement basis of a logical qubit.
enum class PauliAxis : std::uint8_t { X = 0, Y = 1, Z = 2 };

inline constexpr PauliAxis kAllAxes[] = {PauliAxis::X, PauliAxis::Y, PauliAxis::Z};

inline char axis_char(PauliAxis a) {
    return "XYZ"[static_cast<int>(a)];
}

inline constexpr int kMaxPauliQubits = 64;

/// An n-qubit Pauli operator i^phase * (tensor of I/X/Y/Z), bit-packed into one word per component.
///
/// Bit q of `x`/`z` gives the X/Z component on qubit q; (x,z) = (1,1) is the Hermitian Y.
/// Hermitian operators have an even phase (+1 or -1).
struct PauliString {
    std::uint32_t n = 0;
    std::uint64_t x = 0;
    std::uint64_t z = 0;
    std::uint8_t phase = 0;  // power of i, mod 4

    PauliString() = default;
    explicit PauliString(std::uint32_t num_qubits) : n(num_qubits) {
        if (num_qubits > kMaxPauliQubits) {
            throw ConfigError("PauliString supports at most 64 qubits");
        }
    }
    PauliString(std::uint32_t num_qubits, std::uint64_t xs, std::uint64_t zs, std::uint8_t ph = 0)
        : PauliString(num_qubits) {
        x = xs;
        z = zs;
        phase = ph & 3;
    }

    /// Parses strings like "+XZZXI", "-iYZ", "IXZ_". '_' is identity.
    static PauliString parse(std::string_view text) {
        std::uint8_t ph = 0;
        if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
            if (text.front() == '-') {
                ph = 2;
            }
            text.remove_prefix(1);
        }
        if (!text.empty() && text.front() == 'i') {
            ph = (ph + 1) & 3;
            text.remove_prefix(1);
        }
        PauliString p(static_cast<std::uint32_t>(text.size()));
        for (std::size_t q = 0; q < text.size(); ++q) {
            std::uint64_t bit = std::uint64_t{1} << q;
            switch (text[q]) {
                case 'I':
                case '_':
                    break;
                case 'X':
                    p.x |= bit;
                    break;
                case 'Y':
                    p.x |= bit;
                    p.z |= bit;
                    break;
                case 'Z':
                    p.z |= bit;
                    break;
                default:
                    throw ConfigError(std::string("bad Pauli character '") + text[q] + "'");
            }
        }
        p.phase = ph;
        return p;
    }

    static PauliString single(std::uint32_t n, std::uint32_t q, PauliAxis axis) {
        if (q >= n) {
            throw ConfigError("qubit index out of range");
        }
        PauliString p(n);
        std::uint64_t bit = std::uint64_t{1} << q;
        if (axis != PauliAxis::Z) {
            p.x = bit;
        }
        if (axis != PauliAxis::X) {
            p.z = bit;
        }
        return p;
    }

    std::uint32_t weight() const {
        return static_cast<std::uint32_t>(std::popcount(x | z));
    }
    bool is_identity() const {
        return (x | z) == 0;
    }
    bool is_hermitian() const {
        return (phase & 1) == 0;
    }
    /// +1 or -1 for Hermitian strings.
    int sign() const {
        return phase == 0 ? 1 : -1;
    }
    bool negative() const {
        return phase == 2;
    }

    /// Component on qubit q as 0=I, 1=X, 2=Y, 3=Z.
    int component(std::uint32_t q) const {
        int xb = static_cast<int>((x >> q) & 1);
        int zb = static_cast<int>((z >> q) & 1);
        if (xb && zb) {
            return 2;
        }
        return xb ? 1 : (zb ? 3 : 0);
    }

    bool commutes(const PauliString& o) const {
        return (std::popcount((x & o.z) ^ (z & o.x)) & 1) == 0;
    }

    /// Same operator ignoring the phase.
    bool same_support_and_type(const PauliString& o) const {
        return n == o.n && x == o.x && z == o.z;
    }

    /// this <- this * rhs
    PauliString& operator*=(const PauliString& rhs) {
        if (n != rhs.n) {
            throw ConfigError("Pauli size mismatch");
        }
        std::uint64_t old_x = x;
        std::uint64_t old_z = z;
        x ^= rhs.x;
        z ^= rhs.z;
        std::uint64_t x1z2 = old_x & rhs.z;
        std::uint64_t anti = (rhs.x & old_z) ^ x1z2;
        // Lanes where the factors anticommute contribute +i or -i.
        std::uint64_t minus = anti & (x ^ z ^ x1z2);
        int plus_count = std::popcount(anti & ~minus);
        int minus_count = std::popcount(minus);
        phase = static_cast<std::uint8_t>((phase + rhs.phase + plus_count + 3 * minus_count) & 3);
        return *this;
    }
    friend PauliString operator*(PauliString a, const PauliString& b) {
        a *= b;
        return a;
    }

    PauliString operator-() const {
        PauliString r = *this;
        r.phase = static_cast<std::uint8_t>((phase + 2) & 3);
        return r;
    }

    bool operator==(const PauliString& o) const = default;

    /// Restricts to the low `m` qubits (drops anything above).
    PauliString truncated(std::uint32_t m) const {
        PauliString r(m);
        std::uint64_t mask = m >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << m) - 1);
        r.x = x & mask;
        r.z = z & mask;
        r.phase = phase;
        return r;
    }
    /// Same operator on a larger register, identity on the new qubits.
    PauliString widened(std::uint32_t m) const {
        PauliString r(m);
        r.x = x;
        r.z = z;
        r.phase = phase;
        return r;
    }

    std::string str() const {
        std::string out;
        static constexpr const char* kPhase[] = {"+", "+i", "-", "-i"};
        out += kPhase[phase & 3];
        for (std::uint32_t q = 0; q < n; ++q) {
            out += "IXYZ"[component(q)];
        }
        return out;
    }
};

}  // namespace qmem
