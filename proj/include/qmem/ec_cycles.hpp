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

// Error-correction cycles: syndrome extraction circuits, repetition logic and correction.
//
// Register layout: data qubits 0..n-1, then the cycle's ancillas. Pure Z checks use the
// Hadamard dual of the X-check circuit (ancilla as CX target), so CSS codes never need CZ.

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qmem/circuit.hpp"
#include "qmem/codes.hpp"
#include "qmem/noise.hpp"
#include "qmem/tableau.hpp"

namespace qmem {

enum class EcStyle : std::uint8_t { NonFT, ShorFT, FlagFT, SurfaceOrderedFT };

inline const char* ec_style_label(EcStyle s) {
    static constexpr const char* kLabels[] = {"non_ft", "shor_ft", "flag_ft", "surface_ordered"};
    return kLabels[static_cast<int>(s)];
}

inline constexpr const char* kValidEcStyles = "non_ft, shor_ft, flag_ft, surface_ordered";

inline std::optional<EcStyle> parse_ec_style(std::string_view s) {
    for (auto st : {EcStyle::NonFT, EcStyle::ShorFT, EcStyle::FlagFT, EcStyle::SurfaceOrderedFT}) {
        if (s == ec_style_label(st)) {
            return st;
        }
    }
    return std::nullopt;
}

inline bool style_supported(CodeName code, EcStyle style) {
    switch (style) {
        case EcStyle::NonFT:
            return true;
        case EcStyle::ShorFT:
        case EcStyle::FlagFT:
            return code == CodeName::Five || code == CodeName::Steane;
        case EcStyle::SurfaceOrderedFT:
            return code == CodeName::Surface9;
    }
    return false;
}

/// How an ancilla-controlled Z acts on a data qubit.
enum class CzRealization : std::uint8_t { Native, BasisChange };

struct EcOptions {
    CzRealization cz = CzRealization::Native;
    /// Apply the correction with noisy single-qubit gates instead of perfectly.
    bool noisy_correction = false;
};

struct EcOutcome {
    std::uint32_t syndrome = 0;
    bool flag_raised = false;
    PauliString correction;
    std::uint32_t ancilla_usage = 0;
    std::uint32_t rounds = 0;
    std::uint32_t restarts = 0;
};

namespace detail {

/// Element list plus which outcomes make up the syndrome bit and the flag.
struct CheckProgram {
    /// Repeated until the outcome at `verify_bit` is 0. Empty when no verification is needed.
    NoisyCircuit prep;
    int verify_bit = -1;
    NoisyCircuit body;
    std::vector<int> syndrome_bits;
    int flag_bit = -1;
};

inline void append_controlled_pauli(NoisyCircuit& c, std::uint32_t ctrl, std::uint32_t q, int component,
                                    CzRealization cz) {
    switch (component) {
        case 1:
            c.push_back(Element::gate2(GateKind::CX, ctrl, q));
            break;
        case 3:
            if (cz == CzRealization::Native) {
                c.push_back(Element::gate2(GateKind::CZ, ctrl, q));
            } else {
                c.push_back(Element::gate1(GateKind::H, q));
                c.push_back(Element::gate2(GateKind::CX, ctrl, q));
                c.push_back(Element::gate1(GateKind::H, q));
            }
            break;
        case 2:
            c.push_back(Element::gate1(GateKind::SDag, q));
            c.push_back(Element::gate2(GateKind::CX, ctrl, q));
            c.push_back(Element::gate1(GateKind::S, q));
            break;
        default:
            break;
    }
}

/// Swaps the roles of X and Z on every element touching ancillas: prep/measure bases exchange
/// and CX direction reverses. Turns an X-check circuit into the matching Z-check circuit.
inline NoisyCircuit dualize(const NoisyCircuit& c) {
    NoisyCircuit out = c;
    for (auto& e : out) {
        if (e.kind == ElementKind::Prep || e.kind == ElementKind::Meas) {
            if (e.basis == PauliAxis::X) {
                e.basis = PauliAxis::Z;
            } else if (e.basis == PauliAxis::Z) {
                e.basis = PauliAxis::X;
            }
        } else if (e.kind == ElementKind::Gate2 && e.gate == GateKind::CX) {
            std::swap(e.q0, e.q1);
        }
    }
    return out;
}

/// Data qubits of a check in the order they are coupled.
inline std::vector<std::uint32_t> support_of(const PauliString& p) {
    std::vector<std::uint32_t> qs;
    for (std::uint32_t q = 0; q < p.n; ++q) {
        if (p.component(q)) {
            qs.push_back(q);
        }
    }
    return qs;
}

/// Pure Z checks are built as X checks and then dualized.
inline int coupling_component(const PauliString& check, std::uint32_t q) {
    int c = check.component(q);
    return check.x == 0 ? 1 : c;
}

inline CheckProgram simple_check(const PauliString& check, const std::vector<std::uint32_t>& order, std::uint32_t a,
                                 CzRealization cz) {
    CheckProgram p;
    p.body.push_back(Element::prep(a, PauliAxis::X));
    for (auto q : order) {
        append_controlled_pauli(p.body, a, q, coupling_component(check, q), cz);
    }
    p.body.push_back(Element::meas(a, PauliAxis::X));
    p.syndrome_bits = {0};
    if (check.x == 0) {
        p.body = dualize(p.body);
    }
    return p;
}

/// Flag placement: after the first coupling and before the last one.
inline CheckProgram flag_check(const PauliString& check, const std::vector<std::uint32_t>& order, std::uint32_t a,
                               std::uint32_t f, CzRealization cz) {
    CheckProgram p;
    p.body.push_back(Element::prep(a, PauliAxis::X));
    p.body.push_back(Element::prep(f, PauliAxis::Z));
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (i == 1) {
            p.body.push_back(Element::gate2(GateKind::CX, a, f));
        }
        if (i + 1 == order.size() && order.size() > 1) {
            p.body.push_back(Element::gate2(GateKind::CX, a, f));
        }
        append_controlled_pauli(p.body, a, order[i], coupling_component(check, order[i]), cz);
    }
    p.body.push_back(Element::meas(a, PauliAxis::X));
    p.body.push_back(Element::meas(f, PauliAxis::Z));
    p.syndrome_bits = {0};
    p.flag_bit = 1;
    if (check.x == 0) {
        p.body = dualize(p.body);
    }
    return p;
}

/// Shor extraction: verified cat state on ancillas cat[0..w), transversal couplings, then either
/// unencode-and-measure one ancilla or measure all and take the parity.
inline CheckProgram shor_check(const PauliString& check, const std::vector<std::uint32_t>& order,
                               const std::vector<std::uint32_t>& cat, std::uint32_t v, bool decode,
                               CzRealization cz) {
    CheckProgram p;
    const std::size_t w = order.size();
    p.prep.push_back(Element::prep(cat[0], PauliAxis::X));
    for (std::size_t i = 1; i < w; ++i) {
        p.prep.push_back(Element::prep(cat[i], PauliAxis::Z));
    }
    for (std::size_t i = 0; i + 1 < w; ++i) {
        p.prep.push_back(Element::gate2(GateKind::CX, cat[i], cat[i + 1]));
    }
    p.prep.push_back(Element::prep(v, PauliAxis::Z));
    p.prep.push_back(Element::gate2(GateKind::CX, cat[0], v));
    p.prep.push_back(Element::gate2(GateKind::CX, cat[w - 1], v));
    p.prep.push_back(Element::meas(v, PauliAxis::Z));
    p.verify_bit = 0;
    for (std::size_t i = 0; i < w; ++i) {
        append_controlled_pauli(p.body, cat[i], order[i], coupling_component(check, order[i]), cz);
    }
    if (decode) {
        for (std::size_t i = w - 1; i > 0; --i) {
            p.body.push_back(Element::gate2(GateKind::CX, cat[i - 1], cat[i]));
        }
        p.body.push_back(Element::meas(cat[0], PauliAxis::X));
        p.syndrome_bits = {0};
    } else {
        for (std::size_t i = 0; i < w; ++i) {
            p.body.push_back(Element::meas(cat[i], PauliAxis::X));
            p.syndrome_bits.push_back(static_cast<int>(i));
        }
    }
    if (check.x == 0) {
        p.prep = dualize(p.prep);
        p.body = dualize(p.body);
    }
    return p;
}

/// Coupling order for the ordered surface-code schedule. Qubits of a plaquette sorted give
/// (top-left, top-right, bottom-left, bottom-right); X checks sweep rows so a mid-check ancilla
/// fault leaves a horizontal pair, Z checks sweep columns so it leaves a vertical pair. Either
/// pair is perpendicular to the logical operator of the same type.
inline std::vector<std::uint32_t> surface_order(const PauliString& check) {
    auto qs = support_of(check);
    if (qs.size() == 4 && check.x == 0) {
        return {qs[0], qs[2], qs[1], qs[3]};
    }
    return qs;
}

/// Pauli frame after a fault at element k of c, restricted to the register, plus which
/// measurement outcomes it flips.
struct PropagatedFault {
    PauliString frame;
    std::vector<std::uint8_t> flips;
};

inline PropagatedFault propagate_fault(const NoisyCircuit& c, std::size_t k, int code, std::uint32_t nq) {
    PropagatedFault r{PauliString(nq), {}};
    auto add1 = [&](std::uint32_t q, int comp) {
        if (comp == 1 || comp == 2) {
            r.frame.x ^= std::uint64_t{1} << q;
        }
        if (comp == 2 || comp == 3) {
            r.frame.z ^= std::uint64_t{1} << q;
        }
    };
    for (std::size_t i = 0; i < c.size(); ++i) {
        const Element& e = c[i];
        bool here = i == k;
        switch (e.kind) {
            case ElementKind::Prep:
                r.frame.x &= ~(std::uint64_t{1} << e.q0);
                r.frame.z &= ~(std::uint64_t{1} << e.q0);
                if (here) {
                    add1(e.q0, code);
                }
                break;
            case ElementKind::Gate1:
                conjugate(r.frame, e.op());
                if (here) {
                    add1(e.q0, code);
                }
                break;
            case ElementKind::Gate2:
                conjugate(r.frame, e.op());
                if (here) {
                    add1(e.q0, code & 3);
                    add1(e.q1, code >> 2);
                }
                break;
            case ElementKind::Meas: {
                if (here) {
                    add1(e.q0, flip_for_basis(e.basis));
                }
                auto obs = PauliString::single(nq, e.q0, e.basis);
                r.flips.push_back(r.frame.commutes(obs) ? 0 : 1);
                break;
            }
        }
    }
    r.frame.phase = 0;
    return r;
}

}  // namespace detail

/// One configured error-correction cycle for a code. Immutable after construction.
class EcCycle {
  public:
    EcCycle(const CodeSpec& code, EcStyle style, EcOptions opts = {}) : code_(&code), style_(style), opts_(opts) {
        if (!style_supported(code.name, style)) {
            throw ConfigError(std::string("ec_style: '") + ec_style_label(style) + "' is not available for code '" +
                              code_label(code.name) + "'");
        }
        const std::uint32_t n = code.n;
        switch (style) {
            case EcStyle::NonFT:
                ancillas_ = 1;
                for (const auto& s : code.stabilizers) {
                    checks_.push_back(detail::simple_check(s, detail::support_of(s), n, opts.cz));
                }
                break;
            case EcStyle::SurfaceOrderedFT:
                ancillas_ = 1;
                for (const auto& s : code.stabilizers) {
                    checks_.push_back(detail::simple_check(s, detail::surface_order(s), n, opts.cz));
                }
                break;
            case EcStyle::FlagFT:
                ancillas_ = 2;
                for (const auto& s : code.stabilizers) {
                    checks_.push_back(detail::flag_check(s, detail::support_of(s), n, n + 1, opts.cz));
                    plain_checks_.push_back(detail::simple_check(s, detail::support_of(s), n, opts.cz));
                }
                build_flag_tables();
                break;
            case EcStyle::ShorFT: {
                ancillas_ = 5;
                std::vector<std::uint32_t> cat{n, n + 1, n + 2, n + 3};
                bool decode = code.name == CodeName::Five;
                for (const auto& s : code.stabilizers) {
                    auto order = detail::support_of(s);
                    if (order.size() != cat.size()) {
                        throw ConfigError("Shor extraction expects weight-4 checks");
                    }
                    checks_.push_back(detail::shor_check(s, order, cat, n + 4, decode, opts.cz));
                }
                break;
            }
        }
    }

    const CodeSpec& code() const {
        return *code_;
    }
    EcStyle style() const {
        return style_;
    }
    const EcOptions& options() const {
        return opts_;
    }
    std::uint32_t ancillas() const {
        return ancillas_;
    }
    std::uint32_t register_size() const {
        return code_->n + ancillas_;
    }
    const std::vector<detail::CheckProgram>& checks() const {
        return checks_;
    }

    /// Correction to use after a flag on check j, given the exact syndrome that follows.
    const PauliString& flag_correction(std::uint32_t j, std::uint32_t syndrome) const {
        auto it = flag_tables_[j].find(syndrome);
        return it == flag_tables_[j].end() ? code_->correction(syndrome) : it->second;
    }
    /// Syndrome keys with a dedicated flag entry for check j.
    std::size_t flag_table_size(std::uint32_t j) const {
        return flag_tables_[j].size();
    }

    /// Runs the whole cycle on a register with at least `register_size()` qubits.
    template <class Faults>
    EcOutcome run(StabilizerTableau& t, Faults& faults, RandomStream& rng) const {
        if (t.num_qubits() < register_size()) {
            throw ConfigError("register too small for error-correction cycle");
        }
        EcOutcome out;
        out.ancilla_usage = ancillas_;
        std::optional<PauliString> corr;
        switch (style_) {
            case EcStyle::NonFT: {
                out.syndrome = round(t, faults, rng, out, checks_).syndrome;
                out.rounds = 1;
                break;
            }
            case EcStyle::SurfaceOrderedFT: {
                // A nonzero first syndrome may be partial; a second round then sees the settled error.
                out.syndrome = round(t, faults, rng, out, checks_).syndrome;
                out.rounds = 1;
                if (out.syndrome != 0) {
                    out.syndrome = round(t, faults, rng, out, checks_).syndrome;
                    out.rounds = 2;
                }
                break;
            }
            case EcStyle::ShorFT: {
                std::array<std::uint32_t, 3> s{};
                for (int r = 0; r < 3; ++r) {
                    s[static_cast<std::size_t>(r)] = round(t, faults, rng, out, checks_).syndrome;
                    ++out.rounds;
                }
                if (s[0] == s[1] || s[0] == s[2]) {
                    out.syndrome = s[0];
                } else if (s[1] == s[2]) {
                    out.syndrome = s[1];
                } else {
                    out.syndrome = 0;
                }
                break;
            }
            case EcStyle::FlagFT: {
                // One flagged round; anything nontrivial triggers one unflagged round, decoded through
                // the flag table of the first flagged check.
                RoundResult first = round(t, faults, rng, out, checks_);
                out.rounds = 1;
                if (first.flags == 0 && first.syndrome == 0) {
                    out.syndrome = 0;
                    break;
                }
                out.syndrome = round(t, faults, rng, out, plain_checks_).syndrome;
                ++out.rounds;
                if (first.flags) {
                    out.flag_raised = true;
                    corr = flag_correction(static_cast<std::uint32_t>(std::countr_zero(first.flags)), out.syndrome);
                }
                break;
            }
        }
        out.correction = corr ? *corr : code_->correction(out.syndrome);
        apply_correction(t, out.correction, faults);
        return out;
    }

  private:
    struct RoundResult {
        std::uint32_t syndrome = 0;
        std::uint32_t flags = 0;
    };

    template <class Faults>
    RoundResult round(StabilizerTableau& t, Faults& faults, RandomStream& rng, EcOutcome& out,
                      const std::vector<detail::CheckProgram>& checks) const {
        RoundResult r;
        Outcomes bits;
        for (std::uint32_t j = 0; j < checks.size(); ++j) {
            const auto& ch = checks[j];
            if (!ch.prep.empty()) {
                for (std::uint32_t attempt = 0;; ++attempt) {
                    if (attempt >= kMaxRestarts) {
                        throw ConfigError("p_e: cat-state verification never succeeded");
                    }
                    bits.clear();
                    execute(ch.prep, t, faults, rng, bits);
                    if (!bits[static_cast<std::size_t>(ch.verify_bit)]) {
                        break;
                    }
                    ++out.restarts;
                }
            }
            bits.clear();
            execute(ch.body, t, faults, rng, bits);
            std::uint8_t s = 0;
            for (int b : ch.syndrome_bits) {
                s ^= bits[static_cast<std::size_t>(b)];
            }
            if (s) {
                r.syndrome |= 1u << j;
            }
            if (ch.flag_bit >= 0 && bits[static_cast<std::size_t>(ch.flag_bit)]) {
                r.flags |= 1u << j;
            }
        }
        return r;
    }

    template <class Faults>
    void apply_correction(StabilizerTableau& t, const PauliString& c, Faults& faults) const {
        if (!opts_.noisy_correction) {
            t.apply_pauli(c.widened(t.num_qubits()));
            return;
        }
        static constexpr GateKind kGate[] = {GateKind::X, GateKind::X, GateKind::Y, GateKind::Z};
        RandomStream unused(0);
        for (std::uint32_t q = 0; q < c.n; ++q) {
            int comp = c.component(q);
            if (comp) {
                execute(Element::gate1(kGate[comp], q), t, faults, unused);
            }
        }
    }

    /// For each check, every single fault that raises its flag is propagated to a data error;
    /// errors sharing a syndrome must agree up to stabilizers.
    void build_flag_tables() {
        const std::uint32_t n = code_->n;
        const std::uint32_t nq = register_size();
        flag_tables_.assign(checks_.size(), {});
        for (std::size_t j = 0; j < checks_.size(); ++j) {
            const auto& ch = checks_[j];
            for (std::size_t k = 0; k < ch.body.size(); ++k) {
                int choices = fault_choices(ch.body[k].kind);
                for (int f = 1; f <= choices; ++f) {
                    auto pf = detail::propagate_fault(ch.body, k, f, nq);
                    if (!pf.flips[static_cast<std::size_t>(ch.flag_bit)]) {
                        continue;
                    }
                    PauliString e = pf.frame.truncated(n);
                    std::uint32_t s = code_->syndrome_of(e);
                    auto [it, fresh] = flag_tables_[j].emplace(s, e);
                    if (!fresh) {
                        if (code_->is_logical_error(it->second * e)) {
                            throw ConfigError("flag table collision on check " + std::to_string(j));
                        }
                        if (e.weight() < it->second.weight()) {
                            it->second = e;
                        }
                    }
                }
            }
        }
    }

    static constexpr std::uint32_t kMaxRestarts = 100000;

    const CodeSpec* code_;
    EcStyle style_;
    EcOptions opts_;
    std::uint32_t ancillas_ = 0;
    std::vector<detail::CheckProgram> checks_;
    /// FlagFT only: unflagged checks for the follow-up round.
    std::vector<detail::CheckProgram> plain_checks_;
    std::vector<std::map<std::uint32_t, PauliString>> flag_tables_;
};

}  // namespace qmem
