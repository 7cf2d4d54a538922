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

// Exact memory channels on density matrices, and the unconstrained ("powerful") Bob.

#pragma once

#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "qmem/dense.hpp"
#include "qmem/protocol.hpp"

namespace qmem {

/// Registers (data plus one ancilla) beyond this are refused by the exact channel.
inline constexpr std::uint32_t kMaxExactRegister = 8;

struct ExactChannel {
    /// Guess probability per axis (X, Y, Z), averaged over both signs.
    std::array<double, 3> p_g{};
    /// Logical Pauli transfer matrix: ptm[i][j] = Tr(sigma_i Phi(sigma_j)) / 2.
    std::array<std::array<double, 3>, 3> ptm{};
    /// Logical Bloch offset Phi(I/2) in Pauli components.
    std::array<double, 3> offset{};
    /// Integrity over the tested axes: min_j (2 p_g - 1).
    double R = 0.0;
};

namespace detail {

/// m <- P m (P a Pauli on the row index).
inline CMatrix pauli_left(const CMatrix& m, const PauliString& p) {
    CMatrix out(m.rows(), m.cols());
    for (Eigen::Index k = 0; k < m.rows(); ++k) {
        auto dst = static_cast<Eigen::Index>(static_cast<std::uint64_t>(k) ^ p.x);
        out.row(dst) = pauli_coeff(p, static_cast<std::uint64_t>(k)) * m.row(k);
    }
    return out;
}

/// (I + sign G) rho (I + sign G) / 4
inline CMatrix project_pauli(const CMatrix& rho, const PauliString& g, int sign) {
    CMatrix gr = pauli_left(rho, g);
    CMatrix grg = pauli_left(CMatrix(gr.adjoint()), g);  // G (G rho)^dag = G rho^dag G = G rho G
    CMatrix sum = rho + grg;
    CMatrix cross = gr + CMatrix(gr.adjoint());
    return 0.25 * (sum + static_cast<double>(sign) * cross);
}

inline PauliString single_fault(std::uint32_t n, std::uint32_t q, int comp) {
    PauliString p(n);
    if (comp == 1 || comp == 2) {
        p.x |= std::uint64_t{1} << q;
    }
    if (comp == 2 || comp == 3) {
        p.z |= std::uint64_t{1} << q;
    }
    return p;
}

/// Exact execution of one element with fault probability p_e. The ancilla, when present, is the
/// top qubit.
inline void dense_element(DensityMatrix& rho, const Element& e, double p_e) {
    switch (e.kind) {
        case ElementKind::Prep:
            if (e.basis != PauliAxis::Z) {
                rho.apply(CliffordOp{GateKind::H, e.q0, 0});
            }
            if (e.basis == PauliAxis::Y) {
                rho.apply(CliffordOp{GateKind::S, e.q0, 0});
            }
            if (e.minus) {
                rho.apply_pauli(single_fault(rho.num_qubits(), e.q0, flip_for_basis(e.basis)));
            }
            if (p_e > 0) {
                rho.depolarize1(e.q0, p_e);
            }
            break;
        case ElementKind::Gate1:
            rho.apply(e.op());
            if (p_e > 0) {
                rho.depolarize1(e.q0, p_e);
            }
            break;
        case ElementKind::Gate2:
            rho.apply(e.op());
            if (p_e > 0) {
                rho.depolarize2(e.q0, e.q1, p_e);
            }
            break;
        case ElementKind::Meas:
            throw OracleUnavailable("measurement handled by the caller");
    }
}

/// Data block after the ancilla's measurement reads `bit` (unnormalised).
inline DensityMatrix dense_measure_top(DensityMatrix rho, const Element& meas, double p_e, int bit) {
    const std::uint32_t top = rho.num_qubits() - 1;
    if (p_e > 0) {
        PauliString flip = single_fault(rho.num_qubits(), top, flip_for_basis(meas.basis));
        rho.apply_pauli_mixture({{1 - p_e, PauliString(rho.num_qubits())}, {p_e, flip}});
    }
    if (meas.basis == PauliAxis::X) {
        rho.apply(CliffordOp{GateKind::H, top, 0});
    } else if (meas.basis == PauliAxis::Y) {
        rho.apply(CliffordOp{GateKind::SDag, top, 0});
        rho.apply(CliffordOp{GateKind::H, top, 0});
    }
    return rho.project_top(bit);
}

class ExactRunner {
  public:
    explicit ExactRunner(const Experiment& exp) : exp_(exp), cfg_(exp.config()) {
        if (cfg_.alice != EndpointStyle::Ideal || cfg_.bob != EndpointStyle::Ideal) {
            throw OracleUnavailable("exact channel supports ideal endpoints only");
        }
        if (!cfg_.physical()) {
            if (cfg_.ec_style != EcStyle::NonFT) {
                throw OracleUnavailable("exact channel supports the non_ft style only");
            }
            code_ = exp.code();
            if (code_->n + 1 > kMaxExactRegister) {
                throw OracleUnavailable("exact channel limited to " + std::to_string(kMaxExactRegister) +
                                        "-qubit registers");
            }
            for (const auto& ch : exp.cycle()->checks()) {
                if (!ch.prep.empty() || ch.body.empty() || ch.body.back().kind != ElementKind::Meas ||
                    ch.body.back().q0 != code_->n) {
                    throw OracleUnavailable("check circuit shape not supported by the exact channel");
                }
            }
        }
    }

    /// Data state Bob receives for the given Alice input.
    DensityMatrix received(PauliAxis axis, int sign) const {
        const std::uint32_t n = code_ ? code_->n : 1;
        DenseState psi(n);
        psi.apply(axis_eigenstate_prep(0, axis, sign));
        if (code_) {
            psi.apply(code_->encoder);
        }
        DensityMatrix rho = DensityMatrix::pure(psi);
        const double T = cfg_.noise.T;
        const int m = code_ ? cfg_.m : 0;
        const double seg = (cfg_.duration() - m * cfg_.delta) / (m + 1);
        for (int k = 0; k <= m; ++k) {
            idle(rho, env_error_prob(seg, T));
            if (k < m) {
                rho = cycle(rho);
            }
        }
        return rho;
    }

    /// Ideal Bob's correction followed by decoding: the logical qubit's Bloch vector.
    std::array<double, 3> decoded_bloch(const DensityMatrix& rho) const {
        std::array<double, 3> out{};
        if (!code_) {
            for (auto a : kAllAxes) {
                out[static_cast<std::size_t>(a)] =
                    rho.expectation(PauliString::single(1, 0, a));
            }
            return out;
        }
        CMatrix acc = CMatrix::Zero(rho.dim(), rho.dim());
        const std::uint32_t r = code_->num_checks();
        for (std::uint32_t s = 0; s < (1u << r); ++s) {
            CMatrix block = rho.matrix();
            for (std::uint32_t i = 0; i < r; ++i) {
                block = project_pauli(block, code_->stabilizers[i], ((s >> i) & 1) ? -1 : 1);
            }
            DensityMatrix b(code_->n, std::move(block));
            b.apply_pauli(code_->correction(s));
            acc += b.matrix();
        }
        DensityMatrix corrected(code_->n, std::move(acc));
        for (auto a : kAllAxes) {
            out[static_cast<std::size_t>(a)] = corrected.expectation(code_->logical(a));
        }
        return out;
    }

  private:
    void idle(DensityMatrix& rho, double p) const {
        if (p <= 0) {
            return;
        }
        const std::uint32_t n = code_ ? code_->n : 1;
        for (std::uint32_t q = 0; q < n; ++q) {
            if (cfg_.noise.env == EnvKind::Dephasing) {
                rho.dephase(q, p);
            } else {
                rho.depolarize1(q, p);
            }
        }
    }

    DensityMatrix cycle(const DensityMatrix& rho) const {
        CMatrix acc = CMatrix::Zero(rho.dim(), rho.dim());
        branch(rho, 0, 0, acc);
        return DensityMatrix(rho.num_qubits(), std::move(acc));
    }

    void branch(const DensityMatrix& data, std::size_t j, std::uint32_t syndrome, CMatrix& acc) const {
        const auto& checks = exp_.cycle()->checks();
        const double p_e = cfg_.noise.p_e;
        if (j == checks.size()) {
            DensityMatrix out = data;
            const PauliString& c = code_->correction(syndrome);
            if (!cfg_.ec.noisy_correction) {
                out.apply_pauli(c);
            } else {
                static constexpr GateKind kGate[] = {GateKind::X, GateKind::X, GateKind::Y, GateKind::Z};
                for (std::uint32_t q = 0; q < c.n; ++q) {
                    if (int comp = c.component(q)) {
                        dense_element(out, Element::gate1(kGate[comp], q), p_e);
                    }
                }
            }
            acc += out.matrix();
            return;
        }
        const auto& body = checks[j].body;
        DensityMatrix rho = data.with_top_zero();
        for (std::size_t k = 0; k + 1 < body.size(); ++k) {
            dense_element(rho, body[k], p_e);
        }
        for (int bit = 0; bit < 2; ++bit) {
            DensityMatrix next = dense_measure_top(rho, body.back(), p_e, bit);
            if (std::abs(next.trace()) < 1e-300) {
                continue;
            }
            branch(next, j + 1, syndrome | (static_cast<std::uint32_t>(bit) << j), acc);
        }
    }

    const Experiment& exp_;
    const ExperimentConfig& cfg_;
    const CodeSpec* code_ = nullptr;
};

}  // namespace detail

/// Exact guess probabilities and logical transfer matrix. Throws OracleUnavailable outside the
/// supported family (ideal endpoints; bare qubit or non_ft cycles on registers up to 8 qubits).
inline ExactChannel exact_channel(const ExperimentConfig& cfg) {
    Experiment exp(cfg);
    detail::ExactRunner runner(exp);
    ExactChannel out;
    std::array<std::array<double, 3>, 2> bloch_for[3];
    for (auto j : kAllAxes) {
        for (int si = 0; si < 2; ++si) {
            int sign = si == 0 ? 1 : -1;
            bloch_for[static_cast<std::size_t>(j)][static_cast<std::size_t>(si)] =
                runner.decoded_bloch(runner.received(j, sign));
        }
    }
    for (std::size_t j = 0; j < 3; ++j) {
        const auto& plus = bloch_for[j][0];
        const auto& minus = bloch_for[j][1];
        for (std::size_t i = 0; i < 3; ++i) {
            out.ptm[i][j] = (plus[i] - minus[i]) / 2;
        }
        out.p_g[j] = 0.5 * ((1 + plus[j]) / 2 + (1 - minus[j]) / 2);
    }
    for (std::size_t i = 0; i < 3; ++i) {
        out.offset[i] = (bloch_for[0][0][i] + bloch_for[0][1][i]) / 2;
    }
    out.R = 1.0;
    for (auto a : exp.axes()) {
        out.R = std::min(out.R, 2 * out.p_g[static_cast<std::size_t>(a)] - 1);
    }
    return out;
}

/// Unconstrained Bob compared with the standard one on the same trials.
///
/// Every trajectory leaves the data in a Pauli-corrupted codeword, so the received states for
/// the two signs are block diagonal over syndromes and the optimal measurement is a per-syndrome
/// majority decision. The decision table is fitted on one half of the trials and scored on the
/// other (and vice versa), which keeps the estimate free of selection bias.
struct PowerfulBobAxis {
    PauliAxis axis = PauliAxis::Z;
    std::uint64_t trials = 0;
    std::uint64_t standard = 0;
    std::uint64_t powerful = 0;
    /// Sum over trials of (powerful - standard)^2, for the paired standard error.
    std::uint64_t disagreements = 0;

    double p_standard() const {
        return static_cast<double>(standard) / static_cast<double>(trials);
    }
    double p_powerful() const {
        return static_cast<double>(powerful) / static_cast<double>(trials);
    }
    double gap() const {
        return p_powerful() - p_standard();
    }
    double gap_sigma() const {
        double n = static_cast<double>(trials);
        double mean = gap();
        double second = static_cast<double>(disagreements) / n;
        return std::sqrt(std::max(second - mean * mean, 1.0 / (n * n)) / n);
    }
};

struct PowerfulBobEstimate {
    std::vector<PowerfulBobAxis> per_axis;

    /// Axis where the standard Bob is worst.
    const PowerfulBobAxis& worst() const {
        const PowerfulBobAxis* w = &per_axis.front();
        for (const auto& a : per_axis) {
            if (a.p_standard() < w->p_standard()) {
                w = &a;
            }
        }
        return *w;
    }
    /// Powerful Bob's own worst-axis guess probability.
    double p_B() const {
        double p = 1.0;
        for (const auto& a : per_axis) {
            p = std::min(p, a.p_powerful());
        }
        return p;
    }
};

inline PowerfulBobEstimate powerful_bob(const ExperimentConfig& cfg, const RunOptions& opts = {}) {
    if (cfg.bob != EndpointStyle::Ideal) {
        throw ConfigError("bob_style: the powerful-Bob comparison needs the ideal Bob");
    }
    Experiment exp(cfg);
    const std::uint32_t S = exp.syndrome_space();
    PowerfulBobEstimate est;
    const std::uint64_t n = cfg.n_runs;
    const auto& axes = exp.axes();
    for (std::size_t ai = 0; ai < axes.size(); ++ai) {
        const std::uint64_t share = n / axes.size() + (ai < n % axes.size() ? 1 : 0);
        // counts[half][s][success]
        std::vector<std::uint64_t> counts(2 * S * 2, 0);
        std::vector<std::uint8_t> syndromes(share);
        std::vector<std::uint8_t> success(share);
        std::vector<std::uint32_t> syn32;
        const bool wide = S > 256;
        if (wide) {
            syn32.resize(share);
        }
        std::atomic<std::uint64_t> next{0};
        constexpr std::uint64_t kBlock = 2048;
        auto worker = [&] {
            for (;;) {
                std::uint64_t b = next.fetch_add(kBlock);
                if (b >= share) {
                    return;
                }
                for (std::uint64_t i = b; i < std::min(share, b + kBlock); ++i) {
                    auto r = exp.record(axes[ai], i);
                    success[i] = r.success;
                    if (wide) {
                        syn32[i] = r.syndrome;
                    } else {
                        syndromes[i] = static_cast<std::uint8_t>(r.syndrome);
                    }
                }
            }
        };
        unsigned threads = std::max(1u, opts.threads);
        if (threads == 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (unsigned t = 0; t < threads; ++t) {
                pool.emplace_back(worker);
            }
            for (auto& t : pool) {
                t.join();
            }
        }
        auto syn = [&](std::uint64_t i) -> std::uint32_t { return wide ? syn32[i] : syndromes[i]; };
        for (std::uint64_t i = 0; i < share; ++i) {
            ++counts[((i & 1) * S + syn(i)) * 2 + success[i]];
        }
        PowerfulBobAxis a;
        a.axis = axes[ai];
        a.trials = share;
        for (std::uint64_t i = 0; i < share; ++i) {
            std::uint64_t other = (i & 1) ^ 1;
            std::uint64_t keep = counts[(other * S + syn(i)) * 2 + 1];
            std::uint64_t flip = counts[(other * S + syn(i)) * 2 + 0];
            // Flip the standard guess only when the other half says flipping wins.
            bool powerful_ok = flip > keep ? !success[i] : success[i];
            a.standard += success[i];
            a.powerful += powerful_ok;
            a.disagreements += powerful_ok != static_cast<bool>(success[i]);
        }
        est.per_axis.push_back(a);
    }
    return est;
}

}  // namespace qmem
