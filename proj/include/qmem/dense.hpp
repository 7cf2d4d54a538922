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

// Small-instance linear algebra: state vectors, density matrices, trace norm, fidelity and
// trace distance. Basis index bit q is qubit q.

#pragma once

#include <Eigen/Dense>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qmem/clifford.hpp"
#include "qmem/pauli.hpp"

namespace qmem {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Every numerical tolerance used by the dense oracle.
struct OracleTolerances {
    double state_norm = 1e-10;
    double trace = 1e-9;
    double hermitian = 1e-10;
    double min_eigenvalue = -1e-9;
    double branch_sum = 1e-9;
    double pauli_offdiag = 1e-9;
};

inline constexpr OracleTolerances kTolerances{};

inline constexpr std::uint32_t kMaxStateQubits = 12;
inline constexpr std::uint32_t kMaxDensityQubits = 10;

/// Thrown when an instance exceeds what the dense oracle will represent.
class OracleUnavailable : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

/// Column-wise gate application: m <- U m, for a Clifford gate on the row index.
inline void apply_gate_rows(CMatrix& m, const CliffordOp& g) {
    const Eigen::Index d = m.rows();
    const std::uint64_t a = std::uint64_t{1} << g.q0;
    const std::uint64_t b = std::uint64_t{1} << g.q1;
    const double r = 1.0 / std::sqrt(2.0);
    const cplx I(0, 1);
    for (Eigen::Index i = 0; i < d; ++i) {
        auto u = static_cast<std::uint64_t>(i);
        switch (g.kind) {
            case GateKind::H:
                if (!(u & a)) {
                    auto j = static_cast<Eigen::Index>(u | a);
                    for (Eigen::Index c = 0; c < m.cols(); ++c) {
                        cplx lo = m(i, c);
                        cplx hi = m(j, c);
                        m(i, c) = r * (lo + hi);
                        m(j, c) = r * (lo - hi);
                    }
                }
                break;
            case GateKind::S:
                if (u & a) {
                    m.row(i) *= I;
                }
                break;
            case GateKind::SDag:
                if (u & a) {
                    m.row(i) *= -I;
                }
                break;
            case GateKind::X:
                if (!(u & a)) {
                    m.row(i).swap(m.row(static_cast<Eigen::Index>(u | a)));
                }
                break;
            case GateKind::Y:
                if (!(u & a)) {
                    auto j = static_cast<Eigen::Index>(u | a);
                    for (Eigen::Index c = 0; c < m.cols(); ++c) {
                        cplx lo = m(i, c);
                        cplx hi = m(j, c);
                        m(i, c) = -I * hi;
                        m(j, c) = I * lo;
                    }
                }
                break;
            case GateKind::Z:
                if (u & a) {
                    m.row(i) *= -1.0;
                }
                break;
            case GateKind::CX:
                if ((u & a) && !(u & b)) {
                    m.row(i).swap(m.row(static_cast<Eigen::Index>(u | b)));
                }
                break;
            case GateKind::CZ:
                if ((u & a) && (u & b)) {
                    m.row(i) *= -1.0;
                }
                break;
        }
    }
}

/// P|k> = coeff(k) |k ^ p.x>
inline cplx pauli_coeff(const PauliString& p, std::uint64_t k) {
    static const cplx kPow[4] = {cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)};
    int e = p.phase + std::popcount(p.x & p.z) + 2 * std::popcount(k & p.z);
    return kPow[e & 3];
}

}  // namespace detail

/// Dense matrix of a Pauli string.
inline CMatrix pauli_matrix(const PauliString& p) {
    const std::uint64_t d = std::uint64_t{1} << p.n;
    CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::uint64_t k = 0; k < d; ++k) {
        m(static_cast<Eigen::Index>(k ^ p.x), static_cast<Eigen::Index>(k)) = detail::pauli_coeff(p, k);
    }
    return m;
}

/// Pure state on at most 12 qubits.
class DenseState {
  public:
    explicit DenseState(std::uint32_t n) : n_(n) {
        if (n > kMaxStateQubits) {
            throw OracleUnavailable("state vector limited to 12 qubits");
        }
        amps_ = CVector::Zero(static_cast<Eigen::Index>(std::uint64_t{1} << n));
        amps_(0) = 1.0;
    }

    std::uint32_t num_qubits() const {
        return n_;
    }
    const CVector& amplitudes() const {
        return amps_;
    }

    void apply(const CliffordOp& g) {
        g.validate(n_);
        CMatrix col = amps_;
        detail::apply_gate_rows(col, g);
        amps_ = col.col(0);
    }
    void apply(const Circuit& c) {
        for (const auto& g : c) {
            apply(g);
        }
    }
    void apply_pauli(const PauliString& p) {
        check(p);
        CVector out(amps_.size());
        for (Eigen::Index k = 0; k < amps_.size(); ++k) {
            auto u = static_cast<std::uint64_t>(k);
            out(static_cast<Eigen::Index>(u ^ p.x)) = detail::pauli_coeff(p, u) * amps_(k);
        }
        amps_ = out;
    }

    /// <psi|P|psi>
    double expectation(const PauliString& p) const {
        check(p);
        cplx acc = 0;
        for (Eigen::Index k = 0; k < amps_.size(); ++k) {
            auto u = static_cast<std::uint64_t>(k);
            acc += std::conj(amps_(static_cast<Eigen::Index>(u ^ p.x))) * detail::pauli_coeff(p, u) * amps_(k);
        }
        return acc.real();
    }

    /// Probability that measuring Hermitian p yields +1.
    double probability_plus(const PauliString& p) const {
        return 0.5 * (1.0 + expectation(p));
    }

    /// Projects onto the `outcome` eigenspace of p and renormalises.
    void project(const PauliString& p, int outcome) {
        check(p);
        DenseState copy = *this;
        copy.apply_pauli(p);
        amps_ = 0.5 * (amps_ + static_cast<double>(outcome) * copy.amps_);
        double nrm = amps_.norm();
        if (nrm < 1e-14) {
            throw std::runtime_error("projection onto zero-probability outcome");
        }
        amps_ /= nrm;
    }

    bool normalized() const {
        return std::abs(amps_.norm() - 1.0) < kTolerances.state_norm;
    }

  private:
    void check(const PauliString& p) const {
        if (p.n != n_) {
            throw ConfigError("Pauli size does not match state");
        }
    }

    std::uint32_t n_;
    CVector amps_;
};

/// Density matrix on at most 10 qubits.
class DensityMatrix {
  public:
    DensityMatrix() = default;
    explicit DensityMatrix(std::uint32_t n) : n_(n) {
        check_cap(n);
        rho_ = CMatrix::Zero(dim(), dim());
        rho_(0, 0) = 1.0;
    }
    DensityMatrix(std::uint32_t n, CMatrix m) : n_(n), rho_(std::move(m)) {
        check_cap(n);
        if (rho_.rows() != dim() || rho_.cols() != dim()) {
            throw ConfigError("density matrix dimension does not match qubit count");
        }
    }
    static DensityMatrix pure(const DenseState& s) {
        if (s.num_qubits() > kMaxDensityQubits) {
            throw OracleUnavailable("density matrix limited to 10 qubits");
        }
        return DensityMatrix(s.num_qubits(), s.amplitudes() * s.amplitudes().adjoint());
    }
    static DensityMatrix maximally_mixed(std::uint32_t n) {
        DensityMatrix r(n);
        r.rho_ = CMatrix::Identity(r.dim(), r.dim()) / static_cast<double>(r.dim());
        return r;
    }

    std::uint32_t num_qubits() const {
        return n_;
    }
    Eigen::Index dim() const {
        return static_cast<Eigen::Index>(std::uint64_t{1} << n_);
    }
    const CMatrix& matrix() const {
        return rho_;
    }
    CMatrix& matrix() {
        return rho_;
    }
    cplx trace() const {
        return rho_.trace();
    }

    void apply(const CliffordOp& g) {
        g.validate(n_);
        detail::apply_gate_rows(rho_, g);
        CMatrix t = rho_.adjoint();
        detail::apply_gate_rows(t, g);
        rho_ = t.adjoint();
    }
    void apply(const Circuit& c) {
        for (const auto& g : c) {
            apply(g);
        }
    }

    /// rho <- P rho P^dag
    void apply_pauli(const PauliString& p) {
        rho_ = conjugated(p);
    }
    CMatrix conjugated(const PauliString& p) const {
        if (p.n != n_) {
            throw ConfigError("Pauli size does not match density matrix");
        }
        const Eigen::Index d = dim();
        CMatrix out(d, d);
        std::vector<cplx> c(static_cast<std::size_t>(d));
        for (Eigen::Index k = 0; k < d; ++k) {
            c[static_cast<std::size_t>(k)] = detail::pauli_coeff(p, static_cast<std::uint64_t>(k));
        }
        for (Eigen::Index j = 0; j < d; ++j) {
            auto sj = static_cast<Eigen::Index>(static_cast<std::uint64_t>(j) ^ p.x);
            cplx cj = std::conj(c[static_cast<std::size_t>(sj)]);
            for (Eigen::Index i = 0; i < d; ++i) {
                auto si = static_cast<Eigen::Index>(static_cast<std::uint64_t>(i) ^ p.x);
                out(i, j) = c[static_cast<std::size_t>(si)] * rho_(si, sj) * cj;
            }
        }
        return out;
    }

    /// Sum_k w_k P_k rho P_k^dag
    void apply_pauli_mixture(const std::vector<std::pair<double, PauliString>>& branches) {
        CMatrix acc = CMatrix::Zero(dim(), dim());
        double total = 0;
        for (const auto& [w, p] : branches) {
            if (w == 0) {
                continue;
            }
            total += w;
            acc += w * conjugated(p);
        }
        if (std::abs(total - 1.0) > kTolerances.branch_sum) {
            throw ConfigError("Pauli mixture weights must sum to one");
        }
        rho_ = acc;
    }

    /// Replaces the qubits in `mask` by the maximally mixed state with weight `lambda`:
    /// rho <- (1 - lambda) rho + lambda Tr_mask(rho) (x) I/2^k.
    void twirl(std::uint64_t mask, double lambda) {
        if (lambda == 0) {
            return;
        }
        const Eigen::Index d = dim();
        const int k = std::popcount(mask);
        const double scale = 1.0 / static_cast<double>(std::uint64_t{1} << k);
        CMatrix out = (1.0 - lambda) * rho_;
        for (Eigen::Index i = 0; i < d; ++i) {
            auto ui = static_cast<std::uint64_t>(i);
            for (Eigen::Index j = 0; j < d; ++j) {
                auto uj = static_cast<std::uint64_t>(j);
                if ((ui ^ uj) & mask) {
                    continue;
                }
                // Sum over the traced sub-block diagonal that matches (i, j) outside the mask.
                cplx s = 0;
                std::uint64_t base_i = ui & ~mask;
                std::uint64_t base_j = uj & ~mask;
                std::uint64_t sub = 0;
                do {
                    s += rho_(static_cast<Eigen::Index>(base_i | sub), static_cast<Eigen::Index>(base_j | sub));
                    sub = (sub - mask) & mask;
                } while (sub != 0);
                out(i, j) += lambda * scale * s;
            }
        }
        rho_ = out;
    }

    /// Single-qubit depolarizing channel: X, Y, Z each with probability p/3.
    void depolarize1(std::uint32_t q, double p) {
        twirl(std::uint64_t{1} << q, 4.0 * p / 3.0);
    }
    /// Two-qubit depolarizing channel: each of the 15 non-identity Paulis with probability p/15.
    void depolarize2(std::uint32_t a, std::uint32_t b, double p) {
        twirl((std::uint64_t{1} << a) | (std::uint64_t{1} << b), 16.0 * p / 15.0);
    }
    /// Z with probability p.
    void dephase(std::uint32_t q, double p) {
        const std::uint64_t m = std::uint64_t{1} << q;
        for (Eigen::Index j = 0; j < dim(); ++j) {
            for (Eigen::Index i = 0; i < dim(); ++i) {
                if ((static_cast<std::uint64_t>(i) ^ static_cast<std::uint64_t>(j)) & m) {
                    rho_(i, j) *= 1.0 - 2.0 * p;
                }
            }
        }
    }

    /// Unnormalised block for outcome `bit` of a Z measurement on the top qubit, with that
    /// qubit traced out.
    DensityMatrix project_top(int bit) const {
        const Eigen::Index h = dim() / 2;
        return DensityMatrix(n_ - 1, rho_.block(bit ? h : 0, bit ? h : 0, h, h));
    }
    /// Appends a fresh |0> as the new top qubit.
    DensityMatrix with_top_zero() const {
        check_cap(n_ + 1);
        CMatrix m = CMatrix::Zero(2 * dim(), 2 * dim());
        m.topLeftCorner(dim(), dim()) = rho_;
        return DensityMatrix(n_ + 1, std::move(m));
    }

    double expectation(const PauliString& p) const {
        if (p.n != n_) {
            throw ConfigError("Pauli size does not match density matrix");
        }
        // Tr(P rho) = sum_k <k|P rho|k> = sum_k coeff * rho(k ^ x, k)... accumulated directly.
        cplx acc = 0;
        for (Eigen::Index k = 0; k < dim(); ++k) {
            auto u = static_cast<std::uint64_t>(k);
            acc += detail::pauli_coeff(p, u) * rho_(k, static_cast<Eigen::Index>(u ^ p.x));
        }
        return acc.real();
    }

    /// Trace one within tolerance, Hermitian, and positive semidefinite within tolerance.
    bool valid() const {
        if (std::abs(rho_.trace() - cplx(1, 0)) > kTolerances.trace) {
            return false;
        }
        if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > kTolerances.hermitian) {
            return false;
        }
        Eigen::SelfAdjointEigenSolver<CMatrix> es(rho_, Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff() >= kTolerances.min_eigenvalue;
    }

  private:
    static void check_cap(std::uint32_t n) {
        if (n > kMaxDensityQubits) {
            throw OracleUnavailable("density matrix limited to 10 qubits");
        }
    }

    std::uint32_t n_ = 0;
    CMatrix rho_;
};

/// Sum of singular values.
inline double trace_norm(const CMatrix& m) {
    if (m.rows() != m.cols()) {
        throw ConfigError("trace norm needs a square matrix");
    }
    if (m.size() == 0) {
        return 0.0;
    }
    Eigen::BDCSVD<CMatrix> svd(m);
    return svd.singularValues().sum();
}

/// Trace norm of a Hermitian matrix via its eigenvalues.
inline double hermitian_trace_norm(const CMatrix& m) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
}

inline CMatrix psd_sqrt(const CMatrix& m) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

/// Squared fidelity ||sqrt(rho0) sqrt(rho1)||_tr^2.
inline double fidelity(const DensityMatrix& rho0, const DensityMatrix& rho1) {
    if (rho0.num_qubits() != rho1.num_qubits()) {
        throw ConfigError("fidelity of states with different dimensions");
    }
    double t = trace_norm(psd_sqrt(rho0.matrix()) * psd_sqrt(rho1.matrix()));
    return std::min(1.0, t * t);
}

inline double trace_distance(const DensityMatrix& rho0, const DensityMatrix& rho1) {
    if (rho0.num_qubits() != rho1.num_qubits()) {
        throw ConfigError("trace distance of states with different dimensions");
    }
    return 0.5 * hermitian_trace_norm(rho1.matrix() - rho0.matrix());
}

}  // namespace qmem
