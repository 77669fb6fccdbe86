// Copyright 2026 The qdac Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstdlib>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qdac/errors.hpp"
#include "qdac/layout.hpp"
#include "qdac/linalg.hpp"

namespace qdac {

/// Dense qubit budget for explicit 2^q x 2^q matrices. Overridable through
/// the QDAC_DENSE_LIMIT environment variable.
inline int dense_qubit_limit() {
    if (const char* env = std::getenv("QDAC_DENSE_LIMIT")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 12;
}

inline void require_dense_capacity(int qubits) {
    const int limit = dense_qubit_limit();
    if (qubits > limit)
        throw CapacityError("dense representation needs " + std::to_string(qubits) +
                            " qubits, limit is " + std::to_string(limit));
}

/// Explicit density matrix over the computational basis in layout order
/// (data block most significant). The ground-truth backend.
struct DenseState {
    RegisterLayout layout;
    Matrix matrix;

    static DenseState zero(const RegisterLayout& layout) {
        require_dense_capacity(layout.total_qubits());
        return DenseState{layout, Matrix::Zero(static_cast<Eigen::Index>(layout.dim()),
                                               static_cast<Eigen::Index>(layout.dim()))};
    }

    static DenseState from_matrix(const RegisterLayout& layout, Matrix m) {
        require_dense_capacity(layout.total_qubits());
        if (m.rows() != static_cast<Eigen::Index>(layout.dim()) || m.rows() != m.cols())
            throw LayoutError("matrix dimension does not match layout");
        return DenseState{layout, std::move(m)};
    }
};

/// One product term of a structured state: a weight and a 2x2 density factor
/// per qubit, indexed by global qubit position (0 = least significant).
struct EnsembleComponent {
    double weight = 0.0;
    std::vector<Matrix2> factors;
};

/// Weighted sum of tensor-product components; the scalable backend. For
/// converter outputs the list is indexed by the pointer value k. Components
/// are never merged or deduplicated: the per-k indexing is meaningful.
struct EnsembleState {
    RegisterLayout layout;
    std::vector<EnsembleComponent> components;
};

/// Identity-plus-deviation form of a converter output: data and pointer
/// qubits reduce to classical bits, each ancilla to one coefficient c scaling
/// Z/2 on top of the I/2 background (c = 0 means no deviation).
struct DeviationComponent {
    double weight = 0.0;
    std::uint64_t l_value = 0;
    std::uint64_t r_value = 0;
    std::vector<double> ancilla_coeff;  // index i = ancilla i
};

struct DeviationState {
    RegisterLayout layout;
    std::vector<DeviationComponent> components;
};

// ---------------------------------------------------------------------------
// Invariant checks
// ---------------------------------------------------------------------------

struct DensityCheck {
    double hermiticity_defect = 0.0;
    double trace_defect = 0.0;
    double min_eigenvalue = 0.0;

    bool ok() const {
        return hermiticity_defect <= tol::hermiticity && trace_defect <= tol::trace &&
               min_eigenvalue >= -tol::psd;
    }
};

inline DensityCheck check_density(const Matrix& m) {
    DensityCheck c;
    c.hermiticity_defect = hermiticity_defect(m);
    c.trace_defect = std::abs(m.trace().real() - 1.0) + std::abs(m.trace().imag());
    Eigen::SelfAdjointEigenSolver<Matrix> es(((m + m.adjoint()) / 2.0).eval(),
                                             Eigen::EigenvaluesOnly);
    c.min_eigenvalue = es.eigenvalues().minCoeff();
    return c;
}

inline void require_valid(const DenseState& s) {
    const DensityCheck c = check_density(s.matrix);
    if (!c.ok())
        throw InvariantError("density-matrix invariants violated (hermiticity " +
                             std::to_string(c.hermiticity_defect) + ", trace " +
                             std::to_string(c.trace_defect) + ", min eig " +
                             std::to_string(c.min_eigenvalue) + ")");
}

inline void require_valid(const EnsembleState& s) {
    const int q = s.layout.total_qubits();
    double total = 0.0;
    for (const auto& comp : s.components) {
        if (comp.weight < -tol::trace) throw InvariantError("negative component weight");
        if (static_cast<int>(comp.factors.size()) != q)
            throw InvariantError("component factor count does not match layout");
        for (const auto& f : comp.factors) {
            if (hermiticity_defect(f) > tol::hermiticity)
                throw InvariantError("non-Hermitian single-qubit factor");
            if (std::abs(f.trace().real() - 1.0) + std::abs(f.trace().imag()) > tol::trace)
                throw InvariantError("single-qubit factor trace is not 1");
            Eigen::SelfAdjointEigenSolver<Matrix2> es(((f + f.adjoint()) / 2.0).eval(),
                                                      Eigen::EigenvaluesOnly);
            if (es.eigenvalues().minCoeff() < -tol::psd)
                throw InvariantError("single-qubit factor is not positive semidefinite");
        }
        total += comp.weight;
    }
    if (std::abs(total - 1.0) > tol::trace) throw InvariantError("component weights do not sum to 1");
}

// ---------------------------------------------------------------------------
// densify
// ---------------------------------------------------------------------------

namespace detail {

// Accumulates scale * (x factors[q-1] x ... x factors[0]) into out, skipping
// zero subtrees so basis-projector factors cost nothing.
inline void accumulate_product(Matrix& out, const std::vector<Matrix2>& factors, int level,
                               std::uint64_t row, std::uint64_t col, Complex scale) {
    if (scale == Complex(0.0, 0.0)) return;
    if (level < 0) {
        out(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) += scale;
        return;
    }
    const Matrix2& f = factors[static_cast<std::size_t>(level)];
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            accumulate_product(out, factors, level - 1, (row << 1) | static_cast<unsigned>(a),
                               (col << 1) | static_cast<unsigned>(b), scale * f(a, b));
}

}  // namespace detail

/// Expands a structured state into the explicit matrix backend.
inline DenseState densify(const EnsembleState& s) {
    require_dense_capacity(s.layout.total_qubits());
    DenseState out = DenseState::zero(s.layout);
    const int q = s.layout.total_qubits();
    for (const auto& comp : s.components) {
        if (static_cast<int>(comp.factors.size()) != q)
            throw LayoutError("component factor count does not match layout");
        detail::accumulate_product(out.matrix, comp.factors, q - 1, 0, 0, Complex(comp.weight, 0.0));
    }
    return out;
}

/// Expands the deviation tags back into explicit single-qubit factors.
inline EnsembleState reconstruct(const DeviationState& dev) {
    EnsembleState out{dev.layout, {}};
    out.components.reserve(dev.components.size());
    const RegisterLayout& lay = dev.layout;
    for (const auto& comp : dev.components) {
        if (static_cast<int>(comp.ancilla_coeff.size()) != lay.n_a)
            throw LayoutError("deviation coefficient count does not match layout");
        EnsembleComponent ec;
        ec.weight = comp.weight;
        ec.factors.assign(static_cast<std::size_t>(lay.total_qubits()), identity2());
        for (int i = 0; i < lay.n_a; ++i) {
            const double c = comp.ancilla_coeff[static_cast<std::size_t>(i)];
            ec.factors[static_cast<std::size_t>(lay.position(Register::A, i))] =
                c * pauli_z() / 2.0 + identity2() / 2.0;
        }
        for (int j = 0; j < lay.n_r; ++j)
            ec.factors[static_cast<std::size_t>(lay.position(Register::R, j))] =
                basis_projector(static_cast<int>((comp.r_value >> j) & 1));
        for (int i = 0; i < lay.n_l; ++i)
            ec.factors[static_cast<std::size_t>(lay.position(Register::L, i))] =
                basis_projector(static_cast<int>((comp.l_value >> i) & 1));
        out.components.push_back(std::move(ec));
    }
    return out;
}

inline DenseState densify(const DeviationState& dev) { return densify(reconstruct(dev)); }

// ---------------------------------------------------------------------------
// Partial trace and entropy
// ---------------------------------------------------------------------------

namespace detail {

// Spreads the bits of a packed value onto the given global positions
// (positions sorted ascending; packed bit 0 lands on the lowest position).
inline std::uint64_t spread_bits(std::uint64_t packed, const std::vector<int>& positions) {
    std::uint64_t out = 0;
    for (std::size_t i = 0; i < positions.size(); ++i)
        out |= ((packed >> i) & 1) << positions[i];
    return out;
}

}  // namespace detail

/// Trace over the complement of `keep` (global qubit positions). The induced
/// layout keeps each qubit in its original register.
inline DenseState partial_trace(const DenseState& s, std::vector<int> keep) {
    if (keep.empty())
        throw DomainError("empty keep set: the full trace is a scalar, use trace instead");
    std::sort(keep.begin(), keep.end());
    if (std::adjacent_find(keep.begin(), keep.end()) != keep.end())
        throw DomainError("duplicate qubit in keep set");
    const int q = s.layout.total_qubits();
    if (keep.front() < 0 || keep.back() >= q) throw DomainError("keep qubit out of range");

    RegisterLayout new_layout{0, 0, 0};
    std::vector<int> traced;
    for (int p = 0; p < q; ++p) {
        if (std::binary_search(keep.begin(), keep.end(), p)) {
            switch (s.layout.register_of(p)) {
                case Register::L: ++new_layout.n_l; break;
                case Register::R: ++new_layout.n_r; break;
                case Register::A: ++new_layout.n_a; break;
            }
        } else {
            traced.push_back(p);
        }
    }

    const std::uint64_t dk = std::uint64_t{1} << keep.size();
    const std::uint64_t dt = std::uint64_t{1} << traced.size();
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
    for (std::uint64_t a = 0; a < dk; ++a) {
        const std::uint64_t ra = detail::spread_bits(a, keep);
        for (std::uint64_t b = 0; b < dk; ++b) {
            const std::uint64_t rb = detail::spread_bits(b, keep);
            Complex sum = 0.0;
            for (std::uint64_t t = 0; t < dt; ++t) {
                const std::uint64_t rt = detail::spread_bits(t, traced);
                sum += s.matrix(static_cast<Eigen::Index>(ra | rt), static_cast<Eigen::Index>(rb | rt));
            }
            out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = sum;
        }
    }
    return DenseState{new_layout, std::move(out)};
}

/// Von Neumann entropy in bits: -sum lambda log2 lambda over eigenvalues
/// above the numerical cutoff.
inline double von_neumann_entropy(const DenseState& s) {
    if (hermiticity_defect(s.matrix) > tol::hermiticity)
        throw InvariantError("entropy of a non-Hermitian matrix");
    Eigen::SelfAdjointEigenSolver<Matrix> es(((s.matrix + s.matrix.adjoint()) / 2.0).eval(),
                                             Eigen::EigenvaluesOnly);
    double entropy = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double lambda = es.eigenvalues()(i);
        if (lambda < -tol::psd)
            throw InvariantError("entropy of a matrix with eigenvalue " + std::to_string(lambda));
        if (lambda > tol::entropy_cutoff) entropy -= lambda * std::log2(lambda);
    }
    return entropy;
}

// ---------------------------------------------------------------------------
// Ancilla attachment
// ---------------------------------------------------------------------------

/// Appends `count` ancilla qubits in |0> below the existing registers.
inline DenseState attach_ancillas(const DenseState& s, int count) {
    if (s.layout.n_a != 0) throw LayoutError("state already has an ancilla register");
    RegisterLayout lay{s.layout.n_l, s.layout.n_r, count};
    require_dense_capacity(lay.total_qubits());
    DenseState out = DenseState::zero(lay);
    const Eigen::Index d = s.matrix.rows();
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            out.matrix(i << count, j << count) = s.matrix(i, j);
    return out;
}

inline EnsembleState attach_ancillas(const EnsembleState& s, int count) {
    if (s.layout.n_a != 0) throw LayoutError("state already has an ancilla register");
    EnsembleState out{RegisterLayout{s.layout.n_l, s.layout.n_r, count}, {}};
    out.components.reserve(s.components.size());
    for (const auto& comp : s.components) {
        EnsembleComponent ec;
        ec.weight = comp.weight;
        ec.factors.assign(static_cast<std::size_t>(count), projector0());
        ec.factors.insert(ec.factors.end(), comp.factors.begin(), comp.factors.end());
        out.components.push_back(std::move(ec));
    }
    return out;
}

// ---------------------------------------------------------------------------
// In-place dense primitives (used by the channel and gate modules)
// ---------------------------------------------------------------------------

namespace detail {

/// rho <- U rho U^dagger where U applies `u` to qubit `target` on basis
/// states with (index & ctrl_mask) == ctrl_value and is identity elsewhere.
/// ctrl_mask must not contain the target bit.
inline void conjugate_single_qubit(Matrix& rho, int target, const Matrix2& u,
                                   std::uint64_t ctrl_mask = 0, std::uint64_t ctrl_value = 0) {
    const std::uint64_t d = static_cast<std::uint64_t>(rho.rows());
    const std::uint64_t bit = std::uint64_t{1} << target;
    const Matrix2 uc = u.conjugate();
    for (std::uint64_t i = 0; i < d; ++i) {
        if (i & bit) continue;
        if ((i & ctrl_mask) != ctrl_value) continue;
        const Eigen::Index i0 = static_cast<Eigen::Index>(i);
        const Eigen::Index i1 = static_cast<Eigen::Index>(i | bit);
        const Eigen::RowVectorXcd r0 = rho.row(i0);
        rho.row(i0) = u(0, 0) * r0 + u(0, 1) * rho.row(i1);
        rho.row(i1) = u(1, 0) * r0 + u(1, 1) * rho.row(i1);
    }
    for (std::uint64_t j = 0; j < d; ++j) {
        if (j & bit) continue;
        if ((j & ctrl_mask) != ctrl_value) continue;
        const Eigen::Index j0 = static_cast<Eigen::Index>(j);
        const Eigen::Index j1 = static_cast<Eigen::Index>(j | bit);
        const Vector c0 = rho.col(j0);
        rho.col(j0) = uc(0, 0) * c0 + uc(0, 1) * rho.col(j1);
        rho.col(j1) = uc(1, 0) * c0 + uc(1, 1) * rho.col(j1);
    }
}

/// rho <- sum_K K rho K^dagger for 2x2 Kraus operators acting on `target`,
/// computed blockwise in place.
inline void apply_single_qubit_kraus(Matrix& rho, int target, const std::vector<Matrix2>& kraus) {
    const std::uint64_t d = static_cast<std::uint64_t>(rho.rows());
    const std::uint64_t bit = std::uint64_t{1} << target;
    Matrix2 block, acc;
    for (std::uint64_t i = 0; i < d; ++i) {
        if (i & bit) continue;
        for (std::uint64_t j = 0; j < d; ++j) {
            if (j & bit) continue;
            const Eigen::Index i0 = static_cast<Eigen::Index>(i);
            const Eigen::Index i1 = static_cast<Eigen::Index>(i | bit);
            const Eigen::Index j0 = static_cast<Eigen::Index>(j);
            const Eigen::Index j1 = static_cast<Eigen::Index>(j | bit);
            block << rho(i0, j0), rho(i0, j1), rho(i1, j0), rho(i1, j1);
            acc.setZero();
            for (const auto& k : kraus) acc += k * block * k.adjoint();
            rho(i0, j0) = acc(0, 0);
            rho(i0, j1) = acc(0, 1);
            rho(i1, j0) = acc(1, 0);
            rho(i1, j1) = acc(1, 1);
        }
    }
}

/// Applies a self-inverse basis permutation by conjugation: rho <- P rho P.
template <typename Perm>
inline void conjugate_involution(Matrix& rho, Perm&& perm) {
    const std::uint64_t d = static_cast<std::uint64_t>(rho.rows());
    for (std::uint64_t i = 0; i < d; ++i) {
        const std::uint64_t p = perm(i);
        if (p > i) rho.row(static_cast<Eigen::Index>(i)).swap(rho.row(static_cast<Eigen::Index>(p)));
    }
    for (std::uint64_t j = 0; j < d; ++j) {
        const std::uint64_t p = perm(j);
        if (p > j) rho.col(static_cast<Eigen::Index>(j)).swap(rho.col(static_cast<Eigen::Index>(p)));
    }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Structure extraction
// ---------------------------------------------------------------------------

/// Decomposes a dense state that is diagonal across the data/pointer blocks
/// into product components, one per populated (data, pointer) basis value.
/// Components are ordered by pointer value, then data value. Throws FormError
/// if cross-block coherences survive or an ancilla block is not a product.
inline EnsembleState ensemble_from_lr_diagonal(const DenseState& s) {
    const RegisterLayout& lay = s.layout;
    const std::uint64_t lr_dim = std::uint64_t{1} << (lay.n_l + lay.n_r);
    const std::uint64_t a_dim = std::uint64_t{1} << lay.n_a;

    // No coherence may connect distinct data/pointer basis values.
    double off = 0.0;
    for (std::uint64_t b = 0; b < lr_dim; ++b)
        for (std::uint64_t b2 = 0; b2 < lr_dim; ++b2) {
            if (b == b2) continue;
            for (std::uint64_t a = 0; a < a_dim; ++a)
                for (std::uint64_t a2 = 0; a2 < a_dim; ++a2)
                    off = std::max(off, std::abs(s.matrix(static_cast<Eigen::Index>((b << lay.n_a) | a),
                                                          static_cast<Eigen::Index>((b2 << lay.n_a) | a2))));
        }
    if (off > tol::structure)
        throw FormError("state is not diagonal across the data/pointer blocks (max coherence " +
                        std::to_string(off) + ")");

    struct Entry {
        std::uint64_t k, f;
        EnsembleComponent comp;
    };
    std::vector<Entry> entries;
    for (std::uint64_t b = 0; b < lr_dim; ++b) {
        Matrix block(static_cast<Eigen::Index>(a_dim), static_cast<Eigen::Index>(a_dim));
        for (std::uint64_t a = 0; a < a_dim; ++a)
            for (std::uint64_t a2 = 0; a2 < a_dim; ++a2)
                block(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a2)) =
                    s.matrix(static_cast<Eigen::Index>((b << lay.n_a) | a),
                             static_cast<Eigen::Index>((b << lay.n_a) | a2));
        const double w = block.trace().real();
        if (w <= tol::structure) continue;

        // Factor the ancilla block into single-qubit marginals and verify the
        // product reproduces it.
        const Matrix normalized = block / w;
        std::vector<Matrix2> afactors(static_cast<std::size_t>(lay.n_a));
        DenseState block_state{RegisterLayout{0, 0, lay.n_a}, normalized};
        for (int i = 0; i < lay.n_a; ++i) {
            const DenseState marg = partial_trace(block_state, {i});
            afactors[static_cast<std::size_t>(i)] = marg.matrix;
        }
        Matrix product = Matrix::Ones(1, 1);
        for (int i = lay.n_a - 1; i >= 0; --i)
            product = kron(product, afactors[static_cast<std::size_t>(i)]);
        if (max_abs_diff(product, normalized) > tol::structure)
            throw FormError("ancilla block is not a tensor product of single-qubit factors");

        const std::uint64_t full = b << lay.n_a;
        Entry e;
        e.k = lay.r_part(full);
        e.f = lay.l_part(full);
        e.comp.weight = w;
        e.comp.factors.resize(static_cast<std::size_t>(lay.total_qubits()));
        for (int i = 0; i < lay.n_a; ++i)
            e.comp.factors[static_cast<std::size_t>(lay.position(Register::A, i))] =
                afactors[static_cast<std::size_t>(i)];
        for (int j = 0; j < lay.n_r; ++j)
            e.comp.factors[static_cast<std::size_t>(lay.position(Register::R, j))] =
                basis_projector(static_cast<int>((e.k >> j) & 1));
        for (int i = 0; i < lay.n_l; ++i)
            e.comp.factors[static_cast<std::size_t>(lay.position(Register::L, i))] =
                basis_projector(static_cast<int>((e.f >> i) & 1));
        entries.push_back(std::move(e));
    }

    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return a.k != b.k ? a.k < b.k : a.f < b.f;
    });
    EnsembleState out{lay, {}};
    out.components.reserve(entries.size());
    for (auto& e : entries) out.components.push_back(std::move(e.comp));
    return out;
}

}  // namespace qdac
