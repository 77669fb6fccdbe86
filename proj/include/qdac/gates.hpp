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

#include <cstdint>
#include <string>
#include <vector>

#include "qdac/instance.hpp"
#include "qdac/state.hpp"

namespace qdac {

/// Unitary building blocks of the pipeline. The oracle is realized
/// semantically as the XOR permutation |y>|k> -> |y xor f(k)>|k> (an
/// involution, so it is unitary on every input); gate-level synthesis of f is
/// a query cost and is not modeled.
struct GateOp {
    enum class Kind { hadamard, zero_controlled_hadamard, pointer_block_hadamard, oracle };

    Kind kind;
    int target = -1;                   // hadamard, zero_controlled_hadamard
    int control = -1;                  // zero_controlled_hadamard
    std::uint64_t pointer = 0;         // pointer_block_hadamard
    std::vector<std::uint64_t> table;  // oracle

    static GateOp hadamard(int target_position) {
        GateOp g{Kind::hadamard};
        g.target = target_position;
        return g;
    }

    /// |0><0| x H + |1><1| x I on (control, target).
    static GateOp zero_controlled_hadamard(int control_position, int target_position) {
        GateOp g{Kind::zero_controlled_hadamard};
        g.control = control_position;
        g.target = target_position;
        return g;
    }

    /// Hadamard on every ancilla, controlled on the pointer register holding k.
    static GateOp pointer_block_hadamard(std::uint64_t k) {
        GateOp g{Kind::pointer_block_hadamard};
        g.pointer = k;
        return g;
    }

    static GateOp oracle(const DacInstance& inst) {
        inst.validate();
        GateOp g{Kind::oracle};
        g.table = inst.table;
        return g;
    }
};

/// Oracle circuit for an instance: |y>|k> -> |y xor f(k)>|k>.
inline GateOp build_cf(const DacInstance& inst) { return GateOp::oracle(inst); }

namespace detail {

inline void check_gate_layout(const GateOp& g, const RegisterLayout& lay) {
    const int q = lay.total_qubits();
    switch (g.kind) {
        case GateOp::Kind::hadamard:
            if (g.target < 0 || g.target >= q) throw LayoutError("gate target out of range");
            break;
        case GateOp::Kind::zero_controlled_hadamard:
            if (g.target < 0 || g.target >= q || g.control < 0 || g.control >= q || g.control == g.target)
                throw LayoutError("controlled gate needs distinct in-range control and target");
            break;
        case GateOp::Kind::pointer_block_hadamard:
            if (lay.n_r < 1 || lay.n_a < 1)
                throw LayoutError("pointer-controlled block needs pointer and ancilla registers");
            if (lay.n_r < 64 && (g.pointer >> lay.n_r))
                throw LayoutError("pointer value does not fit the pointer register");
            break;
        case GateOp::Kind::oracle:
            if (g.table.size() != (std::uint64_t{1} << lay.n_r))
                throw LayoutError("oracle table size does not match the pointer register");
            if (lay.n_l < 1) throw LayoutError("oracle needs a data register");
            break;
    }
}

}  // namespace detail

inline DenseState apply_unitary(const GateOp& g, const DenseState& s) {
    detail::check_gate_layout(g, s.layout);
    DenseState out = s;
    const RegisterLayout& lay = s.layout;
    switch (g.kind) {
        case GateOp::Kind::hadamard:
            detail::conjugate_single_qubit(out.matrix, g.target, hadamard2());
            break;
        case GateOp::Kind::zero_controlled_hadamard:
            detail::conjugate_single_qubit(out.matrix, g.target, hadamard2(),
                                           std::uint64_t{1} << g.control, 0);
            break;
        case GateOp::Kind::pointer_block_hadamard: {
            std::uint64_t mask = 0;
            for (int j = 0; j < lay.n_r; ++j) mask |= std::uint64_t{1} << lay.position(Register::R, j);
            const std::uint64_t value = g.pointer << lay.n_a;
            for (int i = 0; i < lay.n_a; ++i)
                detail::conjugate_single_qubit(out.matrix, lay.position(Register::A, i), hadamard2(),
                                               mask, value);
            break;
        }
        case GateOp::Kind::oracle: {
            const auto& table = g.table;
            detail::conjugate_involution(out.matrix, [&lay, &table](std::uint64_t idx) {
                const std::uint64_t f = table[lay.r_part(idx)];
                return idx ^ (f << (lay.n_r + lay.n_a));
            });
            break;
        }
    }
    return out;
}

namespace detail {

/// Pointer value of a component, requiring every pointer factor to be a
/// computational-basis projector.
inline std::uint64_t component_pointer(const EnsembleComponent& comp, const RegisterLayout& lay) {
    std::uint64_t k = 0;
    for (int j = 0; j < lay.n_r; ++j) {
        const int bit = classify_basis_projector(
            comp.factors[static_cast<std::size_t>(lay.position(Register::R, j))]);
        if (bit < 0)
            throw BackendError(
                "pointer factor is not a computational-basis projector; densify first");
        k |= static_cast<std::uint64_t>(bit) << j;
    }
    return k;
}

}  // namespace detail

/// Structured-backend gates are restricted to local unitaries and gates
/// classically controlled on basis-projector factors; anything else must go
/// through the dense backend.
inline EnsembleState apply_unitary(const GateOp& g, const EnsembleState& s) {
    detail::check_gate_layout(g, s.layout);
    EnsembleState out = s;
    const RegisterLayout& lay = s.layout;
    for (auto& comp : out.components) {
        switch (g.kind) {
            case GateOp::Kind::hadamard: {
                Matrix2& f = comp.factors[static_cast<std::size_t>(g.target)];
                f = hadamard_conjugate(f);
                break;
            }
            case GateOp::Kind::zero_controlled_hadamard: {
                const int bit =
                    classify_basis_projector(comp.factors[static_cast<std::size_t>(g.control)]);
                if (bit < 0)
                    throw BackendError(
                        "control factor is not a computational-basis projector; densify first");
                if (bit == 0) {
                    Matrix2& f = comp.factors[static_cast<std::size_t>(g.target)];
                    f = hadamard_conjugate(f);
                }
                break;
            }
            case GateOp::Kind::pointer_block_hadamard: {
                if (detail::component_pointer(comp, lay) != g.pointer) break;
                for (int i = 0; i < lay.n_a; ++i) {
                    Matrix2& f = comp.factors[static_cast<std::size_t>(lay.position(Register::A, i))];
                    f = hadamard_conjugate(f);
                }
                break;
            }
            case GateOp::Kind::oracle: {
                const std::uint64_t f = g.table[detail::component_pointer(comp, lay)];
                const Matrix2 x = pauli_x();
                for (int i = 0; i < lay.n_l; ++i) {
                    if (((f >> i) & 1) == 0) continue;
                    Matrix2& fac = comp.factors[static_cast<std::size_t>(lay.position(Register::L, i))];
                    fac = x * fac * x.adjoint();
                }
                break;
            }
        }
    }
    return out;
}

/// Ancilla Hadamards controlled on the pointer register holding k.
inline DenseState controlled_block_hadamard(std::uint64_t k, const DenseState& s) {
    return apply_unitary(GateOp::pointer_block_hadamard(k), s);
}

inline EnsembleState controlled_block_hadamard(std::uint64_t k, const EnsembleState& s) {
    return apply_unitary(GateOp::pointer_block_hadamard(k), s);
}

/// Explicit matrix of a gate on a given layout, for verification; guarded by
/// the dense capacity limit.
inline Matrix gate_matrix(const GateOp& g, const RegisterLayout& lay) {
    detail::check_gate_layout(g, lay);
    require_dense_capacity(lay.total_qubits());
    const std::uint64_t d = lay.dim();
    Matrix u = Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    switch (g.kind) {
        case GateOp::Kind::hadamard:
        case GateOp::Kind::zero_controlled_hadamard: {
            const std::uint64_t tbit = std::uint64_t{1} << g.target;
            const std::uint64_t cmask =
                g.kind == GateOp::Kind::zero_controlled_hadamard ? (std::uint64_t{1} << g.control) : 0;
            const Matrix2 h = hadamard2();
            for (std::uint64_t i = 0; i < d; ++i) {
                if (i & tbit) continue;
                if ((i & cmask) != 0) continue;
                const auto i0 = static_cast<Eigen::Index>(i);
                const auto i1 = static_cast<Eigen::Index>(i | tbit);
                u(i0, i0) = h(0, 0);
                u(i0, i1) = h(0, 1);
                u(i1, i0) = h(1, 0);
                u(i1, i1) = h(1, 1);
            }
            break;
        }
        case GateOp::Kind::pointer_block_hadamard: {
            Matrix ha = Matrix::Ones(1, 1);
            for (int i = 0; i < lay.n_a; ++i) ha = kron(ha, hadamard2());
            for (std::uint64_t b = 0; b < d; ++b) {
                if (lay.r_part(b) != g.pointer) continue;
                if (lay.a_part(b) != 0) continue;  // visit each block once
                for (std::uint64_t a = 0; a < (std::uint64_t{1} << lay.n_a); ++a)
                    for (std::uint64_t a2 = 0; a2 < (std::uint64_t{1} << lay.n_a); ++a2)
                        u(static_cast<Eigen::Index>(b | a), static_cast<Eigen::Index>(b | a2)) =
                            ha(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a2));
            }
            break;
        }
        case GateOp::Kind::oracle: {
            u.setZero();
            for (std::uint64_t i = 0; i < d; ++i) {
                const std::uint64_t f = g.table[lay.r_part(i)];
                const std::uint64_t j = i ^ (f << (lay.n_r + lay.n_a));
                u(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = 1.0;
            }
            break;
        }
    }
    return u;
}

}  // namespace qdac
