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

#include <random>

#include "gtest/gtest.h"
#include "test_support.hpp"

namespace qdac {
namespace {

using testing::tkron;
using testing::tproj;

DenseState basis_state(const RegisterLayout& lay, std::uint64_t index) {
    DenseState s = DenseState::zero(lay);
    s.matrix(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)) = 1.0;
    return s;
}

TEST(GateMatrix, AllKindsAreUnitary) {
    const DacInstance inst{2, 2, {1, 3, 0, 2}};
    const RegisterLayout lay = dac_layout(inst.m, inst.n);
    const std::vector<GateOp> gates = {
        GateOp::hadamard(lay.position(Register::A, 0)),
        GateOp::zero_controlled_hadamard(lay.position(Register::L, 1), lay.position(Register::A, 1)),
        GateOp::pointer_block_hadamard(2),
        build_cf(inst),
    };
    for (const GateOp& g : gates) {
        const Matrix u = gate_matrix(g, lay);
        EXPECT_LE(max_abs_diff(Matrix(u.adjoint() * u), Matrix(Matrix::Identity(u.rows(), u.cols()))),
                  1e-12);
    }
}

TEST(ZeroControlledHadamard, ZeroControlWritesPlus) {
    // Layout: one data qubit (control), one ancilla (target).
    const RegisterLayout lay{1, 0, 1};
    const GateOp g = GateOp::zero_controlled_hadamard(1, 0);
    const DenseState out = apply_unitary(g, basis_state(lay, 0b00));
    EXPECT_LE(max_abs_diff(out.matrix, tkron(tproj(0), Matrix(projector_plus()))), 1e-12);
}

TEST(ZeroControlledHadamard, OneControlLeavesTarget) {
    const RegisterLayout lay{1, 0, 1};
    const GateOp g = GateOp::zero_controlled_hadamard(1, 0);
    const DenseState out = apply_unitary(g, basis_state(lay, 0b10));
    EXPECT_LE(max_abs_diff(out.matrix, tkron(tproj(1), tproj(0))), 1e-12);
}

TEST(Hadamard, MapsOneToMinus) {
    const RegisterLayout lay{1, 0, 0};
    const DenseState out = apply_unitary(GateOp::hadamard(0), basis_state(lay, 1));
    Matrix expected(2, 2);
    expected << 0.5, -0.5, -0.5, 0.5;
    EXPECT_LE(max_abs_diff(out.matrix, expected), 1e-12);
}

TEST(Oracle, IdentityTableActsAsCnot) {
    const DacInstance inst{1, 1, {0, 1}};
    const RegisterLayout lay = input_layout(1, 1);
    // |y=0>|k=1> -> |1>|1>
    const DenseState out = apply_unitary(build_cf(inst), basis_state(lay, 0b01));
    EXPECT_LE(max_abs_diff(out.matrix, Matrix(basis_state(lay, 0b11).matrix)), 1e-15);
}

TEST(Oracle, BuildsUniformDataPointerSuperposition) {
    const DacInstance inst{2, 2, {1, 2, 3, 0}};
    const RegisterLayout lay = input_layout(inst.m, inst.n);
    DenseState s = basis_state(lay, 0);
    for (int j = 0; j < inst.m; ++j)
        s = apply_unitary(GateOp::hadamard(lay.position(Register::R, j)), s);
    s = apply_unitary(build_cf(inst), s);
    Vector expected_vec = Vector::Zero(static_cast<Eigen::Index>(lay.dim()));
    for (std::uint64_t k = 0; k < inst.pointer_count(); ++k)
        expected_vec(static_cast<Eigen::Index>(lay.basis_index(inst.value(k), k, 0))) = 0.5;
    EXPECT_LE(max_abs_diff(s.matrix, Matrix(expected_vec * expected_vec.adjoint())), 1e-12);
}

TEST(Oracle, ConjugatesClassicalPointerMixture) {
    const DacInstance inst{2, 2, {1, 2, 3, 0}};
    const RegisterLayout lay = input_layout(inst.m, inst.n);
    DenseState s = DenseState::zero(lay);
    for (std::uint64_t k = 0; k < inst.pointer_count(); ++k) {
        const std::uint64_t b = lay.basis_index(0, k, 0);
        s.matrix(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b)) = 0.25;
    }
    const DenseState out = apply_unitary(build_cf(inst), s);
    Matrix expected = Matrix::Zero(s.matrix.rows(), s.matrix.cols());
    for (std::uint64_t k = 0; k < inst.pointer_count(); ++k) {
        const std::uint64_t b = lay.basis_index(inst.value(k), k, 0);
        expected(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b)) = 0.25;
    }
    EXPECT_LE(max_abs_diff(out.matrix, expected), 1e-15);
}

TEST(Oracle, IsAnInvolution) {
    std::mt19937_64 rng(41);
    const DacInstance inst = testing::random_instance(rng, 2, 2);
    const GateOp oracle = build_cf(inst);

    const EnsembleState mixed = prepare_initial_mixed(inst);
    EXPECT_LE(max_abs_diff(densify(apply_unitary(oracle, apply_unitary(oracle, mixed))).matrix,
                           densify(mixed).matrix),
              1e-15);

    const DenseState pure = prepare_initial_pure(inst);
    EXPECT_LE(max_abs_diff(apply_unitary(oracle, apply_unitary(oracle, pure)).matrix, pure.matrix),
              1e-12);
}

TEST(ControlledBlockHadamard, RotatesOnlyTheTargetedComponent) {
    const DacInstance inst{1, 2, {2, 3}};
    const DacOutput out = run_dac(inst, PrepMode::mixed);
    const std::uint64_t k = 1;
    const EnsembleState rotated = controlled_block_hadamard(k, out.state);
    const RegisterLayout& lay = rotated.layout;
    for (std::size_t c = 0; c < rotated.components.size(); ++c) {
        const auto& before = out.state.components[c];
        const auto& after = rotated.components[c];
        const bool targeted = detail::component_pointer(before, lay) == k;
        for (int i = 0; i < lay.n_a; ++i) {
            const std::size_t pos = static_cast<std::size_t>(lay.position(Register::A, i));
            const Matrix2 expected =
                targeted ? hadamard_conjugate(before.factors[pos]) : before.factors[pos];
            EXPECT_LE(max_abs_diff(Matrix(after.factors[pos]), Matrix(expected)), 1e-15);
        }
    }
    // q |0><0| + p I/2 becomes q |+><+| + p I/2 on the targeted component.
    const double q = out.params[1].q;
    const Matrix expected_top = q * Matrix(projector_plus()) +
                                (1.0 - q) * Matrix::Identity(2, 2) / 2.0;
    EXPECT_LE(max_abs_diff(
                  Matrix(rotated.components[1].factors[static_cast<std::size_t>(
                      lay.position(Register::A, 1))]),
                  expected_top),
              1e-15);
}

TEST(ControlledBlockHadamard, AbsentPointerLeavesStateUnchanged) {
    // Table only populates pointers 0 and 1 as components; every component
    // has a definite pointer, so control on one of them touches nothing else.
    const DacInstance inst{1, 1, {1, 1}};
    const DacOutput out = run_dac(inst, PrepMode::mixed);
    EnsembleState only_zero = out.state;
    only_zero.components.erase(only_zero.components.begin() + 1);
    only_zero.components[0].weight = 1.0;
    const EnsembleState after = controlled_block_hadamard(1, only_zero);
    EXPECT_LE(max_abs_diff(densify(after).matrix, densify(only_zero).matrix), 1e-15);
}

TEST(ControlledBlockHadamard, TwiceIsIdentity) {
    std::mt19937_64 rng(43);
    const DacInstance inst = testing::random_instance(rng, 2, 2);
    const DacOutput out = run_dac(inst, PrepMode::mixed);
    for (std::uint64_t k = 0; k < inst.pointer_count(); ++k) {
        const EnsembleState twice =
            controlled_block_hadamard(k, controlled_block_hadamard(k, out.state));
        EXPECT_LE(max_abs_diff(densify(twice).matrix, densify(out.state).matrix), 1e-15);
    }
    const DenseState d = densify(out.state);
    const DenseState twice_dense = controlled_block_hadamard(0, controlled_block_hadamard(0, d));
    EXPECT_LE(max_abs_diff(twice_dense.matrix, d.matrix), 1e-12);
}

TEST(StructuredBackend, RejectsNonClassicalControls) {
    // Control factor |+><+| cannot steer a classically controlled gate.
    const RegisterLayout lay{1, 1, 1};
    EnsembleState s{lay,
                    {EnsembleComponent{1.0, {projector0(), projector_plus(), projector0()}}}};
    // pointer factor (position 1) is |+><+|: pointer-controlled block must reject
    EXPECT_THROW(apply_unitary(GateOp::pointer_block_hadamard(0), s), BackendError);

    EnsembleState s2{lay,
                     {EnsembleComponent{1.0, {projector0(), projector0(), projector_plus()}}}};
    // control qubit (data, position 2) is |+><+|
    EXPECT_THROW(apply_unitary(GateOp::zero_controlled_hadamard(2, 0), s2), BackendError);
}

}  // namespace
}  // namespace qdac
