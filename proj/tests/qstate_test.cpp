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

EnsembleState single_component(const RegisterLayout& lay, std::vector<Matrix2> factors) {
    return EnsembleState{lay, {EnsembleComponent{1.0, std::move(factors)}}};
}

DenseState bell_pair() {
    Vector v(4);
    v << 1.0 / std::sqrt(2.0), 0, 0, 1.0 / std::sqrt(2.0);
    return DenseState{RegisterLayout{1, 1, 0}, Matrix(v * v.adjoint())};
}

TEST(Densify, SingleProjectorComponent) {
    const EnsembleState s = single_component(RegisterLayout{1, 0, 0}, {projector0()});
    const DenseState d = densify(s);
    Matrix expected = Matrix::Zero(2, 2);
    expected(0, 0) = 1.0;
    EXPECT_LE(max_abs_diff(d.matrix, expected), 1e-15);
}

TEST(Densify, TwoComponentMaximalMixture) {
    EnsembleState s{RegisterLayout{1, 0, 0},
                    {EnsembleComponent{0.5, {projector0()}}, EnsembleComponent{0.5, {projector1()}}}};
    const DenseState d = densify(s);
    EXPECT_LE(max_abs_diff(d.matrix, Matrix(Matrix::Identity(2, 2) / 2.0)), 1e-15);
}

TEST(Densify, ConverterOutputSmallestInstance) {
    // m = 1, n = 1, f = (0, 1): the odd pointer's ancilla parameter is
    // q_0 = 2^0 = 1, so its ancilla stays |0><0| while the even pointer's is
    // fully mixed.
    const DacInstance inst{1, 1, {0, 1}};
    const DacOutput out = run_dac(inst, PrepMode::mixed);
    const Matrix expected = 0.5 * tkron(tkron(tproj(0), tproj(0)), Matrix(Matrix::Identity(2, 2) / 2)) +
                            0.5 * tkron(tkron(tproj(1), tproj(1)), tproj(0));
    EXPECT_LE(max_abs_diff(densify(out.state).matrix, expected), 1e-15);
    EXPECT_LE(max_abs_diff(densify(out.state).matrix, testing::dac_output_oracle(inst)), 1e-15);
}

TEST(Densify, CapacityGuard) {
    EnsembleState s{RegisterLayout{6, 6, 6}, {}};
    EXPECT_THROW(densify(s), CapacityError);
}

TEST(PartialTrace, BellMarginalIsMaximallyMixed) {
    const DenseState marginal = partial_trace(bell_pair(), {0});
    EXPECT_LE(max_abs_diff(marginal.matrix, Matrix(Matrix::Identity(2, 2) / 2.0)), 1e-12);
}

TEST(PartialTrace, ClockAncillaMarginal) {
    const DenseState rho = rho_tilde(DacInstance::clock(1, 1));
    const DenseState marginal = partial_trace(rho, {0});
    Matrix expected(2, 2);
    expected << 0.75, 0.25, 0.25, 0.25;  // (|+><+| + |0><0|)/2
    EXPECT_LE(max_abs_diff(marginal.matrix, expected), 1e-12);
}

TEST(PartialTrace, ProductStateFactorizes) {
    std::mt19937_64 rng(7);
    const Matrix2 a = testing::random_qubit_density(rng);
    const Matrix2 b = testing::random_qubit_density(rng);
    const DenseState joint{RegisterLayout{1, 1, 0}, tkron(Matrix(a), Matrix(b))};
    const DenseState left = partial_trace(joint, {1});
    EXPECT_LE(max_abs_diff(left.matrix, Matrix(a)), 1e-12);
}

TEST(PartialTrace, EmptyKeepSetRejected) {
    EXPECT_THROW(partial_trace(bell_pair(), {}), DomainError);
}

TEST(Entropy, PureStateIsZero) {
    EXPECT_NEAR(von_neumann_entropy(bell_pair()), 0.0, 1e-10);
}

TEST(Entropy, MaximallyMixedQubitIsOne) {
    const DenseState s{RegisterLayout{1, 0, 0}, Matrix(Matrix::Identity(2, 2) / 2.0)};
    EXPECT_NEAR(von_neumann_entropy(s), 1.0, 1e-12);
}

TEST(Entropy, PlusZeroMixture) {
    Matrix m(2, 2);
    m << 0.75, 0.25, 0.25, 0.25;
    EXPECT_NEAR(von_neumann_entropy(DenseState{RegisterLayout{1, 0, 0}, m}), 0.600876, 1e-6);
}

TEST(Entropy, RejectsNonPositiveMatrix) {
    Matrix m(2, 2);
    m << 1.5, 0, 0, -0.5;
    EXPECT_THROW(von_neumann_entropy(DenseState{RegisterLayout{1, 0, 0}, m}), InvariantError);
}

TEST(Entropy, InvariantUnderUnitaryConjugation) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        EnsembleState s = testing::random_product_mixture(rng, RegisterLayout{1, 1, 1}, 3);
        DenseState d = densify(s);
        const double before = von_neumann_entropy(d);
        for (int t = 0; t < 3; ++t)
            detail::conjugate_single_qubit(d.matrix, t, testing::random_unitary2(rng));
        EXPECT_NEAR(von_neumann_entropy(d), before, 1e-9);
    }
}

TEST(StateInvariants, ConverterOutputsAreValidStates) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 5; ++trial) {
        const DacInstance inst = testing::random_instance(rng, 3, 2);
        const DacOutput out = run_dac(inst, PrepMode::mixed);
        EXPECT_NO_THROW(require_valid(out.state));
        EXPECT_NO_THROW(require_valid(densify(out.state)));
    }
}

// densify commutes with structured operations: channels and local gates.
TEST(StateInvariants, DensifyCommutesWithStructuredOps) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int m = 1; m <= 3; ++m) {
        for (int n = 1; n <= 3; ++n) {
            const RegisterLayout lay = dac_layout(m, n);
            if (lay.total_qubits() > 8) continue;
            const EnsembleState s = testing::random_product_mixture(rng, lay, 4);
            const DenseState d = densify(s);
            for (int trial = 0; trial < 3; ++trial) {
                const int target = static_cast<int>(rng() % lay.total_qubits());
                const Channel ch =
                    (rng() & 1) ? make_dephase(unit(rng)) : make_depolarize(unit(rng));
                EXPECT_LE(max_abs_diff(densify(apply_channel(ch, target, s)).matrix,
                                       apply_channel(ch, target, d).matrix),
                          1e-10);
                const GateOp h = GateOp::hadamard(target);
                EXPECT_LE(max_abs_diff(densify(apply_unitary(h, s)).matrix,
                                       apply_unitary(h, d).matrix),
                          1e-10);
            }
        }
    }
}

TEST(StateInvariants, DensifyCommutesOnConverterStates) {
    std::mt19937_64 rng(17);
    const DacInstance inst = testing::random_instance(rng, 2, 2);
    const DacOutput out = run_dac(inst, PrepMode::mixed);
    const DenseState d = densify(out.state);
    for (std::uint64_t k = 0; k < inst.pointer_count(); ++k) {
        EXPECT_LE(max_abs_diff(densify(controlled_block_hadamard(k, out.state)).matrix,
                               controlled_block_hadamard(k, d).matrix),
                  1e-10);
    }
    const GateOp oracle = build_cf(inst);
    EXPECT_LE(max_abs_diff(densify(apply_unitary(oracle, out.state)).matrix,
                           apply_unitary(oracle, d).matrix),
              1e-10);
}

TEST(DeviationForm, ReconstructionRoundTrip) {
    std::mt19937_64 rng(23);
    const DacInstance inst = testing::random_instance(rng, 2, 3);
    const DacOutput out = run_dac(inst, PrepMode::mixed);
    EXPECT_LE(max_abs_diff(densify(reconstruct(out.deviation)).matrix, densify(out.state).matrix),
              1e-12);
}

TEST(AttachAncillas, AddsZeroedRegister) {
    const EnsembleState s = single_component(RegisterLayout{1, 1, 0}, {projector1(), projector0()});
    const EnsembleState with = attach_ancillas(s, 1);
    EXPECT_EQ(with.layout.n_a, 1);
    EXPECT_LE(max_abs_diff(densify(with).matrix,
                           tkron(tkron(tproj(0), tproj(1)), tproj(0))),
              1e-15);
    EXPECT_THROW(attach_ancillas(with, 1), LayoutError);
}

TEST(LrDiagonalExtraction, RejectsCoherentStates) {
    // A pointer-register superposition is not diagonal across the blocks.
    const DacInstance inst{1, 1, {0, 1}};
    DenseState pure = prepare_initial_pure(inst);
    DenseState with = attach_ancillas(pure, 1);
    EXPECT_THROW(ensemble_from_lr_diagonal(with), FormError);
}

}  // namespace
}  // namespace qdac
