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

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "test_support.hpp"

namespace qdac {
namespace {

using testing::tkron;
using testing::tproj;

DenseState werner_like_pair() {
    // Equal mixture of |+>|+> and |0>|0|: nonorthogonal branches on both sides.
    const Matrix plus = Matrix(projector_plus());
    const Matrix zero = tproj(0);
    return DenseState{RegisterLayout{1, 0, 1},
                      0.5 * tkron(plus, plus) + 0.5 * tkron(zero, zero)};
}

TEST(RhoTilde, MatchesDirectConstruction) {
    std::mt19937_64 rng(71);
    for (const auto& [m, n] : {std::pair{1, 1}, {2, 1}, {1, 2}, {2, 2}}) {
        const DacInstance inst = testing::random_instance(rng, m, n);
        EXPECT_LE(max_abs_diff(rho_tilde(inst).matrix, testing::rho_tilde_oracle(inst)), 1e-12);
    }
}

TEST(RhoTilde, ClockAncillaMarginalIsPlusZeroMixture) {
    const DenseState rho = rho_tilde(DacInstance::clock(2, 1));
    const DenseState marginal = partial_trace(rho, {0});
    Matrix expected(2, 2);
    expected << 0.75, 0.25, 0.25, 0.25;
    EXPECT_LE(max_abs_diff(marginal.matrix, expected), 1e-12);
}

TEST(RhoTilde, ConstantWordFactorizesAcrossTheSplit) {
    DacInstance constant{2, 2, {3, 3, 3, 3}};
    const DenseState rho = rho_tilde(constant);
    const BipartiteSplit split = BipartiteSplit::lr_versus_a(rho.layout, true);
    EXPECT_NEAR(mutual_information(rho, split), 0.0, 1e-9);
    const Matrix product = kron(partial_trace(rho, split.side_b).matrix,
                                partial_trace(rho, split.side_a).matrix);
    EXPECT_LE(max_abs_diff(rho.matrix, product), 1e-12);
}

TEST(RhoTilde, InvariantUnderPartialTranspose) {
    const DenseState rho = rho_tilde(DacInstance::clock(2, 2));
    const BipartiteSplit split = BipartiteSplit::lr_versus_a(rho.layout, true);
    EXPECT_LE(max_abs_diff(partial_transpose(rho, split.side_a), rho.matrix), 1e-12);
}

TEST(PartialTranspose, BellPairHasNegativeEigenvalue) {
    Vector v(4);
    v << 1.0 / std::sqrt(2.0), 0, 0, 1.0 / std::sqrt(2.0);
    const DenseState bell{RegisterLayout{1, 0, 1}, Matrix(v * v.adjoint())};
    const Matrix pt = partial_transpose(bell, {0});
    Eigen::SelfAdjointEigenSolver<Matrix> es(pt, Eigen::EigenvaluesOnly);
    EXPECT_NEAR(es.eigenvalues().minCoeff(), -0.5, 1e-12);
}

TEST(PartialTranspose, DiagonalStatesAreFixed) {
    Matrix diag = Matrix::Zero(4, 4);
    diag.diagonal() << 0.1, 0.2, 0.3, 0.4;
    const DenseState s{RegisterLayout{1, 0, 1}, diag};
    EXPECT_LE(max_abs_diff(partial_transpose(s, {0}), diag), 1e-15);
}

TEST(ConditionalEntropy, ClassicalTableGivesClassicalValue) {
    // Two bits, joint distribution rows p(a, b): marginal-conditional check.
    Matrix joint = Matrix::Zero(4, 4);
    joint.diagonal() << 0.4, 0.1, 0.2, 0.3;  // index = (b << 1) | a
    const DenseState s{RegisterLayout{1, 0, 1}, joint};
    const BipartiteSplit split = BipartiteSplit::measuring({0}, 2);
    const std::vector<Matrix> projectors{tproj(0), tproj(1)};
    // H(B|A) = sum_a p(a) H(B|a)
    const double p_a0 = 0.4 + 0.2, p_a1 = 0.1 + 0.3;
    const double expected = p_a0 * binary_entropy(0.4 / p_a0) + p_a1 * binary_entropy(0.1 / p_a1);
    EXPECT_NEAR(conditional_entropy(s, split, projectors), expected, 1e-12);
}

TEST(ConditionalEntropy, ComputationalMeasurementOnDataPointerSideIsZero) {
    const DenseState rho = rho_tilde(DacInstance::clock(2, 1));
    const BipartiteSplit split = BipartiteSplit::lr_versus_a(rho.layout, false);
    std::vector<Matrix> projectors;
    for (int b = 0; b < 8; ++b) {
        Matrix p = Matrix::Zero(8, 8);
        p(b, b) = 1.0;
        projectors.push_back(std::move(p));
    }
    EXPECT_NEAR(conditional_entropy(rho, split, projectors), 0.0, 1e-10);
}

TEST(ConditionalEntropy, MatchesClosedFormOnTheRestrictedFamily) {
    std::mt19937_64 rng(73);
    std::uniform_real_distribution<double> angle(0.0, std::acos(-1.0) / 2.0);
    for (const auto& [m, n] : {std::pair{1, 1}, {2, 1}, {1, 2}, {2, 2}}) {
        const DenseState rho = rho_tilde(DacInstance::clock(m, n));
        const BipartiteSplit split = BipartiteSplit::lr_versus_a(rho.layout, true);
        for (int trial = 0; trial < 10; ++trial) {
            const double theta = angle(rng);
            EXPECT_NEAR(conditional_entropy(rho, split, theta_family_projectors(n, theta)),
                        clock_conditional_entropy_closed_form(theta, m), 1e-9);
        }
    }
}

TEST(ConditionalEntropy, RejectsIncompleteProjectorSets) {
    const DenseState rho = rho_tilde(DacInstance::clock(1, 1));
    const BipartiteSplit split = BipartiteSplit::lr_versus_a(rho.layout, true);
    EXPECT_THROW(conditional_entropy(rho, split, {Matrix(tproj(0))}), MeasurementError);
    Matrix skew(2, 2);
    skew << 0.5, 0.5, 0.25, 0.5;
    EXPECT_THROW(conditional_entropy(rho, split, {skew, Matrix(Matrix::Identity(2, 2)) - skew}),
                 MeasurementError);
}

TEST(ThetaFamily, OutcomeProbabilitiesSumToOne) {
    std::mt19937_64 rng(79);
    std::uniform_real_distribution<double> angle(0.0, std::acos(-1.0) / 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        const auto [p1, p2] = clock_outcome_probabilities(angle(rng));
        EXPECT_NEAR(p1 + p2, 1.0, 1e-14);
        EXPECT_GE(p1, 0.0);
        EXPECT_GE(p2, 0.0);
    }
}

TEST(ThetaFamily, ReproducesTheKnownMinimum) {
    for (int m : {1, 2, 3}) {
        const DiscordReport report = discord_theta_family(m, 1);
        EXPECT_NEAR(report.conditional_min, static_cast<double>(m) - 0.399124, 1e-5);
        EXPECT_NEAR(report.s_a, 0.600876, 1e-6);
        EXPECT_NEAR(report.discord, 0.201752, 1e-5);
        EXPECT_EQ(report.s_ab, static_cast<double>(m));
        // internal identity of the report
        EXPECT_NEAR(report.discord, report.s_a - report.s_ab + report.conditional_min, 1e-9);
    }
}

TEST(ThetaFamily, DataWidthDoesNotChangeTheNumbers) {
    const DiscordReport a = discord_theta_family(2, 1);
    const DiscordReport b = discord_theta_family(2, 2);
    EXPECT_NEAR(a.discord, b.discord, 1e-12);
    EXPECT_NEAR(a.conditional_min, b.conditional_min, 1e-12);
}

TEST(DiscordLr, VanishesForTheClockMixture) {
    for (const auto& [m, n] : {std::pair{1, 1}, {2, 2}, {3, 2}}) {
        const DiscordReport report = discord_clock_lr(m, n);
        EXPECT_NEAR(report.discord, 0.0, 1e-9);
        EXPECT_NEAR(report.conditional_min, 0.0, 1e-9);
        EXPECT_NEAR(report.s_a, static_cast<double>(m), 1e-9);   // measured side: data-pointer
        EXPECT_NEAR(report.s_ab, static_cast<double>(m), 1e-9);
    }
}

TEST(DiscordBruteforce, ProductStateHasNoDiscord) {
    std::mt19937_64 rng(83);
    const Matrix a = Matrix(testing::random_qubit_density(rng));
    const Matrix b = Matrix(testing::random_qubit_density(rng));
    const DenseState s{RegisterLayout{1, 0, 1}, tkron(a, b)};
    const DiscordReport report = discord_bruteforce(s, BipartiteSplit::measuring({0}, 2));
    EXPECT_NEAR(report.discord, 0.0, 1e-6);
}

TEST(DiscordBruteforce, PhaseFreeMinimizerSufficesForPhaseFreeStates) {
    // The amplitudes carry no phases, so the phi = 0 slice reaches the same
    // minimum as the full two-parameter family.
    const DenseState w = werner_like_pair();
    const BipartiteSplit split = BipartiteSplit::measuring({0}, 2);
    const DiscordReport full = discord_bruteforce(w, split);

    const auto theta_only = [&](double theta) {
        auto [p1, p2] = qubit_projector_pair(theta);
        return conditional_entropy(w, split, {p1, p2});
    };
    const auto best = detail::minimize_on_interval(theta_only, 0.0, std::acos(-1.0), 20000, 1e-10);
    EXPECT_NEAR(full.conditional_min, best.value, 1e-6);
    EXPECT_GT(full.discord, 0.0);
}

TEST(DiscordBruteforce, AgreesWithThetaFamilyOnSmallestClockInstance) {
    const DenseState rho = rho_tilde(DacInstance::clock(1, 1));
    const DiscordReport brute = discord_bruteforce(rho, BipartiteSplit::measuring({0}, 3));
    const DiscordReport family = discord_theta_family(1, 1);
    EXPECT_NEAR(brute.discord, family.discord, 1e-5);
    EXPECT_NEAR(brute.conditional_min, family.conditional_min, 1e-5);
}

TEST(DiscordBruteforce, RestrictedFamilyUpperBoundsTheMinimum) {
    const DenseState rho = rho_tilde(DacInstance::clock(1, 1));
    const DiscordReport brute = discord_bruteforce(rho, BipartiteSplit::measuring({0}, 3));
    const DiscordReport family = discord_theta_family(1, 1);
    EXPECT_GE(family.conditional_min, brute.conditional_min - 1e-9);
}

TEST(DiscordBruteforce, RejectsMultiQubitMeasuredSide) {
    const DenseState rho = rho_tilde(DacInstance::clock(1, 2));
    EXPECT_THROW(discord_bruteforce(rho, BipartiteSplit::lr_versus_a(rho.layout, true)),
                 CapacityError);
}

TEST(MutualInformation, VanishesOnProductStates) {
    std::mt19937_64 rng(89);
    const DenseState s{RegisterLayout{1, 0, 1},
                       tkron(Matrix(testing::random_qubit_density(rng)),
                             Matrix(testing::random_qubit_density(rng)))};
    EXPECT_NEAR(mutual_information(s, BipartiteSplit::measuring({0}, 2)), 0.0, 1e-9);
}

TEST(MutualInformation, ClockMixtureCarriesTheAncillaEntropy) {
    const DenseState rho = rho_tilde(DacInstance::clock(2, 1));
    const BipartiteSplit split = BipartiteSplit::lr_versus_a(rho.layout, true);
    EXPECT_NEAR(mutual_information(rho, split), 0.600876, 1e-6);
}

TEST(MutualInformation, PerfectlyCorrelatedBitsShareOneBit) {
    Matrix joint = Matrix::Zero(4, 4);
    joint(0, 0) = 0.5;
    joint(3, 3) = 0.5;
    const DenseState s{RegisterLayout{1, 0, 1}, joint};
    EXPECT_NEAR(mutual_information(s, BipartiteSplit::measuring({0}, 2)), 1.0, 1e-12);
}

TEST(DiscordReport, NonnegativeAndConsistent) {
    std::mt19937_64 rng(97);
    for (int trial = 0; trial < 5; ++trial) {
        const EnsembleState s = testing::random_product_mixture(rng, RegisterLayout{1, 0, 1}, 3);
        const DiscordReport report =
            discord_bruteforce(densify(s), BipartiteSplit::measuring({0}, 2));
        EXPECT_GE(report.discord, -1e-9);
        EXPECT_GE(report.conditional_min, 0.0);
        EXPECT_NEAR(report.discord, report.s_a - report.s_ab + report.conditional_min, 1e-9);
    }
}

}  // namespace
}  // namespace qdac
