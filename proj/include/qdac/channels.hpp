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

#include <cmath>
#include <string>
#include <vector>

#include "qdac/state.hpp"

namespace qdac {

enum class ChannelKind { depolarize, dephase };

/// Single-qubit CPTP map in Kraus form, together with the parameters that
/// generated it. Kraus form keeps application cheap; the Choi matrix is
/// derived on demand for verification only.
struct Channel {
    ChannelKind kind;
    double p = 0.0;
    std::vector<Matrix2> kraus;
};

namespace detail {
inline void require_probability(double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw DomainError("probability " + std::to_string(p) + " is outside [0, 1]");
}
}  // namespace detail

/// rho -> (1-p) rho + p diag(rho): off-diagonals shrink by (1-p), diagonals
/// are fixed exactly.
inline Channel make_dephase(double p) {
    detail::require_probability(p);
    Channel ch{ChannelKind::dephase, p, {}};
    ch.kraus.push_back(std::sqrt(1.0 - p / 2.0) * identity2());
    ch.kraus.push_back(std::sqrt(p / 2.0) * pauli_z());
    return ch;
}

/// rho -> (1-p) rho + p (tr rho) I/2.
inline Channel make_depolarize(double p) {
    detail::require_probability(p);
    Channel ch{ChannelKind::depolarize, p, {}};
    ch.kraus.push_back(std::sqrt(1.0 - 3.0 * p / 4.0) * identity2());
    ch.kraus.push_back(std::sqrt(p / 4.0) * pauli_x());
    ch.kraus.push_back(std::sqrt(p / 4.0) * pauli_y());
    ch.kraus.push_back(std::sqrt(p / 4.0) * pauli_z());
    return ch;
}

namespace detail {

// The closed channel actions are used for application; they agree with the
// Kraus sums but keep fixed points exact (dephasing never touches diagonals,
// depolarization of dyadic strength keeps dyadic entries dyadic).
inline Matrix2 channel_action(const Channel& ch, const Matrix2& f) {
    Matrix2 out = f;
    switch (ch.kind) {
        case ChannelKind::dephase:
            out(0, 1) *= (1.0 - ch.p);
            out(1, 0) *= (1.0 - ch.p);
            break;
        case ChannelKind::depolarize: {
            const Complex mix = ch.p * (f(0, 0) + f(1, 1)) * 0.5;
            out(0, 0) = (1.0 - ch.p) * f(0, 0) + mix;
            out(1, 1) = (1.0 - ch.p) * f(1, 1) + mix;
            out(0, 1) = (1.0 - ch.p) * f(0, 1);
            out(1, 0) = (1.0 - ch.p) * f(1, 0);
            break;
        }
    }
    return out;
}

inline void apply_channel_dense(const Channel& ch, int target, Matrix& rho) {
    const std::uint64_t d = static_cast<std::uint64_t>(rho.rows());
    const std::uint64_t bit = std::uint64_t{1} << target;
    Matrix2 block;
    for (std::uint64_t i = 0; i < d; ++i) {
        if (i & bit) continue;
        for (std::uint64_t j = 0; j < d; ++j) {
            if (j & bit) continue;
            const auto i0 = static_cast<Eigen::Index>(i);
            const auto i1 = static_cast<Eigen::Index>(i | bit);
            const auto j0 = static_cast<Eigen::Index>(j);
            const auto j1 = static_cast<Eigen::Index>(j | bit);
            block << rho(i0, j0), rho(i0, j1), rho(i1, j0), rho(i1, j1);
            block = channel_action(ch, block);
            rho(i0, j0) = block(0, 0);
            rho(i0, j1) = block(0, 1);
            rho(i1, j0) = block(1, 0);
            rho(i1, j1) = block(1, 1);
        }
    }
}

}  // namespace detail

/// Applies the channel to one qubit of a dense state.
inline DenseState apply_channel(const Channel& ch, int target, const DenseState& s) {
    if (target < 0 || target >= s.layout.total_qubits())
        throw LayoutError("channel target out of range");
    DenseState out = s;
    detail::apply_channel_dense(ch, target, out.matrix);
    return out;
}

/// Applies the channel to the target factor of every component. Valid because
/// the map is local and each component is a product.
inline EnsembleState apply_channel(const Channel& ch, int target, const EnsembleState& s) {
    if (target < 0 || target >= s.layout.total_qubits())
        throw LayoutError("channel target out of range");
    EnsembleState out = s;
    for (auto& comp : out.components)
        comp.factors[static_cast<std::size_t>(target)] =
            detail::channel_action(ch, comp.factors[static_cast<std::size_t>(target)]);
    return out;
}

/// Kraus-sum application on a single-qubit state; reference route for tests.
inline Matrix2 apply_kraus_sum(const Channel& ch, const Matrix2& f) {
    Matrix2 acc = Matrix2::Zero();
    for (const auto& k : ch.kraus) acc += k * f * k.adjoint();
    return acc;
}

struct CptpReport {
    bool trace_preserving = false;
    bool completely_positive = false;
    double max_violation = 0.0;
};

/// Choi matrix (A x id)(|Omega><Omega|) with |Omega> = sum_i |ii> unnormalized.
inline Matrix choi_matrix(const Channel& ch) {
    Matrix choi = Matrix::Zero(4, 4);
    for (const auto& k : ch.kraus) {
        Vector v(4);
        // (K x I)|Omega>: column stacking of K.
        v(0) = k(0, 0);
        v(1) = k(0, 1);
        v(2) = k(1, 0);
        v(3) = k(1, 1);
        choi += v * v.adjoint();
    }
    return choi;
}

/// Checks Kraus completeness (trace preservation) and Choi positivity
/// (complete positivity) at the library tolerances.
inline CptpReport verify_cptp(const Channel& ch) {
    CptpReport report;
    Matrix2 sum = Matrix2::Zero();
    for (const auto& k : ch.kraus) sum += k.adjoint() * k;
    const double completeness_defect = max_abs((sum - identity2()).eval());
    report.trace_preserving = completeness_defect <= tol::hermiticity;

    Eigen::SelfAdjointEigenSolver<Matrix> es(choi_matrix(ch), Eigen::EigenvaluesOnly);
    const double min_eig = es.eigenvalues().minCoeff();
    report.completely_positive = min_eig >= -tol::psd;

    report.max_violation = std::max(completeness_defect, std::max(0.0, -min_eig));
    return report;
}

}  // namespace qdac
