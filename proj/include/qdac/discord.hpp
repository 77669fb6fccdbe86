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
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qdac/dac.hpp"
#include "qdac/state.hpp"

namespace qdac {

/// A bipartition of the qubits; side A is the measured side.
struct BipartiteSplit {
    std::vector<int> side_a;
    std::vector<int> side_b;

    static BipartiteSplit measuring(std::vector<int> a, int total_qubits) {
        std::sort(a.begin(), a.end());
        BipartiteSplit split;
        split.side_a = std::move(a);
        for (int p = 0; p < total_qubits; ++p)
            if (!std::binary_search(split.side_a.begin(), split.side_a.end(), p))
                split.side_b.push_back(p);
        if (split.side_a.empty()) throw DomainError("measured side must not be empty");
        if (!split.side_a.empty() &&
            (split.side_a.front() < 0 || split.side_a.back() >= total_qubits))
            throw DomainError("measured-side qubit out of range");
        return split;
    }

    /// The data-pointer versus ancilla split of a converter layout.
    static BipartiteSplit lr_versus_a(const RegisterLayout& lay, bool measure_ancillas) {
        std::vector<int> ancillas;
        for (int i = 0; i < lay.n_a; ++i) ancillas.push_back(lay.position(Register::A, i));
        if (measure_ancillas) return measuring(std::move(ancillas), lay.total_qubits());
        std::vector<int> lr;
        for (int p = lay.n_a; p < lay.total_qubits(); ++p) lr.push_back(p);
        return measuring(std::move(lr), lay.total_qubits());
    }
};

/// Entropies and the measurement minimization for one bipartition.
/// The identity discord = S_A - S_AB + conditional_min holds by construction
/// and is re-checked in tests.
struct DiscordReport {
    double s_a = 0.0;
    double s_b = 0.0;
    double s_ab = 0.0;
    double conditional_min = 0.0;
    std::optional<double> minimizer_theta;
    std::optional<double> minimizer_phi;
    double discord = 0.0;
    std::string measured_side;
};

// ---------------------------------------------------------------------------
// Embedding and measurement
// ---------------------------------------------------------------------------

namespace detail {

/// Embeds an operator on the given (sorted ascending) qubit positions into
/// the full space; packed bit 0 of the operator index is the lowest position.
inline Matrix embed_operator(const Matrix& op, const std::vector<int>& positions, int total_qubits) {
    const std::uint64_t dim = std::uint64_t{1} << total_qubits;
    const std::uint64_t sub = std::uint64_t{1} << positions.size();
    if (op.rows() != static_cast<Eigen::Index>(sub) || op.cols() != op.rows())
        throw DomainError("operator dimension does not match the qubit subset");
    std::vector<int> rest;
    for (int p = 0; p < total_qubits; ++p)
        if (!std::binary_search(positions.begin(), positions.end(), p)) rest.push_back(p);
    const std::uint64_t rdim = std::uint64_t{1} << rest.size();
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::uint64_t a = 0; a < sub; ++a) {
        const std::uint64_t ra = spread_bits(a, positions);
        for (std::uint64_t b = 0; b < sub; ++b) {
            if (op(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) == Complex(0, 0))
                continue;
            const std::uint64_t rb = spread_bits(b, positions);
            for (std::uint64_t r = 0; r < rdim; ++r) {
                const std::uint64_t rr = spread_bits(r, rest);
                out(static_cast<Eigen::Index>(ra | rr), static_cast<Eigen::Index>(rb | rr)) =
                    op(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
            }
        }
    }
    return out;
}

}  // namespace detail

/// S(rho | Pi) = sum_j p_j S(sigma_j) for a complete orthogonal rank-1
/// projector set on the measured side. Outcomes below probability 1e-14
/// contribute nothing (0 log 0 = 0).
inline double conditional_entropy(const DenseState& rho, const BipartiteSplit& split,
                                  const std::vector<Matrix>& projectors) {
    const int q = rho.layout.total_qubits();
    const std::uint64_t sub = std::uint64_t{1} << split.side_a.size();
    Matrix sum = Matrix::Zero(static_cast<Eigen::Index>(sub), static_cast<Eigen::Index>(sub));
    for (const auto& p : projectors) {
        if (p.rows() != static_cast<Eigen::Index>(sub) || p.cols() != p.rows())
            throw MeasurementError("projector dimension does not match the measured side");
        if (max_abs_diff((p * p).eval(), p) > 1e-10)
            throw MeasurementError("measurement element is not idempotent");
        sum += p;
    }
    if (max_abs_diff(sum, Matrix::Identity(sum.rows(), sum.cols())) > 1e-10)
        throw MeasurementError("projector set is not complete on the measured side");

    double total = 0.0;
    for (const auto& p : projectors) {
        const Matrix big = detail::embed_operator(p, split.side_a, q);
        const Matrix projected = big * rho.matrix * big;
        const double prob = projected.trace().real();
        if (prob < 1e-14) continue;
        total += prob * von_neumann_entropy(DenseState{rho.layout, projected / prob});
    }
    return total;
}

/// I(A:B) = S(A) + S(B) - S(AB).
inline double mutual_information(const DenseState& rho, const BipartiteSplit& split) {
    const double s_a = von_neumann_entropy(partial_trace(rho, split.side_a));
    const double s_b = von_neumann_entropy(partial_trace(rho, split.side_b));
    const double s_ab = von_neumann_entropy(rho);
    return s_a + s_b - s_ab;
}

/// Transpose of the chosen subsystem's indices. Hermitian, but possibly not
/// positive: a negative eigenvalue witnesses entanglement.
inline Matrix partial_transpose(const DenseState& rho, const std::vector<int>& side) {
    std::vector<int> positions = side;
    std::sort(positions.begin(), positions.end());
    std::uint64_t mask = 0;
    for (int p : positions) {
        if (p < 0 || p >= rho.layout.total_qubits()) throw DomainError("transpose qubit out of range");
        mask |= std::uint64_t{1} << p;
    }
    const std::uint64_t dim = rho.layout.dim();
    Matrix out(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::uint64_t i = 0; i < dim; ++i)
        for (std::uint64_t j = 0; j < dim; ++j) {
            const std::uint64_t pi = (i & ~mask) | (j & mask);
            const std::uint64_t pj = (j & ~mask) | (i & mask);
            out(static_cast<Eigen::Index>(pi), static_cast<Eigen::Index>(pj)) =
                rho.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    return out;
}

// ---------------------------------------------------------------------------
// The mid-subroutine state
// ---------------------------------------------------------------------------

/// State after the pair Hadamards but before any dephasing: each pointer
/// branch carries |f(k)> on the data register and the product of |+> (bit 0)
/// and |0> (bit 1) vectors on the ancillas. Nonorthogonality of |+> and |0>
/// is what leaves discord in an otherwise classical mixture.
inline DenseState rho_tilde(const DacInstance& inst) {
    inst.validate();
    const RegisterLayout lay = dac_layout(inst.m, inst.n);
    require_dense_capacity(lay.total_qubits());
    DenseState out = DenseState::zero(lay);
    const std::uint64_t a_dim = std::uint64_t{1} << inst.n;
    const double weight = std::ldexp(1.0, -inst.m);
    Vector branch(static_cast<Eigen::Index>(a_dim));
    for (std::uint64_t k = 0; k < inst.pointer_count(); ++k) {
        const std::uint64_t f = inst.value(k);
        branch.setZero();
        for (std::uint64_t a = 0; a < a_dim; ++a) {
            double amp = 1.0;
            for (int i = 0; i < inst.n; ++i) {
                const bool abit = (a >> i) & 1;
                if (inst.bit(k, i)) {
                    if (abit) amp = 0.0;  // ancilla pinned to |0>
                } else {
                    amp *= 1.0 / std::sqrt(2.0);  // ancilla in |+>
                }
                if (amp == 0.0) break;
            }
            branch(static_cast<Eigen::Index>(a)) = amp;
        }
        const std::uint64_t base = lay.basis_index(f, k, 0);
        for (std::uint64_t a = 0; a < a_dim; ++a)
            for (std::uint64_t a2 = 0; a2 < a_dim; ++a2)
                out.matrix(static_cast<Eigen::Index>(base | a), static_cast<Eigen::Index>(base | a2)) +=
                    weight * branch(static_cast<Eigen::Index>(a)) *
                    branch(static_cast<Eigen::Index>(a2));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Measurement families and minimization
// ---------------------------------------------------------------------------

/// cos(theta)|0> + e^(i phi) sin(theta)|1> and its orthocomplement.
inline std::pair<Matrix, Matrix> qubit_projector_pair(double theta, double phi = 0.0) {
    Eigen::Vector2cd v1, v2;
    const Complex phase = std::polar(1.0, phi);
    v1 << std::cos(theta), phase * std::sin(theta);
    v2 << std::sin(theta), -phase * std::cos(theta);
    return {Matrix(v1 * v1.adjoint()), Matrix(v2 * v2.adjoint())};
}

/// The restricted family on the ancilla register: a theta rotation on the top
/// ancilla, completed to a full rank-1 basis by the X eigenbasis on the
/// remaining ancillas (on which the mixture has no support beyond |+...+>).
inline std::vector<Matrix> theta_family_projectors(int n_ancilla, double theta) {
    auto [top1, top2] = qubit_projector_pair(theta);
    Eigen::Vector2cd plus, minus;
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    minus << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
    std::vector<Matrix> out;
    for (const Matrix& top : {top1, top2}) {
        const std::uint64_t rest = std::uint64_t{1} << (n_ancilla - 1);
        for (std::uint64_t bits = 0; bits < rest; ++bits) {
            Matrix proj = top;
            for (int i = n_ancilla - 2; i >= 0; --i) {
                const Eigen::Vector2cd& v = ((bits >> i) & 1) ? minus : plus;
                proj = kron(proj, Matrix(v * v.adjoint()));
            }
            out.push_back(std::move(proj));
        }
    }
    return out;
}

/// Outcome probabilities of the restricted measurement on the square-wave
/// mixture; they sum to 1.
inline std::pair<double, double> clock_outcome_probabilities(double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return {0.5 * ((c + s) * (c + s) / 2.0 + c * c),
            0.5 * ((s - c) * (s - c) / 2.0 + s * s)};
}

/// Conditional entropy of the square-wave mixture under the restricted
/// family, in closed form: m - H(p1) + H((cos+sin)^2/2)/2 + H(cos^2)/2.
inline double clock_conditional_entropy_closed_form(double theta, int m) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double p1 = clock_outcome_probabilities(theta).first;
    return static_cast<double>(m) - binary_entropy(p1) +
           0.5 * binary_entropy((c + s) * (c + s) / 2.0) + 0.5 * binary_entropy(c * c);
}

namespace detail {

struct ScalarMin {
    double x = 0.0;
    double value = 0.0;
};

/// Dense grid scan followed by golden-section refinement of the best cell.
inline ScalarMin minimize_on_interval(const std::function<double(double)>& f, double lo, double hi,
                                      int grid_points, double xtol) {
    double best_x = lo;
    double best_v = f(lo);
    const double step = (hi - lo) / (grid_points - 1);
    for (int i = 1; i < grid_points; ++i) {
        const double x = lo + i * step;
        const double v = f(x);
        if (v < best_v) {
            best_v = v;
            best_x = x;
        }
    }
    double a = std::max(lo, best_x - step);
    double b = std::min(hi, best_x + step);
    const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - golden * (b - a);
    double x2 = a + golden * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > xtol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - golden * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + golden * (b - a);
            f2 = f(x2);
        }
    }
    const double mid = (a + b) / 2.0;
    const double fm = f(mid);
    if (fm < best_v) return ScalarMin{mid, fm};
    return ScalarMin{best_x, best_v};
}

}  // namespace detail

/// Entropy of the two-outcome ancilla marginal (|+><+| + |0><0|)/2, from its
/// eigenvalues 1/2 +- sqrt(2)/4.
inline double clock_ancilla_marginal_entropy() {
    const double lp = 0.5 + std::sqrt(2.0) / 4.0;
    const double lm = 0.5 - std::sqrt(2.0) / 4.0;
    return -lp * std::log2(lp) - lm * std::log2(lm);
}

/// Discord of the square-wave mixture across the data-pointer/ancilla split,
/// measured on the ancillas, minimized over the restricted theta family.
inline DiscordReport discord_theta_family(int m, int n) {
    if (m < 1 || n < 1) throw DomainError("pointer and data widths must be at least 1");
    DiscordReport report;
    report.measured_side = "A";
    report.s_a = clock_ancilla_marginal_entropy();
    report.s_b = static_cast<double>(m);
    report.s_ab = static_cast<double>(m);
    const detail::ScalarMin best = detail::minimize_on_interval(
        [m](double theta) { return clock_conditional_entropy_closed_form(theta, m); }, 0.0,
        std::acos(-1.0) / 2.0, 10000, 1e-10);
    report.conditional_min = best.value;
    report.minimizer_theta = best.x;
    report.discord = report.s_a - report.s_ab + report.conditional_min;
    return report;
}

/// Same split measured on the data-pointer side: computational projectors
/// leave every branch pure, so the conditional entropy reaches its zero floor
/// and the discord vanishes.
inline DiscordReport discord_clock_lr(int m, int n) {
    if (m < 1 || n < 1) throw DomainError("pointer and data widths must be at least 1");
    const DacInstance inst = DacInstance::clock(m, n);
    const DenseState rho = rho_tilde(inst);
    const BipartiteSplit split = BipartiteSplit::lr_versus_a(rho.layout, false);
    std::vector<Matrix> projectors;
    const std::uint64_t lr_dim = std::uint64_t{1} << (m + n);
    projectors.reserve(lr_dim);
    for (std::uint64_t b = 0; b < lr_dim; ++b) {
        Matrix p = Matrix::Zero(static_cast<Eigen::Index>(lr_dim), static_cast<Eigen::Index>(lr_dim));
        p(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b)) = 1.0;
        projectors.push_back(std::move(p));
    }
    DiscordReport report;
    report.measured_side = "LR";
    report.s_a = von_neumann_entropy(partial_trace(rho, split.side_a));
    report.s_b = von_neumann_entropy(partial_trace(rho, split.side_b));
    report.s_ab = von_neumann_entropy(rho);
    report.conditional_min = conditional_entropy(rho, split, projectors);
    report.discord = report.s_a - report.s_ab + report.conditional_min;
    return report;
}

/// Full two-parameter minimization for a single measured qubit: grid over
/// (theta, phi), then pattern-search refinement. The independent check on the
/// restricted family.
inline DiscordReport discord_bruteforce(const DenseState& rho, const BipartiteSplit& split) {
    if (split.side_a.size() != 1)
        throw CapacityError("brute-force minimization handles a single measured qubit");
    DiscordReport report;
    report.measured_side = "A";
    report.s_a = von_neumann_entropy(partial_trace(rho, split.side_a));
    report.s_b = von_neumann_entropy(partial_trace(rho, split.side_b));
    report.s_ab = von_neumann_entropy(rho);

    const auto objective = [&rho, &split](double theta, double phi) {
        auto [p1, p2] = qubit_projector_pair(theta, phi);
        return conditional_entropy(rho, split, {p1, p2});
    };

    const double pi = std::acos(-1.0);
    double best_theta = 0.0, best_phi = 0.0;
    double best = objective(0.0, 0.0);
    const int nt = 61, np = 60;
    for (int it = 0; it <= nt; ++it) {
        const double theta = (pi / 2.0) * it / nt;
        for (int ip = 0; ip < np; ++ip) {
            const double phi = 2.0 * pi * ip / np;
            const double v = objective(theta, phi);
            if (v < best) {
                best = v;
                best_theta = theta;
                best_phi = phi;
            }
        }
    }
    double step = (pi / 2.0) / nt;
    while (step > 1e-9) {
        bool improved = false;
        for (const auto& [dt, dp] : {std::pair{step, 0.0}, {-step, 0.0}, {0.0, step}, {0.0, -step}}) {
            const double t = best_theta + dt;
            const double p = best_phi + dp;
            const double v = objective(t, p);
            if (v < best) {
                best = v;
                best_theta = t;
                best_phi = p;
                improved = true;
            }
        }
        if (!improved) step /= 2.0;
    }
    report.conditional_min = best;
    report.minimizer_theta = best_theta;
    report.minimizer_phi = best_phi;
    report.discord = report.s_a - report.s_ab + report.conditional_min;
    return report;
}

}  // namespace qdac
