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
#include <vector>

#include "qdac/channels.hpp"
#include "qdac/gates.hpp"
#include "qdac/instance.hpp"
#include "qdac/state.hpp"

namespace qdac {

enum class PrepMode { pure, mixed };

/// Projector of the uniform data-pointer superposition, built by Hadamarding
/// the pointer register of |0>|0> and applying the oracle.
inline DenseState prepare_initial_pure(const DacInstance& inst) {
    inst.validate();
    const RegisterLayout lay = input_layout(inst.m, inst.n);
    require_dense_capacity(lay.total_qubits());
    DenseState s = DenseState::zero(lay);
    s.matrix(0, 0) = 1.0;
    for (int j = 0; j < inst.m; ++j)
        s = apply_unitary(GateOp::hadamard(lay.position(Register::R, j)), s);
    return apply_unitary(build_cf(inst), s);
}

/// The classically correlated start: an equal mixture of |f(k)>|k>
/// components, one per pointer value, obtained by running the oracle on the
/// maximally mixed pointer register.
inline EnsembleState prepare_initial_mixed(const DacInstance& inst) {
    inst.validate();
    const RegisterLayout lay = input_layout(inst.m, inst.n);
    EnsembleState s{lay, {}};
    const std::uint64_t count = inst.pointer_count();
    const double weight = std::ldexp(1.0, -inst.m);
    s.components.reserve(count);
    for (std::uint64_t k = 0; k < count; ++k) {
        EnsembleComponent comp;
        comp.weight = weight;
        comp.factors.resize(static_cast<std::size_t>(lay.total_qubits()));
        for (int i = 0; i < inst.n; ++i)
            comp.factors[static_cast<std::size_t>(lay.position(Register::L, i))] = projector0();
        for (int j = 0; j < inst.m; ++j)
            comp.factors[static_cast<std::size_t>(lay.position(Register::R, j))] =
                basis_projector(static_cast<int>((k >> j) & 1));
        s.components.push_back(std::move(comp));
    }
    return apply_unitary(build_cf(inst), s);
}

namespace detail {

// Shared step sequence: attach one ancilla per data qubit in |0>, pair each
// data qubit with its ancilla through a 0-controlled Hadamard, then fully
// dephase the pointer register and every pair member.
template <typename State>
State s1_steps(const State& input) {
    const RegisterLayout in_lay = input.layout;
    if (in_lay.n_a != 0) throw LayoutError("input to the subroutine must not carry ancillas");
    if (in_lay.n_l < 1 || in_lay.n_r < 1) throw LayoutError("input needs data and pointer registers");
    State s = attach_ancillas(input, in_lay.n_l);
    const RegisterLayout& lay = s.layout;
    for (int i = 0; i < lay.n_l; ++i)
        s = apply_unitary(GateOp::zero_controlled_hadamard(lay.position(Register::L, i),
                                                           lay.position(Register::A, i)),
                          s);
    const Channel full_dephase = make_dephase(1.0);
    for (int j = 0; j < lay.n_r; ++j)
        s = apply_channel(full_dephase, lay.position(Register::R, j), s);
    for (int i = 0; i < lay.n_l; ++i) {
        s = apply_channel(full_dephase, lay.position(Register::L, i), s);
        s = apply_channel(full_dephase, lay.position(Register::A, i), s);
    }
    return s;
}

}  // namespace detail

/// Structured path of the ancilla-writing subroutine.
inline EnsembleState subroutine_s1(const EnsembleState& s) { return detail::s1_steps(s); }

/// Dense path: superpositions over pointers break the product form until the
/// dephasing step restores it, so the state is processed densely and the
/// product structure re-extracted afterwards.
inline EnsembleState subroutine_s1(const DenseState& s) {
    return ensemble_from_lr_diagonal(detail::s1_steps(s));
}

/// Depolarization strengths for ancilla i: p = 1 - 2^(i-n+1). Both p and
/// q = 1 - p are exact dyadics in binary floating point.
struct AncillaParams {
    double p = 0.0;
    double q = 0.0;
};

inline std::vector<AncillaParams> ancilla_params(int n) {
    std::vector<AncillaParams> params(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double q = std::ldexp(1.0, i - n + 1);
        params[static_cast<std::size_t>(i)] = AncillaParams{1.0 - q, q};
    }
    return params;
}

/// Converter output: the weighted mixture itself, its deviation form, and the
/// per-ancilla depolarization parameters.
struct DacOutput {
    DacInstance instance;
    EnsembleState state;
    DeviationState deviation;
    std::vector<AncillaParams> params;
};

/// Rewrites a converter output as classical data/pointer tags plus one
/// deviation coefficient per ancilla. Coefficients within rounding noise of
/// an exact parameter value (or zero) are snapped to it.
inline DeviationState to_deviation(const EnsembleState& state, const std::vector<AncillaParams>& params) {
    const RegisterLayout& lay = state.layout;
    if (static_cast<int>(params.size()) != lay.n_a)
        throw LayoutError("parameter count does not match the ancilla register");
    DeviationState dev{lay, {}};
    dev.components.reserve(state.components.size());
    for (const auto& comp : state.components) {
        DeviationComponent dc;
        dc.weight = comp.weight;
        for (int i = 0; i < lay.n_l; ++i) {
            const int bit =
                classify_basis_projector(comp.factors[static_cast<std::size_t>(lay.position(Register::L, i))]);
            if (bit < 0) throw FormError("data factor is not a computational-basis projector");
            dc.l_value |= static_cast<std::uint64_t>(bit) << i;
        }
        for (int j = 0; j < lay.n_r; ++j) {
            const int bit =
                classify_basis_projector(comp.factors[static_cast<std::size_t>(lay.position(Register::R, j))]);
            if (bit < 0) throw FormError("pointer factor is not a computational-basis projector");
            dc.r_value |= static_cast<std::uint64_t>(bit) << j;
        }
        dc.ancilla_coeff.resize(static_cast<std::size_t>(lay.n_a));
        for (int i = 0; i < lay.n_a; ++i) {
            const Matrix2& f = comp.factors[static_cast<std::size_t>(lay.position(Register::A, i))];
            if (std::abs(f(0, 1)) > tol::structure || std::abs(f(1, 0)) > tol::structure)
                throw FormError("ancilla factor carries coherence, not expressible as c Z/2 + I/2");
            if (std::abs(f(0, 0).imag()) > tol::structure || std::abs(f(1, 1).imag()) > tol::structure ||
                std::abs(f(0, 0).real() + f(1, 1).real() - 1.0) > tol::structure)
                throw FormError("ancilla factor is not a unit-trace real diagonal");
            double c = f(0, 0).real() - f(1, 1).real();
            if (c < -tol::structure || c > 1.0 + tol::structure)
                throw FormError("ancilla deviation coefficient outside [0, 1]");
            const double q = params[static_cast<std::size_t>(i)].q;
            if (std::abs(c) <= tol::structure)
                c = 0.0;
            else if (std::abs(c - q) <= tol::structure)
                c = q;
            else if (std::abs(c - 1.0) <= tol::structure)
                c = 1.0;
            dc.ancilla_coeff[static_cast<std::size_t>(i)] = std::clamp(c, 0.0, 1.0);
        }
        dev.components.push_back(std::move(dc));
    }
    return dev;
}

/// Runs the full conversion: state preparation, the ancilla-writing
/// subroutine, and the per-ancilla depolarizations that scale each written
/// bit by its place value. Pure and mixed starts yield the same output.
inline DacOutput run_dac(const DacInstance& inst, PrepMode mode) {
    inst.validate();
    EnsembleState rho = mode == PrepMode::pure ? subroutine_s1(prepare_initial_pure(inst))
                                               : subroutine_s1(prepare_initial_mixed(inst));
    const std::vector<AncillaParams> params = ancilla_params(inst.n);
    for (int i = 0; i < inst.n; ++i)
        rho = apply_channel(make_depolarize(params[static_cast<std::size_t>(i)].p),
                            rho.layout.position(Register::A, i), rho);
    DeviationState dev = to_deviation(rho, params);
    return DacOutput{inst, std::move(rho), std::move(dev), params};
}

}  // namespace qdac
