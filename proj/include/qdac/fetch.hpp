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
#include <cstdint>
#include <limits>
#include <random>
#include <set>
#include <vector>

#include "qdac/dac.hpp"
#include "qdac/gates.hpp"

namespace qdac {

enum class FetchRoute { projective, controlled_hadamard };

/// One retrieved signal. Amplitudes follow the unnormalized-trace convention:
/// the projected population is not renormalized, so each value carries the
/// 1/2^m mixture weight of its component.
struct FetchResult {
    std::uint64_t k = 0;
    double amplitude = 0.0;
    FetchRoute route = FetchRoute::projective;
};

namespace detail {

inline void check_pointer_range(const RegisterLayout& lay, std::uint64_t k) {
    if (lay.n_r < 64 && (k >> lay.n_r))
        throw DomainError("pointer " + std::to_string(k) + " is outside the pointer register");
}

// Sum of Z expectations over the ancilla factors of one component.
inline double component_z_sum(const EnsembleComponent& comp, const RegisterLayout& lay) {
    double total = 0.0;
    for (int i = 0; i < lay.n_a; ++i) {
        const Matrix2& f = comp.factors[static_cast<std::size_t>(lay.position(Register::A, i))];
        total += (f(0, 0) - f(1, 1)).real();
    }
    return total;
}

// Sum of X expectations over the ancilla factors of one component.
inline double component_x_sum(const EnsembleComponent& comp, const RegisterLayout& lay) {
    double total = 0.0;
    for (int i = 0; i < lay.n_a; ++i) {
        const Matrix2& f = comp.factors[static_cast<std::size_t>(lay.position(Register::A, i))];
        total += (f(0, 1) + f(1, 0)).real();
    }
    return total;
}

// tr[(P rho P)(I x sum_i Z_i)] over the ancillas, with P selecting pointer
// values from `ks`. The observable is diagonal, so only diagonal entries
// contribute.
inline double dense_projected_z_sum(const DenseState& s, const std::set<std::uint64_t>& ks) {
    const RegisterLayout& lay = s.layout;
    double total = 0.0;
    for (std::uint64_t b = 0; b < lay.dim(); ++b) {
        if (!ks.contains(lay.r_part(b))) continue;
        const std::uint64_t a = lay.a_part(b);
        int z = 0;
        for (int i = 0; i < lay.n_a; ++i) z += ((a >> i) & 1) ? -1 : 1;
        total += s.matrix(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b)).real() * z;
    }
    return total;
}

inline double dense_x_sum(const DenseState& s) {
    const RegisterLayout& lay = s.layout;
    double total = 0.0;
    for (int i = 0; i < lay.n_a; ++i) {
        const std::uint64_t bit = std::uint64_t{1} << lay.position(Register::A, i);
        for (std::uint64_t b = 0; b < lay.dim(); ++b) {
            if (b & bit) continue;
            total += 2.0 * s.matrix(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b | bit)).real();
        }
    }
    return total;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Route 1: selective projection, Z readout
// ---------------------------------------------------------------------------

inline FetchResult fetch_signal_1(const EnsembleState& rho2, std::uint64_t k) {
    detail::check_pointer_range(rho2.layout, k);
    double amplitude = 0.0;
    for (const auto& comp : rho2.components) {
        if (detail::component_pointer(comp, rho2.layout) != k) continue;
        amplitude += comp.weight * detail::component_z_sum(comp, rho2.layout);
    }
    return FetchResult{k, amplitude, FetchRoute::projective};
}

inline FetchResult fetch_signal_1(const DenseState& rho2, std::uint64_t k) {
    detail::check_pointer_range(rho2.layout, k);
    return FetchResult{k, detail::dense_projected_z_sum(rho2, {k}), FetchRoute::projective};
}

inline FetchResult fetch_signal_1(const DacOutput& out, std::uint64_t k) {
    return fetch_signal_1(out.state, k);
}

// ---------------------------------------------------------------------------
// Route 2: pointer-controlled ancilla Hadamards, X readout, state recovery
// ---------------------------------------------------------------------------

/// Measurement plus the recovered state, so callers can check that the
/// recovery step really restores the input.
template <typename State>
struct Route2Outcome {
    double amplitude = 0.0;
    State recovered;
};

inline Route2Outcome<EnsembleState> fetch_signal_2_traced(const EnsembleState& rho2,
                                                          const std::vector<std::uint64_t>& ks) {
    std::set<std::uint64_t> targets(ks.begin(), ks.end());
    for (std::uint64_t k : targets) detail::check_pointer_range(rho2.layout, k);
    EnsembleState work = rho2;
    const RegisterLayout& lay = work.layout;
    const auto apply_blocks = [&] {
        for (auto& comp : work.components) {
            if (!targets.contains(detail::component_pointer(comp, lay))) continue;
            for (int i = 0; i < lay.n_a; ++i) {
                Matrix2& f = comp.factors[static_cast<std::size_t>(lay.position(Register::A, i))];
                f = hadamard_conjugate(f);
            }
        }
    };
    apply_blocks();
    double amplitude = 0.0;
    for (const auto& comp : work.components)
        amplitude += comp.weight * detail::component_x_sum(comp, work.layout);
    apply_blocks();
    return Route2Outcome<EnsembleState>{amplitude, std::move(work)};
}

inline Route2Outcome<DenseState> fetch_signal_2_traced(const DenseState& rho2,
                                                       const std::vector<std::uint64_t>& ks) {
    for (std::uint64_t k : ks) detail::check_pointer_range(rho2.layout, k);
    DenseState work = rho2;
    for (std::uint64_t k : ks) work = controlled_block_hadamard(k, work);
    const double amplitude = detail::dense_x_sum(work);
    for (std::uint64_t k : ks) work = controlled_block_hadamard(k, work);
    return Route2Outcome<DenseState>{amplitude, std::move(work)};
}

namespace detail {

// Expectation of the transverse readout after the pointer-controlled blocks,
// without materializing the rotated state: targeted components are rotated
// factor by factor, everything else is read as is.
inline double route2_amplitude(const EnsembleState& rho2, const std::set<std::uint64_t>& targets) {
    const RegisterLayout& lay = rho2.layout;
    double amplitude = 0.0;
    for (const auto& comp : rho2.components) {
        const bool targeted = targets.contains(component_pointer(comp, lay));
        double x = 0.0;
        for (int i = 0; i < lay.n_a; ++i) {
            const Matrix2& f = comp.factors[static_cast<std::size_t>(lay.position(Register::A, i))];
            if (targeted) {
                const Matrix2 rotated = hadamard_conjugate(f);
                x += (rotated(0, 1) + rotated(1, 0)).real();
            } else {
                x += (f(0, 1) + f(1, 0)).real();
            }
        }
        amplitude += comp.weight * x;
    }
    return amplitude;
}

}  // namespace detail

inline FetchResult fetch_signal_2(const EnsembleState& rho2, std::uint64_t k) {
    detail::check_pointer_range(rho2.layout, k);
    return FetchResult{k, detail::route2_amplitude(rho2, {k}), FetchRoute::controlled_hadamard};
}

inline FetchResult fetch_signal_2(const DenseState& rho2, std::uint64_t k) {
    return FetchResult{k, fetch_signal_2_traced(rho2, {k}).amplitude, FetchRoute::controlled_hadamard};
}

inline FetchResult fetch_signal_2(const DacOutput& out, std::uint64_t k) {
    return fetch_signal_2(out.state, k);
}

// ---------------------------------------------------------------------------
// Signal mixing and the any-nonzero test
// ---------------------------------------------------------------------------

/// Mixed signal of several pointers: a rank-r projection on route 1, or r
/// pointer-controlled blocks on route 2.
template <typename S>
FetchResult fetch_mixed(const S& rho2, const std::vector<std::uint64_t>& ks,
                        FetchRoute route = FetchRoute::projective) {
    if (ks.empty()) throw DomainError("signal mixing needs at least one pointer");
    const std::set<std::uint64_t> unique(ks.begin(), ks.end());
    for (std::uint64_t k : unique) detail::check_pointer_range(rho2.layout, k);
    double amplitude = 0.0;
    if (route == FetchRoute::projective) {
        if constexpr (std::is_same_v<S, DenseState>) {
            amplitude = detail::dense_projected_z_sum(rho2, unique);
        } else {
            for (const auto& comp : rho2.components) {
                if (!unique.contains(detail::component_pointer(comp, rho2.layout))) continue;
                amplitude += comp.weight * detail::component_z_sum(comp, rho2.layout);
            }
        }
    } else {
        if constexpr (std::is_same_v<S, DenseState>) {
            amplitude =
                fetch_signal_2_traced(rho2, std::vector<std::uint64_t>(unique.begin(), unique.end()))
                    .amplitude;
        } else {
            amplitude = detail::route2_amplitude(rho2, unique);
        }
    }
    return FetchResult{*unique.begin(), amplitude, route};
}

inline FetchResult fetch_mixed(const DacOutput& out, const std::vector<std::uint64_t>& ks,
                               FetchRoute route = FetchRoute::projective) {
    return fetch_mixed(out.state, ks, route);
}

/// Z readout over the whole mixture without selecting a pointer. The full
/// observable is zero exactly when the table is identically zero; the
/// single-qubit variant reads only the top ancilla.
inline double any_nonzero_signal(const EnsembleState& rho2, bool msb_only = false) {
    const RegisterLayout& lay = rho2.layout;
    double total = 0.0;
    for (const auto& comp : rho2.components) {
        if (msb_only) {
            const Matrix2& f =
                comp.factors[static_cast<std::size_t>(lay.position(Register::A, lay.n_a - 1))];
            total += comp.weight * (f(0, 0) - f(1, 1)).real();
        } else {
            total += comp.weight * detail::component_z_sum(comp, lay);
        }
    }
    return total;
}

inline double any_nonzero_signal(const DenseState& rho2, bool msb_only = false) {
    const RegisterLayout& lay = rho2.layout;
    double total = 0.0;
    for (std::uint64_t b = 0; b < lay.dim(); ++b) {
        const std::uint64_t a = lay.a_part(b);
        int z = 0;
        if (msb_only) {
            z = ((a >> (lay.n_a - 1)) & 1) ? -1 : 1;
        } else {
            for (int i = 0; i < lay.n_a; ++i) z += ((a >> i) & 1) ? -1 : 1;
        }
        total += rho2.matrix(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b)).real() * z;
    }
    return total;
}

inline double any_nonzero_signal(const DacOutput& out, bool msb_only = false) {
    return any_nonzero_signal(out.state, msb_only);
}

/// Closed-form amplitude: (1/2^m) sum_i 2^(i-n+1) [f_i(k) = 1]. Both fetch
/// routes must reproduce this value; it also equals f(k) / 2^(m+n-1).
inline double expected_amplitude(const DacInstance& inst, std::uint64_t k) {
    double total = 0.0;
    for (int i = 0; i < inst.n; ++i)
        if (inst.bit(k, i)) total += std::ldexp(1.0, i - inst.n + 1);
    return std::ldexp(total, -inst.m);
}

// ---------------------------------------------------------------------------
// Accumulation model
// ---------------------------------------------------------------------------

/// Additive acquisition noise: L acquisitions, i.i.d. zero-mean Gaussian of
/// width sigma each, reproducible from the seed.
struct NoiseModel {
    double sigma = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t acquisitions = 1;

    void validate() const {
        if (sigma < 0.0) throw DomainError("noise width must be nonnegative");
        if (acquisitions < 1) throw DomainError("accumulation needs at least one acquisition");
    }
};

struct AccumulationReport {
    double mean = 0.0;       // sample mean of the acquisitions
    double std_error = 0.0;  // sample standard deviation of the mean
    double snr = 0.0;        // summed signal L|A| over the measured std of the summed noise
};

/// Accumulates L noisy acquisitions of a fixed amplitude. The summed signal
/// grows as L while the summed noise grows as sqrt(L); the reported ratio
/// uses the noise width estimated from the acquisitions themselves.
/// Noiseless input reports the amplitude exactly with an infinite-SNR
/// sentinel.
inline AccumulationReport simulate_accumulation(double true_amplitude, const NoiseModel& noise) {
    noise.validate();
    AccumulationReport report;
    if (noise.sigma == 0.0) {
        report.mean = true_amplitude;
        report.std_error = 0.0;
        report.snr = std::numeric_limits<double>::infinity();
        return report;
    }
    std::mt19937_64 rng(noise.seed);
    std::normal_distribution<double> gauss(0.0, noise.sigma);
    const std::uint64_t L = noise.acquisitions;
    std::vector<double> samples(L);
    double sum = 0.0;
    for (auto& x : samples) {
        x = true_amplitude + gauss(rng);
        sum += x;
    }
    report.mean = sum / static_cast<double>(L);
    if (L < 2) {
        report.std_error = 0.0;
        report.snr = std::numeric_limits<double>::infinity();
        return report;
    }
    double ss = 0.0;
    for (double x : samples) ss += (x - report.mean) * (x - report.mean);
    const double sample_std = std::sqrt(ss / static_cast<double>(L - 1));
    report.std_error = sample_std / std::sqrt(static_cast<double>(L));
    // L |A| / (sigma_hat sqrt(L))
    report.snr = sample_std > 0.0
                     ? std::sqrt(static_cast<double>(L)) * std::abs(true_amplitude) / sample_std
                     : std::numeric_limits<double>::infinity();
    return report;
}

}  // namespace qdac
