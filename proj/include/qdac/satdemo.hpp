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
#include <istream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qdac/dac.hpp"
#include "qdac/fetch.hpp"

namespace qdac {

/// CNF over variables x_1..x_m with DIMACS literal conventions. Assignments
/// are packed with x_i at bit i-1.
struct CnfFormula {
    int num_vars = 0;
    std::vector<std::vector<int>> clauses;

    bool evaluate(std::uint64_t assignment) const {
        for (const auto& clause : clauses) {
            bool sat = false;
            for (int lit : clause) {
                const int var = lit > 0 ? lit : -lit;
                const bool value = (assignment >> (var - 1)) & 1;
                if (value == (lit > 0)) {
                    sat = true;
                    break;
                }
            }
            if (!sat) return false;
        }
        return true;
    }

    void validate() const {
        if (num_vars < 1) throw DomainError("formula needs at least one variable");
        for (const auto& clause : clauses) {
            if (clause.empty()) throw DomainError("empty clause");
            for (int lit : clause) {
                const int var = lit > 0 ? lit : -lit;
                if (lit == 0 || var > num_vars)
                    throw DomainError("literal " + std::to_string(lit) + " out of range");
            }
        }
    }

    static CnfFormula from_dimacs(std::istream& in, const std::string& name = "<input>");
};

inline CnfFormula CnfFormula::from_dimacs(std::istream& in, const std::string& name) {
    auto fail = [&name](int line, const std::string& what) -> ParseError {
        return ParseError(name + ":" + std::to_string(line) + ": " + what);
    };
    CnfFormula cnf;
    long long declared_clauses = -1;
    bool have_header = false;
    std::vector<int> current;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ss(line);
        std::string first;
        if (!(ss >> first)) continue;
        if (first == "c" || first[0] == 'c') continue;
        if (first == "p") {
            std::string kind;
            long long vars = 0;
            if (!(ss >> kind >> vars >> declared_clauses) || kind != "cnf")
                throw fail(line_no, "malformed problem line, expected \"p cnf <vars> <clauses>\"");
            if (vars < 1) throw fail(line_no, "variable count must be positive");
            cnf.num_vars = static_cast<int>(vars);
            have_header = true;
            continue;
        }
        if (!have_header) throw fail(line_no, "clause before \"p cnf\" header");
        ss.clear();
        ss.str(line);
        long long lit = 0;
        while (ss >> lit) {
            if (lit == 0) {
                if (current.empty()) throw fail(line_no, "empty clause");
                cnf.clauses.push_back(current);
                current.clear();
            } else {
                const long long var = lit > 0 ? lit : -lit;
                if (var > cnf.num_vars)
                    throw fail(line_no, "literal " + std::to_string(lit) + " exceeds variable count");
                current.push_back(static_cast<int>(lit));
            }
        }
    }
    if (!have_header) throw fail(line_no, "missing \"p cnf\" header");
    if (!current.empty()) {
        cnf.clauses.push_back(current);  // unterminated final clause is tolerated
    }
    if (declared_clauses >= 0 && static_cast<long long>(cnf.clauses.size()) != declared_clauses)
        throw fail(line_no, "clause count " + std::to_string(cnf.clauses.size()) +
                                " does not match the declared " + std::to_string(declared_clauses));
    cnf.validate();
    return cnf;
}

/// Demo configuration: a data width n (at least 2, for the sampling demo)
/// large enough that one most-significant-bit signal clears the total noise
/// budget with gap c: 2^(n-1) v_lsb > 2^m (epsilon_th + c).
struct SatDemoConfig {
    double epsilon_th = 0.0;  // per-output noise bound, signal units
    double v_lsb = 0.0;       // smallest nonzero output amplitude
    double c = 0.0;           // gap constant
    int n = 0;

    void validate(int m) const {
        if (epsilon_th <= 0.0 || v_lsb <= 0.0 || c <= 0.0)
            throw DomainError("noise bound, LSB amplitude, and gap must be positive");
        if (n < 1 || n > 62) throw DomainError("data width out of range");
        if (!(std::ldexp(v_lsb, n - 1) > std::ldexp(epsilon_th + c, m)))
            throw DomainError("data width too small: 2^(n-1) v_lsb must exceed 2^m (epsilon_th + c)");
    }

    /// Smallest width n >= 2 satisfying the gap inequality for m variables.
    /// A gap of c >= epsilon_th makes the noisy decision exact at any
    /// accumulation length, since accumulated noise is bounded by the budget.
    static SatDemoConfig choose(int m, double epsilon_th = 1e-3, double c = 2e-3,
                                double v_lsb = 1.0) {
        SatDemoConfig cfg{epsilon_th, v_lsb, c, 0};
        for (int n = 2; n <= 62; ++n) {
            if (std::ldexp(v_lsb, n - 1) > std::ldexp(epsilon_th + c, m)) {
                cfg.n = n;
                cfg.validate(m);
                return cfg;
            }
        }
        throw DomainError("no data width up to 62 bits satisfies the gap inequality");
    }
};

/// Encodes satisfaction as the most significant data bit:
/// f(k) = phi(k) * 2^(n-1).
inline DacInstance cnf_to_instance(const CnfFormula& cnf, const SatDemoConfig& cfg) {
    cnf.validate();
    cfg.validate(cnf.num_vars);
    if (cnf.num_vars > 24) throw CapacityError("truth table too large for the demo");
    DacInstance inst{cnf.num_vars, cfg.n, {}};
    inst.table.resize(inst.pointer_count());
    for (std::uint64_t k = 0; k < inst.pointer_count(); ++k)
        inst.table[k] = cnf.evaluate(k) ? (std::uint64_t{1} << (cfg.n - 1)) : 0;
    return inst;
}

namespace detail {

/// Zero-mean Gaussian truncated to [-bound, bound] by rejection.
inline double truncated_gaussian(std::mt19937_64& rng, double sigma, double bound) {
    if (sigma == 0.0) return 0.0;
    std::normal_distribution<double> gauss(0.0, sigma);
    for (int tries = 0; tries < 10000; ++tries) {
        const double x = gauss(rng);
        if (std::abs(x) <= bound) return x;
    }
    return bound;  // pathological sigma/bound ratio
}

}  // namespace detail

struct SatDecision {
    bool satisfiable = false;
    double snr = 0.0;            // noiseless signal over the total noise budget
    double signal = 0.0;         // noiseless signal, physical units
    double accumulated = 0.0;    // signal plus realized accumulated noise
    double noise_bound = 0.0;    // 2^m epsilon_th, also the decision threshold
};

/// Decides satisfiability from the converted mixture: read the
/// most-significant-bit signal of the whole ensemble, add per-output
/// accumulated noise within the budget, and compare against the budget.
/// Noise is Gaussian truncated at the per-output bound, so an unsatisfiable
/// formula can never cross the threshold.
inline SatDecision decide_sat_via_dac(const CnfFormula& cnf, const SatDemoConfig& cfg,
                                      const NoiseModel& noise) {
    noise.validate();
    const DacInstance inst = cnf_to_instance(cnf, cfg);
    const DacOutput out = run_dac(inst, PrepMode::mixed);
    const double msb = any_nonzero_signal(out, /*msb_only=*/true);  // = (#satisfying)/2^m

    // Physical units: each satisfying pointer contributes 2^(n-1) v_lsb.
    const double signal = msb * std::ldexp(1.0, inst.m) * std::ldexp(cfg.v_lsb, cfg.n - 1);

    std::mt19937_64 rng(noise.seed);
    double total_noise = 0.0;
    for (std::uint64_t k = 0; k < inst.pointer_count(); ++k) {
        double acc = 0.0;
        for (std::uint64_t j = 0; j < noise.acquisitions; ++j)
            acc += detail::truncated_gaussian(rng, noise.sigma, cfg.epsilon_th);
        total_noise += acc / static_cast<double>(noise.acquisitions);
    }

    SatDecision decision;
    decision.noise_bound = std::ldexp(cfg.epsilon_th, inst.m);
    decision.signal = signal;
    decision.accumulated = signal + total_noise;
    decision.snr = signal / decision.noise_bound;
    decision.satisfiable = decision.accumulated > decision.noise_bound;
    return decision;
}

/// Amplitude vector of the would-be unitary converter: |amp(k)|^2
/// proportional to f(k) + epsilon, phases real nonnegative. The bias keeps
/// the map well defined on all-zero tables.
struct VhatState {
    int m = 0;
    int n = 0;
    double epsilon = 0.0;
    std::vector<double> amplitudes;  // indexed by pointer k
};

inline VhatState build_vhat_state(const DacInstance& inst, double epsilon) {
    inst.validate();
    if (!(epsilon > 0.0) || !(epsilon < std::ldexp(1.0, -inst.m)))
        throw DomainError("bias must lie strictly between 0 and 2^-m");
    VhatState state{inst.m, inst.n, epsilon, {}};
    state.amplitudes.resize(inst.pointer_count());
    double norm = 0.0;
    for (std::uint64_t k = 0; k < inst.pointer_count(); ++k)
        norm += static_cast<double>(inst.value(k)) + epsilon;
    for (std::uint64_t k = 0; k < inst.pointer_count(); ++k)
        state.amplitudes[k] = std::sqrt((static_cast<double>(inst.value(k)) + epsilon) / norm);
    return state;
}

/// Exact probability that a pointer sampled from the amplitude distribution
/// satisfies the formula.
inline double exact_success_probability(const VhatState& state, const CnfFormula& cnf) {
    double p = 0.0;
    for (std::uint64_t k = 0; k < state.amplitudes.size(); ++k)
        if (cnf.evaluate(k)) p += state.amplitudes[k] * state.amplitudes[k];
    return p;
}

struct Prop2Report {
    double p_s_hat = 0.0;                // fraction of samples satisfying the formula
    bool decision = false;               // some sample satisfied it
    std::uint64_t shots = 0;
    std::vector<std::uint64_t> counts;   // per-pointer histogram
};

/// Samples the pointer register of the amplitude-converted state and verifies
/// each sample classically. Satisfiable formulas succeed with probability
/// above 2/3 per shot; unsatisfiable ones sample pointers uniformly and never
/// succeed.
inline Prop2Report sample_prop2(const CnfFormula& cnf, int n, double epsilon, std::uint64_t shots,
                                std::uint64_t seed) {
    cnf.validate();
    if (n < 2) throw DomainError("the sampling demo requires data width at least 2");
    if (shots < 1) throw DomainError("need at least one shot");
    if (cnf.num_vars > 24) throw CapacityError("truth table too large for the demo");

    DacInstance inst{cnf.num_vars, n, {}};
    inst.table.resize(inst.pointer_count());
    for (std::uint64_t k = 0; k < inst.pointer_count(); ++k)
        inst.table[k] = cnf.evaluate(k) ? (std::uint64_t{1} << (n - 1)) : 0;
    const VhatState state = build_vhat_state(inst, epsilon);

    std::vector<double> cdf(state.amplitudes.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < cdf.size(); ++k) {
        acc += state.amplitudes[k] * state.amplitudes[k];
        cdf[k] = acc;
    }

    Prop2Report report;
    report.shots = shots;
    report.counts.assign(state.amplitudes.size(), 0);
    std::mt19937_64 rng(seed);
    std::uint64_t successes = 0;
    for (std::uint64_t s = 0; s < shots; ++s) {
        // 53-bit uniform draw in [0, 1)
        const double u = static_cast<double>(rng() >> 11) * 0x1p-53;
        const auto it = std::lower_bound(cdf.begin(), cdf.end(), u * acc);
        const std::uint64_t k = static_cast<std::uint64_t>(it - cdf.begin());
        ++report.counts[k];
        if (cnf.evaluate(k)) {
            ++successes;
            report.decision = true;
        }
    }
    report.p_s_hat = static_cast<double>(successes) / static_cast<double>(shots);
    return report;
}

}  // namespace qdac
