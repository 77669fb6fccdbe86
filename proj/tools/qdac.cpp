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

// Command-line driver: runs the converter on truth-table files, emits fetch
// tables and discord reports, decides CNF satisfiability through the
// converter, and sweeps the accumulation noise law. Output is CSV or JSON
// for external plotting; all randomness is seeded and reproducible.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qdac/qdac.hpp"

namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kCapacity = 2,
    kInternal = 3,
};

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw qdac::ParseError(path + ": cannot open for writing");
    out << text;
}

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json json_double(double v) {
    if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
    return json(v);
}

qdac::PrepMode parse_mode(const std::string& mode) {
    if (mode == "pure") return qdac::PrepMode::pure;
    if (mode == "mixed") return qdac::PrepMode::mixed;
    throw CLI::ValidationError("--mode", "expected pure or mixed");
}

struct InstanceOptions {
    std::string input;
    std::string mode = "mixed";
    std::string backend = "auto";
};

void add_instance_options(CLI::App* cmd, InstanceOptions& opts) {
    cmd->add_option("-i,--input", opts.input, "truth-table file")->required();
    cmd->add_option("--mode", opts.mode, "initial state: pure or mixed")
        ->check(CLI::IsMember({"pure", "mixed"}));
    cmd->add_option("--backend", opts.backend, "state backend: dense, structured, or auto")
        ->check(CLI::IsMember({"dense", "structured", "auto"}));
}

// ---------------------------------------------------------------------------
// run-dac
// ---------------------------------------------------------------------------

int cmd_run_dac(const InstanceOptions& opts, const std::string& output) {
    const qdac::DacInstance inst = qdac::DacInstance::from_file(opts.input);
    const qdac::DacOutput out = qdac::run_dac(inst, parse_mode(opts.mode));
    if (opts.backend == "dense") qdac::require_valid(qdac::densify(out.state));

    json doc;
    doc["schema"] = kSchemaVersion;
    doc["command"] = "run-dac";
    doc["m"] = inst.m;
    doc["n"] = inst.n;
    doc["mode"] = opts.mode;
    doc["component_count"] = out.state.components.size();
    json params = json::array();
    for (std::size_t i = 0; i < out.params.size(); ++i)
        params.push_back({{"i", i}, {"p", out.params[i].p}, {"q", out.params[i].q}});
    doc["params"] = params;
    json comps = json::array();
    for (const auto& comp : out.deviation.components) {
        json c;
        c["k"] = comp.r_value;
        c["f"] = comp.l_value;
        c["weight"] = comp.weight;
        c["deviation_coefficients"] = comp.ancilla_coeff;
        comps.push_back(std::move(c));
    }
    doc["components"] = comps;
    write_text(output, doc.dump(2) + "\n");
    return kOk;
}

// ---------------------------------------------------------------------------
// fetch
// ---------------------------------------------------------------------------

struct FetchOptions {
    InstanceOptions instance;
    std::optional<std::uint64_t> k;
    bool all = false;
    std::vector<std::uint64_t> mix;
    std::string route = "both";
};

int cmd_fetch(const FetchOptions& opts, const std::string& output) {
    const qdac::DacInstance inst = qdac::DacInstance::from_file(opts.instance.input);
    const qdac::DacOutput out = qdac::run_dac(inst, parse_mode(opts.instance.mode));

    const bool dense = opts.instance.backend == "dense";
    std::optional<qdac::DenseState> dense_state;
    if (dense) dense_state = qdac::densify(out.state);

    const bool route1 = opts.route == "1" || opts.route == "both";
    const bool route2 = opts.route == "2" || opts.route == "both";

    auto amplitude1 = [&](std::uint64_t k) {
        return dense ? qdac::fetch_signal_1(*dense_state, k).amplitude
                     : qdac::fetch_signal_1(out.state, k).amplitude;
    };
    auto amplitude2 = [&](std::uint64_t k) {
        return dense ? qdac::fetch_signal_2(*dense_state, k).amplitude
                     : qdac::fetch_signal_2(out.state, k).amplitude;
    };

    std::ostringstream csv;
    csv << "k,f_k";
    if (route1) csv << ",amplitude_route1";
    if (route2) csv << ",amplitude_route2";
    csv << ",expected_eq6";
    if (route1 && route2) csv << ",delta";
    csv << "\n";

    auto emit_row = [&](const std::string& label, const std::string& f, double a1, double a2,
                        double expected) {
        csv << label << "," << f;
        if (route1) csv << "," << format_double(a1);
        if (route2) csv << "," << format_double(a2);
        csv << "," << format_double(expected);
        if (route1 && route2) csv << "," << format_double(std::abs(a1 - a2));
        csv << "\n";
    };

    if (!opts.mix.empty()) {
        double a1 = 0.0, a2 = 0.0;
        if (route1)
            a1 = dense ? qdac::fetch_mixed(*dense_state, opts.mix).amplitude
                       : qdac::fetch_mixed(out.state, opts.mix).amplitude;
        if (route2)
            a2 = dense
                     ? qdac::fetch_mixed(*dense_state, opts.mix, qdac::FetchRoute::controlled_hadamard)
                           .amplitude
                     : qdac::fetch_mixed(out.state, opts.mix, qdac::FetchRoute::controlled_hadamard)
                           .amplitude;
        double expected = 0.0;
        for (std::uint64_t k : opts.mix) expected += qdac::expected_amplitude(inst, k);
        emit_row("mix", "", a1, a2, expected);
    } else {
        std::vector<std::uint64_t> ks;
        if (opts.all) {
            for (std::uint64_t k = 0; k < inst.pointer_count(); ++k) ks.push_back(k);
        } else if (opts.k) {
            ks.push_back(*opts.k);
        } else {
            throw CLI::ValidationError("fetch", "one of --k, --all, or --mix is required");
        }
        for (std::uint64_t k : ks) {
            const double a1 = route1 ? amplitude1(k) : 0.0;
            const double a2 = route2 ? amplitude2(k) : 0.0;
            emit_row(std::to_string(k), std::to_string(inst.value(k)),
                     a1, a2, qdac::expected_amplitude(inst, k));
        }
    }
    write_text(output, csv.str());
    return kOk;
}

// ---------------------------------------------------------------------------
// discord
// ---------------------------------------------------------------------------

struct DiscordOptions {
    int m = 1;
    int n = 1;
    std::string side = "a";
    std::string sweep_path;
};

json report_to_json(const qdac::DiscordReport& report) {
    json doc;
    doc["measured_side"] = report.measured_side;
    doc["s_a"] = json_double(report.s_a);
    doc["s_b"] = json_double(report.s_b);
    doc["s_ab"] = json_double(report.s_ab);
    doc["conditional_min"] = json_double(report.conditional_min);
    if (report.minimizer_theta) doc["minimizer_theta"] = json_double(*report.minimizer_theta);
    if (report.minimizer_phi) doc["minimizer_phi"] = json_double(*report.minimizer_phi);
    doc["discord"] = json_double(report.discord);
    return doc;
}

int cmd_discord(const DiscordOptions& opts, const std::string& output) {
    const qdac::DiscordReport report = opts.side == "lr"
                                           ? qdac::discord_clock_lr(opts.m, opts.n)
                                           : qdac::discord_theta_family(opts.m, opts.n);
    json doc = report_to_json(report);
    doc["schema"] = kSchemaVersion;
    doc["command"] = "discord";
    doc["m"] = opts.m;
    doc["n"] = opts.n;

    if (!opts.sweep_path.empty()) {
        const qdac::DacInstance inst = qdac::DacInstance::clock(opts.m, opts.n);
        const qdac::DenseState rho = qdac::rho_tilde(inst);
        const qdac::BipartiteSplit split = qdac::BipartiteSplit::lr_versus_a(rho.layout, true);
        std::ostringstream csv;
        csv << "theta,closed_form_value,numeric_value\n";
        const int points = 10000;
        const double pi = std::acos(-1.0);
        for (int i = 0; i < points; ++i) {
            const double theta = (pi / 2.0) * i / (points - 1);
            const double closed = qdac::clock_conditional_entropy_closed_form(theta, opts.m);
            const double numeric = qdac::conditional_entropy(
                rho, split, qdac::theta_family_projectors(opts.n, theta));
            csv << format_double(theta) << "," << format_double(closed) << ","
                << format_double(numeric) << "\n";
        }
        write_text(opts.sweep_path, csv.str());
        doc["sweep"] = opts.sweep_path;
    }
    write_text(output, doc.dump(2) + "\n");
    return kOk;
}

// ---------------------------------------------------------------------------
// sat
// ---------------------------------------------------------------------------

struct SatOptions {
    std::string input;
    double epsilon_th = 1e-3;
    double c = 2e-3;
    double v_lsb = 1.0;
    double sigma = 5e-4;
    std::uint64_t acquisitions = 64;
    std::uint64_t seed = 1;
    std::uint64_t prop2_shots = 0;
    double epsilon = 0.0;  // 0 = default 2^-(m+1)
};

int cmd_sat(const SatOptions& opts, const std::string& output) {
    std::ifstream in(opts.input);
    if (!in) throw qdac::ParseError(opts.input + ": cannot open file");
    const qdac::CnfFormula cnf = qdac::CnfFormula::from_dimacs(in, opts.input);
    const qdac::SatDemoConfig cfg =
        qdac::SatDemoConfig::choose(cnf.num_vars, opts.epsilon_th, opts.c, opts.v_lsb);
    const qdac::NoiseModel noise{opts.sigma, opts.seed, opts.acquisitions};
    const qdac::SatDecision decision = qdac::decide_sat_via_dac(cnf, cfg, noise);

    json doc;
    doc["schema"] = kSchemaVersion;
    doc["command"] = "sat";
    doc["num_vars"] = cnf.num_vars;
    doc["num_clauses"] = cnf.clauses.size();
    doc["satisfiable"] = decision.satisfiable;
    doc["snr"] = json_double(decision.snr);
    doc["signal"] = json_double(decision.signal);
    doc["accumulated"] = json_double(decision.accumulated);
    doc["noise_bound"] = json_double(decision.noise_bound);
    doc["config"] = {{"epsilon_th", cfg.epsilon_th}, {"c", cfg.c}, {"v_lsb", cfg.v_lsb}, {"n", cfg.n}};

    if (opts.prop2_shots > 0) {
        const double epsilon =
            opts.epsilon > 0.0 ? opts.epsilon : std::ldexp(1.0, -(cnf.num_vars + 1));
        const qdac::Prop2Report report =
            qdac::sample_prop2(cnf, cfg.n, epsilon, opts.prop2_shots, opts.seed);
        doc["prop2"] = {{"shots", report.shots},
                        {"p_s_hat", report.p_s_hat},
                        {"decision", report.decision},
                        {"epsilon", epsilon}};
    }
    write_text(output, doc.dump(2) + "\n");
    return kOk;
}

// ---------------------------------------------------------------------------
// noise-sweep
// ---------------------------------------------------------------------------

struct SweepOptions {
    double amplitude = 1.0;
    double sigma = 1.0;
    std::uint64_t seed = 1;
    std::uint64_t replicates = 100;
    int l_exp_min = 2;
    int l_exp_max = 12;
    int l_exp_step = 2;
};

int cmd_noise_sweep(const SweepOptions& opts, const std::string& output) {
    if (opts.l_exp_min < 0 || opts.l_exp_max < opts.l_exp_min || opts.l_exp_step < 1)
        throw qdac::DomainError("invalid acquisition-count exponent range");
    std::ostringstream csv;
    csv << "L,snr\n";
    for (int e = opts.l_exp_min; e <= opts.l_exp_max; e += opts.l_exp_step) {
        const std::uint64_t L = std::uint64_t{1} << e;
        double sum = 0.0;
        bool infinite = false;
        for (std::uint64_t r = 0; r < opts.replicates; ++r) {
            const qdac::AccumulationReport rep = qdac::simulate_accumulation(
                opts.amplitude, qdac::NoiseModel{opts.sigma, opts.seed + r, L});
            if (std::isinf(rep.snr)) {
                infinite = true;
                break;
            }
            sum += rep.snr;
        }
        csv << L << ","
            << (infinite ? "inf" : format_double(sum / static_cast<double>(opts.replicates)))
            << "\n";
    }
    write_text(output, csv.str());
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nonunitary parallel digital-to-analog converter simulator"};
    app.require_subcommand(1);
    std::string output;
    app.add_option("-o,--output", output, "output file (default: stdout)");

    InstanceOptions run_opts;
    CLI::App* run = app.add_subcommand("run-dac", "run the converter on a truth table");
    add_instance_options(run, run_opts);

    FetchOptions fetch_opts;
    CLI::App* fetch = app.add_subcommand("fetch", "retrieve analog amplitudes from the output");
    add_instance_options(fetch, fetch_opts.instance);
    auto* opt_k = fetch->add_option("-k,--k", fetch_opts.k, "pointer to fetch");
    auto* opt_all = fetch->add_flag("--all", fetch_opts.all, "fetch every pointer");
    auto* opt_mix = fetch->add_option("--mix", fetch_opts.mix, "pointers for a mixed signal")
                        ->delimiter(',');
    opt_k->excludes(opt_all)->excludes(opt_mix);
    opt_all->excludes(opt_mix);
    fetch->add_option("--route", fetch_opts.route, "fetch route: 1, 2, or both")
        ->check(CLI::IsMember({"1", "2", "both"}));

    DiscordOptions discord_opts;
    CLI::App* discord = app.add_subcommand("discord", "discord analysis of the square-wave mixture");
    discord->add_option("-m,--m", discord_opts.m, "pointer width")->required();
    discord->add_option("-n,--n", discord_opts.n, "data width")->required();
    discord->add_option("--side", discord_opts.side, "measured side: a or lr")
        ->check(CLI::IsMember({"a", "lr"}));
    discord->add_option("--sweep-theta", discord_opts.sweep_path,
                        "write a theta sweep CSV to this path");

    SatOptions sat_opts;
    CLI::App* sat = app.add_subcommand("sat", "decide a DIMACS CNF through the converter");
    sat->add_option("-i,--input", sat_opts.input, "DIMACS CNF file")->required();
    sat->add_option("--epsilon-th", sat_opts.epsilon_th, "per-output noise bound");
    sat->add_option("--gap", sat_opts.c, "gap constant c");
    sat->add_option("--v-lsb", sat_opts.v_lsb, "least-significant-bit amplitude");
    sat->add_option("--sigma", sat_opts.sigma, "noise width per acquisition");
    sat->add_option("--acquisitions", sat_opts.acquisitions, "acquisitions per output");
    sat->add_option("--seed", sat_opts.seed, "noise seed");
    sat->add_option("--prop2-shots", sat_opts.prop2_shots,
                    "also sample the amplitude-converted state this many times");
    sat->add_option("--epsilon", sat_opts.epsilon, "amplitude bias (default 2^-(m+1))");

    SweepOptions sweep_opts;
    CLI::App* sweep = app.add_subcommand("noise-sweep", "SNR versus accumulation length");
    sweep->add_option("--amplitude", sweep_opts.amplitude, "true signal amplitude");
    sweep->add_option("--sigma", sweep_opts.sigma, "noise width per acquisition");
    sweep->add_option("--seed", sweep_opts.seed, "base seed; replicate r uses seed + r");
    sweep->add_option("--replicates", sweep_opts.replicates, "replicates per point");
    sweep->add_option("--l-exp-min", sweep_opts.l_exp_min, "smallest L = 2^e");
    sweep->add_option("--l-exp-max", sweep_opts.l_exp_max, "largest L = 2^e");
    sweep->add_option("--l-exp-step", sweep_opts.l_exp_step, "exponent step");

    try {
        app.parse(argc, argv);
        if (run->parsed()) return cmd_run_dac(run_opts, output);
        if (fetch->parsed()) return cmd_fetch(fetch_opts, output);
        if (discord->parsed()) return cmd_discord(discord_opts, output);
        if (sat->parsed()) return cmd_sat(sat_opts, output);
        if (sweep->parsed()) return cmd_noise_sweep(sweep_opts, output);
        return kUsage;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    } catch (const qdac::CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return kCapacity;
    } catch (const qdac::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kUsage;
    } catch (const qdac::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const qdac::Error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }
}
