// Copyright 2026 The spinjj Authors
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

#include "experiments.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "spinjj/dynamics.hpp"
#include "spinjj/gates.hpp"
#include "spinjj/metrics.hpp"
#include "spinjj/model.hpp"

namespace spinjj::cli {

namespace {

// End-state fidelity change tolerated when the Fock cutoff is raised by two.
constexpr double kFockTolerance = 1e-6;
constexpr double kMonotoneSlack = 1e-10;
// The conditional evolution is cheap (4 states) and is compared against its
// closed form at the 1e-8 level, so it runs well inside the default step bound.
constexpr double kConditionalStepScale = 0.01;

json paper_reported() {
    return {{"g_k", 0.62}, {"G", 620.0}, {"lambda", 34.6}};
}

json convergence_block(std::optional<double> step_ns, std::optional<double> halving, std::optional<double> fock,
                       std::size_t n_max, const std::string& method) {
    json c;
    c["method"] = method;
    c["n_max"] = n_max;
    c["step_ns"] = step_ns ? json(*step_ns) : json(nullptr);
    c["step_halving_delta"] = halving ? json(*halving) : json(nullptr);
    c["step_halving_tolerance"] = 1e-6;
    c["fock_cutoff_delta"] = fock ? json(*fock) : json(nullptr);
    c["fock_cutoff_tolerance"] = kFockTolerance;
    c["passed"] = (!halving || *halving <= 1e-6) && (!fock || *fock <= kFockTolerance);
    return c;
}

json derived_common(const SystemParams& p) {
    json d;
    d["detuning_MHz"] = p.detuning();
    if (p.g1 == p.g2 && p.detuning() != 0.0) {
        d["lambda_MHz"] = lambda_eff(p);
        d["detuning_over_G"] = p.g1 > 0.0 ? json(std::abs(p.detuning()) / p.g1) : json(nullptr);
    } else {
        d["lambda_MHz"] = nullptr;
    }
    return d;
}

std::string ratio_label(double r) {
    std::string s = format_number(r);
    if (s.find_first_of(".e") == std::string::npos) s += ".0";
    return s;
}

// Domain errors raised while planning a run come from the configuration.
template <class F>
auto as_config_error(F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

void start_summary(ExperimentResult& r, const RunConfig& cfg) {
    r.summary["experiment"] = std::string(to_string(cfg.experiment));
    r.summary["seed"] = cfg.seed;
    r.summary["params"] = params_to_json(cfg.params);
    r.summary["options"] = cfg.options;
    r.summary["paper_reported"] = paper_reported();
}

ExperimentResult run_estimate(const RunConfig& cfg) {
    ExperimentResult r;
    start_summary(r, cfg);
    const auto& o = cfg.options;
    const auto est = as_config_error([&] {
        return estimate_coupling(o["i0"].get<double>(), o["r"].get<double>(), o["n_spins"].get<double>());
    });
    r.table.header = {"i0_A", "r_m", "n_spins", "b_field_T", "g_single_MHz", "g_collective_MHz"};
    r.table.rows.push_back({est.i0, est.r, est.n_spins, est.b_field, est.g_single, est.g_collective});

    json res;
    res["b_field"] = est.b_field;
    res["b_field_uT"] = est.b_field * 1e6;
    res["g_single"] = est.g_single;
    res["g_collective"] = est.g_collective;
    r.summary["results"] = res;

    json d = derived_common(cfg.params);
    const double delta = cfg.params.detuning();
    d["lambda_from_estimate_MHz"] = delta != 0.0 ? json(est.g_collective * est.g_collective / delta) : json(nullptr);
    r.summary["derived"] = d;
    r.summary["convergence"] = convergence_block({}, {}, {}, cfg.params.n_max, "closed form");
    r.headline = {{"b_field_T", est.b_field}, {"g_single_MHz", est.g_single}, {"g_collective_MHz", est.g_collective}};
    return r;
}

ExperimentResult run_concurrence(const RunConfig& cfg) {
    ExperimentResult r;
    start_summary(r, cfg);
    const auto& o = cfg.options;
    const auto points = o["points"].get<std::size_t>();
    const double lt_max = o["lambda_t_max"].get<double>();
    const bool normalize = o["normalize"].get<bool>();
    const auto ratios = o["gamma_ratios"].get<std::vector<double>>();

    const double lambda_mhz = as_config_error([&] { return lambda_eff(cfg.params); });
    const double lambda = to_angular(lambda_mhz);
    const double t_max = lt_max / std::abs(lambda);

    r.table.header = {"lambda_t"};
    for (double ratio : ratios) r.table.header.push_back("C_gamma_" + ratio_label(ratio));
    r.table.rows.assign(points, std::vector<double>(1 + ratios.size()));
    for (std::size_t k = 0; k < points; ++k) {
        r.table.rows[k][0] = lt_max * static_cast<double>(k) / static_cast<double>(points - 1);
    }

    json curves = json::array();
    double worst_oracle_gap = 0.0;
    double worst_step = 0.0;
    for (std::size_t c = 0; c < ratios.size(); ++c) {
        SystemParams p = cfg.params;
        p.gamma = ratios[c] * std::abs(lambda_mhz);
        const ComplexMatrix hc = build_h_c(p);
        const auto grid = TimeGrid::covering(0.0, t_max, points - 1, max_row_sum_norm(hc), kConditionalStepScale);
        worst_step = std::max(worst_step, grid.step());
        const auto traj = propagate_conditional(hc, basis_ket(4, 1), grid);

        double peak = -1.0;
        double peak_at = 0.0;
        for (std::size_t k = 0; k < points; ++k) {
            const double conc = concurrence_pure(traj.states[k], !normalize);
            const auto amp = conditional_closed_form(p, traj.times[k]);
            double oracle = 2.0 * std::abs(amp.c1 * amp.c2);
            if (normalize) {
                const double n2 = std::norm(amp.c1) + std::norm(amp.c2);
                oracle = n2 > 0.0 ? oracle / n2 : 0.0;
            }
            worst_oracle_gap = std::max(worst_oracle_gap, std::abs(conc - oracle));
            r.table.rows[k][1 + c] = conc;
            if (conc > peak) {
                peak = conc;
                peak_at = r.table.rows[k][0];
            }
        }
        curves.push_back({{"gamma_ratio", ratios[c]}, {"gamma_MHz", p.gamma}, {"peak", peak}, {"peak_lambda_t", peak_at}});
        r.headline.emplace_back("C_max_gamma_" + ratio_label(ratios[c]), peak);
    }

    r.summary["results"] = {{"curves", curves}, {"closed_form_max_deviation", worst_oracle_gap}, {"normalized", normalize}};
    json d = derived_common(cfg.params);
    d["t_max_ns"] = t_max;
    r.summary["derived"] = d;
    // The conditional dynamics never involves the junction; no cutoff to check.
    r.summary["convergence"] = convergence_block(worst_step, {}, {}, cfg.params.n_max, "rk4 conditional evolution");
    r.summary["convergence"]["closed_form_max_deviation"] = worst_oracle_gap;
    return r;
}

ExperimentResult run_holonomic(const RunConfig& cfg) {
    ExperimentResult r;
    start_summary(r, cfg);
    const auto& o = cfg.options;
    const auto n_theta = o["theta_points"].get<std::size_t>();
    const auto n_phi = o["phi_points"].get<std::size_t>();
    const auto steps = o["time_steps"].get<std::size_t>();
    const double g_total = o["g_total"].get<double>();

    r.table.header = {"theta", "phi", "infidelity", "leakage"};
    double worst_inf = 0.0;
    double worst_leak = 0.0;
    for (std::size_t i = 0; i < n_theta; ++i) {
        const double theta = kPi * static_cast<double>(i) / static_cast<double>(n_theta - 1);
        for (std::size_t j = 0; j < n_phi; ++j) {
            const double phi = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n_phi);
            const auto check = verify_holonomic_cycle(theta, phi, steps, g_total);
            r.table.rows.push_back({theta, phi, check.infidelity, check.leakage});
            worst_inf = std::max(worst_inf, check.infidelity);
            worst_leak = std::max(worst_leak, check.leakage);
        }
    }
    const auto x_check = holonomic_unitary(kPi / 2.0, 0.0);
    ComplexMatrix x(2, 2);
    x << 0.0, 1.0, 1.0, 0.0;

    r.summary["results"] = {{"max_infidelity", worst_inf},
                            {"max_leakage", worst_leak},
                            {"pi_half_zero_equals_x_deviation", (x_check - x).cwiseAbs().maxCoeff()}};
    json d = derived_common(cfg.params);
    d["cycle_duration_ns"] = kPi / to_angular(g_total);
    r.summary["derived"] = d;
    r.summary["convergence"] = convergence_block({}, {}, {}, 1, "exact propagator");
    r.headline = {{"max_infidelity", worst_inf}, {"max_leakage", worst_leak}};
    return r;
}

SystemParams with_rate_convention(SystemParams p, const std::string& convention) {
    if (convention == "inverse_time") {
        // Rates given as 1/us rather than as frequencies: undo the 2 pi applied downstream.
        const double s = 1.0 / (2.0 * kPi);
        p.kappa *= s;
        p.gamma1 *= s;
        p.gamma2 *= s;
    }
    return p;
}

ExperimentResult run_phase_gate(const RunConfig& cfg) {
    ExperimentResult r;
    start_summary(r, cfg);
    const auto& o = cfg.options;
    const auto points = o["points"].get<std::size_t>();
    const auto convention = o["rate_convention"].get<std::string>();

    const GatePlan plan = as_config_error([&] {
        return plan_phase_gate(cfg.params, o["m"].get<std::uint64_t>(), o["min_ratio"].get<double>(),
                               o["n_cap"].get<std::uint64_t>());
    });
    const SystemParams p = with_rate_convention(apply_plan(cfg.params, plan), convention);
    const auto layout = HilbertLayout::tripartite(p.n_max);
    const auto model = build_lindblad(p, GateKind::PhaseGate);
    ChannelOptions copts;
    copts.n_intervals = points - 1;
    const auto traj = channel_trajectory(model, plan.duration_ns, layout, true, copts);
    const ComplexMatrix ideal = plan.ideal_computational();

    const double g_ang = to_angular(plan.g1);
    r.table.header = {"t_ns", "G_t", "fidelity"};
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        r.table.rows.push_back({traj.times[k], g_ang * traj.times[k], average_gate_fidelity(traj.channels[k], ideal)});
    }
    const ChannelMatrix& final_channel = traj.channels.back();
    const double f_avg = average_gate_fidelity(final_channel, ideal);
    const double f_pro = process_fidelity(final_channel, ideal);
    const auto mc = monte_carlo_gate_fidelity(final_channel, ideal, o["mc_samples"].get<std::size_t>(), cfg.seed);

    std::optional<double> fock;
    if (o["fock_check"].get<bool>()) {
        SystemParams q = p;
        q.n_max += 2;
        ChannelOptions fopts;
        fopts.check_convergence = false;
        const auto bigger = channel_from_simulation(build_lindblad(q, GateKind::PhaseGate), plan.duration_ns,
                                                    HilbertLayout::tripartite(q.n_max), true, fopts);
        fock = std::abs(average_gate_fidelity(bigger, ideal) - f_avg);
    }

    json plan_j;
    plan_j["n"] = plan.n;
    plan_j["m"] = plan.m;
    plan_j["G_realized_MHz"] = plan.g1;
    plan_j["epsilon_MHz"] = plan.epsilon;
    plan_j["omega_drive_MHz"] = plan.omega_drive;
    plan_j["theta"] = plan.theta;
    plan_j["tau_ns"] = plan.duration_ns;
    plan_j["b_coefficient"] = plan.b_coefficient;
    plan_j["detuning_over_G_realized"] = std::abs(p.detuning()) / plan.g1;

    json res;
    res["average_gate_fidelity"] = f_avg;
    res["process_fidelity"] = f_pro;
    res["monte_carlo"] = {{"mean", mc.mean}, {"standard_error", mc.standard_error}, {"samples", mc.samples}};
    res["monte_carlo_within_3_se"] = std::abs(mc.mean - f_avg) <= 3.0 * mc.standard_error;
    res["trace_preservation_error"] = final_channel.trace_preservation_error();
    res["rate_convention"] = convention;
    r.summary["results"] = res;

    json d = derived_common(cfg.params);
    d["plan"] = plan_j;
    d["rates_per_ns"] = {{"kappa", to_angular(p.kappa)}, {"gamma1", to_angular(p.gamma1)}, {"gamma2", to_angular(p.gamma2)}};
    r.summary["derived"] = d;
    r.summary["paper_reported"]["tau_cp_ns"] = 0.41;
    r.summary["convergence"] = convergence_block(traj.step, traj.step_halving_delta, fock, p.n_max, "rk4 master equation");
    if (fock && *fock > kFockTolerance) r.failed_check = "Fock-cutoff convergence (n_max + 2)";
    r.headline = {{"average_gate_fidelity", f_avg}, {"process_fidelity", f_pro}};
    return r;
}

ExperimentResult run_swap_gate(const RunConfig& cfg) {
    ExperimentResult r;
    start_summary(r, cfg);
    const auto& o = cfg.options;
    const auto n = o["grid_points"].get<std::size_t>();
    const double gmax = o["gamma_max"].get<double>();

    const SwapGateResult gate = as_config_error([&] { return swap_gate_exact(cfg.params); });
    const auto layout = HilbertLayout::two_qubit();
    double worst_halving = 0.0;
    double step = 0.0;
    auto fidelity_at = [&](double g1, double g2) {
        SystemParams p = cfg.params;
        p.gamma1 = g1;
        p.gamma2 = g2;
        const auto traj = channel_trajectory(build_lindblad(p, GateKind::SwapGate), gate.tau_k_ns, layout, false);
        worst_halving = std::max(worst_halving, traj.step_halving_delta);
        step = std::max(step, traj.step);
        return std::pair{traj.channels.back(), average_gate_fidelity(traj.channels.back(), gate.exact)};
    };

    r.table.header = {"gamma1_MHz", "gamma2_MHz", "fidelity"};
    std::vector<std::vector<double>> grid(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double g1 = gmax * static_cast<double>(i) / static_cast<double>(n - 1);
            const double g2 = gmax * static_cast<double>(j) / static_cast<double>(n - 1);
            grid[i][j] = fidelity_at(g1, g2).second;
            r.table.rows.push_back({g1, g2, grid[i][j]});
        }
    }
    bool mono1 = true;
    bool mono2 = true;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i > 0 && grid[i][j] > grid[i - 1][j] + kMonotoneSlack) mono1 = false;
            if (j > 0 && grid[i][j] > grid[i][j - 1] + kMonotoneSlack) mono2 = false;
        }
    }

    const auto [channel, fidelity] = fidelity_at(cfg.params.gamma1, cfg.params.gamma2);
    const auto mc = monte_carlo_gate_fidelity(channel, gate.exact, o["mc_samples"].get<std::size_t>(), cfg.seed);

    json res;
    res["fidelity"] = fidelity;
    res["monte_carlo"] = {{"mean", mc.mean}, {"standard_error", mc.standard_error}, {"samples", mc.samples}};
    res["monte_carlo_within_3_se"] = std::abs(mc.mean - fidelity) <= 3.0 * mc.standard_error;
    res["grid_fidelity_at_origin"] = grid[0][0];
    res["monotone_in_gamma1"] = mono1;
    res["monotone_in_gamma2"] = mono2;
    res["reported_gate_vs_exact"] = gate.reported_vs_exact;
    res["reported_gate_vs_zz_times_exact"] = gate.reported_vs_zz_exact;
    r.summary["results"] = res;

    json d = derived_common(cfg.params);
    d["tau_k_ns"] = gate.tau_k_ns;
    r.summary["derived"] = d;
    r.summary["paper_reported"]["tau_k_ns"] = 103.11;
    r.summary["convergence"] = convergence_block(step, worst_halving, {}, cfg.params.n_max, "rk4 master equation");
    r.headline = {{"fidelity", fidelity}};
    return r;
}

ExperimentResult run_validate_effective(const RunConfig& cfg) {
    ExperimentResult r;
    start_summary(r, cfg);
    const auto& o = cfg.options;
    const auto points = o["points"].get<std::size_t>();
    SystemParams p = cfg.params;
    p.omega = p.omega10 + o["detuning_ratio"].get<double>() * p.g1;

    const auto report = as_config_error([&] { return validate_dispersive(p, points - 1); });
    const double lambda = to_angular(lambda_eff(p));
    r.table.header = {"t_ns", "lambda_t", "fidelity"};
    double mean = 0.0;
    for (std::size_t k = 0; k < report.times.size(); ++k) {
        r.table.rows.push_back({report.times[k], lambda * report.times[k], report.fidelities[k]});
        mean += report.fidelities[k];
    }
    mean /= static_cast<double>(report.fidelities.size());

    std::optional<double> fock;
    if (o["fock_check"].get<bool>()) {
        SystemParams q = p;
        q.n_max += 2;
        const auto bigger = validate_dispersive(q, points - 1);
        double delta = 0.0;
        for (std::size_t k = 0; k < bigger.fidelities.size(); ++k) {
            delta = std::max(delta, std::abs(bigger.fidelities[k] - report.fidelities[k]));
        }
        fock = delta;
    }

    r.summary["results"] = {{"min_fidelity", report.min_fidelity},
                            {"max_infidelity", 1.0 - report.min_fidelity},
                            {"mean_fidelity", mean},
                            {"final_fidelity", report.fidelities.back()}};
    json d = derived_common(p);
    d["swap_period_ns"] = report.swap_period_ns;
    d["omega_used_MHz"] = p.omega;
    r.summary["derived"] = d;
    r.summary["convergence"] = convergence_block({}, {}, fock, p.n_max, "exact propagator");
    if (fock && *fock > kFockTolerance) r.failed_check = "Fock-cutoff convergence (n_max + 2)";
    r.headline = {{"min_fidelity", report.min_fidelity}, {"mean_fidelity", mean}};
    return r;
}

ExperimentResult run_validate_rwa(const RunConfig& cfg) {
    ExperimentResult r;
    start_summary(r, cfg);
    const auto& o = cfg.options;
    const auto ratios = o["ratios"].get<std::vector<double>>();
    const double duration = o["duration_ns"].get<double>();

    const auto report = as_config_error([&] { return validate_strong_driving(cfg.params, duration, ratios); });
    r.table.header = {"drive_ratio", "epsilon_MHz", "infidelity"};
    for (std::size_t k = 0; k < ratios.size(); ++k) {
        r.table.rows.push_back({report.drive_ratios[k], report.epsilons[k], report.infidelities[k]});
        r.headline.emplace_back("infidelity_ratio_" + ratio_label(ratios[k]), report.infidelities[k]);
    }

    SystemParams q = cfg.params;
    q.n_max += 2;
    const auto bigger = validate_strong_driving(q, duration, ratios);
    double fock = 0.0;
    for (std::size_t k = 0; k < ratios.size(); ++k) {
        fock = std::max(fock, std::abs(bigger.infidelities[k] - report.infidelities[k]));
    }

    r.summary["results"] = {{"infidelities", report.infidelities},
                            {"epsilons_MHz", report.epsilons},
                            {"strictly_decreasing", report.monotone}};
    r.summary["derived"] = derived_common(cfg.params);
    r.summary["convergence"] = convergence_block({}, {}, fock, cfg.params.n_max, "rk4 schrodinger");
    if (fock > kFockTolerance) r.failed_check = "Fock-cutoff convergence (n_max + 2)";
    return r;
}

}  // namespace

ExperimentResult run_experiment(const RunConfig& cfg) {
    switch (cfg.experiment) {
        case Experiment::Estimate: return run_estimate(cfg);
        case Experiment::Concurrence: return run_concurrence(cfg);
        case Experiment::Holonomic: return run_holonomic(cfg);
        case Experiment::PhaseGate: return run_phase_gate(cfg);
        case Experiment::SwapGate: return run_swap_gate(cfg);
        case Experiment::ValidateEffective: return run_validate_effective(cfg);
        case Experiment::ValidateRwa: return run_validate_rwa(cfg);
    }
    throw ConfigError("unhandled experiment");
}

ExperimentResult run_config(const RunConfig& cfg, int workers) {
    if (!cfg.sweep) return run_experiment(cfg);

    const auto values = cfg.sweep->values();
    std::vector<RunConfig> point_cfgs;
    point_cfgs.reserve(values.size());
    for (double v : values) point_cfgs.push_back(with_value(cfg, cfg.sweep->variable, v));

    const auto n = static_cast<std::ptrdiff_t>(values.size());
    std::vector<ExperimentResult> results(values.size());
    std::vector<std::exception_ptr> errors(values.size());
#pragma omp parallel for num_threads(std::max(1, workers)) schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            results[static_cast<std::size_t>(i)] = run_experiment(point_cfgs[static_cast<std::size_t>(i)]);
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    ExperimentResult out;
    start_summary(out, cfg);
    out.summary["sweep"] = cfg.raw["sweep"];
    out.table.header = {cfg.sweep->variable};
    for (const auto& [name, value] : results.front().headline) out.table.header.push_back(name);

    json points = json::array();
    json worst = convergence_block({}, {}, {}, cfg.params.n_max, "sweep");
    double worst_halving = -1.0;
    double worst_fock = -1.0;
    for (std::size_t i = 0; i < results.size(); ++i) {
        auto& res = results[i];
        std::vector<double> row{values[i]};
        for (const auto& [name, value] : res.headline) row.push_back(value);
        out.table.rows.push_back(std::move(row));
        points.push_back({{"value", values[i]},
                          {"results", res.summary["results"]},
                          {"derived", res.summary["derived"]},
                          {"convergence", res.summary["convergence"]}});
        const auto& c = res.summary["convergence"];
        if (!c["step_halving_delta"].is_null()) worst_halving = std::max(worst_halving, c["step_halving_delta"].get<double>());
        if (!c["fock_cutoff_delta"].is_null()) worst_fock = std::max(worst_fock, c["fock_cutoff_delta"].get<double>());
        if (out.failed_check.empty() && !res.failed_check.empty()) {
            out.failed_check = res.failed_check + " at " + cfg.sweep->variable + " = " + format_number(values[i]);
        }
    }
    worst["step_halving_delta"] = worst_halving >= 0.0 ? json(worst_halving) : json(nullptr);
    worst["fock_cutoff_delta"] = worst_fock >= 0.0 ? json(worst_fock) : json(nullptr);
    worst["passed"] = (worst_halving <= 1e-6) && (worst_fock <= kFockTolerance);
    out.summary["points"] = points;
    out.summary["convergence"] = worst;
    for (std::size_t c = 1; c < out.table.header.size(); ++c) {
        double best = out.table.rows.front()[c];
        for (const auto& row : out.table.rows) best = std::max(best, row[c]);
        out.headline.emplace_back(out.table.header[c] + "_max", best);
    }
    return out;
}

int workers_from_environment() {
    const char* env = std::getenv("SPINJJ_WORKERS");
    if (env == nullptr || *env == '\0') return 1;
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (*end != '\0' || n < 1 || n > 4096) {
        throw ConfigError(std::string("SPINJJ_WORKERS must be a positive integer, got '") + env + "'");
    }
    return static_cast<int>(n);
}

std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string format_csv(const Table& table) {
    std::string out;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (i) out += ',';
        out += table.header[i];
    }
    out += '\n';
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (!std::isfinite(row[i])) {
                throw NumericalError("non-finite value in output row " + std::to_string(r + 1) + ", column '" +
                                     (i < table.header.size() ? table.header[i] : std::to_string(i)) + "'");
            }
            if (i) out += ',';
            out += format_number(row[i]);
        }
        out += '\n';
    }
    return out;
}

namespace {

void require_finite(const json& j, const std::string& where) {
    if (j.is_number_float() && !std::isfinite(j.get<double>())) {
        throw NumericalError("non-finite value in summary at " + where);
    }
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) require_finite(v, where + "." + k);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) require_finite(j[i], where + "[" + std::to_string(i) + "]");
    }
}

}  // namespace

std::string format_summary(const json& summary) {
    require_finite(summary, "summary");
    return summary.dump(2) + "\n";
}

WrittenFiles write_outputs(const RunConfig& cfg, const ExperimentResult& result, const std::string& dir) {
    // Format both before touching the filesystem so a bad value leaves nothing behind.
    const std::string csv = format_csv(result.table);
    const std::string summary = format_summary(result.summary);

    std::filesystem::create_directories(dir);
    const std::string stem = (std::filesystem::path(dir) / std::string(to_string(cfg.experiment))).string();
    WrittenFiles files{stem + ".csv", stem + ".summary.json"};
    for (const auto& [path, text] : {std::pair{files.csv_path, csv}, std::pair{files.summary_path, summary}}) {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << text;
        if (!out) throw std::runtime_error("cannot write " + path);
    }
    return files;
}

}  // namespace spinjj::cli
