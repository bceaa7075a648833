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

#include "spinjj/gates.hpp"

#include <cmath>
#include <sstream>

#include "spinjj/dynamics.hpp"
#include "spinjj/metrics.hpp"

namespace spinjj {

ComplexMatrix hadamard2() {
    ComplexMatrix h(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    h << s, s, s, -s;
    return kron(h, h);
}

ComplexMatrix GatePlan::ideal_computational() const {
    if (basis == GateBasis::Computational) return ideal_unitary;
    const ComplexMatrix hh = hadamard2();
    return hh * ideal_unitary * hh.adjoint();
}

ComplexMatrix single_excitation_block(Complex g1, Complex g2) {
    ComplexMatrix h = ComplexMatrix::Zero(3, 3);
    h(0, 1) = g1;
    h(1, 0) = std::conj(g1);
    h(2, 1) = g2;
    h(1, 2) = std::conj(g2);
    return h;
}

EigenStructure eigenstructure(Complex g1, Complex g2) {
    const double g = std::sqrt(std::norm(g1) + std::norm(g2));
    if (g == 0.0) {
        throw std::invalid_argument("eigenstructure: both couplings are zero");
    }
    EigenStructure e;
    e.coupling_norm = g;
    e.bright = Ket::Zero(3);
    e.bright(0) = g1 / g;
    e.bright(2) = g2 / g;
    e.dark = Ket::Zero(3);
    e.dark(0) = -std::conj(g2) / g;
    e.dark(2) = std::conj(g1) / g;
    const Ket mid = basis_ket(3, 1);
    e.plus = (e.bright + mid) / std::sqrt(2.0);
    e.minus = (e.bright - mid) / std::sqrt(2.0);
    e.energies = Eigen::Vector3d(0.0, g, -g);
    return e;
}

ComplexMatrix holonomic_unitary(double theta, double phi) {
    ComplexMatrix u(2, 2);
    u(0, 0) = -std::cos(theta);
    u(0, 1) = std::sin(theta) * std::exp(kI * phi);
    u(1, 0) = std::sin(theta) * std::exp(-kI * phi);
    u(1, 1) = std::cos(theta);
    return u;
}

std::pair<double, Complex> holonomic_couplings(double theta, double phi, double g_total) {
    return {g_total * std::cos(0.5 * theta), g_total * std::sin(0.5 * theta) * std::exp(kI * (kPi - phi))};
}

HolonomicCheck verify_holonomic_cycle(double theta, double phi, std::size_t n_time_steps, double g_total_mhz) {
    const auto [g1, g2] = holonomic_couplings(theta, phi, g_total_mhz);
    SystemParams p;
    p.n_max = 1;
    p.g1 = g1;
    p.g2 = std::abs(g2);
    p.g2_phase = std::arg(g2);
    const auto layout = HilbertLayout::tripartite(1);
    const ComplexMatrix h = build_h_int(p, layout);

    const double period = kPi / to_angular(g_total_mhz);
    const TimeGrid grid(0.0, period, n_time_steps, n_time_steps);
    const std::size_t phi1 = layout.index_of({1, 0, 0});
    const std::size_t phi2 = layout.index_of({0, 1, 0});
    const std::size_t phi3 = layout.index_of({0, 0, 1});

    HolonomicCheck check;
    check.realized = ComplexMatrix::Zero(2, 2);
    const std::size_t inputs[2] = {phi1, phi3};
    for (int c = 0; c < 2; ++c) {
        const auto traj = propagate_constant(h, basis_ket(layout.total_dim(), inputs[c]), grid);
        const Ket& out = traj.final_state();
        check.realized(0, c) = out(static_cast<Eigen::Index>(phi1));
        check.realized(1, c) = out(static_cast<Eigen::Index>(phi3));
        check.leakage = std::max(check.leakage, std::norm(out(static_cast<Eigen::Index>(phi2))));
    }
    check.infidelity = std::max(0.0, 1.0 - phase_invariant_fidelity(check.realized, holonomic_unitary(theta, phi)));
    return check;
}

GatePlan plan_holonomic(double theta, double phi, double g_total_mhz) {
    if (!(g_total_mhz > 0.0)) {
        throw std::invalid_argument("plan_holonomic: total coupling must be positive");
    }
    const auto [g1, g2] = holonomic_couplings(theta, phi, g_total_mhz);
    GatePlan plan;
    plan.family = GateFamily::Holonomic1Q;
    plan.duration_ns = kPi / to_angular(g_total_mhz);
    plan.g1 = g1;
    plan.g2 = g2;
    plan.ideal_unitary = holonomic_unitary(theta, phi);
    return plan;
}

ComplexMatrix controlled_phase_pm() {
    ComplexMatrix u = ComplexMatrix::Identity(4, 4);
    u(3, 3) = -1.0;
    return u;
}

ComplexMatrix phase_gate_unitary(double theta) {
    // sigma_x eigenvalues on |+>, |-> are +1, -1; the exponent is diagonal there.
    ComplexMatrix d = ComplexMatrix::Zero(4, 4);
    const double x[2] = {1.0, -1.0};
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            d(2 * a + b, 2 * a + b) = std::exp(-kI * theta * (x[a] + x[b] - x[a] * x[b]));
        }
    }
    const ComplexMatrix hh = hadamard2();
    return hh * d * hh.adjoint();
}

GatePlan plan_phase_gate(const SystemParams& p, std::uint64_t m, double min_ratio, std::uint64_t n_cap) {
    p.require_detuning();
    if (!(min_ratio > 0.0)) {
        throw std::invalid_argument("plan_phase_gate: min_ratio must be positive");
    }
    const double odd = 2.0 * static_cast<double>(m) + 1.0;
    // delta / G' = sqrt(4n / (2m+1)) >= min_ratio
    const double n_min = min_ratio * min_ratio * odd / 4.0;
    const double n_real = std::max(1.0, std::ceil(n_min * (1.0 - 1e-12)));
    if (n_real > static_cast<double>(n_cap)) {
        std::ostringstream msg;
        msg << "plan_phase_gate: no feasible period count below cap " << n_cap << " (need n >= " << n_min << ")";
        throw std::invalid_argument(msg.str());
    }
    const auto n = static_cast<std::uint64_t>(n_real);

    const double delta = to_angular(p.detuning());
    const double g_real = std::abs(delta) * std::sqrt(odd / (4.0 * static_cast<double>(n)));
    const double tau = 2.0 * static_cast<double>(n) * kPi / std::abs(delta);
    const double theta = odd * kPi / 4.0;
    const double omega = theta / tau;
    const double eps = omega * std::abs(delta) / g_real;

    GatePlan plan;
    plan.family = GateFamily::Phase2Q;
    plan.n = n;
    plan.m = m;
    plan.theta = theta;
    plan.duration_ns = tau;
    plan.g1 = from_angular(g_real);
    plan.g2 = from_angular(g_real);
    plan.epsilon = from_angular(eps);
    plan.omega_drive = from_angular(omega);
    plan.b_coefficient = -static_cast<double>(n) * kPi * g_real * g_real / (delta * delta);
    plan.ideal_unitary = controlled_phase_pm();
    plan.basis = GateBasis::PlusMinus;
    return plan;
}

SystemParams apply_plan(SystemParams p, const GatePlan& plan) {
    p.g1 = plan.g1;
    p.g2 = std::abs(plan.g2);
    p.g2_phase = std::arg(plan.g2);
    p.epsilon = plan.epsilon;
    return p;
}

SwapGateResult swap_gate_exact(const SystemParams& p) {
    if (!(p.g1 > 0.0)) {
        throw std::invalid_argument("swap_gate_exact: coupling must be positive");
    }
    const double lambda = to_angular(lambda_eff(p));
    SwapGateResult r;
    r.tau_k_ns = kPi / (2.0 * lambda);
    r.exact = expm_unitary(build_h_e(p), r.tau_k_ns);
    r.reported = ComplexMatrix::Zero(4, 4);
    r.reported(0, 0) = 1.0;
    r.reported(1, 2) = 1.0;
    r.reported(2, 1) = 1.0;
    r.reported(3, 3) = -1.0;
    r.zz = kron(sigma_z(), sigma_z());
    r.reported_vs_exact = phase_invariant_fidelity(r.reported, r.exact);
    r.reported_vs_zz_exact = phase_invariant_fidelity(r.reported, r.zz * r.exact);
    return r;
}

GatePlan plan_swap_gate(const SystemParams& p) {
    const auto r = swap_gate_exact(p);
    GatePlan plan;
    plan.family = GateFamily::Swap2Q;
    plan.duration_ns = r.tau_k_ns;
    plan.g1 = p.g1;
    plan.g2 = p.coupling2();
    plan.ideal_unitary = r.exact;
    return plan;
}

}  // namespace spinjj
