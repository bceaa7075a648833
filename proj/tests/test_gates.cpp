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

#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "spinjj/dynamics.hpp"
#include "spinjj/gates.hpp"
#include "spinjj/metrics.hpp"

using namespace spinjj;

namespace {

oracle::Matrix pauli_x() {
    oracle::Matrix x = oracle::Matrix::Zero(2, 2);
    x(0, 1) = 1.0;
    x(1, 0) = 1.0;
    return x;
}

SystemParams reference_params() {
    SystemParams p;  // omega 6900, omega10 2870, G 620 (MHz)
    p.kappa = 0.0;
    p.gamma1 = 0.0;
    p.gamma2 = 0.0;
    return p;
}

}  // namespace

TEST(EigenStructure, DarkStateDecouplesAndBrightStatesSplit) {
    const Complex g1(0.6, 0.2);
    const Complex g2 = std::polar(0.9, 1.1);
    const auto e = eigenstructure(g1, g2);
    const auto h = single_excitation_block(g1, g2);
    const double g = std::sqrt(std::norm(g1) + std::norm(g2));
    EXPECT_NEAR(e.coupling_norm, g, 1e-15);
    EXPECT_LT((h * e.dark).norm(), 1e-14);
    EXPECT_LT((h * e.plus - g * e.plus).norm(), 1e-14);
    EXPECT_LT((h * e.minus + g * e.minus).norm(), 1e-14);
    EXPECT_NEAR(std::abs(e.dark.dot(e.bright)), 0.0, 1e-15);
    EXPECT_NEAR(e.dark.norm(), 1.0, 1e-15);
    EXPECT_NEAR(e.plus.norm(), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(e.plus.dot(e.minus)), 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(e.energies(1), g);
    EXPECT_DOUBLE_EQ(e.energies(2), -g);
}

TEST(EigenStructure, SingleCouplingLeavesOtherEnsembleDark) {
    // Only ensemble 1 couples, so the ensemble-2 excitation |001> is dark.
    const auto e = eigenstructure(1.0, 0.0);
    EXPECT_LT((e.dark - basis_ket(3, 2)).norm(), 1e-15);
    EXPECT_LT((e.bright - basis_ket(3, 0)).norm(), 1e-15);
    EXPECT_THROW(eigenstructure(0.0, 0.0), std::invalid_argument);
}

TEST(SingleExcitationBlock, MatchesInteractionHamiltonian) {
    SystemParams p;
    p.g1 = 3.0;
    p.g2 = 5.0;
    p.g2_phase = 0.4;
    p.n_max = 2;
    const auto layout = HilbertLayout::tripartite(2);
    const auto h = build_h_int(p, layout);
    const std::size_t idx[3] = {layout.index_of({1, 0, 0}), layout.index_of({0, 1, 0}), layout.index_of({0, 0, 1})};
    const auto block = single_excitation_block(to_angular(p.g1), to_angular(1.0) * p.coupling2());
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            EXPECT_LT(std::abs(h(static_cast<Eigen::Index>(idx[r]), static_cast<Eigen::Index>(idx[c])) - block(r, c)),
                      1e-12)
                << r << "," << c;
}

TEST(Holonomic, PiHalfZeroIsPauliX) {
    EXPECT_LT(oracle::max_abs(holonomic_unitary(kPi / 2.0, 0.0) - pauli_x()), 1e-15);
    const auto u = holonomic_unitary(0.7, 1.9);
    EXPECT_LT(oracle::max_abs(u.adjoint() * u - ComplexMatrix::Identity(2, 2)), 1e-15);
    EXPECT_LT(oracle::max_abs(u * u - ComplexMatrix::Identity(2, 2)), 1e-15);  // a reflection
}

TEST(Holonomic, CyclicPulseRealizesReflection) {
    // Independent check: exponentiate the 3x3 block by Taylor series and read
    // off the {|100>, |001>} sub-block.
    for (double theta : {0.3, 1.2, kPi / 2.0, 2.8}) {
        for (double phi : {0.0, 0.9, 4.0}) {
            const auto [g1, g2] = holonomic_couplings(theta, phi, 1.0);
            const oracle::Matrix h = single_excitation_block(g1, g2);
            const oracle::Matrix u = oracle::expm_taylor(Complex(0.0, -kPi) * h);
            oracle::Matrix sub(2, 2);
            sub << u(0, 0), u(0, 2), u(2, 0), u(2, 2);
            EXPECT_LT(oracle::max_abs(sub - holonomic_unitary(theta, phi)), 1e-10) << theta << " " << phi;
            EXPECT_LT(std::abs(u(1, 1) + 1.0), 1e-10);
        }
    }
}

TEST(Holonomic, VerifyCycleGrid) {
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            const double theta = i * kPi / 3.0;
            const double phi = 2.0 * kPi * j / 4.0;
            const auto chk = verify_holonomic_cycle(theta, phi, 16, 100.0);
            EXPECT_LE(chk.infidelity, 1e-8) << theta << " " << phi;
            EXPECT_LE(chk.leakage, 1e-8);
        }
    }
}

TEST(PhaseGateAlgebra, MatchesTaylorExponential) {
    const oracle::Matrix i2 = oracle::Matrix::Identity(2, 2);
    const oracle::Matrix x1 = oracle::kron(pauli_x(), i2);
    const oracle::Matrix x2 = oracle::kron(i2, pauli_x());
    for (double theta : {0.2, kPi / 4.0, 1.7}) {
        const oracle::Matrix gen = x1 + x2 - x1 * x2;
        const auto expected = oracle::expm_taylor(Complex(0.0, -theta) * gen);
        EXPECT_LT(oracle::max_abs(phase_gate_unitary(theta) - expected), 1e-12);
    }
}

TEST(PhaseGateAlgebra, QuarterPiIsControlledPhaseInPlusMinusBasis) {
    const ComplexMatrix hh = hadamard2();
    EXPECT_LT(oracle::max_abs(hh * hh - ComplexMatrix::Identity(4, 4)), 1e-15);
    const ComplexMatrix cp = hh * controlled_phase_pm() * hh.adjoint();
    EXPECT_GE(phase_invariant_fidelity(cp, phase_gate_unitary(kPi / 4.0)), 1.0 - 1e-10);
    // In the |+-> basis the gate is diagonal: e^{-i pi/4} on three states and
    // e^{3 i pi/4} on |-->.
    const ComplexMatrix d = hh.adjoint() * phase_gate_unitary(kPi / 4.0) * hh;
    const Complex w = std::exp(Complex(0.0, -kPi / 4.0));
    EXPECT_LT(std::abs(d(0, 0) - w), 1e-14);
    EXPECT_LT(std::abs(d(1, 1) - w), 1e-14);
    EXPECT_LT(std::abs(d(2, 2) - w), 1e-14);
    EXPECT_LT(std::abs(d(3, 3) + w), 1e-14);
}

TEST(PhaseGatePlan, ReferenceParameters) {
    const auto plan = plan_phase_gate(reference_params(), 0, 10.0);
    // delta = 4030 MHz; n = ceil(10^2 / 4) = 25; G' = delta / 10.
    EXPECT_EQ(plan.n, 25u);
    EXPECT_EQ(plan.m, 0u);
    EXPECT_NEAR(plan.g1, 403.0, 1e-9);
    EXPECT_NEAR(std::abs(plan.g2), 403.0, 1e-9);
    EXPECT_NEAR(plan.duration_ns, 6.203473945409429, 1e-12);  // 25 / 4.03 GHz
    EXPECT_NEAR(plan.theta, kPi / 4.0, 1e-15);
    EXPECT_NEAR(plan.omega_drive, 20.15, 1e-9);   // theta / tau in MHz: 4030 / 200
    EXPECT_NEAR(plan.epsilon, 201.5, 1e-9);        // Omega delta / G'
    EXPECT_NEAR(plan.b_coefficient, -kPi / 4.0, 1e-12);
    EXPECT_EQ(plan.basis, GateBasis::PlusMinus);
}

TEST(PhaseGatePlan, SmallRatiosAndCaps) {
    EXPECT_EQ(plan_phase_gate(reference_params(), 0, 2.0).n, 1u);
    EXPECT_EQ(plan_phase_gate(reference_params(), 1, 10.0).n, 75u);  // 100 * 3 / 4
    EXPECT_THROW(plan_phase_gate(reference_params(), 0, 10.0, 10), std::invalid_argument);
    EXPECT_THROW(plan_phase_gate(reference_params(), 0, 0.0), std::invalid_argument);
    SystemParams resonant = reference_params();
    resonant.omega = resonant.omega10;
    EXPECT_THROW(plan_phase_gate(resonant, 0, 10.0), std::invalid_argument);
}

TEST(PhaseGatePlan, NoiselessEvolutionReachesTarget) {
    const auto base = reference_params();
    const auto plan = plan_phase_gate(base, 0, 10.0);
    SystemParams p = apply_plan(base, plan);
    p.n_max = 4;
    const auto layout = HilbertLayout::tripartite(p.n_max);
    const auto model = build_lindblad(p, GateKind::PhaseGate);
    const auto grid = TimeGrid::covering(0.0, plan.duration_ns, 1, model.hamiltonian.norm_bound());

    // Unitary propagation of the four junction-vacuum inputs.
    ComplexMatrix u_red(4, 4);
    const std::size_t q[4][2] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    for (int c = 0; c < 4; ++c) {
        const Ket in = basis_ket(layout.total_dim(), layout.index_of({q[c][0], 0, q[c][1]}));
        const Ket out = propagate_schrodinger(model.hamiltonian, in, grid).final_state();
        for (int r = 0; r < 4; ++r) {
            u_red(r, c) = out(static_cast<Eigen::Index>(layout.index_of({q[r][0], 0, q[r][1]})));
        }
    }
    EXPECT_GE(phase_invariant_fidelity(plan.ideal_computational(), u_red), 1.0 - 1e-4);
}

TEST(SwapGate, ExactPropagatorIsSignedSwap) {
    const auto r = swap_gate_exact(reference_params());
    EXPECT_NEAR(r.tau_k_ns, 2.620967741935484, 1e-12);  // 4030 / (4 * 620^2) us
    oracle::Matrix expected = oracle::Matrix::Zero(4, 4);
    expected(0, 0) = 1.0;
    expected(1, 2) = -1.0;
    expected(2, 1) = -1.0;
    expected(3, 3) = -1.0;
    EXPECT_LT(oracle::max_abs(r.exact - expected), 1e-10);

    const auto h = build_h_e(reference_params());
    EXPECT_LT(oracle::max_abs(r.exact - oracle::expm_taylor(Complex(0.0, -r.tau_k_ns) * h)), 1e-10);
}

TEST(SwapGate, ReportedFormNeedsZZCorrection) {
    const auto r = swap_gate_exact(reference_params());
    EXPECT_GE(r.reported_vs_zz_exact, 1.0 - 1e-10);
    EXPECT_LT(r.reported_vs_exact, 1e-10);
    oracle::Matrix zz = oracle::Matrix::Zero(4, 4);
    zz.diagonal() << 1.0, -1.0, -1.0, 1.0;
    EXPECT_LT(oracle::max_abs(r.zz - zz), 1e-15);

    SystemParams bad = reference_params();
    bad.g1 = 0.0;
    EXPECT_THROW(swap_gate_exact(bad), std::invalid_argument);
}

TEST(SwapGate, PlanCarriesExactGate) {
    const auto plan = plan_swap_gate(reference_params());
    EXPECT_EQ(plan.family, GateFamily::Swap2Q);
    EXPECT_NEAR(plan.duration_ns, 2.620967741935484, 1e-12);
    EXPECT_LT(oracle::max_abs(plan.ideal_unitary - swap_gate_exact(reference_params()).exact), 1e-15);
}
