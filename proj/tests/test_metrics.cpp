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
#include <random>

#include "oracles.hpp"
#include "spinjj/dynamics.hpp"
#include "spinjj/gates.hpp"
#include "spinjj/metrics.hpp"

using namespace spinjj;

namespace {

std::vector<ComplexMatrix> amplitude_damping_kraus(double p) {
    ComplexMatrix k0 = ComplexMatrix::Zero(2, 2);
    k0(0, 0) = 1.0;
    k0(1, 1) = std::sqrt(1.0 - p);
    ComplexMatrix k1 = ComplexMatrix::Zero(2, 2);
    k1(0, 1) = std::sqrt(p);
    return {k0, k1};
}

// Element-wise comparisons against exact channels need a step well below the
// default, whose RK4 error is of order 1e-7.
ChannelOptions fine_step() {
    ChannelOptions o;
    o.step_scale = 0.005;
    return o;
}

ComplexMatrix cz() {
    ComplexMatrix u = ComplexMatrix::Identity(4, 4);
    u(3, 3) = -1.0;
    return u;
}

}  // namespace

TEST(Vectorize, ColumnStackingIdentity) {
    // vec(A X B) = (B^T (x) A) vec(X)
    std::mt19937_64 rng(2);
    const auto a = oracle::random_matrix(3, rng);
    const auto x = oracle::random_matrix(3, rng);
    const auto b = oracle::random_matrix(3, rng);
    EXPECT_LT(oracle::max_abs(vectorize(a * x * b) - oracle::kron(b.transpose(), a) * vectorize(x)), 1e-12);
    EXPECT_LT(oracle::max_abs(vectorize(x) - oracle::vec(x)), 0.0 + 1e-300);
    EXPECT_LT(oracle::max_abs(unvectorize(vectorize(x), 3) - x), 1e-300);
    EXPECT_THROW(unvectorize(vectorize(x), 2), std::invalid_argument);
}

TEST(ChannelMatrix, UnitaryConjugation) {
    std::mt19937_64 rng(4);
    const auto u = expm_unitary(oracle::random_hermitian(3, rng), 1.0);
    const auto rho = oracle::random_density(3, rng);
    const auto ch = ChannelMatrix::unitary(u);
    EXPECT_LT(oracle::max_abs(ch.apply(rho) - u * rho * u.adjoint()), 1e-13);
    EXPECT_LT(ch.trace_preservation_error(), 1e-13);
    EXPECT_LT(oracle::max_abs(ChannelMatrix::identity(3).apply(rho) - rho), 1e-300);
}

TEST(ChannelMatrix, TracePreservationDetectsLoss) {
    ChannelMatrix ch = ChannelMatrix::identity(2);
    ch.superop *= 0.9;
    EXPECT_NEAR(ch.trace_preservation_error(), 0.1, 1e-15);
}

TEST(ConcurrencePure, Examples) {
    const Ket bell = (basis_ket(4, 0) + basis_ket(4, 3)) / std::sqrt(2.0);
    EXPECT_NEAR(concurrence_pure(bell), 1.0, 1e-15);
    EXPECT_NEAR(concurrence_pure(basis_ket(4, 1)), 0.0, 1e-15);
    EXPECT_THROW(concurrence_pure(basis_ket(3, 0)), std::invalid_argument);
}

TEST(ConcurrencePure, ConditionalStateEqualsTwiceAmplitudeProduct) {
    // C = 2 |C1 C2| = e^{-Gamma t} |sin 2 lambda t|; Gamma = 0.01 lambda at lambda t = pi/4.
    const double lt = kPi / 4.0;
    const double decay = std::exp(-0.01 * lt / 2.0);
    const Complex c1 = 0.5 * decay * (1.0 + std::exp(-2.0 * kI * lt));
    const Complex c2 = 0.5 * decay * (std::exp(-2.0 * kI * lt) - 1.0);
    Ket psi = Ket::Zero(4);
    psi(1) = c1;
    psi(2) = c2;
    EXPECT_NEAR(concurrence_pure(psi, true), 0.9921767802925615, 1e-12);
    EXPECT_NEAR(concurrence_pure(psi, true), 2.0 * std::abs(c1 * c2), 1e-14);
    // Normalized variant divides by the squared norm.
    EXPECT_NEAR(concurrence_pure(psi, false), 2.0 * std::abs(c1 * c2) / psi.squaredNorm(), 1e-14);
}

TEST(ConcurrenceMixed, WernerState) {
    // rho = p |Phi+><Phi+| + (1-p) I/4 has C = max(0, (3p - 1)/2); p = 0.9 gives 0.85.
    const Ket bell = (basis_ket(4, 0) + basis_ket(4, 3)) / std::sqrt(2.0);
    for (double p : {0.9, 0.5, 0.3, 0.2}) {
        const ComplexMatrix rho = p * projector(bell) + (1.0 - p) * ComplexMatrix::Identity(4, 4) / 4.0;
        EXPECT_NEAR(concurrence_mixed(rho), std::max(0.0, (3.0 * p - 1.0) / 2.0), 1e-12) << "p = " << p;
    }
}

TEST(ConcurrenceMixed, AgreesWithPureFormula) {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        Ket psi(4);
        for (int k = 0; k < 4; ++k) psi(k) = Complex(n(rng), n(rng));
        psi.normalize();
        EXPECT_NEAR(concurrence_mixed(projector(psi)), concurrence_pure(psi), 1e-7);
    }
}

TEST(ConcurrenceMixed, RejectsInvalidInput) {
    EXPECT_THROW(concurrence_mixed(ComplexMatrix::Identity(4, 4)), std::invalid_argument);
    EXPECT_THROW(concurrence_mixed(ComplexMatrix::Identity(2, 2) / 2.0), std::invalid_argument);
}

TEST(PhaseInvariantFidelity, IgnoresGlobalPhase) {
    const auto u = cz();
    EXPECT_NEAR(phase_invariant_fidelity(u, std::exp(kI * 0.7) * u), 1.0, 1e-15);
    EXPECT_NEAR(phase_invariant_fidelity(u, ComplexMatrix::Identity(4, 4)), 0.5, 1e-15);
    EXPECT_THROW(phase_invariant_fidelity(u, ComplexMatrix::Identity(2, 2)), std::invalid_argument);
}

TEST(GateFidelity, AmplitudeDampingMatchesKrausFormula) {
    for (double p : {0.0, 0.1, 0.5, 1.0}) {
        const auto kraus = amplitude_damping_kraus(p);
        const ChannelMatrix ch{2, oracle::kraus_superoperator(kraus)};
        const double expected = oracle::kraus_average_fidelity(kraus);
        EXPECT_NEAR(average_gate_fidelity(ch, ComplexMatrix::Identity(2, 2)), expected, 1e-14) << "p = " << p;
    }
}

TEST(GateFidelity, CompletelyDepolarizingChannel) {
    // rho -> I/2 has process fidelity 1/d^2 = 0.25 against any unitary.
    ComplexMatrix s = ComplexMatrix::Zero(4, 4);
    for (Eigen::Index in : {0, 3})
        for (Eigen::Index out : {0, 3}) s(out, in) = 0.5;
    const ChannelMatrix ch{2, s};
    EXPECT_NEAR(process_fidelity(ch, ComplexMatrix::Identity(2, 2)), 0.25, 1e-15);
    EXPECT_NEAR(process_fidelity(ch, sigma_x()), 0.25, 1e-15);
    EXPECT_NEAR(average_gate_fidelity(ch, sigma_y()), 0.5, 1e-15);
}

TEST(GateFidelity, IdealUnitaryGivesOne) {
    const auto u = cz();
    EXPECT_NEAR(average_gate_fidelity(ChannelMatrix::unitary(u), u), 1.0, 1e-15);
    EXPECT_NEAR(process_fidelity(ChannelMatrix::unitary(std::exp(kI * 1.3) * u), u), 1.0, 1e-15);
}

TEST(GateFidelity, RejectsTraceLosingChannel) {
    ChannelMatrix ch = ChannelMatrix::identity(2);
    ch.superop *= 0.99;
    EXPECT_THROW(average_gate_fidelity(ch, identity(2)), NumericalError);
}

TEST(MonteCarlo, AgreesWithAnalyticFidelity) {
    const auto kraus = amplitude_damping_kraus(0.3);
    const ChannelMatrix ch{2, oracle::kraus_superoperator(kraus)};
    const double exact = oracle::kraus_average_fidelity(kraus);
    const auto mc = monte_carlo_gate_fidelity(ch, identity(2), 4000, 99);
    EXPECT_EQ(mc.samples, 4000u);
    EXPECT_GT(mc.standard_error, 0.0);
    EXPECT_LE(std::abs(mc.mean - exact), 3.0 * mc.standard_error);
}

TEST(MonteCarlo, DeterministicForFixedSeed) {
    const ChannelMatrix ch{2, oracle::kraus_superoperator(amplitude_damping_kraus(0.2))};
    const auto a = monte_carlo_gate_fidelity(ch, identity(2), 500, 7);
    const auto b = monte_carlo_gate_fidelity(ch, identity(2), 500, 7);
    const auto c = monte_carlo_gate_fidelity(ch, identity(2), 500, 8);
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_NE(a.mean, c.mean);
}

TEST(HaarKet, Normalized) {
    std::mt19937_64 rng(5);
    for (int k = 0; k < 10; ++k) EXPECT_NEAR(haar_random_ket(6, rng).norm(), 1.0, 1e-14);
}

TEST(ChannelSimulation, AmplitudeDampingModel) {
    LindbladModel m;
    m.hamiltonian = TimeDependentOperator(ComplexMatrix::Zero(2, 2));
    const double gamma = 0.4;
    const double t = 1.7;
    m.collapse.push_back({gamma, sigma_minus(), CollapseForm::Standard});
    const auto ch = channel_from_simulation(m, t, HilbertLayout({2}), false, fine_step());
    const auto expected = oracle::kraus_superoperator(amplitude_damping_kraus(1.0 - std::exp(-gamma * t)));
    EXPECT_LT(oracle::max_abs(ch.superop - expected), 1e-9);
    EXPECT_LT(ch.trace_preservation_error(), 1e-8);
}

TEST(ChannelSimulation, NoiselessSwapModelIsUnitary) {
    SystemParams p;
    p.gamma1 = 0.0;
    p.gamma2 = 0.0;
    const auto gate = swap_gate_exact(p);
    const auto ch = channel_from_simulation(build_lindblad(p, GateKind::SwapGate), gate.tau_k_ns,
                                            HilbertLayout::two_qubit(), false, fine_step());
    EXPECT_LT(oracle::max_abs(ch.superop - ChannelMatrix::unitary(gate.exact).superop), 1e-7);
    EXPECT_GE(average_gate_fidelity(ch, gate.exact), 1.0 - 1e-8);
}

TEST(ChannelSimulation, ZeroDurationIsIdentity) {
    const auto m = build_lindblad(SystemParams{}, GateKind::SwapGate);
    const auto ch = channel_from_simulation(m, 0.0, HilbertLayout::two_qubit(), false);
    EXPECT_LT(oracle::max_abs(ch.superop - ComplexMatrix::Identity(16, 16)), 1e-300);
}

TEST(ChannelSimulation, TrajectoryMatchesDirectSolves) {
    std::mt19937_64 rng(77);
    SystemParams p;
    p.gamma1 = 0.5;
    p.gamma2 = 2.0;
    const auto model = build_lindblad(p, GateKind::SwapGate);
    ChannelOptions opts;
    opts.n_intervals = 4;
    const auto traj = channel_trajectory(model, 2.0, HilbertLayout::two_qubit(), false, opts);
    ASSERT_EQ(traj.channels.size(), 5u);
    const auto rho0 = oracle::random_density(4, rng);
    const auto grid = TimeGrid::covering(0.0, 2.0, 4, generator_norm(model));
    EXPECT_DOUBLE_EQ(traj.step, grid.step());
    const auto direct = solve_master(model, rho0, grid);
    for (std::size_t k = 0; k < traj.channels.size(); ++k) {
        EXPECT_LT(oracle::max_abs(traj.channels[k].apply(rho0) - direct.states[k]), 1e-12) << "sample " << k;
    }
}

TEST(ChannelSimulation, ReducedPhaseGateChannelIsTracePreserving) {
    SystemParams p;
    p.n_max = 1;
    p.epsilon = 200.0;
    const auto ch = channel_from_simulation(build_lindblad(p, GateKind::PhaseGate), 0.2,
                                            HilbertLayout::tripartite(1), true);
    EXPECT_EQ(ch.dim, 4u);
    EXPECT_LT(ch.trace_preservation_error(), 1e-8);
    // Hermiticity preservation on a random input.
    std::mt19937_64 rng(3);
    EXPECT_LT(hermiticity_deviation(ch.apply(oracle::random_density(4, rng))), 1e-12);
}

TEST(ChannelSimulation, SerialAndParallelAgree) {
    SystemParams p;
    p.n_max = 1;
    p.epsilon = 200.0;
    const auto model = build_lindblad(p, GateKind::PhaseGate);
    ChannelOptions serial;
    serial.policy = ExecutionPolicy::Serial;
    ChannelOptions parallel;
    parallel.policy = ExecutionPolicy::Parallel;
    const auto layout = HilbertLayout::tripartite(1);
    const auto a = channel_trajectory(model, 0.3, layout, true, serial);
    const auto b = channel_trajectory(model, 0.3, layout, true, parallel);
    ASSERT_EQ(a.channels.size(), b.channels.size());
    for (std::size_t k = 0; k < a.channels.size(); ++k) {
        EXPECT_EQ(a.channels[k].superop, b.channels[k].superop);
    }
    EXPECT_EQ(a.step_halving_delta, b.step_halving_delta);
}
