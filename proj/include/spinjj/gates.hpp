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

#pragma once

#include <cstddef>
#include <cstdint>

#include "spinjj/model.hpp"
#include "spinjj/qcore.hpp"

namespace spinjj {

enum class GateFamily { Holonomic1Q, Phase2Q, Swap2Q };
enum class GateBasis { Computational, PlusMinus };

/// Resolved gate schedule. Couplings and drive in MHz, duration in ns.
struct GatePlan {
    GateFamily family = GateFamily::Holonomic1Q;
    double duration_ns = 0.0;
    double g1 = 0.0;
    Complex g2 = 0.0;
    double epsilon = 0.0;
    ComplexMatrix ideal_unitary;  // expressed in `basis`
    GateBasis basis = GateBasis::Computational;

    // Phase gate only.
    std::uint64_t n = 0;
    std::uint64_t m = 0;
    double theta = 0.0;
    double omega_drive = 0.0;  // Omega_j, MHz
    double b_coefficient = 0.0;  // B(n), dimensionless

    /// ideal_unitary rewritten in the computational basis.
    ComplexMatrix ideal_computational() const;
};

/// Single-excitation eigenvectors of H_int on {|100>, |010>, |001>}.
struct EigenStructure {
    Ket dark;
    Ket bright;
    Ket plus;
    Ket minus;
    double coupling_norm = 0.0;  // sqrt(|G1|^2 + |G2|^2), same units as the inputs
    Eigen::Vector3d energies;    // (0, +G, -G) matching (dark, plus, minus)
};

/// Dark/bright decomposition for ensemble couplings (G1, G2). Throws when both vanish.
EigenStructure eigenstructure(Complex g1, Complex g2);

/// Single-excitation block of build_h_int in the basis {|100>, |010>, |001>}.
ComplexMatrix single_excitation_block(Complex g1, Complex g2);

/// The reflection [[-cos t, sin t e^{i p}], [sin t e^{-i p}, cos t]] on {|100>, |001>}.
ComplexMatrix holonomic_unitary(double theta, double phi);

/// Ensemble couplings (G1, G2) whose constant pulse of length pi / G_total
/// produces holonomic_unitary(theta, phi): G1 = G cos(theta/2),
/// G2 = G e^{i(pi - phi)} sin(theta/2).
std::pair<double, Complex> holonomic_couplings(double theta, double phi, double g_total = 1.0);

struct HolonomicCheck {
    ComplexMatrix realized;  // 2x2 map on {|100>, |001>}
    double infidelity = 0.0; // 1 - |tr(U^+ V)| / 2
    double leakage = 0.0;    // worst |010> population at the end of the cycle
};

/// Propagates the single-excitation block through one cyclic pulse and
/// compares the induced map with holonomic_unitary(theta, phi).
HolonomicCheck verify_holonomic_cycle(double theta, double phi, std::size_t n_time_steps = 64,
                                      double g_total_mhz = 100.0);

GatePlan plan_holonomic(double theta, double phi, double g_total_mhz);

/// Computational-basis matrix of exp[-i theta (X1 + X2 - X1 X2)].
ComplexMatrix phase_gate_unitary(double theta);

/// diag(1, 1, 1, -1) in the |+-> basis.
ComplexMatrix controlled_phase_pm();

/// H (x) H, mapping the |+-> basis to the computational one.
ComplexMatrix hadamard2();

inline constexpr std::uint64_t kDefaultPeriodCap = 1'000'000;

/// Chooses the period count n and realized coupling G' = delta sqrt((2m+1)/(4n))
/// such that delta / G' >= min_ratio, then the drive fixing Omega tau = theta.
GatePlan plan_phase_gate(const SystemParams& p, std::uint64_t m, double min_ratio,
                         std::uint64_t n_cap = kDefaultPeriodCap);

/// Parameters with the plan's couplings and drive substituted.
SystemParams apply_plan(SystemParams p, const GatePlan& plan);

struct SwapGateResult {
    double tau_k_ns = 0.0;
    ComplexMatrix exact;  // exp(-i H_e tau_k)
    ComplexMatrix reported;  // swap with a pi phase on |11>
    ComplexMatrix zz;     // Z (x) Z
    double reported_vs_exact = 0.0;      // |tr(U_reported^+ U_exact)| / 4
    double reported_vs_zz_exact = 0.0;   // |tr(U_reported^+ (Z x Z) U_exact)| / 4
};

SwapGateResult swap_gate_exact(const SystemParams& p);

GatePlan plan_swap_gate(const SystemParams& p);

}  // namespace spinjj
