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

#include <optional>
#include <string_view>
#include <vector>

#include "spinjj/qcore.hpp"

namespace spinjj {

// Units: every user-facing frequency or rate is an ordinary frequency in MHz.
// Dynamics run in angular units (rad/ns) with times in ns.

/// MHz -> rad/ns
constexpr double to_angular(double mhz) { return 2.0 * kPi * mhz * 1e-3; }
/// rad/ns -> MHz
constexpr double from_angular(double rad_per_ns) { return rad_per_ns / (2.0 * kPi * 1e-3); }

/// Physical parameters of two spin ensembles coupled through a junction mode.
/// All frequencies and rates in MHz.
struct SystemParams {
    double omega = 6900.0;    // junction plasma frequency
    double omega10 = 2870.0;  // ensemble transition frequency
    double g1 = 620.0;        // ensemble-1 collective coupling
    double g2 = 620.0;        // ensemble-2 collective coupling (modulus)
    double g2_phase = 0.0;    // ensemble-2 coupling phase (rad)
    double epsilon = 0.0;     // drive amplitude
    double omega_d = 2870.0;  // drive frequency (rotating frame takes omega_d = omega10)
    double kappa = 1.0;       // junction decay
    double gamma = 1.0;       // ensemble spontaneous rate in the conditional evolution
    double gamma1 = 1.0;      // rate of the sigma_z term in the master equations
    double gamma2 = 1.0;      // rate of the sigma_minus dissipator in the master equations
    std::size_t n_max = 5;    // Fock cutoff
    std::optional<double> e_c;
    std::optional<double> e_j;

    double detuning() const { return omega - omega10; }
    Complex coupling2() const { return std::polar(g2, g2_phase); }

    /// Throws std::invalid_argument on negative rates/frequencies or n_max < 1.
    void validate() const;
    /// Throws std::invalid_argument when the detuning is zero.
    void require_detuning() const;
};

inline constexpr double kMu0 = 4.0 * kPi * 1e-7;  // T m / A
inline constexpr double kGeMuB = 28.0;           // MHz / mT

struct PhysicalEstimate {
    double i0 = 0.0;           // A
    double r = 0.0;            // m
    double n_spins = 0.0;
    double b_field = 0.0;      // T
    double g_single = 0.0;     // MHz
    double g_collective = 0.0; // MHz
};

/// Field of the junction current at distance r, and the single-spin and
/// collective couplings it induces.
PhysicalEstimate estimate_coupling(double i0, double r, double n_spins);

/// Effective ensemble-ensemble coupling G^2 / delta, in MHz. Requires g1 == g2.
double lambda_eff(const SystemParams& p);

/// sqrt(8 E_C E_J)
double plasma_frequency(double e_c, double e_j);

/// Sum of constant matrices each scaled by c * exp(i nu t). nu in rad/ns.
class TimeDependentOperator {
  public:
    struct Term {
        ComplexMatrix op;
        Complex coeff;
        double freq;
    };

    TimeDependentOperator() = default;
    explicit TimeDependentOperator(ComplexMatrix constant);

    void add(ComplexMatrix op, Complex coeff = 1.0, double freq = 0.0);

    ComplexMatrix operator()(double t) const;

    Eigen::Index dim() const { return dim_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_constant() const;

    /// Upper bound on ||H(t)|| valid for every t.
    double norm_bound() const;

  private:
    std::vector<Term> terms_;
    Eigen::Index dim_ = 0;
};

enum class CollapseForm {
    Standard,    // rate * (L rho L^+ - {L^+ L, rho}/2)
    AsWritten,   // (rate / 2) * (L rho L^+ - rho), used for sigma_z dephasing
};

struct CollapseTerm {
    double rate;  // 1/ns
    ComplexMatrix op;
    CollapseForm form;
};

/// Lindblad generator in internal units (H in rad/ns, rates in 1/ns).
struct LindbladModel {
    TimeDependentOperator hamiltonian;
    std::vector<CollapseTerm> collapse;

    Eigen::Index dim() const { return hamiltonian.dim(); }
    void validate() const;
};

enum class GateKind { PhaseGate, SwapGate };

// Hamiltonian builders. Outputs are in rad/ns.

/// sum_j G_j a sigma+_j + h.c. on [ensemble-1, junction, ensemble-2].
ComplexMatrix build_h_int(const SystemParams& p, const HilbertLayout& layout);

/// Driven Hamiltonian in the displaced rotating frame:
/// sum_j Omega_j sigma_x^j + G_j (sigma+_j a e^{-i delta t} + h.c.), Omega_j = eps |G_j| / delta.
TimeDependentOperator build_h_full_rotated(const SystemParams& p, const HilbertLayout& layout);

/// Strong-driving reduction of the interaction term:
/// sum_j (1/2) sigma_x^j (G_j a e^{-i delta t} + G_j^* a^+ e^{i delta t}).
TimeDependentOperator build_h_eff_drive(const SystemParams& p, const HilbertLayout& layout);

/// sum_j Omega_j sigma_x^j, the drive term removed by the strong-driving frame.
ComplexMatrix build_h_drive_free(const SystemParams& p, const HilbertLayout& layout);

/// Dispersive two-ensemble Hamiltonian on {|00>,|01>,|10>,|11>}.
ComplexMatrix build_h_e(const SystemParams& p);

/// H_e - i (Gamma/2) sum_j |1><1|_j (non-hermitian).
ComplexMatrix build_h_c(const SystemParams& p);

/// Static tri-partite Hamiltonian whose dispersive limit is build_h_e:
/// -delta a^+ a + H_int, written in the frame of the ensembles.
ComplexMatrix build_h_tripartite_static(const SystemParams& p, const HilbertLayout& layout);

/// Master-equation models used for gate fidelities. The phase-gate model acts on
/// the tri-partite space and includes the free drive term; the swap-gate model
/// acts on the two-qubit space.
LindbladModel build_lindblad(const SystemParams& p, GateKind which);

std::string_view to_string(GateKind kind);

}  // namespace spinjj
