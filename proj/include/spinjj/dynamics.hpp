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
#include <utility>
#include <vector>

#include "spinjj/model.hpp"
#include "spinjj/qcore.hpp"

namespace spinjj {

/// Fixed-step grid: n_steps integrator steps, a sample every sample_stride steps.
/// The final instant is always sampled.
struct TimeGrid {
    double t_start = 0.0;
    double t_end = 1.0;
    std::size_t n_steps = 1;
    std::size_t sample_stride = 1;

    TimeGrid() = default;
    TimeGrid(double t0, double t1, std::size_t steps, std::size_t stride = 1);

    double step() const { return (t_end - t_start) / static_cast<double>(n_steps); }
    std::size_t n_samples() const;
    std::vector<double> sample_times() const;

    /// Same span and samples with the integrator step halved.
    TimeGrid refined() const;

    /// Grid with `n_intervals` equal sample intervals and h <= step_scale / generator_norm.
    static TimeGrid covering(double t0, double t1, std::size_t n_intervals, double generator_norm,
                             double step_scale = kDefaultStepScale);

    static constexpr double kDefaultStepScale = 0.05;
};

template <class State>
struct EvolutionResult {
    std::vector<double> times;
    std::vector<State> states;
    std::vector<double> diagnostic;  // norm for kets, real trace for density matrices

    const State& final_state() const { return states.back(); }
};

using KetEvolution = EvolutionResult<Ket>;
using DensityEvolution = EvolutionResult<ComplexMatrix>;

/// Cached spectral decomposition of a hermitian generator; evaluates exp(-iHt).
class HermitianPropagator {
  public:
    explicit HermitianPropagator(const ComplexMatrix& h);
    ComplexMatrix operator()(double t) const;
    Ket apply(const Ket& psi, double t) const;
    const Eigen::VectorXd& energies() const { return energies_; }

  private:
    Eigen::VectorXd energies_;
    ComplexMatrix vectors_;
};

KetEvolution propagate_constant(const ComplexMatrix& h, const Ket& psi0, const TimeGrid& grid);

struct ConditionalAmplitudes {
    Complex c1;  // amplitude on |0>_1|1>_2
    Complex c2;  // amplitude on |1>_1|0>_2
};

/// Closed-form no-decay amplitudes for the initial state |0>_1|1>_2 with equal couplings.
ConditionalAmplitudes conditional_closed_form(const SystemParams& p, double t);

/// RK4 integration of d psi/dt = -i Hc psi for a (possibly non-hermitian) constant Hc.
/// States are left unnormalized.
KetEvolution propagate_conditional(const ComplexMatrix& hc, const Ket& psi0, const TimeGrid& grid);

/// RK4 integration of the Schrodinger equation with a time-dependent Hamiltonian.
KetEvolution propagate_schrodinger(const TimeDependentOperator& h, const Ket& psi0, const TimeGrid& grid);

struct MasterOptions {
    bool validate_input = true;
    bool check_convergence = true;
    double convergence_tolerance = 1e-6;  // trace distance between h and h/2 final states
    double trace_tolerance = 1e-8;
};

struct MasterResult : DensityEvolution {
    double step = 0.0;
    double step_halving_delta = 0.0;  // 0 when the check is disabled
};

/// Upper bound on the norm of the Lindblad generator, used for step selection.
double generator_norm(const LindbladModel& model);

/// Fixed-step RK4 for the master equation with symmetrization after each step.
/// With validate_input, rho0 must be a density matrix; the trace check then also applies.
MasterResult solve_master(const LindbladModel& model, const ComplexMatrix& rho0, const TimeGrid& grid,
                          const MasterOptions& options = {});

/// Lindblad right-hand side at time t, exposed for testing.
ComplexMatrix master_rhs(const LindbladModel& model, const ComplexMatrix& rho, double t);

/// 0.5 * sum |eig(a - b)| for hermitian a, b.
double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b);

/// Smallest eigenvalue of the hermitian part.
double min_eigenvalue(const ComplexMatrix& rho);

/// Throws std::invalid_argument unless rho is hermitian, unit-trace and PSD.
void require_density_matrix(const ComplexMatrix& rho, double tol = 1e-10);

struct StrongDrivingReport {
    std::vector<double> drive_ratios;
    std::vector<double> epsilons;  // MHz
    std::vector<double> infidelities;
    bool monotone = true;
};

/// Final-state infidelity between the rotated-frame Hamiltonian and its
/// strong-driving reduction (plus the free drive term) for the configured epsilon.
double strong_driving_infidelity(const SystemParams& p, double duration_ns, std::size_t n_intervals = 64);

/// Repeats strong_driving_infidelity with epsilon chosen so that
/// Omega_j / max(delta, G_j) equals each ratio.
StrongDrivingReport validate_strong_driving(const SystemParams& p, double duration_ns,
                                            const std::vector<double>& ratios = {5.0, 10.0, 20.0});

struct DispersiveReport {
    double swap_period_ns = 0.0;
    std::vector<double> times;
    std::vector<double> fidelities;
    double min_fidelity = 1.0;
};

/// Compares the reduced two-ensemble state of the full tri-partite evolution
/// (junction in vacuum, initial |0>_1|1>_2) against the dispersive H_e evolution
/// over one swap period pi / (2 lambda).
DispersiveReport validate_dispersive(const SystemParams& p, std::size_t n_intervals = 200);

}  // namespace spinjj
