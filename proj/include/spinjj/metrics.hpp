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

#include <cstdint>
#include <random>
#include <vector>

#include "spinjj/dynamics.hpp"
#include "spinjj/model.hpp"
#include "spinjj/qcore.hpp"

namespace spinjj {

/// Superoperator acting on column-stacked density matrices: vec(rho)[i + d*j] = rho(i, j).
struct ChannelMatrix {
    std::size_t dim = 0;
    ComplexMatrix superop;

    static ChannelMatrix identity(std::size_t d);
    static ChannelMatrix unitary(const ComplexMatrix& u);

    ComplexMatrix apply(const ComplexMatrix& rho) const;

    /// max |tr(S(E_ij)) - delta_ij| over matrix units.
    double trace_preservation_error() const;
};

ComplexMatrix vectorize(const ComplexMatrix& rho);
ComplexMatrix unvectorize(const ComplexMatrix& v, std::size_t d);

/// |<psi*| sigma_y (x) sigma_y |psi>|, divided by <psi|psi> unless allow_unnormalized.
double concurrence_pure(const Ket& psi, bool allow_unnormalized = false);

/// Wootters concurrence max(0, l1 - l2 - l3 - l4) of a two-qubit density matrix.
double concurrence_mixed(const ComplexMatrix& rho);

/// |tr(U^+ V)| / d
double phase_invariant_fidelity(const ComplexMatrix& u, const ComplexMatrix& v);

enum class ExecutionPolicy { Serial, Parallel };

struct ChannelOptions {
    std::size_t n_intervals = 1;  // number of sampled instants after t = 0
    bool check_convergence = true;
    double step_scale = TimeGrid::kDefaultStepScale;
    ExecutionPolicy policy = ExecutionPolicy::Parallel;
};

struct ChannelTrajectory {
    std::vector<double> times;
    std::vector<ChannelMatrix> channels;
    double step = 0.0;
    double step_halving_delta = 0.0;  // worst over basis inputs
};

/// Evolves every matrix unit (through hermitian combinations) under the master
/// equation and assembles the superoperator at each sampled instant. With
/// reduce_to_two_qubit the input is rho (x) |0><0|_junction on the tri-partite
/// layout and the output is traced over the junction.
ChannelTrajectory channel_trajectory(const LindbladModel& model, double duration_ns, const HilbertLayout& layout,
                                     bool reduce_to_two_qubit, const ChannelOptions& options = {});

/// Superoperator after `duration_ns`; the identity for zero duration.
ChannelMatrix channel_from_simulation(const LindbladModel& model, double duration_ns, const HilbertLayout& layout,
                                      bool reduce_to_two_qubit, const ChannelOptions& options = {});

inline constexpr double kTracePreservationTolerance = 1e-8;

/// tr(S_U^+ S) / d^2
double process_fidelity(const ChannelMatrix& channel, const ComplexMatrix& u_ideal);

/// (d F_pro + 1) / (d + 1). Throws NumericalError for channels that are not
/// trace preserving within 1e-8.
double average_gate_fidelity(const ChannelMatrix& channel, const ComplexMatrix& u_ideal);

struct MonteCarloFidelity {
    double mean = 0.0;
    double standard_error = 0.0;
    std::size_t samples = 0;
};

/// Average of <psi|U^+ S(psi) U|psi> over Haar-random pure inputs.
MonteCarloFidelity monte_carlo_gate_fidelity(const ChannelMatrix& channel, const ComplexMatrix& u_ideal,
                                             std::size_t samples = 2000, std::uint64_t seed = 12345);

/// Haar-random pure state from normalized complex Gaussians.
template <class Rng>
Ket haar_random_ket(std::size_t d, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Ket psi(static_cast<Eigen::Index>(d));
    for (Eigen::Index k = 0; k < psi.size(); ++k) {
        const double re = normal(rng);
        const double im = normal(rng);
        psi(k) = Complex(re, im);
    }
    return psi / psi.norm();
}

}  // namespace spinjj
