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

#include "spinjj/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace spinjj {

ComplexMatrix vectorize(const ComplexMatrix& rho) {
    ComplexMatrix v(rho.size(), 1);
    for (Eigen::Index j = 0; j < rho.cols(); ++j) {
        for (Eigen::Index i = 0; i < rho.rows(); ++i) {
            v(i + rho.rows() * j, 0) = rho(i, j);
        }
    }
    return v;
}

ComplexMatrix unvectorize(const ComplexMatrix& v, std::size_t d) {
    const auto n = static_cast<Eigen::Index>(d);
    if (v.size() != n * n) {
        throw std::invalid_argument("unvectorize: size mismatch");
    }
    ComplexMatrix rho(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            rho(i, j) = v(i + n * j);
        }
    }
    return rho;
}

ChannelMatrix ChannelMatrix::identity(std::size_t d) {
    return {d, spinjj::identity(d * d)};
}

ChannelMatrix ChannelMatrix::unitary(const ComplexMatrix& u) {
    if (u.rows() != u.cols()) {
        throw std::invalid_argument("ChannelMatrix::unitary: matrix is not square");
    }
    return {static_cast<std::size_t>(u.rows()), kron(u.conjugate(), u)};
}

ComplexMatrix ChannelMatrix::apply(const ComplexMatrix& rho) const {
    if (static_cast<std::size_t>(rho.rows()) != dim || rho.rows() != rho.cols()) {
        throw std::invalid_argument("ChannelMatrix::apply: dimension mismatch");
    }
    return unvectorize(superop * vectorize(rho), dim);
}

double ChannelMatrix::trace_preservation_error() const {
    const auto d = static_cast<Eigen::Index>(dim);
    double worst = 0.0;
    for (Eigen::Index col = 0; col < superop.cols(); ++col) {
        Complex tr = 0.0;
        for (Eigen::Index i = 0; i < d; ++i) tr += superop(i + d * i, col);
        const Complex expected = (col % (d + 1) == 0) ? 1.0 : 0.0;
        worst = std::max(worst, std::abs(tr - expected));
    }
    return worst;
}

double concurrence_pure(const Ket& psi, bool allow_unnormalized) {
    if (psi.size() != 4) {
        throw std::invalid_argument("concurrence_pure: state must be a two-qubit ket");
    }
    const ComplexMatrix yy = kron(sigma_y(), sigma_y());
    const double c = std::abs((psi.transpose() * yy * psi)(0, 0));
    if (allow_unnormalized) return c;
    const double n2 = psi.squaredNorm();
    if (n2 == 0.0) {
        throw std::invalid_argument("concurrence_pure: zero vector");
    }
    return c / n2;
}

double concurrence_mixed(const ComplexMatrix& rho) {
    if (rho.rows() != 4 || rho.cols() != 4) {
        throw std::invalid_argument("concurrence_mixed: expected a 4x4 density matrix");
    }
    require_density_matrix(rho, 1e-8);
    const ComplexMatrix h = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
    Eigen::VectorXd w = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const ComplexMatrix sqrt_rho = es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
    const ComplexMatrix yy = kron(sigma_y(), sigma_y());
    const ComplexMatrix flipped = yy * h.conjugate() * yy;
    const ComplexMatrix r = sqrt_rho * flipped * sqrt_rho;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> rs(0.5 * (r + r.adjoint()), Eigen::EigenvaluesOnly);
    std::vector<double> l;
    for (Eigen::Index k = 0; k < 4; ++k) l.push_back(std::sqrt(std::max(0.0, rs.eigenvalues()(k))));
    std::sort(l.begin(), l.end(), std::greater<>());
    return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

double phase_invariant_fidelity(const ComplexMatrix& u, const ComplexMatrix& v) {
    if (u.rows() != v.rows() || u.cols() != v.cols() || u.rows() != u.cols()) {
        throw std::invalid_argument("phase_invariant_fidelity: dimension mismatch");
    }
    return std::abs((u.adjoint() * v).trace()) / static_cast<double>(u.rows());
}

namespace {

// Hermitian inputs whose linear span covers all d x d matrices, plus the recipe
// that recovers matrix unit E_ij from their images.
struct BasisInput {
    std::size_t i, j;
    bool imaginary;  // false: E_ij + E_ji (or E_ii), true: i (E_ij - E_ji)
};

std::vector<BasisInput> hermitian_basis(std::size_t d) {
    std::vector<BasisInput> out;
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i; j < d; ++j) {
            out.push_back({i, j, false});
            if (i != j) out.push_back({i, j, true});
        }
    }
    return out;
}

ComplexMatrix basis_matrix(const BasisInput& b, std::size_t d) {
    const auto n = static_cast<Eigen::Index>(d);
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    const auto i = static_cast<Eigen::Index>(b.i), j = static_cast<Eigen::Index>(b.j);
    if (i == j) {
        m(i, i) = 1.0;
    } else if (!b.imaginary) {
        m(i, j) = 1.0;
        m(j, i) = 1.0;
    } else {
        m(i, j) = kI;
        m(j, i) = -kI;
    }
    return m;
}

// rho_q on (ensemble-1, ensemble-2) -> rho_q (x) |0><0| placed as [e1, junction, e2].
ComplexMatrix embed_with_vacuum(const ComplexMatrix& rho_q, const HilbertLayout& layout) {
    const auto n = static_cast<Eigen::Index>(layout.total_dim());
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            const auto fr = static_cast<Eigen::Index>(layout.index_of({r / 2, 0, r % 2}));
            const auto fc = static_cast<Eigen::Index>(layout.index_of({c / 2, 0, c % 2}));
            out(fr, fc) = rho_q(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        }
    }
    return out;
}

}  // namespace

ChannelTrajectory channel_trajectory(const LindbladModel& model, double duration_ns, const HilbertLayout& layout,
                                     bool reduce_to_two_qubit, const ChannelOptions& options) {
    if (!(duration_ns > 0.0)) {
        throw std::invalid_argument("channel_trajectory: duration must be positive");
    }
    if (static_cast<Eigen::Index>(layout.total_dim()) != model.dim()) {
        throw std::invalid_argument("channel_trajectory: layout does not match model dimension");
    }
    if (reduce_to_two_qubit && (layout.size() != 3 || layout.dim(0) != 2 || layout.dim(2) != 2)) {
        throw std::invalid_argument("channel_trajectory: reduction needs the tri-partite layout");
    }
    const std::size_t d = reduce_to_two_qubit ? 4 : layout.total_dim();
    const auto inputs = hermitian_basis(d);
    const auto grid = TimeGrid::covering(0.0, duration_ns, options.n_intervals, generator_norm(model),
                                         options.step_scale);

    MasterOptions mopts;
    mopts.validate_input = false;
    mopts.check_convergence = options.check_convergence;

    std::vector<std::vector<ComplexMatrix>> outputs(inputs.size());
    std::vector<double> deltas(inputs.size(), 0.0);
    std::vector<std::exception_ptr> errors(inputs.size());

    auto run_one = [&](std::size_t k) {
        try {
            ComplexMatrix rho0 = basis_matrix(inputs[k], d);
            if (reduce_to_two_qubit) rho0 = embed_with_vacuum(rho0, layout);
            auto res = solve_master(model, rho0, grid, mopts);
            deltas[k] = res.step_halving_delta;
            outputs[k].reserve(res.states.size());
            for (auto& s : res.states) {
                outputs[k].push_back(reduce_to_two_qubit ? partial_trace(s, layout, {0, 2}) : std::move(s));
            }
        } catch (...) {
            errors[k] = std::current_exception();
        }
    };

    const auto n_inputs = static_cast<long>(inputs.size());
    if (options.policy == ExecutionPolicy::Parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long k = 0; k < n_inputs; ++k) run_one(static_cast<std::size_t>(k));
    } else {
        for (long k = 0; k < n_inputs; ++k) run_one(static_cast<std::size_t>(k));
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    ChannelTrajectory traj;
    traj.times = grid.sample_times();
    traj.step = grid.step();
    traj.step_halving_delta = *std::max_element(deltas.begin(), deltas.end());
    const auto n = static_cast<Eigen::Index>(d);
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        ChannelMatrix ch{d, ComplexMatrix::Zero(n * n, n * n)};
        for (std::size_t k = 0; k < inputs.size(); ++k) {
            const auto& in = inputs[k];
            const ComplexMatrix v = vectorize(outputs[k][s]);
            const auto i = static_cast<Eigen::Index>(in.i), j = static_cast<Eigen::Index>(in.j);
            if (i == j) {
                ch.superop.col(i + n * i) = v;
            } else if (!in.imaginary) {
                // E_ij = (X - iY)/2, E_ji = (X + iY)/2
                ch.superop.col(i + n * j) += 0.5 * v;
                ch.superop.col(j + n * i) += 0.5 * v;
            } else {
                ch.superop.col(i + n * j) += (-0.5 * kI) * v;
                ch.superop.col(j + n * i) += (0.5 * kI) * v;
            }
        }
        traj.channels.push_back(std::move(ch));
    }
    return traj;
}

ChannelMatrix channel_from_simulation(const LindbladModel& model, double duration_ns, const HilbertLayout& layout,
                                      bool reduce_to_two_qubit, const ChannelOptions& options) {
    if (duration_ns < 0.0) {
        throw std::invalid_argument("channel_from_simulation: negative duration");
    }
    if (duration_ns == 0.0) {
        return ChannelMatrix::identity(reduce_to_two_qubit ? 4 : layout.total_dim());
    }
    auto traj = channel_trajectory(model, duration_ns, layout, reduce_to_two_qubit, options);
    return std::move(traj.channels.back());
}

double process_fidelity(const ChannelMatrix& channel, const ComplexMatrix& u_ideal) {
    if (static_cast<std::size_t>(u_ideal.rows()) != channel.dim || u_ideal.rows() != u_ideal.cols()) {
        throw std::invalid_argument("process_fidelity: dimension mismatch");
    }
    const ComplexMatrix s_ideal = kron(u_ideal.conjugate(), u_ideal);
    const double d = static_cast<double>(channel.dim);
    return (s_ideal.adjoint() * channel.superop).trace().real() / (d * d);
}

double average_gate_fidelity(const ChannelMatrix& channel, const ComplexMatrix& u_ideal) {
    const double tp = channel.trace_preservation_error();
    if (tp > kTracePreservationTolerance) {
        std::ostringstream msg;
        msg << "average_gate_fidelity: channel is not trace preserving (error " << tp << ")";
        throw NumericalError(msg.str());
    }
    const double d = static_cast<double>(channel.dim);
    return (d * process_fidelity(channel, u_ideal) + 1.0) / (d + 1.0);
}

MonteCarloFidelity monte_carlo_gate_fidelity(const ChannelMatrix& channel, const ComplexMatrix& u_ideal,
                                             std::size_t samples, std::uint64_t seed) {
    if (samples < 2) {
        throw std::invalid_argument("monte_carlo_gate_fidelity: need at least two samples");
    }
    if (static_cast<std::size_t>(u_ideal.rows()) != channel.dim) {
        throw std::invalid_argument("monte_carlo_gate_fidelity: dimension mismatch");
    }
    std::mt19937_64 rng(seed);
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        const Ket psi = haar_random_ket(channel.dim, rng);
        const ComplexMatrix out = channel.apply(projector(psi));
        const Ket target = u_ideal * psi;
        const double f = (target.adjoint() * out * target)(0, 0).real();
        sum += f;
        sum2 += f * f;
    }
    const double n = static_cast<double>(samples);
    MonteCarloFidelity mc;
    mc.samples = samples;
    mc.mean = sum / n;
    const double var = std::max(0.0, (sum2 - n * mc.mean * mc.mean) / (n - 1.0));
    mc.standard_error = std::sqrt(var / n);
    return mc;
}

}  // namespace spinjj
