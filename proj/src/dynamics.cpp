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

#include "spinjj/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>


namespace spinjj {

TimeGrid::TimeGrid(double t0, double t1, std::size_t steps, std::size_t stride)
    : t_start(t0), t_end(t1), n_steps(steps), sample_stride(stride) {
    if (!(t1 > t0)) {
        throw std::invalid_argument("TimeGrid: t_end must exceed t_start");
    }
    if (steps == 0 || stride == 0) {
        throw std::invalid_argument("TimeGrid: n_steps and sample_stride must be positive");
    }
}

std::size_t TimeGrid::n_samples() const {
    const std::size_t regular = n_steps / sample_stride + 1;
    return n_steps % sample_stride == 0 ? regular : regular + 1;
}

std::vector<double> TimeGrid::sample_times() const {
    std::vector<double> t;
    t.reserve(n_samples());
    const double h = step();
    for (std::size_t k = 0; k <= n_steps; k += sample_stride) {
        t.push_back(t_start + h * static_cast<double>(k));
    }
    if (n_steps % sample_stride != 0) {
        t.push_back(t_end);
    }
    return t;
}

TimeGrid TimeGrid::refined() const { return TimeGrid(t_start, t_end, 2 * n_steps, 2 * sample_stride); }

TimeGrid TimeGrid::covering(double t0, double t1, std::size_t n_intervals, double generator_norm,
                            double step_scale) {
    if (n_intervals == 0) {
        throw std::invalid_argument("TimeGrid::covering: need at least one interval");
    }
    const double interval = (t1 - t0) / static_cast<double>(n_intervals);
    double per = 1.0;
    if (generator_norm > 0.0) {
        per = std::max(1.0, std::ceil(interval * generator_norm / step_scale));
    }
    const auto stride = static_cast<std::size_t>(per);
    return TimeGrid(t0, t1, stride * n_intervals, stride);
}

HermitianPropagator::HermitianPropagator(const ComplexMatrix& h) {
    const double dev = hermiticity_deviation(h);
    if (dev > kHermiticityTolerance) {
        std::ostringstream msg;
        msg << "HermitianPropagator: generator is not hermitian (max |H - H^dagger| = " << dev << ")";
        throw NumericalError(msg.str());
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (h + h.adjoint()));
    energies_ = es.eigenvalues();
    vectors_ = es.eigenvectors();
}

ComplexMatrix HermitianPropagator::operator()(double t) const {
    Eigen::VectorXcd phases(energies_.size());
    for (Eigen::Index k = 0; k < energies_.size(); ++k) {
        phases(k) = std::exp(-kI * energies_(k) * t);
    }
    return vectors_ * phases.asDiagonal() * vectors_.adjoint();
}

Ket HermitianPropagator::apply(const Ket& psi, double t) const {
    Eigen::VectorXcd coeffs = vectors_.adjoint() * psi;
    for (Eigen::Index k = 0; k < energies_.size(); ++k) {
        coeffs(k) *= std::exp(-kI * energies_(k) * t);
    }
    return vectors_ * coeffs;
}

KetEvolution propagate_constant(const ComplexMatrix& h, const Ket& psi0, const TimeGrid& grid) {
    if (psi0.size() != h.rows()) {
        throw std::invalid_argument("propagate_constant: state dimension does not match Hamiltonian");
    }
    if (std::abs(psi0.norm() - 1.0) > 1e-8) {
        throw std::invalid_argument("propagate_constant: initial state is not normalized");
    }
    const HermitianPropagator prop(h);
    KetEvolution out;
    for (double t : grid.sample_times()) {
        Ket psi = prop.apply(psi0, t - grid.t_start);
        out.diagnostic.push_back(psi.norm());
        out.times.push_back(t);
        out.states.push_back(std::move(psi));
    }
    return out;
}

ConditionalAmplitudes conditional_closed_form(const SystemParams& p, double t) {
    if (t < 0.0) {
        throw std::invalid_argument("conditional_closed_form: t must be nonnegative");
    }
    const double lambda = to_angular(lambda_eff(p));
    const double gamma = to_angular(p.gamma);
    const double envelope = 0.5 * std::exp(-0.5 * gamma * t);
    const Complex rot = std::exp(-kI * 2.0 * lambda * t);
    return {envelope * (1.0 + rot), envelope * (rot - 1.0)};
}

namespace {

// Classical RK4 over a grid; `deriv(t, y)` returns dy/dt. `after_step` may
// post-process the state and throw to abort.
template <class State, class Deriv, class After>
std::pair<std::vector<double>, std::vector<State>> rk4(const TimeGrid& grid, const State& y0, Deriv&& deriv,
                                                       After&& after_step) {
    std::vector<double> times;
    std::vector<State> states;
    times.reserve(grid.n_samples());
    states.reserve(grid.n_samples());
    const double h = grid.step();
    State y = y0;
    times.push_back(grid.t_start);
    states.push_back(y);
    for (std::size_t k = 0; k < grid.n_steps; ++k) {
        const double t = grid.t_start + h * static_cast<double>(k);
        const State k1 = deriv(t, y);
        const State k2 = deriv(t + 0.5 * h, State(y + (0.5 * h) * k1));
        const State k3 = deriv(t + 0.5 * h, State(y + (0.5 * h) * k2));
        const State k4 = deriv(t + h, State(y + h * k3));
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        after_step(y);
        const std::size_t done = k + 1;
        if (done % grid.sample_stride == 0 || done == grid.n_steps) {
            times.push_back(done == grid.n_steps ? grid.t_end : grid.t_start + h * static_cast<double>(done));
            states.push_back(y);
        }
    }
    return {std::move(times), std::move(states)};
}

}  // namespace

KetEvolution propagate_conditional(const ComplexMatrix& hc, const Ket& psi0, const TimeGrid& grid) {
    if (hc.rows() != hc.cols() || psi0.size() != hc.rows()) {
        throw std::invalid_argument("propagate_conditional: dimension mismatch");
    }
    const ComplexMatrix gen = -kI * hc;
    const double limit = psi0.norm() * (1.0 + 1e-6);
    auto [times, states] = rk4(
        grid, psi0, [&](double, const Ket& y) -> Ket { return gen * y; },
        [&](const Ket& y) {
            if (y.norm() > limit) {
                throw NumericalError("propagate_conditional: norm grew during integration; step is unstable");
            }
        });
    KetEvolution out;
    out.times = std::move(times);
    out.states = std::move(states);
    for (const auto& s : out.states) out.diagnostic.push_back(s.norm());
    return out;
}

KetEvolution propagate_schrodinger(const TimeDependentOperator& h, const Ket& psi0, const TimeGrid& grid) {
    if (psi0.size() != h.dim()) {
        throw std::invalid_argument("propagate_schrodinger: dimension mismatch");
    }
    auto [times, states] = rk4(
        grid, psi0, [&](double t, const Ket& y) -> Ket { return -kI * (h(t) * y); }, [](const Ket&) {});
    KetEvolution out;
    out.times = std::move(times);
    out.states = std::move(states);
    for (const auto& s : out.states) out.diagnostic.push_back(s.norm());
    return out;
}

namespace {

// d rho/dt = A + A^+ + sum_k c_k L_k rho L_k^+, with A = (-iH(t) - K) rho and rho hermitian.
// Operators are held sparse; every product is sparse x dense.
struct MasterGenerator {
    struct HTerm {
        ComplexMatrix op;
        Complex coeff;
        double freq;
    };
    std::vector<HTerm> hterms;
    ComplexMatrix damping;  // K = sum of the anticommutator weights
    std::vector<std::pair<double, ComplexMatrix>> jumps;

    explicit MasterGenerator(const LindbladModel& model) {
        const auto d = model.dim();
        damping = ComplexMatrix::Zero(d, d);
        for (const auto& t : model.hamiltonian.terms()) {
            hterms.push_back({t.op, t.coeff, t.freq});
        }
        for (const auto& c : model.collapse) {
            if (c.rate == 0.0) continue;
            if (c.form == CollapseForm::Standard) {
                damping += (0.5 * c.rate) * (c.op.adjoint() * c.op);
                jumps.emplace_back(c.rate, c.op);
            } else {
                damping += (0.25 * c.rate) * ComplexMatrix::Identity(d, d);
                jumps.emplace_back(0.5 * c.rate, c.op);
            }
        }
    }

    // Uses hermiticity of rho: the commutator and anticommutator parts are
    // A + A^+ with A = -(K + iH) rho, and L rho L^+ = L (L rho)^+.
    ComplexMatrix operator()(double t, const ComplexMatrix& rho) const {
        ComplexMatrix gen = damping;
        for (const auto& term : hterms) {
            const Complex c = term.freq == 0.0 ? term.coeff : term.coeff * std::exp(kI * term.freq * t);
            gen.noalias() += (kI * c) * term.op;
        }
        ComplexMatrix a(rho.rows(), rho.cols());
        a.noalias() = -gen * rho;
        ComplexMatrix out = a + a.adjoint();
        ComplexMatrix m(rho.rows(), rho.cols());
        for (const auto& [rate, op] : jumps) {
            m.noalias() = op * rho;
            out.noalias() += rate * (op * m.adjoint());
        }
        return out;
    }
};

}  // namespace

ComplexMatrix master_rhs(const LindbladModel& model, const ComplexMatrix& rho, double t) {
    return MasterGenerator(model)(t, rho);
}

double generator_norm(const LindbladModel& model) {
    double n = model.hamiltonian.norm_bound();
    for (const auto& c : model.collapse) {
        const double l = max_row_sum_norm(c.op);
        n += c.rate * l * l;
    }
    return n;
}

double min_eigenvalue(const ComplexMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
    const ComplexMatrix d = a - b;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (d + d.adjoint()), Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

void require_density_matrix(const ComplexMatrix& rho, double tol) {
    if (rho.rows() != rho.cols()) {
        throw std::invalid_argument("density matrix is not square");
    }
    const double herm = hermiticity_deviation(rho);
    if (herm > tol) {
        std::ostringstream msg;
        msg << "density matrix is not hermitian (deviation " << herm << ")";
        throw std::invalid_argument(msg.str());
    }
    const Complex tr = rho.trace();
    if (std::abs(tr - 1.0) > tol) {
        std::ostringstream msg;
        msg << "density matrix trace is " << tr.real() << ", expected 1";
        throw std::invalid_argument(msg.str());
    }
    const double lo = min_eigenvalue(rho);
    if (lo < -tol) {
        std::ostringstream msg;
        msg << "density matrix has negative eigenvalue " << lo;
        throw std::invalid_argument(msg.str());
    }
}

namespace {

DensityEvolution integrate_master(const MasterGenerator& gen, const ComplexMatrix& rho0, const TimeGrid& grid) {
    auto [times, states] = rk4(grid, rho0, gen, [](ComplexMatrix& rho) {
        rho = 0.5 * (rho + rho.adjoint()).eval();
    });
    DensityEvolution out;
    out.times = std::move(times);
    out.states = std::move(states);
    for (const auto& s : out.states) out.diagnostic.push_back(s.trace().real());
    return out;
}

}  // namespace

MasterResult solve_master(const LindbladModel& model, const ComplexMatrix& rho0, const TimeGrid& grid,
                          const MasterOptions& options) {
    model.validate();
    if (rho0.rows() != model.dim() || rho0.cols() != model.dim()) {
        throw std::invalid_argument("solve_master: initial state dimension does not match model");
    }
    if (options.validate_input) {
        require_density_matrix(rho0);
    }
    const MasterGenerator gen(model);
    MasterResult out;
    static_cast<DensityEvolution&>(out) = integrate_master(gen, rho0, grid);
    out.step = grid.step();

    if (options.validate_input) {
        for (std::size_t k = 0; k < out.states.size(); ++k) {
            const double dev = std::abs(out.diagnostic[k] - 1.0);
            if (dev > options.trace_tolerance) {
                std::ostringstream msg;
                msg << "solve_master: trace deviates from 1 by " << dev << " at t = " << out.times[k];
                throw NumericalError(msg.str());
            }
        }
    }
    if (options.check_convergence) {
        const auto fine = integrate_master(gen, rho0, grid.refined());
        out.step_halving_delta = trace_distance(out.final_state(), fine.final_state());
        if (out.step_halving_delta > options.convergence_tolerance) {
            std::ostringstream msg;
            msg << "solve_master: step-halving check failed, final-state trace distance "
                << out.step_halving_delta << " exceeds " << options.convergence_tolerance;
            throw NumericalError(msg.str());
        }
    }
    return out;
}

namespace {

double state_fidelity(const Ket& a, const Ket& b) {
    return std::norm(a.dot(b)) / (a.squaredNorm() * b.squaredNorm());
}

}  // namespace

double strong_driving_infidelity(const SystemParams& p, double duration_ns, std::size_t n_intervals) {
    if (duration_ns < 0.0) {
        throw std::invalid_argument("strong_driving_infidelity: negative duration");
    }
    if (duration_ns == 0.0) {
        return 0.0;
    }
    const auto layout = HilbertLayout::tripartite(p.n_max);
    const auto full = build_h_full_rotated(p, layout);
    auto reduced = build_h_eff_drive(p, layout);
    reduced.add(build_h_drive_free(p, layout));

    // |0>_1 |0>_L |1>_2
    const Ket psi0 = basis_ket(layout.total_dim(), layout.index_of({0, 0, 1}));
    const double norm = std::max(full.norm_bound(), reduced.norm_bound());
    const auto grid = TimeGrid::covering(0.0, duration_ns, n_intervals, norm);
    const auto a = propagate_schrodinger(full, psi0, grid);
    const auto b = propagate_schrodinger(reduced, psi0, grid);
    return std::max(0.0, 1.0 - state_fidelity(a.final_state(), b.final_state()));
}

StrongDrivingReport validate_strong_driving(const SystemParams& p, double duration_ns,
                                            const std::vector<double>& ratios) {
    p.require_detuning();
    const double delta = std::abs(p.detuning());
    const double g_max = std::max(p.g1, p.g2);
    StrongDrivingReport report;
    for (double ratio : ratios) {
        SystemParams q = p;
        // Omega = eps * G / delta, evaluated for the larger coupling.
        q.epsilon = g_max > 0.0 ? ratio * std::max(delta, g_max) * delta / g_max : 0.0;
        report.drive_ratios.push_back(ratio);
        report.epsilons.push_back(q.epsilon);
        report.infidelities.push_back(strong_driving_infidelity(q, duration_ns));
    }
    for (std::size_t k = 1; k < report.infidelities.size(); ++k) {
        if (!(report.infidelities[k] < report.infidelities[k - 1])) report.monotone = false;
    }
    return report;
}

DispersiveReport validate_dispersive(const SystemParams& p, std::size_t n_intervals) {
    const double lambda = to_angular(lambda_eff(p));
    if (lambda == 0.0) {
        throw std::invalid_argument("validate_dispersive: zero effective coupling");
    }
    const auto layout = HilbertLayout::tripartite(p.n_max);
    DispersiveReport report;
    report.swap_period_ns = kPi / (2.0 * std::abs(lambda));

    const HermitianPropagator full(build_h_tripartite_static(p, layout));
    const HermitianPropagator eff(build_h_e(p));
    const Ket full0 = basis_ket(layout.total_dim(), layout.index_of({0, 0, 1}));
    const Ket eff0 = basis_ket(4, 1);  // |01>

    for (std::size_t k = 0; k <= n_intervals; ++k) {
        const double t = report.swap_period_ns * static_cast<double>(k) / static_cast<double>(n_intervals);
        const ComplexMatrix reduced = partial_trace(projector(full.apply(full0, t)), layout, {0, 2});
        const Ket target = eff.apply(eff0, t);
        const double f = (target.adjoint() * reduced * target)(0, 0).real();
        report.times.push_back(t);
        report.fidelities.push_back(f);
        report.min_fidelity = std::min(report.min_fidelity, f);
    }
    return report;
}

}  // namespace spinjj
