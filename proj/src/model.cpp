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

#include "spinjj/model.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace spinjj {

namespace {

void require_nonnegative(double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
        std::ostringstream msg;
        msg << "parameter '" << name << "' must be finite and nonnegative, got " << v;
        throw std::invalid_argument(msg.str());
    }
}

void require_tripartite(const SystemParams& p, const HilbertLayout& layout) {
    const auto& d = layout.dims();
    if (d.size() != 3 || d[0] != 2 || d[2] != 2 || d[1] != p.n_max + 1) {
        throw std::invalid_argument("layout must be [2, n_max+1, 2] for the tri-partite model");
    }
}

struct TripartiteOps {
    ComplexMatrix a, a_dag;
    ComplexMatrix sp[2], sm[2], sx[2], sz[2];
};

TripartiteOps tripartite_ops(const SystemParams& p, const HilbertLayout& layout) {
    require_tripartite(p, layout);
    const auto [a, a_dag] = boson_ops(p.n_max);
    TripartiteOps ops;
    ops.a = layout.lift(a, 1);
    ops.a_dag = layout.lift(a_dag, 1);
    const std::size_t ensemble_factor[2] = {0, 2};
    for (int j = 0; j < 2; ++j) {
        ops.sp[j] = layout.lift(sigma_plus(), ensemble_factor[j]);
        ops.sm[j] = layout.lift(sigma_minus(), ensemble_factor[j]);
        ops.sx[j] = layout.lift(sigma_x(), ensemble_factor[j]);
        ops.sz[j] = layout.lift(sigma_z(), ensemble_factor[j]);
    }
    return ops;
}

// Couplings in rad/ns.
std::array<Complex, 2> angular_couplings(const SystemParams& p) {
    return {Complex(to_angular(p.g1), 0.0), to_angular(1.0) * p.coupling2()};
}

}  // namespace

void SystemParams::validate() const {
    require_nonnegative(omega, "omega");
    require_nonnegative(omega10, "omega10");
    require_nonnegative(g1, "g1");
    require_nonnegative(g2, "g2");
    require_nonnegative(epsilon, "epsilon");
    require_nonnegative(omega_d, "omega_d");
    require_nonnegative(kappa, "kappa");
    require_nonnegative(gamma, "gamma");
    require_nonnegative(gamma1, "gamma1");
    require_nonnegative(gamma2, "gamma2");
    if (!std::isfinite(g2_phase)) {
        throw std::invalid_argument("parameter 'g2_phase' must be finite");
    }
    if (n_max < 1) {
        throw std::invalid_argument("parameter 'n_max' must be >= 1");
    }
    if (e_c) require_nonnegative(*e_c, "e_c");
    if (e_j) require_nonnegative(*e_j, "e_j");
}

void SystemParams::require_detuning() const {
    if (detuning() == 0.0) {
        throw std::invalid_argument("detuning omega - omega10 is zero; dispersive quantities are undefined");
    }
}

PhysicalEstimate estimate_coupling(double i0, double r, double n_spins) {
    if (!(i0 > 0.0) || !(r > 0.0) || !(n_spins >= 1.0)) {
        throw std::invalid_argument("estimate_coupling: need i0 > 0, r > 0, n_spins >= 1");
    }
    PhysicalEstimate e;
    e.i0 = i0;
    e.r = r;
    e.n_spins = n_spins;
    e.b_field = kMu0 * i0 / (4.0 * kPi * r);
    const double b_mt = e.b_field * 1e3;
    e.g_single = 2.0 * kGeMuB * b_mt;
    e.g_collective = std::sqrt(n_spins) * e.g_single;
    return e;
}

double lambda_eff(const SystemParams& p) {
    const double g2 = std::abs(p.coupling2());
    if (std::abs(p.g1 - g2) > 1e-12 * std::max(std::abs(p.g1), g2)) {
        throw std::invalid_argument("lambda_eff: requires equal couplings g1 == g2");
    }
    p.require_detuning();
    const double g = to_angular(p.g1);
    return from_angular(g * g / to_angular(p.detuning()));
}

double plasma_frequency(double e_c, double e_j) {
    if (!(e_c > 0.0) || !(e_j > 0.0)) {
        throw std::invalid_argument("plasma_frequency: energies must be positive");
    }
    return std::sqrt(8.0 * e_c * e_j);
}

TimeDependentOperator::TimeDependentOperator(ComplexMatrix constant) { add(std::move(constant)); }

void TimeDependentOperator::add(ComplexMatrix op, Complex coeff, double freq) {
    if (op.rows() != op.cols()) {
        throw std::invalid_argument("TimeDependentOperator: term is not square");
    }
    if (dim_ == 0) {
        dim_ = op.rows();
    } else if (op.rows() != dim_) {
        throw std::invalid_argument("TimeDependentOperator: term dimension mismatch");
    }
    terms_.push_back({std::move(op), coeff, freq});
}

ComplexMatrix TimeDependentOperator::operator()(double t) const {
    ComplexMatrix out = ComplexMatrix::Zero(dim_, dim_);
    for (const auto& term : terms_) {
        const Complex c = term.freq == 0.0 ? term.coeff : term.coeff * std::exp(kI * term.freq * t);
        out.noalias() += c * term.op;
    }
    return out;
}

bool TimeDependentOperator::is_constant() const {
    for (const auto& term : terms_) {
        if (term.freq != 0.0) return false;
    }
    return true;
}

double TimeDependentOperator::norm_bound() const {
    double n = 0.0;
    for (const auto& term : terms_) {
        n += std::abs(term.coeff) * max_row_sum_norm(term.op);
    }
    return n;
}

void LindbladModel::validate() const {
    for (const auto& c : collapse) {
        if (!(c.rate >= 0.0)) {
            throw std::invalid_argument("LindbladModel: negative collapse rate");
        }
        if (c.op.rows() != dim() || c.op.cols() != dim()) {
            throw std::invalid_argument("LindbladModel: collapse operator dimension mismatch");
        }
    }
}

ComplexMatrix build_h_int(const SystemParams& p, const HilbertLayout& layout) {
    const auto ops = tripartite_ops(p, layout);
    const auto g = angular_couplings(p);
    ComplexMatrix h = ComplexMatrix::Zero(ops.a.rows(), ops.a.cols());
    for (int j = 0; j < 2; ++j) {
        h += g[j] * ops.a * ops.sp[j] + std::conj(g[j]) * ops.a_dag * ops.sm[j];
    }
    return h;
}

ComplexMatrix build_h_drive_free(const SystemParams& p, const HilbertLayout& layout) {
    p.require_detuning();
    const auto ops = tripartite_ops(p, layout);
    const auto g = angular_couplings(p);
    const double delta = to_angular(p.detuning());
    const double eps = to_angular(p.epsilon);
    ComplexMatrix h = ComplexMatrix::Zero(ops.a.rows(), ops.a.cols());
    for (int j = 0; j < 2; ++j) {
        h += (eps * std::abs(g[j]) / delta) * ops.sx[j];
    }
    return h;
}

TimeDependentOperator build_h_full_rotated(const SystemParams& p, const HilbertLayout& layout) {
    const auto ops = tripartite_ops(p, layout);
    const auto g = angular_couplings(p);
    const double delta = to_angular(p.detuning());
    TimeDependentOperator h(build_h_drive_free(p, layout));
    for (int j = 0; j < 2; ++j) {
        h.add(ops.sp[j] * ops.a, g[j], -delta);
        h.add(ops.sm[j] * ops.a_dag, std::conj(g[j]), delta);
    }
    return h;
}

TimeDependentOperator build_h_eff_drive(const SystemParams& p, const HilbertLayout& layout) {
    p.require_detuning();
    const auto ops = tripartite_ops(p, layout);
    const auto g = angular_couplings(p);
    const double delta = to_angular(p.detuning());
    TimeDependentOperator h;
    for (int j = 0; j < 2; ++j) {
        h.add(ops.sx[j] * ops.a, 0.5 * g[j], -delta);
        h.add(ops.sx[j] * ops.a_dag, 0.5 * std::conj(g[j]), delta);
    }
    return h;
}

ComplexMatrix build_h_e(const SystemParams& p) {
    p.require_detuning();
    const auto g = angular_couplings(p);
    const double delta = to_angular(p.detuning());
    const ComplexMatrix i2 = identity(2);
    const ComplexMatrix n1 = kron(excited_projector(), i2);
    const ComplexMatrix n2 = kron(i2, excited_projector());
    const ComplexMatrix hop = kron(sigma_plus(), sigma_minus());  // |10><01|
    const Complex exchange = g[0] * std::conj(g[1]) / delta;
    return (std::norm(g[0]) / delta) * n1 + (std::norm(g[1]) / delta) * n2 + exchange * hop +
           std::conj(exchange) * ComplexMatrix(hop.adjoint());
}

ComplexMatrix build_h_c(const SystemParams& p) {
    const double gamma = to_angular(p.gamma);
    const ComplexMatrix i2 = identity(2);
    const ComplexMatrix excited = kron(excited_projector(), i2) + kron(i2, excited_projector());
    return build_h_e(p) - kI * (0.5 * gamma) * excited;
}

ComplexMatrix build_h_tripartite_static(const SystemParams& p, const HilbertLayout& layout) {
    p.require_detuning();
    const auto ops = tripartite_ops(p, layout);
    const double delta = to_angular(p.detuning());
    return -delta * (ops.a_dag * ops.a) + build_h_int(p, layout);
}

LindbladModel build_lindblad(const SystemParams& p, GateKind which) {
    p.validate();
    LindbladModel model;
    if (which == GateKind::PhaseGate) {
        const auto layout = HilbertLayout::tripartite(p.n_max);
        const auto ops = tripartite_ops(p, layout);
        model.hamiltonian = build_h_eff_drive(p, layout);
        model.hamiltonian.add(build_h_drive_free(p, layout));
        model.collapse.push_back({to_angular(p.kappa), ops.a, CollapseForm::Standard});
        for (int j = 0; j < 2; ++j) {
            model.collapse.push_back({to_angular(p.gamma1), ops.sz[j], CollapseForm::AsWritten});
            model.collapse.push_back({to_angular(p.gamma2), ops.sm[j], CollapseForm::Standard});
        }
    } else {
        const auto layout = HilbertLayout::two_qubit();
        model.hamiltonian = TimeDependentOperator(build_h_e(p));
        for (std::size_t j = 0; j < 2; ++j) {
            model.collapse.push_back({to_angular(p.gamma1), layout.lift(sigma_z(), j), CollapseForm::AsWritten});
            model.collapse.push_back({to_angular(p.gamma2), layout.lift(sigma_minus(), j), CollapseForm::Standard});
        }
    }
    model.validate();
    return model;
}

std::string_view to_string(GateKind kind) {
    return kind == GateKind::PhaseGate ? "phase-gate" : "swap-gate";
}

}  // namespace spinjj
