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

#include "spinjj/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace spinjj {

HilbertLayout::HilbertLayout(std::vector<std::size_t> factor_dims) : dims_(std::move(factor_dims)) {
    if (dims_.empty()) {
        throw std::invalid_argument("HilbertLayout needs at least one factor");
    }
    for (auto d : dims_) {
        if (d == 0) {
            throw std::invalid_argument("HilbertLayout factor dimension must be positive");
        }
        total_ *= d;
    }
}

HilbertLayout HilbertLayout::tripartite(std::size_t n_max) {
    if (n_max < 1) {
        throw std::invalid_argument("Fock cutoff n_max must be >= 1");
    }
    return HilbertLayout({2, n_max + 1, 2});
}

ComplexMatrix HilbertLayout::lift(const ComplexMatrix& op, std::size_t factor) const {
    if (factor >= dims_.size()) {
        throw std::invalid_argument("lift: factor index out of range");
    }
    if (static_cast<std::size_t>(op.rows()) != dims_[factor] || op.rows() != op.cols()) {
        throw std::invalid_argument("lift: operator dimension does not match layout factor");
    }
    ComplexMatrix out = ComplexMatrix::Identity(1, 1);
    for (std::size_t f = 0; f < dims_.size(); ++f) {
        out = kron(out, f == factor ? op : identity(dims_[f]));
    }
    return out;
}

std::size_t HilbertLayout::index_of(const std::vector<std::size_t>& digits) const {
    if (digits.size() != dims_.size()) {
        throw std::invalid_argument("index_of: digit count does not match layout");
    }
    std::size_t idx = 0;
    for (std::size_t f = 0; f < dims_.size(); ++f) {
        if (digits[f] >= dims_[f]) {
            throw std::invalid_argument("index_of: digit out of range");
        }
        idx = idx * dims_[f] + digits[f];
    }
    return idx;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.size() == 0 || b.size() == 0) {
        throw std::invalid_argument("kron: empty operand");
    }
    const Eigen::Index p = a.rows(), q = a.cols(), r = b.rows(), s = b.cols();
    ComplexMatrix out(p * r, q * s);
    for (Eigen::Index i = 0; i < p; ++i) {
        for (Eigen::Index j = 0; j < q; ++j) {
            out.block(i * r, j * s, r, s) = a(i, j) * b;
        }
    }
    return out;
}

BosonOps boson_ops(std::size_t n_max) {
    if (n_max < 1) {
        throw std::invalid_argument("boson_ops: n_max must be >= 1");
    }
    const auto d = static_cast<Eigen::Index>(n_max + 1);
    ComplexMatrix a = ComplexMatrix::Zero(d, d);
    for (Eigen::Index k = 0; k + 1 < d; ++k) {
        a(k, k + 1) = std::sqrt(static_cast<double>(k + 1));
    }
    ComplexMatrix a_dag = a.adjoint();
    return {std::move(a), std::move(a_dag)};
}

ComplexMatrix identity(std::size_t d) {
    return ComplexMatrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
}

ComplexMatrix sigma_plus() {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(1, 0) = 1.0;
    return m;
}

ComplexMatrix sigma_minus() {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 1) = 1.0;
    return m;
}

ComplexMatrix sigma_x() {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    return m;
}

ComplexMatrix sigma_y() {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 1) = -kI;
    m(1, 0) = kI;
    return m;
}

ComplexMatrix sigma_z() {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = -1.0;
    m(1, 1) = 1.0;
    return m;
}

ComplexMatrix excited_projector() {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(1, 1) = 1.0;
    return m;
}

double hermiticity_deviation(const ComplexMatrix& h) {
    if (h.rows() != h.cols()) {
        throw std::invalid_argument("hermiticity_deviation: matrix is not square");
    }
    return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

double max_row_sum_norm(const ComplexMatrix& m) {
    if (m.size() == 0) {
        return 0.0;
    }
    return m.cwiseAbs().rowwise().sum().maxCoeff();
}

ComplexMatrix expm_unitary(const ComplexMatrix& h, double t) {
    const double dev = hermiticity_deviation(h);
    if (dev > kHermiticityTolerance) {
        std::ostringstream msg;
        msg << "expm_unitary: generator is not hermitian (max |H - H^dagger| = " << dev << ")";
        throw NumericalError(msg.str());
    }
    // Symmetrize so the solver sees an exactly self-adjoint input.
    const ComplexMatrix hs = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hs);
    const auto& v = es.eigenvectors();
    Eigen::VectorXcd phases(v.cols());
    for (Eigen::Index k = 0; k < v.cols(); ++k) {
        phases(k) = std::exp(-kI * es.eigenvalues()(k) * t);
    }
    return v * phases.asDiagonal() * v.adjoint();
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, const HilbertLayout& layout,
                            const std::vector<std::size_t>& keep) {
    const auto total = static_cast<Eigen::Index>(layout.total_dim());
    if (rho.rows() != total || rho.cols() != total) {
        throw std::invalid_argument("partial_trace: density matrix dimension does not match layout");
    }
    if (keep.empty()) {
        throw std::invalid_argument("partial_trace: keep set is empty");
    }
    std::vector<bool> kept(layout.size(), false);
    for (auto f : keep) {
        if (f >= layout.size() || kept[f]) {
            throw std::invalid_argument("partial_trace: invalid or repeated factor index");
        }
        kept[f] = true;
    }

    std::vector<std::size_t> kept_dims, traced_dims;
    for (std::size_t f = 0; f < layout.size(); ++f) {
        (kept[f] ? kept_dims : traced_dims).push_back(layout.dim(f));
    }
    std::size_t dk = 1, dt = 1;
    for (auto d : kept_dims) dk *= d;
    for (auto d : traced_dims) dt *= d;

    // Full index from (kept index, traced index), digits interleaved back in layout order.
    auto full_index = [&](std::size_t ik, std::size_t it) {
        std::vector<std::size_t> digits(layout.size());
        for (std::size_t f = layout.size(); f-- > 0;) {
            if (kept[f]) {
                digits[f] = ik % layout.dim(f);
                ik /= layout.dim(f);
            } else {
                digits[f] = it % layout.dim(f);
                it /= layout.dim(f);
            }
        }
        return static_cast<Eigen::Index>(layout.index_of(digits));
    };

    std::vector<Eigen::Index> map(dk * dt);
    for (std::size_t ik = 0; ik < dk; ++ik) {
        for (std::size_t it = 0; it < dt; ++it) {
            map[ik * dt + it] = full_index(ik, it);
        }
    }

    ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
    for (std::size_t i = 0; i < dk; ++i) {
        for (std::size_t j = 0; j < dk; ++j) {
            Complex acc = 0.0;
            for (std::size_t t = 0; t < dt; ++t) {
                acc += rho(map[i * dt + t], map[j * dt + t]);
            }
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc;
        }
    }
    return out;
}

ComplexMatrix projector(const Ket& psi) { return psi * psi.adjoint(); }

Ket basis_ket(std::size_t d, std::size_t k) {
    if (k >= d) {
        throw std::invalid_argument("basis_ket: index out of range");
    }
    Ket v = Ket::Zero(static_cast<Eigen::Index>(d));
    v(static_cast<Eigen::Index>(k)) = 1.0;
    return v;
}

}  // namespace spinjj
