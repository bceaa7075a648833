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

// Deliberately naive reference implementations used as test oracles. None of
// these call into the library's numerical kernels.

#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "spinjj/model.hpp"

namespace oracle {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            for (Eigen::Index k = 0; k < b.rows(); ++k)
                for (Eigen::Index l = 0; l < b.cols(); ++l)
                    out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return out;
}

// exp(A) by scaling and squaring around a long Taylor series.
inline Matrix expm_taylor(const Matrix& a) {
    double norm = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) norm = std::max(norm, a.row(i).cwiseAbs().sum());
    int squarings = 0;
    while (norm > 0.25) {
        norm /= 2.0;
        ++squarings;
    }
    const Matrix scaled = a / std::pow(2.0, squarings);
    Matrix term = Matrix::Identity(a.rows(), a.cols());
    Matrix sum = term;
    for (int k = 1; k < 30; ++k) {
        term = term * scaled / static_cast<double>(k);
        sum += term;
    }
    for (int s = 0; s < squarings; ++s) sum = sum * sum;
    return sum;
}

// Partial trace by explicit digit enumeration over all (row, col) pairs.
inline Matrix partial_trace(const Matrix& rho, const std::vector<std::size_t>& dims,
                            const std::vector<bool>& keep) {
    const std::size_t n = dims.size();
    auto digits_of = [&](std::size_t idx) {
        std::vector<std::size_t> d(n);
        for (std::size_t f = n; f-- > 0;) {
            d[f] = idx % dims[f];
            idx /= dims[f];
        }
        return d;
    };
    auto kept_index = [&](const std::vector<std::size_t>& d) {
        std::size_t idx = 0;
        for (std::size_t f = 0; f < n; ++f)
            if (keep[f]) idx = idx * dims[f] + d[f];
        return idx;
    };
    std::size_t kept_dim = 1;
    for (std::size_t f = 0; f < n; ++f)
        if (keep[f]) kept_dim *= dims[f];
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(kept_dim), static_cast<Eigen::Index>(kept_dim));
    for (Eigen::Index i = 0; i < rho.rows(); ++i) {
        const auto di = digits_of(static_cast<std::size_t>(i));
        for (Eigen::Index j = 0; j < rho.cols(); ++j) {
            const auto dj = digits_of(static_cast<std::size_t>(j));
            bool traced_equal = true;
            for (std::size_t f = 0; f < n; ++f)
                if (!keep[f] && di[f] != dj[f]) traced_equal = false;
            if (traced_equal) {
                out(static_cast<Eigen::Index>(kept_index(di)), static_cast<Eigen::Index>(kept_index(dj))) += rho(i, j);
            }
        }
    }
    return out;
}

// Textbook Lindblad right-hand side, valid for any (not necessarily hermitian) rho.
inline Matrix lindblad_rhs(const spinjj::LindbladModel& model, const Matrix& rho, double t) {
    Matrix h = Matrix::Zero(rho.rows(), rho.cols());
    for (const auto& term : model.hamiltonian.terms()) {
        h += term.coeff * std::exp(Complex(0.0, term.freq * t)) * term.op;
    }
    const Complex i(0.0, 1.0);
    Matrix out = -i * (h * rho - rho * h);
    for (const auto& c : model.collapse) {
        const Matrix& l = c.op;
        const Matrix ld = l.adjoint();
        if (c.form == spinjj::CollapseForm::Standard) {
            out += c.rate * (l * rho * ld - 0.5 * (ld * l * rho + rho * ld * l));
        } else {
            out += 0.5 * c.rate * (l * rho * ld - rho);
        }
    }
    return out;
}

inline Matrix random_matrix(Eigen::Index d, std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix m(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) m(i, j) = Complex(n(rng), n(rng));
    return m;
}

inline Matrix random_hermitian(Eigen::Index d, std::mt19937_64& rng) {
    const Matrix m = random_matrix(d, rng);
    return 0.5 * (m + m.adjoint());
}

inline Matrix random_density(Eigen::Index d, std::mt19937_64& rng) {
    const Matrix m = random_matrix(d, rng);
    Matrix rho = m * m.adjoint();
    return rho / rho.trace();
}

// Superoperator of a Kraus channel in the column-stacking convention:
// vec(K rho K^+) = (conj(K) (x) K) vec(rho).
inline Matrix kraus_superoperator(const std::vector<Matrix>& kraus) {
    const auto d = kraus.front().rows();
    Matrix s = Matrix::Zero(d * d, d * d);
    for (const auto& k : kraus) s += kron(k.conjugate(), k);
    return s;
}

// Average gate fidelity of a Kraus channel against the identity:
// (sum_k |tr K_k|^2 + d) / (d (d + 1)).
inline double kraus_average_fidelity(const std::vector<Matrix>& kraus) {
    const double d = static_cast<double>(kraus.front().rows());
    double s = 0.0;
    for (const auto& k : kraus) s += std::norm(k.trace());
    return (s + d) / (d * (d + 1.0));
}

inline Matrix vec(const Matrix& m) {
    Matrix v(m.size(), 1);
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) v(j * m.rows() + i, 0) = m(i, j);
    return v;
}

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace oracle
