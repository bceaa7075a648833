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

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace spinjj {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using Ket = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

/// Raised when a numerical check (hermiticity, convergence, stability) fails.
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Ordered tensor-product factors. Tri-partite states use
/// [ensemble-1 (2), junction (n_max+1), ensemble-2 (2)].
class HilbertLayout {
  public:
    explicit HilbertLayout(std::vector<std::size_t> factor_dims);

    static HilbertLayout tripartite(std::size_t n_max);
    static HilbertLayout two_qubit() { return HilbertLayout({2, 2}); }

    const std::vector<std::size_t>& dims() const { return dims_; }
    std::size_t size() const { return dims_.size(); }
    std::size_t dim(std::size_t factor) const { return dims_.at(factor); }
    std::size_t total_dim() const { return total_; }

    /// Embeds a single-factor operator as I ⊗ ... ⊗ op ⊗ ... ⊗ I.
    ComplexMatrix lift(const ComplexMatrix& op, std::size_t factor) const;

    /// Index of the product basis state with the given per-factor digits.
    std::size_t index_of(const std::vector<std::size_t>& digits) const;

  private:
    std::vector<std::size_t> dims_;
    std::size_t total_ = 1;
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

struct BosonOps {
    ComplexMatrix a;
    ComplexMatrix a_dag;
};

/// Truncated ladder operators on Fock levels 0..n_max.
BosonOps boson_ops(std::size_t n_max);

// Two-level operators in the basis {|0>, |1>}, sigma_z = |1><1| - |0><0|.
ComplexMatrix identity(std::size_t d);
ComplexMatrix sigma_plus();   // |1><0|
ComplexMatrix sigma_minus();  // |0><1|
ComplexMatrix sigma_x();
ComplexMatrix sigma_y();
ComplexMatrix sigma_z();
ComplexMatrix excited_projector();  // |1><1|

/// max_ij |H - H^dagger|
double hermiticity_deviation(const ComplexMatrix& h);

/// Largest absolute row sum; an upper bound on the spectral norm.
double max_row_sum_norm(const ComplexMatrix& m);

inline constexpr double kHermiticityTolerance = 1e-10;

/// exp(-i H t) through the hermitian eigendecomposition of H.
/// Throws NumericalError when H deviates from hermiticity by more than 1e-10.
ComplexMatrix expm_unitary(const ComplexMatrix& h, double t);

/// Reduced state on the factors listed in `keep` (kept in layout order).
ComplexMatrix partial_trace(const ComplexMatrix& rho, const HilbertLayout& layout,
                            const std::vector<std::size_t>& keep);

/// Density matrix |psi><psi|.
ComplexMatrix projector(const Ket& psi);

/// Computational basis vector e_k of dimension d.
Ket basis_ket(std::size_t d, std::size_t k);

}  // namespace spinjj
