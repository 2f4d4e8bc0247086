// fock_oracle.hpp: truncated two-mode bosonic Fock space
//
// Brute-force realization of smeared fields and Weyl unitaries. Basis states
// are occupation pairs (n1, n2) with n1, n2 <= n_max, index n1*(n_max+1)+n2.

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "weylchsh/modular_geometry.hpp"

namespace weylchsh {

struct FockConfig {
    int n_max{16};

    int mode_dimension() const { return n_max + 1; }
    int dimension() const { return mode_dimension() * mode_dimension(); }
};

FockConfig validate(const FockConfig& cfg);

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kUnitaryTolerance = 1e-10;

// Dense complex square matrix plus tensor-factor shape. The basis label of a
// row index is its mixed-radix decomposition over `shape` (most significant
// factor first). Flags are checked numerically when the matrix is built.
class OperatorMatrix {
public:
    OperatorMatrix() = default;

    // Throws NumericalError if a requested flag does not hold.
    static OperatorMatrix make(Eigen::MatrixXcd data, std::vector<int> shape,
                               bool hermitian = false, bool unitary = false);

    const Eigen::MatrixXcd& data() const { return data_; }
    const std::vector<int>& shape() const { return shape_; }
    Eigen::Index dimension() const { return data_.rows(); }
    bool is_hermitian() const { return hermitian_; }
    bool is_unitary() const { return unitary_; }

    std::vector<int> label(Eigen::Index index) const;

private:
    Eigen::MatrixXcd data_;
    std::vector<int> shape_;
    bool hermitian_{false};
    bool unitary_{false};
};

double hermiticity_defect(const Eigen::MatrixXcd& m);  // ||M - M^dag||_F
double unitarity_defect(const Eigen::MatrixXcd& m);    // ||M^dag M - 1||_F

struct LadderSet {
    OperatorMatrix a1, a1_dag, a2, a2_dag;
};

LadderSet ladder_matrices(const FockConfig& cfg);

// phi(c) = a(c) + a^dag(c) with a(c) = conj(c1) a1 + conj(c2) a2.
OperatorMatrix smeared_field_matrix(const ModePair& coeffs, const FockConfig& cfg);

// exp(i * field) through the eigendecomposition of the Hermitian input.
OperatorMatrix weyl_matrix(const OperatorMatrix& field);

// (1, 0, ..., 0)
Eigen::VectorXcd fock_vacuum(const FockConfig& cfg);

// Vacuum seen in the wedge-adapted frame: sqrt(1-l^2) sum_n (i l)^n |n, n>,
// cut at n_max and renormalized.
Eigen::VectorXcd thermofield_vacuum(double lambda, const FockConfig& cfg);

// <vac| F_1 F_2 ... F_k |vac> with the Fock vacuum.
cplx weyl_product_vev(std::span<const OperatorMatrix> factors, const FockConfig& cfg);

// <state| F_1 ... F_k |state>
cplx weyl_product_expectation(std::span<const OperatorMatrix> factors, const Eigen::VectorXcd& state);

// Largest singular value (largest |eigenvalue| for Hermitian input).
double operator_norm(const OperatorMatrix& m);
double operator_norm(const Eigen::MatrixXcd& m, bool hermitian);

// Indices whose occupations are all <= max_occupation.
std::vector<Eigen::Index> interior_indices(const FockConfig& cfg, int max_occupation);

// Spectral norm of the sub-block of m on interior_indices(cfg, max_occupation).
double interior_block_norm(const Eigen::MatrixXcd& m, const FockConfig& cfg, int max_occupation);

} // namespace weylchsh
