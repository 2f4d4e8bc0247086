#include "weylchsh/fock_oracle.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "weylchsh/errors.hpp"

namespace weylchsh {

namespace {

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
        for (Eigen::Index c = 0; c < a.cols(); ++c) {
            out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
        }
    }
    return out;
}

} // namespace

FockConfig validate(const FockConfig& cfg) {
    if (cfg.n_max < 1) {
        throw InvalidArgument("n_max must be >= 1: " + std::to_string(cfg.n_max));
    }
    return cfg;
}

double hermiticity_defect(const Eigen::MatrixXcd& m) {
    return (m - m.adjoint()).norm();
}

double unitarity_defect(const Eigen::MatrixXcd& m) {
    return (m.adjoint() * m - Eigen::MatrixXcd::Identity(m.rows(), m.cols())).norm();
}

OperatorMatrix OperatorMatrix::make(Eigen::MatrixXcd data, std::vector<int> shape,
                                    bool hermitian, bool unitary) {
    if (data.rows() != data.cols()) {
        throw InvalidArgument("operator matrix must be square");
    }
    const long product = std::accumulate(shape.begin(), shape.end(), 1L, std::multiplies<>());
    if (shape.empty() || product != data.rows()) {
        throw InvalidArgument("shape does not match matrix dimension " + std::to_string(data.rows()));
    }
    if (hermitian) {
        const double d = hermiticity_defect(data);
        if (d >= kHermitianTolerance) {
            throw NumericalError("matrix flagged Hermitian has defect " + std::to_string(d));
        }
    }
    if (unitary) {
        const double d = unitarity_defect(data);
        if (d >= kUnitaryTolerance) {
            throw NumericalError("matrix flagged unitary has defect " + std::to_string(d));
        }
    }
    OperatorMatrix m;
    m.data_ = std::move(data);
    m.shape_ = std::move(shape);
    m.hermitian_ = hermitian;
    m.unitary_ = unitary;
    return m;
}

std::vector<int> OperatorMatrix::label(Eigen::Index index) const {
    std::vector<int> out(shape_.size());
    auto rest = static_cast<long>(index);
    for (std::size_t k = shape_.size(); k-- > 0;) {
        out[k] = static_cast<int>(rest % shape_[k]);
        rest /= shape_[k];
    }
    return out;
}

LadderSet ladder_matrices(const FockConfig& cfg) {
    validate(cfg);
    const int d = cfg.mode_dimension();
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(d, d);
    for (int n = 1; n < d; ++n) {
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
    const std::vector<int> shape{d, d};

    Eigen::MatrixXcd a1 = kron(a, id);
    Eigen::MatrixXcd a2 = kron(id, a);
    LadderSet set;
    set.a1_dag = OperatorMatrix::make(a1.adjoint(), shape);
    set.a2_dag = OperatorMatrix::make(a2.adjoint(), shape);
    set.a1 = OperatorMatrix::make(std::move(a1), shape);
    set.a2 = OperatorMatrix::make(std::move(a2), shape);
    return set;
}

OperatorMatrix smeared_field_matrix(const ModePair& coeffs, const FockConfig& cfg) {
    const LadderSet ladder = ladder_matrices(cfg);
    Eigen::MatrixXcd annihilate =
        std::conj(coeffs[0]) * ladder.a1.data() + std::conj(coeffs[1]) * ladder.a2.data();
    Eigen::MatrixXcd field = annihilate + annihilate.adjoint();
    return OperatorMatrix::make(std::move(field), {cfg.mode_dimension(), cfg.mode_dimension()}, true);
}

OperatorMatrix weyl_matrix(const OperatorMatrix& field) {
    if (!field.is_hermitian()) {
        throw InvalidArgument("weyl_matrix requires a Hermitian field");
    }
    if (field.data().isZero(0.0)) {
        const auto d = field.dimension();
        return OperatorMatrix::make(Eigen::MatrixXcd::Identity(d, d), field.shape(), true, true);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(field.data());
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigendecomposition of smeared field failed");
    }
    const Eigen::VectorXcd phases = (cplx{0.0, 1.0} * solver.eigenvalues().cast<cplx>()).array().exp();
    Eigen::MatrixXcd w = solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
    return OperatorMatrix::make(std::move(w), field.shape(), false, true);
}

Eigen::VectorXcd fock_vacuum(const FockConfig& cfg) {
    validate(cfg);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(cfg.dimension());
    v(0) = 1.0;
    return v;
}

Eigen::VectorXcd thermofield_vacuum(double lambda, const FockConfig& cfg) {
    validate(cfg);
    if (!(lambda >= 0.0 && lambda < 1.0)) {
        throw InvalidArgument("lambda out of [0,1): " + std::to_string(lambda));
    }
    const int d = cfg.mode_dimension();
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(cfg.dimension());
    cplx amp{1.0, 0.0};
    const cplx step{0.0, lambda};
    for (int n = 0; n < d; ++n) {
        v(n * d + n) = amp;
        amp *= step;
    }
    v.normalize();
    return v;
}

cplx weyl_product_expectation(std::span<const OperatorMatrix> factors, const Eigen::VectorXcd& state) {
    Eigen::VectorXcd w = state;
    for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
        if (it->dimension() != w.size()) {
            throw InvalidArgument("dimension mismatch in Weyl product");
        }
        w = it->data() * w;
    }
    return state.dot(w);
}

cplx weyl_product_vev(std::span<const OperatorMatrix> factors, const FockConfig& cfg) {
    return weyl_product_expectation(factors, fock_vacuum(cfg));
}

double operator_norm(const Eigen::MatrixXcd& m, bool hermitian) {
    if (m.rows() != m.cols()) {
        throw InvalidArgument("operator_norm requires a square matrix");
    }
    if (m.size() == 0) {
        return 0.0;
    }
    if (hermitian) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
        if (solver.info() != Eigen::Success) {
            throw NumericalError("Hermitian eigensolver failed");
        }
        return solver.eigenvalues().cwiseAbs().maxCoeff();
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues()(0);
}

double operator_norm(const OperatorMatrix& m) {
    return operator_norm(m.data(), m.is_hermitian());
}

std::vector<Eigen::Index> interior_indices(const FockConfig& cfg, int max_occupation) {
    std::vector<Eigen::Index> out;
    const int d = cfg.mode_dimension();
    for (int n1 = 0; n1 < d; ++n1) {
        for (int n2 = 0; n2 < d; ++n2) {
            if (n1 <= max_occupation && n2 <= max_occupation) {
                out.push_back(static_cast<Eigen::Index>(n1) * d + n2);
            }
        }
    }
    return out;
}

double interior_block_norm(const Eigen::MatrixXcd& m, const FockConfig& cfg, int max_occupation) {
    const auto idx = interior_indices(cfg, max_occupation);
    const auto k = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXcd block(k, k);
    for (Eigen::Index r = 0; r < k; ++r) {
        for (Eigen::Index c = 0; c < k; ++c) {
            block(r, c) = m(idx[r], idx[c]);
        }
    }
    return operator_norm(block, false);
}

} // namespace weylchsh
