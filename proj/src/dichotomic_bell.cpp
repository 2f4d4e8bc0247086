#include "weylchsh/dichotomic_bell.hpp"

#include <cmath>
#include <string>

#include "weylchsh/errors.hpp"

namespace weylchsh {

namespace {

constexpr double kNormalizationTolerance = 1e-12;

void require_even_levels(int levels) {
    if (levels <= 0 || levels % 2 != 0) {
        throw InvalidArgument("number of levels must be even and positive: " + std::to_string(levels));
    }
}

void require_compatible(const DichotomicOperator& x, const DichotomicOperator& y) {
    if (x.levels() != y.levels() || x.fock_dimension() != y.fock_dimension()) {
        throw InvalidArgument("dichotomic operators live on different spaces");
    }
}

} // namespace

Label label_of(Observable obs) {
    switch (obs) {
    case Observable::A: return Label::f;
    case Observable::A_prime: return Label::f_prime;
    case Observable::B: return Label::jf;
    case Observable::B_prime: return Label::jf_prime;
    }
    throw InvalidArgument("unknown observable");
}

Party party_of(Observable obs) {
    return (obs == Observable::A || obs == Observable::A_prime) ? Party::alice : Party::bob;
}

TwoModeCoefficients frame_coefficients(const ModularParams& p, FieldFrame frame) {
    return frame == FieldFrame::wedge_local ? wedge_local_coefficients(p) : two_mode_coefficients(p);
}

Eigen::VectorXcd frame_reference_state(const ModularParams& p, const FockConfig& cfg, FieldFrame frame) {
    return frame == FieldFrame::wedge_local ? thermofield_vacuum(p.lambda, cfg) : fock_vacuum(cfg);
}

DichotomicOperator::DichotomicOperator(OperatorMatrix shift, int levels, Party party)
    : shift_(std::move(shift)), levels_(levels), party_(party) {
    require_even_levels(levels);
    if (!shift_.is_unitary()) {
        throw InvalidArgument("dichotomic operator needs a unitary shift");
    }
    shift_adjoint_ = shift_.data().adjoint();
}

const Eigen::MatrixXcd& DichotomicOperator::block_from(int from) const {
    return from % 2 == 0 ? shift_.data() : shift_adjoint_;
}

OperatorMatrix DichotomicOperator::embed() const {
    const Eigen::Index d = fock_dimension();
    const int n = levels_;
    const Eigen::Index n2 = static_cast<Eigen::Index>(n) * n;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d * n2, d * n2);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            const int from_level = party_ == Party::alice ? a : b;
            const Eigen::MatrixXcd& blk = block_from(from_level);
            const int ta = party_ == Party::alice ? partner(a) : a;
            const int tb = party_ == Party::bob ? partner(b) : b;
            const Eigen::Index col = a * n + b;
            const Eigen::Index row = ta * n + tb;
            for (Eigen::Index r = 0; r < d; ++r) {
                for (Eigen::Index c = 0; c < d; ++c) {
                    m(r * n2 + row, c * n2 + col) = blk(r, c);
                }
            }
        }
    }
    std::vector<int> shape = shift_.shape();
    shape.push_back(n);
    shape.push_back(n);
    return OperatorMatrix::make(std::move(m), std::move(shape), true);
}

Eigen::MatrixXcd DichotomicOperator::apply(const Eigen::MatrixXcd& psi) const {
    const int n = levels_;
    if (psi.rows() != fock_dimension() || psi.cols() != static_cast<Eigen::Index>(n) * n) {
        throw InvalidArgument("state shape does not match dichotomic operator");
    }
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(psi.rows(), psi.cols());
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (psi.col(a * n + b).isZero(0.0)) {
                continue;
            }
            const int from_level = party_ == Party::alice ? a : b;
            const int ta = party_ == Party::alice ? partner(a) : a;
            const int tb = party_ == Party::bob ? partner(b) : b;
            out.col(ta * n + tb).noalias() = block_from(from_level) * psi.col(a * n + b);
        }
    }
    return out;
}

DichotomicOperator build_dichotomic(Observable obs, const ModularParams& p, int levels,
                                    const FockConfig& cfg, FieldFrame frame) {
    require_even_levels(levels);
    validate_params(p);
    const TwoModeCoefficients coeffs = frame_coefficients(p, frame);
    OperatorMatrix w = weyl_matrix(smeared_field_matrix(coeffs[label_of(obs)], cfg));
    return DichotomicOperator(std::move(w), levels, party_of(obs));
}

DichotomicOperator singlet_adapted(const DichotomicOperator& op) {
    Eigen::MatrixXcd u = -op.shift().data().adjoint();
    OperatorMatrix shift = OperatorMatrix::make(std::move(u), op.shift().shape(), false, true);
    return DichotomicOperator(std::move(shift), op.levels(), op.party());
}

BipartiteState BipartiteState::finite(std::vector<cplx> coefficients) {
    require_even_levels(static_cast<int>(coefficients.size()));
    double norm = 0.0;
    for (const cplx& c : coefficients) {
        if (c == cplx{0.0, 0.0}) {
            throw InvalidArgument("state coefficients must be nonzero");
        }
        norm += std::norm(c);
    }
    if (std::abs(norm - 1.0) > kNormalizationTolerance) {
        throw InvalidArgument("state is not normalized: sum |c|^2 = " + std::to_string(norm));
    }
    BipartiteState s;
    s.coefficients_ = std::move(coefficients);
    return s;
}

BipartiteState BipartiteState::maximal(int levels) {
    require_even_levels(levels);
    const double c = 1.0 / std::sqrt(static_cast<double>(levels));
    std::vector<cplx> coeffs(static_cast<std::size_t>(levels), cplx{c, 0.0});
    // Normalization is exact up to rounding; bypass the tolerance on large N.
    BipartiteState s;
    s.coefficients_ = std::move(coeffs);
    return s;
}

BipartiteState BipartiteState::squeezed(double delta, int m_max) {
    if (!(delta > 0.0 && delta < 1.0)) {
        throw InvalidArgument("squeezing delta out of (0,1): " + std::to_string(delta));
    }
    if (m_max == 0) {
        m_max = squeezed_truncation(delta);
    }
    require_even_levels(m_max);
    std::vector<cplx> coeffs(static_cast<std::size_t>(m_max));
    const double scale = std::sqrt(1.0 - delta * delta);
    double power = 1.0;
    for (auto& c : coeffs) {
        c = scale * power;
        power *= delta;
    }
    BipartiteState s;
    s.coefficients_ = std::move(coeffs);
    s.delta_ = delta;
    s.squeezed_ = true;
    return s;
}

Eigen::VectorXcd BipartiteState::amplitudes() const {
    const int n = levels();
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n) * n);
    for (int j = 0; j < n; ++j) {
        v(j * n + j) = coefficients_[static_cast<std::size_t>(j)];
    }
    return v;
}

int squeezed_truncation(double delta) {
    if (!(delta > 0.0 && delta < 1.0)) {
        throw InvalidArgument("squeezing delta out of (0,1): " + std::to_string(delta));
    }
    int m = 1;
    while (std::pow(delta, 2.0 * m) >= 1e-12) {
        ++m;
    }
    return m + (m % 2);
}

Eigen::MatrixXcd product_state(const Eigen::VectorXcd& field, const Eigen::VectorXcd& ab, int levels) {
    if (ab.size() != static_cast<Eigen::Index>(levels) * levels) {
        throw InvalidArgument("AB amplitude vector has wrong length");
    }
    return field * ab.transpose();
}

BellAssembly make_assembly(const ModularParams& p, const BipartiteState& state, const FockConfig& cfg,
                           FieldFrame frame) {
    const int n = state.levels();
    BellAssembly out{build_dichotomic(Observable::A, p, n, cfg, frame),
                     build_dichotomic(Observable::A_prime, p, n, cfg, frame),
                     build_dichotomic(Observable::B, p, n, cfg, frame),
                     build_dichotomic(Observable::B_prime, p, n, cfg, frame),
                     Eigen::MatrixXcd()};
    out.psi = product_state(frame_reference_state(p, cfg, frame), state.amplitudes(), n);
    return out;
}

OperatorMatrix bell_operator(const BellAssembly& s) {
    require_compatible(s.a, s.a_prime);
    require_compatible(s.a, s.b);
    require_compatible(s.a, s.b_prime);
    if (s.a.party() != Party::alice || s.a_prime.party() != Party::alice || s.b.party() != Party::bob ||
        s.b_prime.party() != Party::bob) {
        throw InvalidArgument("assembly parties must be (alice, alice, bob, bob)");
    }
    const Eigen::Index d = s.a.fock_dimension();
    const int n = s.a.levels();
    const Eigen::Index n2 = static_cast<Eigen::Index>(n) * n;
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(d * n2, d * n2);
    for (int a = 0; a < n; ++a) {
        const Eigen::MatrixXcd plus = s.a.block_from(a) + s.a_prime.block_from(a);
        const Eigen::MatrixXcd minus = s.a.block_from(a) - s.a_prime.block_from(a);
        for (int b = 0; b < n; ++b) {
            const Eigen::MatrixXcd blk = plus * s.b.block_from(b) + minus * s.b_prime.block_from(b);
            const Eigen::Index col = a * n + b;
            const Eigen::Index row = DichotomicOperator::partner(a) * n + DichotomicOperator::partner(b);
            for (Eigen::Index r = 0; r < d; ++r) {
                for (Eigen::Index k = 0; k < d; ++k) {
                    c(r * n2 + row, k * n2 + col) = blk(r, k);
                }
            }
        }
    }
    std::vector<int> shape = s.a.shift().shape();
    shape.push_back(n);
    shape.push_back(n);
    // Hermiticity holds to rounding; symmetrize so the eigensolver sees an exact Hermitian input.
    Eigen::MatrixXcd sym = 0.5 * (c + c.adjoint());
    return OperatorMatrix::make(std::move(sym), std::move(shape), true);
}

OperatorMatrix bell_operator(const OperatorMatrix& a, const OperatorMatrix& a_prime,
                             const OperatorMatrix& b, const OperatorMatrix& b_prime) {
    const Eigen::Index d = a.dimension();
    if (a_prime.dimension() != d || b.dimension() != d || b_prime.dimension() != d) {
        throw InvalidArgument("bell_operator: dimension mismatch");
    }
    Eigen::MatrixXcd c = (a.data() + a_prime.data()) * b.data() + (a.data() - a_prime.data()) * b_prime.data();
    Eigen::MatrixXcd sym = 0.5 * (c + c.adjoint());
    return OperatorMatrix::make(std::move(sym), a.shape(), true);
}

double bell_expectation(const BellAssembly& s, const Eigen::MatrixXcd& psi) {
    const Eigen::MatrixXcd ax = s.a.apply(psi);
    const Eigen::MatrixXcd apx = s.a_prime.apply(psi);
    const Eigen::MatrixXcd bx = s.b.apply(psi);
    const Eigen::MatrixXcd bpx = s.b_prime.apply(psi);
    // <psi|X Y|psi> = <X psi|Y psi> for Hermitian X.
    const cplx total = ax.cwiseProduct(bx.conjugate()).sum() + apx.cwiseProduct(bx.conjugate()).sum() +
                       ax.cwiseProduct(bpx.conjugate()).sum() - apx.cwiseProduct(bpx.conjugate()).sum();
    // sum conj(y) x = conj(<x|y>); the total is real for Hermitian C.
    return total.real();
}

double bell_expectation(const BellAssembly& s) {
    return bell_expectation(s, s.psi);
}

double qm_reduction(std::span<const cplx> coefficients) {
    if (coefficients.size() % 2 != 0) {
        throw InvalidArgument("qm_reduction needs an even number of coefficients");
    }
    double r = 0.0;
    for (std::size_t k = 0; k + 1 < coefficients.size(); k += 2) {
        r += 2.0 * (std::conj(coefficients[k + 1]) * coefficients[k]).real();
    }
    return r;
}

double qm_reduction(const BipartiteState& state) {
    return qm_reduction(std::span<const cplx>(state.coefficients()));
}

double squeezed_factor(double delta) {
    if (!(delta >= 0.0 && delta <= 1.0)) {
        throw InvalidArgument("squeezing delta out of [0,1]: " + std::to_string(delta));
    }
    return 2.0 * delta / (1.0 + delta * delta);
}

double pairing_correlation(const BipartiteState& state) {
    const int n = state.levels();
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        x(DichotomicOperator::partner(j), j) = 1.0;
    }
    const Eigen::VectorXcd psi = state.amplitudes();
    // (X (x) X) psi, with psi reshaped as an N x N matrix M(a, b): X M X^T.
    Eigen::MatrixXcd m(n, n);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            m(a, b) = psi(a * n + b);
        }
    }
    const Eigen::MatrixXcd xm = x.cast<cplx>() * m * x.transpose().cast<cplx>();
    return (m.conjugate().cwiseProduct(xm)).sum().real();
}

double dichotomy_defect(const DichotomicOperator& x) {
    const Eigen::Index d = x.fock_dimension();
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
    double sq = 0.0;
    for (int l = 0; l < x.levels(); ++l) {
        sq += (x.block_from(DichotomicOperator::partner(l)) * x.block_from(l) - id).squaredNorm();
    }
    return std::sqrt(sq * x.levels());
}

double hermiticity_defect(const DichotomicOperator& x) {
    double sq = 0.0;
    for (int l = 0; l < x.levels(); ++l) {
        sq += (x.block_from(DichotomicOperator::partner(l)) - x.block_from(l).adjoint()).squaredNorm();
    }
    return std::sqrt(sq * x.levels());
}

double commutator_defect(const DichotomicOperator& x, const DichotomicOperator& y) {
    require_compatible(x, y);
    const int n = x.levels();
    double sq = 0.0;
    if (x.party() == y.party()) {
        for (int l = 0; l < n; ++l) {
            const int p = DichotomicOperator::partner(l);
            // Both map level l to its partner and back: XY and YX are diagonal in the level.
            sq += (x.block_from(p) * y.block_from(l) - y.block_from(p) * x.block_from(l)).squaredNorm();
        }
        return std::sqrt(sq * n);
    }
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            sq += (x.block_from(a) * y.block_from(b) - y.block_from(b) * x.block_from(a)).squaredNorm();
        }
    }
    return std::sqrt(sq);
}

} // namespace weylchsh
