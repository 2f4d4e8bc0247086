#include "weylchsh/spin_composite.hpp"

#include <cmath>
#include <numbers>

#include "weylchsh/errors.hpp"

namespace weylchsh {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap(double x) {
    double r = std::fmod(x, kTwoPi);
    if (r < 0.0) {
        r += kTwoPi;
    }
    return r >= kTwoPi ? 0.0 : r;
}

int party_index(int m, int s) {
    const int mi = m == 1 ? 0 : (m == -1 ? 1 : 2);
    return 3 * s + mi;
}

Eigen::MatrixXcd as_party_matrix(const Eigen::VectorXcd& psi) {
    Eigen::MatrixXcd m(6, 6);
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) m(a, b) = psi(6 * a + b);
    return m;
}

// <psi| X (x) Y |psi> = tr(Psi^dag X Psi Y^T)
double product_expectation(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y, const Eigen::MatrixXcd& psi) {
    return (psi.adjoint() * x * psi * y.transpose()).trace().real();
}

Eigen::MatrixXcd kron6(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(36, 36);
    for (int r = 0; r < 6; ++r)
        for (int c = 0; c < 6; ++c) out.block(6 * r, 6 * c, 6, 6) = a(r, c) * b;
    return out;
}

} // namespace

AngleSet AngleSet::reduced() const {
    return {wrap(alpha1), wrap(alpha2), wrap(alpha1p), wrap(alpha2p),
            wrap(beta1),  wrap(beta2),  wrap(beta1p),  wrap(beta2p)};
}

bool AngleSet::is_finite() const {
    for (double x : {alpha1, alpha2, alpha1p, alpha2p, beta1, beta2, beta1p, beta2p}) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

AngleSet reference_angles() {
    const double pi = std::numbers::pi;
    return {0.0, 0.0, pi / 2.0, pi / 2.0, pi / 4.0, pi / 4.0, pi / 4.0, -pi / 4.0};
}

AngleSet random_angles(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
    AngleSet a;
    a.alpha1 = u(rng);
    a.alpha2 = u(rng);
    a.alpha1p = u(rng);
    a.alpha2p = u(rng);
    a.beta1 = u(rng);
    a.beta2 = u(rng);
    a.beta1p = u(rng);
    a.beta2p = u(rng);
    return a;
}

OperatorMatrix composite_operator(double a1, double a2) {
    if (!std::isfinite(a1) || !std::isfinite(a2)) {
        throw InvalidArgument("angles must be finite");
    }
    const cplx i{0.0, 1.0};
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(6, 6);
    // |1,+> <-> |-1,->, |-1,+> <-> |1,->, |0,+> <-> |0,->
    m(party_index(-1, 1), party_index(1, 0)) = std::exp(i * (a1 + a2));
    m(party_index(1, 1), party_index(-1, 0)) = std::exp(-i * (a1 - a2));
    m(party_index(0, 1), party_index(0, 0)) = std::exp(i * a2);
    m(party_index(1, 0), party_index(-1, 1)) = std::exp(-i * (a1 + a2));
    m(party_index(-1, 0), party_index(1, 1)) = std::exp(i * (a1 - a2));
    m(party_index(0, 0), party_index(0, 1)) = std::exp(-i * a2);
    return OperatorMatrix::make(std::move(m), {2, 3}, true, true);
}

Eigen::VectorXcd spin_state(SpinState state) {
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(36);
    if (state == SpinState::product) {
        // |1>_A |-1>_B (x) (|+->  - |-+>) / sqrt 2
        const double c = 1.0 / std::sqrt(2.0);
        psi(6 * party_index(1, 0) + party_index(-1, 1)) = c;
        psi(6 * party_index(1, 1) + party_index(-1, 0)) = -c;
        return psi;
    }
    // (|1,-1> - |0,0> + |-1,1>) / sqrt 3  (x)  (|+-> - |-+>) / sqrt 2
    const double c = 1.0 / std::sqrt(6.0);
    const int spin1[3][3] = {{1, -1, 1}, {0, 0, -1}, {-1, 1, 1}};
    const int half[2][3] = {{0, 1, 1}, {1, 0, -1}};
    for (const auto& t : spin1) {
        for (const auto& h : half) {
            psi(6 * party_index(t[0], h[0]) + party_index(t[1], h[1])) += c * t[2] * h[2];
        }
    }
    return psi;
}

double correlator_closed_form(double a1, double a2, double b1, double b2) {
    return -(1.0 + 2.0 * std::cos(a1 - b1)) * std::cos(a2 - b2) / 3.0;
}

double correlator_matrix(double a1, double a2, double b1, double b2, SpinState state) {
    const Eigen::MatrixXcd psi = as_party_matrix(spin_state(state));
    return product_expectation(composite_operator(a1, a2).data(), composite_operator(b1, b2).data(), psi);
}

OperatorMatrix spin_bell_operator(const AngleSet& s) {
    const Eigen::MatrixXcd a = composite_operator(s.alpha1, s.alpha2).data();
    const Eigen::MatrixXcd ap = composite_operator(s.alpha1p, s.alpha2p).data();
    const Eigen::MatrixXcd b = composite_operator(s.beta1, s.beta2).data();
    const Eigen::MatrixXcd bp = composite_operator(s.beta1p, s.beta2p).data();
    Eigen::MatrixXcd c = kron6(a + ap, b) + kron6(a - ap, bp);
    return OperatorMatrix::make(std::move(c), {2, 3, 2, 3}, true);
}

double chsh_spin_signed(const AngleSet& s, SpinState state) {
    if (!s.is_finite()) {
        throw InvalidArgument("angles must be finite");
    }
    const Eigen::MatrixXcd psi = as_party_matrix(spin_state(state));
    const Eigen::MatrixXcd a = composite_operator(s.alpha1, s.alpha2).data();
    const Eigen::MatrixXcd ap = composite_operator(s.alpha1p, s.alpha2p).data();
    const Eigen::MatrixXcd b = composite_operator(s.beta1, s.beta2).data();
    const Eigen::MatrixXcd bp = composite_operator(s.beta1p, s.beta2p).data();
    return product_expectation(a + ap, b, psi) + product_expectation(a - ap, bp, psi);
}

double chsh_spin(const AngleSet& angles, SpinState state) {
    return std::abs(chsh_spin_signed(angles, state));
}

double chsh_spin_closed_form(const AngleSet& s) {
    return correlator_closed_form(s.alpha1, s.alpha2, s.beta1, s.beta2) +
           correlator_closed_form(s.alpha1p, s.alpha2p, s.beta1, s.beta2) +
           correlator_closed_form(s.alpha1, s.alpha2, s.beta1p, s.beta2p) -
           correlator_closed_form(s.alpha1p, s.alpha2p, s.beta1p, s.beta2p);
}

} // namespace weylchsh
