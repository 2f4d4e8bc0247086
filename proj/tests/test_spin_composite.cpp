#include <doctest.h>

#include <cmath>
#include <numbers>

#include "support/generators.hpp"
#include "weylchsh/spin_composite.hpp"

using namespace weylchsh;

namespace {
constexpr double kPi = std::numbers::pi;
const double kSpinTarget = 2.0 * std::sqrt(2.0) * (1.0 + std::sqrt(2.0)) / 3.0;

// Explicit entries; m index 0, 1, 2 for m = 1, -1, 0, s = 0 for +.
Eigen::MatrixXcd reference_operator(double a1, double a2) {
    auto lib = [](int m, int s) { return 3 * s + m; };
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(6, 6);
    auto e = [](double x) { return std::polar(1.0, x); };
    a(lib(1, 1), lib(0, 0)) = e(a1 + a2);
    a(lib(0, 1), lib(1, 0)) = e(-(a1 - a2));
    a(lib(2, 1), lib(2, 0)) = e(a2);
    return a + a.adjoint().eval();
}
} // namespace

TEST_CASE("composite operator is a Hermitian involution") {
    gen::Source src(11);
    for (int i = 0; i < 20; ++i) {
        const double a1 = src.uniform(-10, 10), a2 = src.uniform(-10, 10);
        const OperatorMatrix a = composite_operator(a1, a2);
        CHECK(a.is_hermitian());
        CHECK(a.is_unitary());
        const Eigen::MatrixXcd& m = a.data();
        CHECK((m * m - Eigen::MatrixXcd::Identity(6, 6)).norm() < 1e-14);
        CHECK((m - reference_operator(a1, a2)).norm() < 1e-14);
    }
}

TEST_CASE("double singlet is normalized and antisymmetric under A <-> B") {
    const Eigen::VectorXcd psi = spin_state(SpinState::double_singlet);
    CHECK(std::abs(psi.norm() - 1.0) < 1e-15);
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) CHECK(std::abs(psi(6 * a + b) + psi(6 * b + a)) < 1e-15);
}

TEST_CASE("correlator: matrix path vs closed form") {
    gen::Source src(12);
    for (int i = 0; i < 200; ++i) {
        const double a1 = src.uniform(-7, 7), a2 = src.uniform(-7, 7), b1 = src.uniform(-7, 7), b2 = src.uniform(-7, 7);
        CHECK(std::abs(correlator_matrix(a1, a2, b1, b2, SpinState::double_singlet) -
                       correlator_closed_form(a1, a2, b1, b2)) < 1e-13);
    }
    CHECK(correlator_closed_form(0, 0, 0, 0) == doctest::Approx(-1.0));
    CHECK(std::abs(correlator_closed_form(0, 0, kPi / 4, kPi / 4) + (1 + std::sqrt(2.0)) * std::sqrt(2.0) / 6) < 1e-15);
}

TEST_CASE("reference angles give 2 sqrt 2 (1 + sqrt 2) / 3") {
    const AngleSet r = reference_angles();
    CHECK(std::abs(chsh_spin(r, SpinState::double_singlet) - kSpinTarget) < 1e-12);
    CHECK(std::abs(chsh_spin_closed_form(r) + kSpinTarget) < 1e-12);
    CHECK(std::abs(chsh_spin_signed(r, SpinState::double_singlet) - chsh_spin_closed_form(r)) < 1e-13);
}

TEST_CASE("spin Bell operator") {
    const OperatorMatrix c = spin_bell_operator(reference_angles());
    CHECK(c.dimension() == 36);
    CHECK(c.shape() == std::vector<int>{2, 3, 2, 3});
    CHECK(c.is_hermitian());
    CHECK(operator_norm(c) <= 2 * std::sqrt(2.0) + 1e-12);
    const Eigen::VectorXcd psi = spin_state(SpinState::double_singlet);
    CHECK(std::abs((psi.adjoint() * c.data() * psi)(0).real() - chsh_spin_closed_form(reference_angles())) < 1e-13);
}

TEST_CASE("product state never exceeds 2") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 500; ++i) {
        const AngleSet a = random_angles(rng);
        CHECK(chsh_spin(a, SpinState::product) <= 2.0 + 1e-12);
    }
}

TEST_CASE("angle helpers") {
    AngleSet a = reference_angles();
    a.beta2p = -kPi / 4;
    const AngleSet r = a.reduced();
    CHECK(std::abs(r.beta2p - 7 * kPi / 4) < 1e-15);
    CHECK(std::abs(chsh_spin(r, SpinState::double_singlet) - chsh_spin(a, SpinState::double_singlet)) < 1e-13);
    a.alpha1 = std::nan("");
    CHECK_FALSE(a.is_finite());
}
