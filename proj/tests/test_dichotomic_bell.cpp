#include <doctest.h>

#include <cmath>

#include "support/generators.hpp"
#include "weylchsh/dichotomic_bell.hpp"
#include "weylchsh/errors.hpp"
#include "weylchsh/weyl_correlator.hpp"

using namespace weylchsh;

namespace {

Eigen::MatrixXcd identity(Eigen::Index n) { return Eigen::MatrixXcd::Identity(n, n); }

} // namespace

TEST_CASE("dichotomic operators square to one and are Hermitian (dense check)") {
    const FockConfig cfg{3};
    for (int n : {2, 4}) {
        for (Observable obs : {Observable::A, Observable::A_prime, Observable::B, Observable::B_prime}) {
            const DichotomicOperator x = build_dichotomic(obs, kReferenceParams, n, cfg);
            const OperatorMatrix m = x.embed();
            CHECK(m.is_hermitian());
            CHECK((m.data() * m.data() - identity(m.dimension())).norm() < 1e-10);
            CHECK(dichotomy_defect(x) < 1e-10);
            CHECK(hermiticity_defect(x) == 0.0);
        }
    }
}

TEST_CASE("with f = 0 and N = 2 the operator is sigma_x on the level factor") {
    const FockConfig cfg{2};
    const DichotomicOperator a = build_dichotomic(Observable::A, {0.0, 0.3, 0.5}, 2, cfg);
    const Eigen::MatrixXcd m = a.embed().data();
    // index fock * 4 + 2a + b; sigma_x on a
    const Eigen::Index d = cfg.dimension();
    Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(4 * d, 4 * d);
    for (Eigen::Index k = 0; k < d; ++k) {
        for (int b = 0; b < 2; ++b) {
            expected(k * 4 + 2 + b, k * 4 + b) = 1.0;
            expected(k * 4 + b, k * 4 + 2 + b) = 1.0;
        }
    }
    CHECK((m - expected).norm() == 0.0);
}

TEST_CASE("odd or empty level counts are rejected") {
    CHECK_THROWS_AS(build_dichotomic(Observable::A, kReferenceParams, 3, FockConfig{2}), InvalidArgument);
    CHECK_THROWS_AS(build_dichotomic(Observable::B, kReferenceParams, 0, FockConfig{2}), InvalidArgument);
}

TEST_CASE("Alice and Bob commute in the wedge frame (dense and block-wise)") {
    const FockConfig cfg{4};
    const BellAssembly s = make_assembly(kReferenceParams, BipartiteState::maximal(2), cfg);
    for (const auto* x : {&s.a, &s.a_prime}) {
        for (const auto* y : {&s.b, &s.b_prime}) {
            const Eigen::MatrixXcd mx = x->embed().data();
            const Eigen::MatrixXcd my = y->embed().data();
            CHECK((mx * my - my * mx).norm() < 1e-10);
            CHECK(commutator_defect(*x, *y) < 1e-10);
        }
    }
}

TEST_CASE("block-wise defects match dense evaluation where they are nonzero") {
    const FockConfig cfg{3};
    const ModularParams p{0.7, 0.9, 0.6};
    const DichotomicOperator a = build_dichotomic(Observable::A, p, 2, cfg);
    const DichotomicOperator ap = build_dichotomic(Observable::A_prime, p, 2, cfg);
    const Eigen::MatrixXcd ma = a.embed().data();
    const Eigen::MatrixXcd map = ap.embed().data();
    CHECK(std::abs((ma * map - map * ma).norm() - commutator_defect(a, ap)) < 1e-12);
    CHECK(commutator_defect(a, ap) > 1e-3);

    // Global frame: truncation breaks Alice-Bob commutation, and the defect sees it.
    const DichotomicOperator ag = build_dichotomic(Observable::A, p, 2, cfg, FieldFrame::global_modes);
    const DichotomicOperator bg = build_dichotomic(Observable::B_prime, p, 2, cfg, FieldFrame::global_modes);
    const Eigen::MatrixXcd mag = ag.embed().data();
    const Eigen::MatrixXcd mbg = bg.embed().data();
    CHECK(std::abs((mag * mbg - mbg * mag).norm() - commutator_defect(ag, bg)) < 1e-12);
}

TEST_CASE("apply agrees with the dense embedding") {
    const FockConfig cfg{3};
    gen::Source src(11);
    const DichotomicOperator b = build_dichotomic(Observable::B_prime, {0.4, 1.2, 0.3}, 4, cfg);
    Eigen::MatrixXcd psi(cfg.dimension(), 16);
    for (Eigen::Index i = 0; i < psi.size(); ++i) psi(i) = cplx{src.normal(), src.normal()};
    const Eigen::MatrixXcd out = b.apply(psi);
    // dense: index fock * 16 + col
    Eigen::VectorXcd flat(psi.size());
    for (Eigen::Index r = 0; r < psi.rows(); ++r)
        for (Eigen::Index c = 0; c < 16; ++c) flat(r * 16 + c) = psi(r, c);
    const Eigen::VectorXcd dense = b.embed().data() * flat;
    double err = 0.0;
    for (Eigen::Index r = 0; r < psi.rows(); ++r)
        for (Eigen::Index c = 0; c < 16; ++c) err = std::max(err, std::abs(dense(r * 16 + c) - out(r, c)));
    CHECK(err < 1e-13);
}

TEST_CASE("Bell operator: structured build equals the generic dense product") {
    const FockConfig cfg{3};
    const BellAssembly s = make_assembly({0.5, 0.8, 0.6}, BipartiteState::maximal(2), cfg);
    const OperatorMatrix c1 = bell_operator(s);
    const OperatorMatrix c2 = bell_operator(s.a.embed(), s.a_prime.embed(), s.b.embed(), s.b_prime.embed());
    CHECK((c1.data() - c2.data()).norm() < 1e-12);
    CHECK(c1.is_hermitian());
}

TEST_CASE("Bell operator with all four operators equal is 2 A B") {
    const FockConfig cfg{3};
    const BellAssembly s = make_assembly({0.5, 0.8, 0.6}, BipartiteState::maximal(2), cfg);
    const OperatorMatrix a = s.a.embed();
    const OperatorMatrix b = s.b.embed();
    const OperatorMatrix c = bell_operator(a, a, b, b);
    CHECK((c.data() - 2.0 * a.data() * b.data()).norm() < 1e-12);
    CHECK(operator_norm(c) <= 2.0 + 1e-10);
    CHECK_THROWS_AS(bell_operator(a, a, b, OperatorMatrix::make(Eigen::MatrixXcd::Identity(4, 4), {4})),
                    InvalidArgument);
}

TEST_CASE("reference point, N = 2 maximal state: oracle expectation matches <C0>") {
    const double c0 = chsh_closed_form(kReferenceParams);
    const BellAssembly s = make_assembly(kReferenceParams, BipartiteState::maximal(2), FockConfig{16});
    CHECK(std::abs(bell_expectation(s) - c0) < 1e-6);
    CHECK(std::abs(bell_expectation(s) - 2.14931) < 1e-5);
}

TEST_CASE("factorization <C> = r <C0> for seeded coefficient vectors") {
    gen::Source src(2024);
    // The reference state has a lambda^(2n) tail; lambda <= 0.6 is converged at n_max = 16.
    const FockConfig cfg{16};
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 * src.integer(1, 3);
        const BipartiteState state = BipartiteState::finite(src.coefficients(n));
        const ModularParams p = src.params(1.0, 0.05, 0.6);
        const BellAssembly s = make_assembly(p, state, cfg);
        const double r = qm_reduction(state);
        CHECK(std::abs(r) <= 1.0 + 1e-12);
        CHECK(std::abs(bell_expectation(s) - r * chsh_closed_form(p)) < 1e-6);
    }
}

TEST_CASE("qm_reduction") {
    const double c = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(qm_reduction(BipartiteState::finite({c, c})) - 1.0) < 1e-15);
    const std::vector<cplx> product{1.0, 0.0};
    CHECK(qm_reduction(product) == 0.0);
    CHECK(std::abs(qm_reduction(BipartiteState::squeezed(0.5)) - 0.8) < 1e-12);
}

TEST_CASE("squeezed factor") {
    CHECK(squeezed_factor(1.0) == 1.0);
    CHECK(squeezed_factor(0.0) == 0.0);
    CHECK(std::abs(squeezed_factor(0.5) - 0.8) < 1e-15);
    CHECK_THROWS_AS(squeezed_factor(1.1), InvalidArgument);
    CHECK_THROWS_AS(squeezed_factor(-0.1), InvalidArgument);
}

TEST_CASE("squeezed truncated-oscillator correlation") {
    for (double d : {0.1, 0.5, 0.9}) {
        const BipartiteState s = BipartiteState::squeezed(d);
        const int m = s.levels();
        CHECK(m % 2 == 0);
        CHECK(std::pow(d, 2.0 * m) < 1e-12);
        CHECK(std::pow(d, 2.0 * (m - 2)) >= 1e-12);
        // first omitted term of the geometric series, over (1 - d^2)
        const double bound = 2.0 * std::pow(d, 2 * m + 1) / (1.0 - d * d);
        CHECK(std::abs(pairing_correlation(s) - squeezed_factor(d)) <= bound + 1e-15);
        CHECK(std::abs(pairing_correlation(s) - squeezed_factor(d)) < 1e-8);
    }
    CHECK(std::abs(pairing_correlation(BipartiteState::squeezed(0.9)) - 0.9944751) < 1e-7);
}

TEST_CASE("squeezed state through the full Fock tensor space") {
    const double d = 0.5;
    const BipartiteState s = BipartiteState::squeezed(d);
    const ModularParams p{0.3, 0.6, 0.4};
    const FockConfig cfg{6};
    const BellAssembly bell = make_assembly(p, s, cfg);
    const BellAssembly ref = make_assembly(p, BipartiteState::maximal(2), cfg);
    CHECK(std::abs(bell_expectation(bell) - squeezed_factor(d) * bell_expectation(ref)) < 1e-10);
}

TEST_CASE("state validation") {
    CHECK_THROWS_AS(BipartiteState::finite({0.6, 0.6}), InvalidArgument);
    CHECK_THROWS_AS(BipartiteState::finite({1.0, 0.0}), InvalidArgument);
    CHECK_THROWS_AS(BipartiteState::finite({1.0}), InvalidArgument);
    CHECK_THROWS_AS(BipartiteState::squeezed(1.0), InvalidArgument);
    CHECK(squeezed_truncation(0.5) == 20);
}

TEST_CASE("singlet-adapted Bob operators give <C0> in the two-qubit singlet") {
    const FockConfig cfg{14};
    const ModularParams p = kReferenceParams;
    const BellAssembly s{build_dichotomic(Observable::A, p, 2, cfg), build_dichotomic(Observable::A_prime, p, 2, cfg),
                         singlet_adapted(build_dichotomic(Observable::B, p, 2, cfg)),
                         singlet_adapted(build_dichotomic(Observable::B_prime, p, 2, cfg)), Eigen::MatrixXcd()};
    Eigen::VectorXcd singlet = Eigen::VectorXcd::Zero(4);
    singlet(1) = std::sqrt(0.5);
    singlet(2) = -std::sqrt(0.5);
    const Eigen::MatrixXcd psi = product_state(thermofield_vacuum(p.lambda, cfg), singlet, 2);
    CHECK(std::abs(bell_expectation(s, psi) - chsh_closed_form(p)) < 1e-8);
    CHECK(dichotomy_defect(s.b) < 1e-10);
    CHECK(commutator_defect(s.a, s.b_prime) < 1e-10);
}
