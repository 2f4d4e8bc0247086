// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "cli/commands.hpp"
#include "weylchsh/dichotomic_bell.hpp"
#include "weylchsh/jc_perturbation.hpp"
#include "weylchsh/optimizer.hpp"
#include "weylchsh/spin_composite.hpp"
#include "weylchsh/weyl_correlator.hpp"

using namespace weylchsh;

namespace {

constexpr double kReferenceC0 = 2.14931;

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Outcome reference_value() {
    const double v = chsh_correlator(kReferenceParams).value;
    const double d = std::abs(v - kReferenceC0);
    return {d < 5e-6, fmt("C0 = %.12f, |C0 - 2.14931| = %.3e (tol 5e-6)", v, d)};
}

Outcome oracle_equivalence() {
    const BipartiteState maximal = BipartiteState::maximal(2);
    const double closed = qm_reduction(maximal) * chsh_closed_form(kReferenceParams);
    std::string table;
    double previous = INFINITY, at16 = INFINITY;
    bool monotone = true;
    for (int n : {8, 12, 16, 20}) {
        const double v = bell_expectation(make_assembly(kReferenceParams, maximal, FockConfig{n}));
        const double e = std::abs(v - closed);
        monotone = monotone && e < previous;
        previous = e;
        if (n == 16) at16 = e;
        table += fmt(" n%d:%.2e", n, e);
    }
    return {at16 < 1e-6 && monotone, fmt("err(n_max=16) = %.3e (tol 1e-6), monotone=%s;", at16, monotone ? "yes" : "no") + table};
}

Outcome tsirelson_guardrail() {
    cli::RunConfig cfg;
    cfg.sweep.norm_check_n_max = 3;
    const cli::Report sweep = cli::cmd_sweep(cfg);
    const double sweep_norm = sweep.result["max_operator_norm"].get<double>();
    const long points = sweep.result["points"].get<long>();

    std::mt19937_64 rng(20240);
    std::uniform_real_distribution<double> eta(0.0, 3.0), lam(0.01, 0.99);
    std::uniform_int_distribution<int> nmax(2, 6), half_levels(1, 2);
    double random_norm = 0.0;
    for (int i = 0; i < 20; ++i) {
        const ModularParams p{eta(rng), eta(rng), lam(rng)};
        const int n = nmax(rng);
        const int levels = 2 * half_levels(rng);
        random_norm = std::max(random_norm,
                               operator_norm(bell_operator(make_assembly(p, BipartiteState::maximal(levels), FockConfig{n}))));
    }
    const double bound = kTsirelsonBound + 1e-9;
    return {sweep.status == cli::kSuccess && points == 8000 && sweep_norm <= bound && random_norm <= bound,
            fmt("max ||C|| over %ld sweep points = %.15f, over 20 random assemblies = %.15f (bound 2 sqrt 2 + 1e-9)",
                points, sweep_norm, random_norm)};
}

Outcome spin_example() {
    const double target = 2.0 * std::sqrt(2.0) * (1.0 + std::sqrt(2.0)) / 3.0;
    const double closed = std::abs(chsh_spin_closed_form(reference_angles()));
    const double matrix = chsh_spin(reference_angles(), SpinState::double_singlet);
    const double dc = std::abs(closed - target), dm = std::abs(matrix - target);
    return {dc < 1e-12 && dm < 1e-12,
            fmt("closed = %.13f, matrix = %.13f, target 2 sqrt2 (1 + sqrt2)/3 = %.13f, diffs %.1e / %.1e (tol 1e-12)",
                closed, matrix, target, dc, dm)};
}

Outcome product_classicality() {
    std::mt19937_64 rng(5150);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) worst = std::max(worst, chsh_spin(random_angles(rng), SpinState::product));
    return {worst <= 2.0 + 1e-12, fmt("max |<C>| over 10^4 angle sets = %.15f (bound 2 + 1e-12)", worst)};
}

Outcome squeezed_factor_check() {
    bool ok = true;
    std::string detail;
    for (double d : {0.1, 0.5, 0.9}) {
        const BipartiteState s = BipartiteState::squeezed(d);
        const double target = squeezed_factor(d);
        const double e = std::max(std::abs(pairing_correlation(s) - target), std::abs(qm_reduction(s) - target));
        ok = ok && e < 1e-8;
        detail += fmt("delta=%.1f m=%d err=%.2e; ", d, s.levels(), e);
    }
    return {ok, detail + "(tol 1e-8)"};
}

Outcome jc_second_order() {
    const DiscreteProfile one{{{1.0, 0.0, cplx{1.0, 0.0}}}};
    const DiscreteProfile silent{{{1.0, 0.0, cplx{0.0, 0.0}}}};
    const FockConfig field{16};
    const double c0 = chsh_closed_form(kReferenceParams);
    auto expectation = [&](double omega) {
        const JCParams jc{omega, 0.0, 0.05, 0.1};
        return oracle_chsh_expectation(kReferenceParams, perturbation_oracle(jc, one, silent), field);
    };
    const std::vector<double> omegas{1e-2, 5e-3, 2.5e-3};
    std::vector<double> lx, ly;
    std::string detail;
    for (double om : omegas) {
        const JCParams jc{om, 0.0, 0.05, 0.1};
        const double r = std::abs(expectation(om) - corrected_chsh_pipeline(kReferenceParams, jc, one, silent));
        lx.push_back(std::log(om));
        ly.push_back(std::log(r));
        detail += fmt("res(%.4g)=%.3e ", om, r);
    }
    const double mx = (lx[0] + lx[1] + lx[2]) / 3, my = (ly[0] + ly[1] + ly[2]) / 3;
    double sxy = 0, sxx = 0;
    for (int i = 0; i < 3; ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    const double slope = sxy / sxx;

    // Cubic least squares in t = Omega / 1e-2 over t = +-1, +-1/2, +-1/4, +-1/8.
    Eigen::MatrixXd design(8, 4);
    Eigen::VectorXd rhs(8);
    int row = 0;
    for (double t : {1.0, 0.5, 0.25, 0.125}) {
        for (double s : {t, -t}) {
            design.row(row) << 1.0, s, s * s, s * s * s;
            rhs(row) = expectation(s * 1e-2);
            ++row;
        }
    }
    const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(rhs);
    const double linear = std::abs(coef(1)) / 1e-2;
    return {slope >= 2.7 && linear < 1e-8 * c0,
            detail + fmt("exponent = %.3f (>= 2.7), |d<C>/dOmega| = %.3e (< %.3e)", slope, linear, 1e-8 * c0)};
}

double romberg(const std::function<double(double)>& f, double upper, int levels) {
    std::vector<double> prev{0.5 * upper * (f(0.0) + f(upper))};
    double h = upper;
    for (int k = 1; k <= levels; ++k) {
        h *= 0.5;
        double mid = 0.0;
        for (long i = 0; i < (1L << (k - 1)); ++i) mid += f((2 * i + 1) * h);
        std::vector<double> cur{0.5 * prev[0] + h * mid};
        double factor = 4.0;
        for (int j = 1; j <= k; ++j) {
            cur.push_back(cur[j - 1] + (cur[j - 1] - prev[j - 1]) / (factor - 1.0));
            factor *= 4.0;
        }
        prev = cur;
    }
    return prev.back();
}

Outcome delta_sq_positivity() {
    const JCParams jc{0.1, 0.0, 1.0, 1.0};
    double min_d2 = INFINITY;
    for (int i = 0; i < 10; ++i) {
        for (int k = 0; k < 10; ++k) {
            const GaussianProfile a{1.0, 0.0, 1.0};
            const GaussianProfile b{-1.0 + 0.25 * i, 0.4 * k, 0.5 + 0.1 * k};
            min_d2 = std::min(min_d2, delta_squared({0.1, 0.07, 1.0, 1.0}, a, b));
        }
    }
    const double pi = std::numbers::pi;
    const double ref = romberg(
        [&](double p) {
            const double w = std::sqrt(p * p + 1.0);
            const double h = std::exp(-0.5 * p * p);
            return p * p / (2 * w) * 0.01 * h * h / (2 * (4 + w) * (4 + w)) / (2 * pi * pi);
        },
        14.0, 14);
    const double got = delta_squared(jc, GaussianProfile{1.0, 0.0, 1.0}, GaussianProfile{0.0, 0.0, 1.0});
    const double rel = std::abs(got - ref) / ref;
    return {min_d2 >= 0.0 && rel < 1e-6,
            fmt("min delta^2 over 100 profiles = %.3e, Gaussian %.15e vs Richardson %.15e, rel %.2e (tol 1e-6)", min_d2,
                got, ref, rel)};
}

Outcome property_suites() {
    std::mt19937_64 rng(909);
    std::uniform_real_distribution<double> eta(0.0, 3.0), lam(0.01, 0.99);
    std::uniform_int_distribution<int> nmax(2, 10), half_levels(1, 3);
    double sq = 0, herm = 0, comm = 0;
    for (int i = 0; i < 60; ++i) {
        const ModularParams p{eta(rng), eta(rng), lam(rng)};
        const FockConfig cfg{nmax(rng)};
        const int levels = 2 * half_levels(rng);
        std::vector<DichotomicOperator> ops;
        for (Observable o : {Observable::A, Observable::A_prime, Observable::B, Observable::B_prime})
            ops.push_back(build_dichotomic(o, p, levels, cfg));
        for (const auto& x : ops) {
            sq = std::max(sq, dichotomy_defect(x));
            herm = std::max(herm, hermiticity_defect(x));
        }
        for (int a = 0; a < 2; ++a)
            for (int b = 2; b < 4; ++b) comm = std::max(comm, commutator_defect(ops[a], ops[b]));
    }
    double gram_neg = 0, causal = 0;
    std::uniform_real_distribution<double> eta5(0.0, 5.0), lam_full(0.001, 0.9999);
    for (int i = 0; i < 2000; ++i) {
        const GramMatrix g = build_gram({eta5(rng), eta5(rng), lam_full(rng)});
        const Eigen::Vector4d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd>(g.entries).eigenvalues();
        gram_neg = std::max(gram_neg, -ev.minCoeff() / std::max(1.0, ev.cwiseAbs().maxCoeff()));
        for (Label a : {Label::f, Label::f_prime})
            for (Label b : {Label::jf, Label::jf_prime}) causal = std::max(causal, std::abs(pj_pairing(g, a, b)));
    }
    return {sq < 1e-10 && herm < 1e-10 && comm < 1e-10 && gram_neg < 1e-14 && causal < 1e-14,
            fmt("||X^2-1|| = %.1e, ||X-X^dag|| = %.1e, ||[A,B]|| = %.1e (tol 1e-10); Gram negativity %.1e, "
                "Alice-Bob pairing %.1e (tol 1e-14)",
                sq, herm, comm, gram_neg, causal)};
}

Outcome optimizer_floor() {
    const OptimizationResult r = maximize_chsh_qft(QftBounds{}, 0);
    const QftBounds b{};
    constexpr int n = 200;
    double grid = -INFINITY;
    auto at = [&](int axis, int i) { return b.lo[axis] + (b.hi[axis] - b.lo[axis]) * i / (n - 1); };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) grid = std::max(grid, chsh_closed_form({at(0, i), at(1, j), at(2, k)}));
    const double gap = std::abs(r.best_value - grid);
    return {r.best_value >= kReferenceC0 && gap < 1e-3,
            fmt("optimum %.10f (>= 2.14931) after %ld evaluations, 200^3 grid %.10f, |diff| = %.2e (tol 1e-3)",
                r.best_value, r.evaluations, grid, gap)};
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, Outcome (*)()>> criteria{
        {"reference value", reference_value},
        {"oracle equivalence", oracle_equivalence},
        {"Tsirelson guardrail", tsirelson_guardrail},
        {"spin example", spin_example},
        {"product-state classicality", product_classicality},
        {"squeezed factor", squeezed_factor_check},
        {"JC second order", jc_second_order},
        {"delta^2 positivity and quadrature", delta_sq_positivity},
        {"property suites", property_suites},
        {"optimizer floor", optimizer_floor},
    };
    int failures = 0;
    int index = 1;
    for (const auto& [name, run] : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s %2d %s: %s [%.2fs]\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str(), secs);
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
        ++index;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
