#include "weylchsh/weyl_correlator.hpp"

#include <string>

#include "weylchsh/errors.hpp"

namespace weylchsh {

double weyl_vacuum_expectation(double norm_sq) {
    if (!(norm_sq >= 0.0)) {
        throw InvalidArgument("norm_sq must be >= 0: " + std::to_string(norm_sq));
    }
    return std::exp(-0.5 * norm_sq);
}

cplx weyl_pair_expectation(const GramMatrix& g, Label a, int sign, Label b) {
    if (sign != 1 && sign != -1) {
        throw InvalidArgument("sign must be +1 or -1");
    }
    const double s = static_cast<double>(sign);
    const double delta = s * pj_pairing(g, a, b);
    const double norm_sq = g.norm_sq(a) + g.norm_sq(b) + 2.0 * s * g(a, b).real();
    // Rounding can push a vanishing norm slightly negative.
    const double vev = weyl_vacuum_expectation(norm_sq < 0.0 && norm_sq > -1e-14 ? 0.0 : norm_sq);
    return std::polar(vev, -0.5 * delta);
}

bool is_violation(double value) {
    const double mag = std::abs(value);
    return mag > 2.0 && mag <= kTsirelsonBound;
}

CorrelatorReport chsh_correlator(const ModularParams& p) {
    validate_params(p);
    const GramMatrix g = build_gram(p);
    // Cosine combination: (<W_a W_b> + conj) / 2 is the vacuum value of
    // cos(phi(a) + phi(b)).
    auto term = [&g](Label a, Label b) { return weyl_pair_expectation(g, a, +1, b).real(); };
    const double t1 = term(Label::f, Label::jf);
    const double t2a = term(Label::f_prime, Label::jf);
    const double t2b = term(Label::f, Label::jf_prime);
    const double t3 = term(Label::f_prime, Label::jf_prime);

    CorrelatorReport report;
    report.params = p;
    report.terms = {t1, 0.5 * (t2a + t2b), t3};
    report.value = t1 + t2a + t2b - t3;
    report.violation = is_violation(report.value);
    return report;
}

double chsh_closed_form(const ModularParams& p) {
    validate_params(p);
    const double e2 = p.eta * p.eta;
    const double ep2 = p.eta_prime * p.eta_prime;
    const double l = p.lambda;
    return std::exp(-e2 * (1.0 + l) * (1.0 + l))
        + 2.0 * std::exp(-0.5 * (e2 + ep2) * (1.0 + l * l))
        - std::exp(-ep2 * (1.0 + l) * (1.0 + l));
}

double chsh_corrected(const ModularParams& p, double delta_sq) {
    if (!(delta_sq >= 0.0 && delta_sq <= 1.0)) {
        throw InvalidArgument("delta_sq out of [0,1]: " + std::to_string(delta_sq));
    }
    return (1.0 - delta_sq) * chsh_closed_form(p);
}

} // namespace weylchsh
