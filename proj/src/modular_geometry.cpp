#include "weylchsh/modular_geometry.hpp"

#include <cmath>
#include <string>

#include "weylchsh/errors.hpp"

namespace weylchsh {

ModularParams validate_params(const ModularParams& p) {
    if (!std::isfinite(p.eta) || !std::isfinite(p.eta_prime) || !std::isfinite(p.lambda)) {
        throw InvalidArgument("modular params must be finite");
    }
    if (!(p.lambda > 0.0 && p.lambda < 1.0)) {
        throw InvalidArgument("lambda out of (0,1): " + std::to_string(p.lambda));
    }
    if (p.eta < 0.0) {
        throw InvalidArgument("eta must be >= 0: " + std::to_string(p.eta));
    }
    if (p.eta_prime < 0.0) {
        throw InvalidArgument("eta_prime must be >= 0: " + std::to_string(p.eta_prime));
    }
    return p;
}

std::string_view to_string(Label label) {
    switch (label) {
    case Label::f: return "f";
    case Label::f_prime: return "f'";
    case Label::jf: return "jf";
    case Label::jf_prime: return "jf'";
    }
    return "?";
}

Label parse_label(std::string_view name) {
    if (name == "f") return Label::f;
    if (name == "f'" || name == "f_prime") return Label::f_prime;
    if (name == "jf") return Label::jf;
    if (name == "jf'" || name == "jf_prime") return Label::jf_prime;
    throw InvalidArgument("unknown label: " + std::string(name));
}

cplx inner(const ModePair& a, const ModePair& b) {
    return std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1];
}

ModePair apply_j(const ModePair& v) {
    return {std::conj(v[1]), std::conj(v[0])};
}

const ModePair& TwoModeCoefficients::operator[](Label label) const {
    switch (label) {
    case Label::f: return f;
    case Label::f_prime: return f_prime;
    case Label::jf: return jf;
    case Label::jf_prime: return jf_prime;
    }
    throw InvalidArgument("unknown label");
}

TwoModeCoefficients two_mode_coefficients(const ModularParams& p) {
    const cplx i{0.0, 1.0};
    TwoModeCoefficients c;
    c.f = {p.eta, p.eta * p.lambda};
    c.f_prime = {i * p.eta_prime, -i * p.lambda * p.eta_prime};
    c.jf = apply_j(c.f);
    c.jf_prime = apply_j(c.f_prime);
    return c;
}

TwoModeCoefficients wedge_local_coefficients(const ModularParams& p) {
    const cplx i{0.0, 1.0};
    const double scale = std::sqrt(1.0 - p.lambda * p.lambda);
    TwoModeCoefficients c;
    c.f = {p.eta * scale, 0.0};
    c.f_prime = {i * p.eta_prime * scale, 0.0};
    c.jf = {0.0, i * p.eta * scale};
    c.jf_prime = {0.0, p.eta_prime * scale};
    return c;
}

GramMatrix gram_from_coefficients(const TwoModeCoefficients& c) {
    GramMatrix g;
    for (Label row : kLabels) {
        for (Label col : kLabels) {
            g.entries(static_cast<int>(row), static_cast<int>(col)) = inner(c[row], c[col]);
        }
    }
    return g;
}

GramMatrix build_gram(const ModularParams& p) {
    // Unlisted entries come from the coefficient expansion; the listed
    // relations are then written in closed form.
    GramMatrix g = gram_from_coefficients(two_mode_coefficients(p));
    const double l2 = p.lambda * p.lambda;
    auto set = [&g](Label a, Label b, cplx value) {
        g.entries(static_cast<int>(a), static_cast<int>(b)) = value;
        g.entries(static_cast<int>(b), static_cast<int>(a)) = std::conj(value);
    };
    set(Label::f, Label::f, p.eta * p.eta * (1.0 + l2));
    set(Label::jf, Label::jf, p.eta * p.eta * (1.0 + l2));
    set(Label::f_prime, Label::f_prime, p.eta_prime * p.eta_prime * (1.0 + l2));
    set(Label::jf_prime, Label::jf_prime, p.eta_prime * p.eta_prime * (1.0 + l2));
    set(Label::f, Label::jf, 2.0 * p.eta * p.eta * p.lambda);
    set(Label::f_prime, Label::jf_prime, 2.0 * p.eta_prime * p.eta_prime * p.lambda);
    set(Label::f, Label::jf_prime, 0.0);
    return g;
}

double pj_pairing(const GramMatrix& g, Label a, Label b) {
    return 2.0 * g(a, b).imag();
}

double pj_pairing(const GramMatrix& g, std::string_view a, std::string_view b) {
    return pj_pairing(g, parse_label(a), parse_label(b));
}

} // namespace weylchsh
