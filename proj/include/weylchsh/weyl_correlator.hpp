// weyl_correlator.hpp: closed-form vacuum correlators of Weyl operators

#pragma once

#include <array>
#include <cmath>

#include "weylchsh/modular_geometry.hpp"

namespace weylchsh {

inline const double kTsirelsonBound = 2.0 * std::sqrt(2.0);

// <0|W_h|0> = exp(-||h||^2 / 2). Throws on negative input.
double weyl_vacuum_expectation(double norm_sq);

// <0| W_a W_{sign*b} |0> = exp(-(i/2) Delta(a, sign*b)) exp(-||a + sign*b||^2 / 2).
cplx weyl_pair_expectation(const GramMatrix& g, Label a, int sign, Label b);

struct CorrelatorReport {
    double value{0.0};
    // <W_f W_jf>, <W_f' W_jf> (= <W_f W_jf'>), <W_f' W_jf'>
    std::array<double, 3> terms{};
    ModularParams params{};
    bool violation{false};
};

// 2 < |value| <= 2 sqrt 2, strict on the left.
bool is_violation(double value);

// <C0> = <W_f W_jf> + <W_f' W_jf> + <W_f W_jf'> - <W_f' W_jf'>, assembled
// from the Gram matrix; every pair is symplectically orthogonal so each
// expectation is real.
CorrelatorReport chsh_correlator(const ModularParams& p);

// exp(-eta^2 (1+l)^2) + 2 exp(-(eta^2+eta'^2)(1+l^2)/2) - exp(-eta'^2 (1+l)^2)
double chsh_closed_form(const ModularParams& p);

// (1 - delta_sq) <C0>, delta_sq in [0,1].
double chsh_corrected(const ModularParams& p, double delta_sq);

} // namespace weylchsh
