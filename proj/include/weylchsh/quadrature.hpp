// quadrature.hpp: adaptive integration on [a,b] and on [0, inf)

#pragma once

#include <functional>

namespace weylchsh {

struct QuadratureOptions {
    double rel_tol{1e-8};
    double abs_tol{1e-300};
    int max_subdivisions{2000};
};

struct QuadratureResult {
    double value{0.0};
    double error{0.0};    // quadrature estimate plus tail bound
    double cutoff{0.0};   // upper limit actually integrated (radial only)
};

// 15-point Gauss-Kronrod, globally adaptive. Throws NumericalError when the
// tolerance is not met within max_subdivisions.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts = {});

// Integral over [0, inf). tail(P) must bound int_P^inf |f| from above. The cutoff
// starts at initial_cutoff and doubles until tail(P) <= max(abs_tol, rel_tol |I| / 2).
QuadratureResult integrate_radial(const std::function<double(double)>& f,
                                  const std::function<double(double)>& tail, double initial_cutoff,
                                  const QuadratureOptions& opts = {});

} // namespace weylchsh
