#include "weylchsh/quadrature.hpp"

#include <cmath>
#include <memory>
#include <string>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include "weylchsh/errors.hpp"

namespace weylchsh {

namespace {

struct WorkspaceDeleter {
    void operator()(gsl_integration_workspace* w) const { gsl_integration_workspace_free(w); }
};

double trampoline(double x, void* params) {
    return (*static_cast<const std::function<double(double)>*>(params))(x);
}

constexpr int kMaxDoublings = 64;

} // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts) {
    if (!(opts.max_subdivisions > 0)) {
        throw InvalidArgument("max_subdivisions must be positive");
    }
    if (!(std::isfinite(a) && std::isfinite(b))) {
        throw InvalidArgument("integration limits must be finite");
    }
    gsl_set_error_handler_off();
    std::unique_ptr<gsl_integration_workspace, WorkspaceDeleter> ws(
        gsl_integration_workspace_alloc(static_cast<std::size_t>(opts.max_subdivisions)));
    gsl_function fn{&trampoline, const_cast<std::function<double(double)>*>(&f)};
    double value = 0.0;
    double error = 0.0;
    const int status = gsl_integration_qag(&fn, a, b, opts.abs_tol, opts.rel_tol,
                                           static_cast<std::size_t>(opts.max_subdivisions),
                                           GSL_INTEG_GAUSS15, ws.get(), &value, &error);
    if (status == GSL_EMAXITER) {
        throw NumericalError("quadrature budget exhausted after " + std::to_string(opts.max_subdivisions) +
                             " subdivisions");
    }
    if (status != GSL_SUCCESS && status != GSL_EROUND) {
        throw NumericalError(std::string("quadrature failed: ") + gsl_strerror(status));
    }
    if (!std::isfinite(value)) {
        throw NumericalError("quadrature produced a non-finite value");
    }
    return {value, error, b};
}

QuadratureResult integrate_radial(const std::function<double(double)>& f,
                                  const std::function<double(double)>& tail, double initial_cutoff,
                                  const QuadratureOptions& opts) {
    if (!(initial_cutoff > 0.0) || !std::isfinite(initial_cutoff)) {
        throw InvalidArgument("initial cutoff must be positive");
    }
    double lo = 0.0;
    double hi = initial_cutoff;
    QuadratureResult total;
    for (int step = 0; step < kMaxDoublings; ++step) {
        const QuadratureResult piece = integrate(f, lo, hi, opts);
        total.value += piece.value;
        total.error += piece.error;
        const double t = tail(hi);
        if (!(t >= 0.0) || !std::isfinite(t)) {
            throw NumericalError("integrand is not integrable: tail bound " + std::to_string(t));
        }
        if (t <= std::max(opts.abs_tol, 0.5 * opts.rel_tol * std::abs(total.value))) {
            total.error += t;
            total.cutoff = hi;
            return total;
        }
        lo = hi;
        hi *= 2.0;
    }
    throw NumericalError("tail bound did not fall below tolerance; profile not integrable");
}

} // namespace weylchsh
