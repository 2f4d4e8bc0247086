// optimizer.hpp: multistart Nelder-Mead search for large CHSH values

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <variant>

#include "weylchsh/modular_geometry.hpp"
#include "weylchsh/spin_composite.hpp"

namespace weylchsh {

// Box over (eta, eta', lambda). A coordinate with lo == hi is held fixed.
struct QftBounds {
    std::array<double, 3> lo{0.0, 0.0, 0.001};
    std::array<double, 3> hi{5.0, 5.0, 0.9999};
};

inline constexpr QftBounds kMaxQftBounds{};
inline constexpr long kDefaultQftBudget = 6000;
inline constexpr long kDefaultSpinBudget = 20000;

// Throws InvalidArgument unless lo <= hi inside [0,5]^2 x [0.001, 0.9999].
QftBounds validate(const QftBounds& b);
bool contains(const QftBounds& b, const ModularParams& p);

struct OptimizationResult {
    std::variant<ModularParams, AngleSet> best_params;
    double best_value{0.0};
    int starts{0};
    long evaluations{0};
    std::uint64_t seed{0};
};

// Maximizes <C0>. budget counts objective evaluations; 0 is an error.
// Any evaluation above 2 sqrt 2 + 1e-9 throws NumericalError.
OptimizationResult maximize_chsh_qft(const QftBounds& bounds, std::uint64_t seed, long budget = kDefaultQftBudget);

// Maximizes |<C>| over the eight angles. With a start and budget 0 the start is
// evaluated once and returned.
OptimizationResult maximize_chsh_spin(std::uint64_t seed, long budget, SpinState state,
                                      std::optional<AngleSet> start = std::nullopt);

} // namespace weylchsh
