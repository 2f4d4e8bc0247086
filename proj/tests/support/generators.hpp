// Seeded generators for the property suites.
#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "weylchsh/modular_geometry.hpp"
#include "weylchsh/spin_composite.hpp"

namespace gen {

class Source {
public:
    explicit Source(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }

    weylchsh::ModularParams params(double eta_max = 3.0, double lam_lo = 0.01, double lam_hi = 0.99) {
        return {uniform(0.0, eta_max), uniform(0.0, eta_max), uniform(lam_lo, lam_hi)};
    }

    // Normalized, every entry bounded away from zero.
    std::vector<std::complex<double>> coefficients(int n) {
        std::vector<std::complex<double>> c(static_cast<std::size_t>(n));
        double norm = 0.0;
        for (auto& x : c) {
            const double r = uniform(0.2, 1.0);
            const double phi = uniform(-3.14159, 3.14159);
            x = std::polar(r, phi);
            norm += r * r;
        }
        for (auto& x : c) x /= std::sqrt(norm);
        return c;
    }

    weylchsh::AngleSet angles() { return weylchsh::random_angles(rng_); }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

} // namespace gen
