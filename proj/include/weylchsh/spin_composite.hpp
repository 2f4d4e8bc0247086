// spin_composite.hpp: spin-1 (x) spin-1/2 parties
//
// Party basis: |1,+>, |-1,+>, |0,+>, |1,->, |-1,->, |0,->  (index = 3 s + m).

#pragma once

#include <random>

#include <Eigen/Dense>

#include "weylchsh/fock_oracle.hpp"

namespace weylchsh {

struct AngleSet {
    double alpha1{0.0};
    double alpha2{0.0};
    double alpha1p{0.0};
    double alpha2p{0.0};
    double beta1{0.0};
    double beta2{0.0};
    double beta1p{0.0};
    double beta2p{0.0};

    AngleSet reduced() const;  // every angle mapped into [0, 2 pi)
    bool is_finite() const;
};

// alpha1 = 0, alpha1' = pi/2, beta1 = beta1' = pi/4,
// alpha2 = 0, alpha2' = pi/2, beta2 = pi/4, beta2' = -pi/4
AngleSet reference_angles();

AngleSet random_angles(std::mt19937_64& rng);

enum class SpinState { double_singlet, product };

// Hermitian involution with phases exp(+-i(a1 + a2)), exp(+-i(a1 - a2)), exp(+-i a2).
OperatorMatrix composite_operator(double a1, double a2);

// 36-component state, index = 6 i_A + i_B.
Eigen::VectorXcd spin_state(SpinState state);

// -(1/3)(1 + 2 cos(a1 - b1)) cos(a2 - b2)
double correlator_closed_form(double a1, double a2, double b1, double b2);

// <psi| A(a1, a2) (x) B(b1, b2) |psi> from the 6 x 6 matrices.
double correlator_matrix(double a1, double a2, double b1, double b2, SpinState state);

// 36 x 36 Bell operator (A + A') (x) B + (A - A') (x) B'.
OperatorMatrix spin_bell_operator(const AngleSet& angles);

// Signed <C> through the matrix path.
double chsh_spin_signed(const AngleSet& angles, SpinState state);
// |<C>|
double chsh_spin(const AngleSet& angles, SpinState state);
// Signed <C> from four closed-form correlators (double singlet only).
double chsh_spin_closed_form(const AngleSet& angles);

} // namespace weylchsh
