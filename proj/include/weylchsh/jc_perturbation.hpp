// jc_perturbation.hpp: two qubits in a Heisenberg singlet coupled to a scalar
// field through a Jaynes-Cummings interaction
//
//   H0 = J (sx sx + sy sy + sz sz) + sum omega_p a^dag_p a_p
//   HI = Omega_A (s+_A a(h_A) + s-_A a^dag(h_A)) + (A -> B)
//
// Qubit levels: |+> = 0, |-> = 1, s+ = |+><-|. Momentum measure
// d mu_p = d^3p / ((2 pi)^3 2 omega_p), radial form p^2 dp / (4 pi^2 omega_p).

#pragma once

#include <complex>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "weylchsh/dichotomic_bell.hpp"
#include "weylchsh/fock_oracle.hpp"
#include "weylchsh/modular_geometry.hpp"
#include "weylchsh/quadrature.hpp"

namespace weylchsh {

struct JCParams {
    double omega_a{0.0};
    double omega_b{0.0};
    double exchange_j{1.0};  // J > 0
    double mass{1.0};        // m >= 0
};

JCParams validate(const JCParams& jc);

// amplitude * exp(-(|p| - center)^2 / (2 width^2))
struct GaussianProfile {
    cplx amplitude{1.0, 0.0};
    double center{0.0};
    double width{1.0};

    cplx operator()(double p) const;
};

// One mode carries weight w = d mu over its cell.
struct DiscreteMode {
    double weight{0.0};
    double momentum{0.0};
    cplx amplitude{0.0, 0.0};
};

struct DiscreteProfile {
    std::vector<DiscreteMode> modes;
};

using MomentumProfile = std::variant<GaussianProfile, DiscreteProfile>;

void validate(const MomentumProfile& h);

inline double mode_energy(double p, double mass) { return std::sqrt(p * p + mass * mass); }

// Midpoint grid p_k = (k + 1/2) dp on [0, p_max], w_k = p_k^2 dp / (4 pi^2 omega_k).
DiscreteProfile discretize(const GaussianProfile& h, double mass, double p_max, int modes);

// Shared discrete measure for a pair of profiles. If either is discrete both are
// evaluated on its grid (two discrete profiles must share weights and momenta).
struct SampledPair {
    std::vector<double> weight;
    std::vector<double> momentum;
    std::vector<cplx> h_a;
    std::vector<cplx> h_b;
};

SampledPair sample_on_common_grid(const MomentumProfile& h_a, const MomentumProfile& h_b);
bool is_discrete(const MomentumProfile& h);

// delta^2 = int d mu_p |Omega_A h_A - Omega_B h_B|^2 / (2 (4J + omega_p)^2)
double delta_squared(const JCParams& jc, const MomentumProfile& h_a, const MomentumProfile& h_b,
                     const QuadratureOptions& opts = {});

struct SecondOrderState {
    double amplitude_singlet{1.0};  // 1 - delta^2 / 2
    double amplitude_psi1{0.0};     // int d mu (Omega_A^2 h_A^2 - Omega_B^2 h_B^2) / (8J (4J + omega))
    double delta_sq{0.0};
    JCParams jc{};
    MomentumProfile h_a{GaussianProfile{}};
    MomentumProfile h_b{GaussianProfile{}};
    // Per-mode values of the one-particle amplitude on the discrete grid (empty
    // for Gaussian inputs).
    std::vector<double> mode_momenta;
    std::vector<double> mode_amplitudes;

    // -(Omega_A h_A(p) - Omega_B h_B(p)) / (2 (4J + omega_p)), coefficient of
    // (|psi2> - |psi3>) (x) |p>. Gaussian inputs only.
    double one_particle_amplitude(double p) const;
};

// Profiles must be real valued.
SecondOrderState second_order_state(const JCParams& jc, const MomentumProfile& h_a, const MomentumProfile& h_b,
                                    const QuadratureOptions& opts = {});

struct OracleGroundState {
    Eigen::VectorXd state;   // index q * (M + 1) + k, q in {++, +-, -+, --}, k = 0 vacuum
    double energy{0.0};
    double residual{0.0};    // ||H g - E g||
    int modes{0};
    double alpha{0.0};       // <psi_s (x) 0 | g>, sign fixed positive
    double beta{0.0};        // <psi_1 (x) 0 | g>
    std::vector<double> one_particle;  // coefficient of (psi2 - psi3) (x) |p_k>, continuum normalized
    double excitation_leak{0.0};       // weight outside the one-excitation sector
};

Eigen::MatrixXd jc_hamiltonian(const JCParams& jc, const SampledPair& modes);
Eigen::MatrixXd excitation_number(int modes);

// Exact diagonalization on (4 qubit states) (x) (vacuum + M one-particle states).
// Every mode needs omega_k > 0. Throws NumericalError if the residual exceeds tolerance.
OracleGroundState perturbation_oracle(const JCParams& jc, const MomentumProfile& h_a, const MomentumProfile& h_b,
                                      double tolerance = 1e-10);

// (1 - delta^2) <C0>
double corrected_chsh_pipeline(const ModularParams& p, const JCParams& jc, const MomentumProfile& h_a,
                               const MomentumProfile& h_b, const QuadratureOptions& opts = {});

// <G| C |G> for the ground state G of the JC oracle tensored with the field
// reference state, with the qubit-level Bell operators (Bob singlet-adapted).
double oracle_chsh_expectation(const ModularParams& p, const OracleGroundState& ground, const FockConfig& cfg);

} // namespace weylchsh
