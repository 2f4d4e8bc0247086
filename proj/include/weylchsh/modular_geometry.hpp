// modular_geometry.hpp: test functions of the spectral-doublet construction
//
// Everything lives in the two-dimensional one-particle space spanned by a
// normalized vector phi of the modular spectral subspace at lambda^2 and its
// conjugate j*phi, which is orthogonal to it. With s = j delta^{1/2} and
// delta^{1/2} phi = lambda phi:
//
//   f   = eta  (1+s) phi    = eta  (phi + lambda j phi)
//   f'  = eta' (1+s) i phi  = eta' i (phi - lambda j phi)
//   jf, jf'                 = images under the antiunitary j
//
// Alice holds (f, f'), Bob holds (jf, jf').

#pragma once

#include <array>
#include <complex>
#include <string_view>

#include <Eigen/Dense>

namespace weylchsh {

using cplx = std::complex<double>;

struct ModularParams {
    double eta{0.0};        // scale of f
    double eta_prime{0.0};  // scale of f'
    double lambda{0.5};     // square root of the modular spectral value, in (0,1)
};

// The reference point used throughout the examples and tests.
inline constexpr ModularParams kReferenceParams{0.01, 0.564058, 0.495456};

// Throws InvalidArgument naming the violated bound.
ModularParams validate_params(const ModularParams& p);

enum class Label { f = 0, f_prime = 1, jf = 2, jf_prime = 3 };

inline constexpr std::array<Label, 4> kLabels{Label::f, Label::f_prime, Label::jf, Label::jf_prime};

std::string_view to_string(Label label);
Label parse_label(std::string_view name);  // "f", "f'", "jf", "jf'" (also "f_prime", "jf_prime")

inline bool is_alice(Label label) { return label == Label::f || label == Label::f_prime; }

// Coordinates (c1, c2) of a vector c1 e1 + c2 e2 in a two-mode orthonormal basis.
using ModePair = std::array<cplx, 2>;

// Inner product, antilinear in the first argument.
cplx inner(const ModePair& a, const ModePair& b);

// Antiunitary j in the (phi, j phi) basis: swap coordinates and conjugate.
ModePair apply_j(const ModePair& v);

struct TwoModeCoefficients {
    ModePair f{};
    ModePair f_prime{};
    ModePair jf{};
    ModePair jf_prime{};

    const ModePair& operator[](Label label) const;
};

// Coordinates in the global basis (e1 = phi, e2 = j phi).
TwoModeCoefficients two_mode_coefficients(const ModularParams& p);

// Coordinates in the wedge-adapted basis: mode 1 carries Alice's canonical
// pair Q_A ~ phi((1+s)phi), P_A ~ phi((1+s) i phi), mode 2 carries Bob's
// j-images. Smeared fields built from these coefficients reproduce every
// commutator of the global ones, and Alice's fields never touch mode 2.
// The vacuum in this frame is the thermofield state (see fock_oracle.hpp).
TwoModeCoefficients wedge_local_coefficients(const ModularParams& p);

// Hermitian 4x4 matrix of <row|col> over the ordered family (f, f', jf, jf').
struct GramMatrix {
    Eigen::Matrix4cd entries = Eigen::Matrix4cd::Zero();

    cplx operator()(Label row, Label col) const {
        return entries(static_cast<int>(row), static_cast<int>(col));
    }
    double norm_sq(Label label) const { return (*this)(label, label).real(); }
};

GramMatrix build_gram(const ModularParams& p);
GramMatrix gram_from_coefficients(const TwoModeCoefficients& c);

// Smeared Pauli-Jordan pairing, [phi(a), phi(b)] = i Delta(a,b) with
// Delta(a,b) = 2 Im<a|b>.
double pj_pairing(const GramMatrix& g, Label a, Label b);
double pj_pairing(const GramMatrix& g, std::string_view a, std::string_view b);

} // namespace weylchsh
