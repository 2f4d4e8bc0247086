// dichotomic_bell.hpp: dichotomic operators on Fock (x) C^N (x) C^N and the
// Bell-CHSH operator built from them
//
// Full-space index: fock * N^2 + a * N + b (a = Alice level, b = Bob level).
// States are carried as D x N^2 matrices psi(fock, a*N + b).
//
// Levels are paired (0,1), (2,3), ... and on each pair
//   X |2k>   = U   |2k+1>
//   X |2k+1> = U^dag |2k>
// with U the Weyl unitary of X's test function.

#pragma once

#include <span>
#include <vector>

#include "weylchsh/fock_oracle.hpp"
#include "weylchsh/modular_geometry.hpp"

namespace weylchsh {

enum class Party { alice, bob };
enum class Observable { A, A_prime, B, B_prime };

Label label_of(Observable obs);
Party party_of(Observable obs);

// global_modes: coefficients in (phi, j phi) with the Fock vacuum.
// wedge_local: Alice on mode 1, Bob on mode 2, thermofield reference state.
// Truncation keeps Alice/Bob commutation exact only in the wedge-local frame.
enum class FieldFrame { global_modes, wedge_local };

TwoModeCoefficients frame_coefficients(const ModularParams& p, FieldFrame frame);
Eigen::VectorXcd frame_reference_state(const ModularParams& p, const FockConfig& cfg, FieldFrame frame);

class DichotomicOperator {
public:
    DichotomicOperator(OperatorMatrix shift, int levels, Party party);

    const OperatorMatrix& shift() const { return shift_; }
    int levels() const { return levels_; }
    Party party() const { return party_; }
    Eigen::Index fock_dimension() const { return shift_.dimension(); }
    Eigen::Index dimension() const { return shift_.dimension() * levels_ * levels_; }

    // Block acting on the Fock factor for the level transition from -> to
    // (U for 2k -> 2k+1, U^dag for 2k+1 -> 2k).
    const Eigen::MatrixXcd& block_from(int from) const;
    static int partner(int level) { return level ^ 1; }

    // Dense matrix on the full space (flagged and checked Hermitian).
    OperatorMatrix embed() const;

    // X psi for psi of shape D x N^2.
    Eigen::MatrixXcd apply(const Eigen::MatrixXcd& psi) const;

private:
    OperatorMatrix shift_;
    Eigen::MatrixXcd shift_adjoint_;
    int levels_;
    Party party_;
};

// Throws InvalidArgument on odd or non-positive N.
DichotomicOperator build_dichotomic(Observable obs, const ModularParams& p, int levels,
                                    const FockConfig& cfg, FieldFrame frame = FieldFrame::wedge_local);

// U -> -U^dag. For two qubits (|+> = level 0) this is the plain operator
// conjugated by i sigma_y on its own factor; the singlet then yields <C0>.
DichotomicOperator singlet_adapted(const DichotomicOperator& op);

// psi_AB = sum_j c_j |j>_A |j>_B
class BipartiteState {
public:
    // Requires N even, sum |c_j|^2 = 1 within 1e-12, every c_j != 0.
    static BipartiteState finite(std::vector<cplx> coefficients);
    static BipartiteState maximal(int levels);
    // c_n = sqrt(1 - d^2) d^n for n < m_max; m_max = 0 picks squeezed_truncation(d).
    static BipartiteState squeezed(double delta, int m_max = 0);

    const std::vector<cplx>& coefficients() const { return coefficients_; }
    int levels() const { return static_cast<int>(coefficients_.size()); }
    double delta() const { return delta_; }  // 0 unless squeezed
    bool is_squeezed() const { return squeezed_; }

    // Amplitude vector over a*N + b.
    Eigen::VectorXcd amplitudes() const;

private:
    std::vector<cplx> coefficients_;
    double delta_{0.0};
    bool squeezed_{false};
};

// Smallest m with delta^(2m) < 1e-12, rounded up to even.
int squeezed_truncation(double delta);

struct BellAssembly {
    DichotomicOperator a;
    DichotomicOperator a_prime;
    DichotomicOperator b;
    DichotomicOperator b_prime;
    Eigen::MatrixXcd psi;  // reference field state (x) psi_AB, D x N^2
};

BellAssembly make_assembly(const ModularParams& p, const BipartiteState& state, const FockConfig& cfg,
                           FieldFrame frame = FieldFrame::wedge_local);

// Product field (x) AB state as a D x N^2 matrix.
Eigen::MatrixXcd product_state(const Eigen::VectorXcd& field, const Eigen::VectorXcd& ab, int levels);

// C = (A + A') B + (A - A') B' built block by block.
OperatorMatrix bell_operator(const BellAssembly& assembly);

// Same combination from four full-space operators. Throws on dimension mismatch.
OperatorMatrix bell_operator(const OperatorMatrix& a, const OperatorMatrix& a_prime,
                             const OperatorMatrix& b, const OperatorMatrix& b_prime);

// <psi|C|psi> without forming C.
double bell_expectation(const BellAssembly& assembly);
double bell_expectation(const BellAssembly& assembly, const Eigen::MatrixXcd& psi);

// r = sum_k 2 Re(conj(c_{2k+1}) c_{2k})
double qm_reduction(const BipartiteState& state);
double qm_reduction(std::span<const cplx> coefficients);

// 2 delta / (1 + delta^2), delta in [0,1].
double squeezed_factor(double delta);

// <psi_AB| X (x) X |psi_AB> for the phase-free pairing swap X, evaluated from
// explicit N x N matrices.
double pairing_correlation(const BipartiteState& state);

// Frobenius defects, evaluated block-wise.
double dichotomy_defect(const DichotomicOperator& x);                              // ||X^2 - 1||
double hermiticity_defect(const DichotomicOperator& x);                            // ||X - X^dag||
double commutator_defect(const DichotomicOperator& x, const DichotomicOperator& y);  // ||[X, Y]||

} // namespace weylchsh
