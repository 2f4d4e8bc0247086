#include "weylchsh/jc_perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "weylchsh/errors.hpp"
#include "weylchsh/weyl_correlator.hpp"

namespace weylchsh {

namespace {

constexpr double kPi = std::numbers::pi;
// d mu_p = (4 pi / (2 pi)^3) p^2 dp / (2 omega)
constexpr double kRadialMeasure = 1.0 / (2.0 * kPi * kPi);

// p^2 / (2 omega), finite at p = 0 for m = 0
double radial_density(double p, double mass) {
    const double w = mode_energy(p, mass);
    return w > 0.0 ? p * p / (2.0 * w) : 0.0;
}

// int_P^inf p exp(-(p - c)^2 / s^2) dp
double gaussian_first_moment_tail(double cutoff, double center, double s) {
    const double x = (cutoff - center) / s;
    return 0.5 * s * s * std::exp(-x * x) + center * 0.5 * s * std::sqrt(kPi) * std::erfc(x);
}

struct GaussianTerm {
    double weight;  // |Omega a|^2
    double center;
    double width;
};

std::vector<GaussianTerm> gaussian_terms(const JCParams& jc, const GaussianProfile& a, const GaussianProfile& b) {
    return {{std::norm(jc.omega_a * a.amplitude), a.center, a.width},
            {std::norm(jc.omega_b * b.amplitude), b.center, b.width}};
}

// Upper bound on int_P^inf p sum_i w_i exp(-(p - c_i)^2 / s_i^2) dp
double terms_tail(const std::vector<GaussianTerm>& terms, double cutoff) {
    double t = 0.0;
    for (const auto& term : terms) {
        if (term.weight > 0.0) {
            t += term.weight * gaussian_first_moment_tail(cutoff, term.center, term.width);
        }
    }
    return t;
}

double initial_cutoff(const GaussianProfile& a, const GaussianProfile& b) {
    return std::max({a.center + 8.0 * a.width, b.center + 8.0 * b.width, 1.0});
}

void require_real(const SampledPair& s) {
    for (std::size_t k = 0; k < s.h_a.size(); ++k) {
        if (s.h_a[k].imag() != 0.0 || s.h_b[k].imag() != 0.0) {
            throw InvalidArgument("profiles must be real valued here");
        }
    }
}

void require_real(const GaussianProfile& h) {
    if (h.amplitude.imag() != 0.0) {
        throw InvalidArgument("profiles must be real valued here");
    }
}

} // namespace

JCParams validate(const JCParams& jc) {
    if (!std::isfinite(jc.omega_a) || !std::isfinite(jc.omega_b)) {
        throw InvalidArgument("couplings must be finite");
    }
    if (!(jc.exchange_j > 0.0) || !std::isfinite(jc.exchange_j)) {
        throw InvalidArgument("exchange J must be > 0: " + std::to_string(jc.exchange_j));
    }
    if (!(jc.mass >= 0.0) || !std::isfinite(jc.mass)) {
        throw InvalidArgument("mass must be >= 0: " + std::to_string(jc.mass));
    }
    return jc;
}

cplx GaussianProfile::operator()(double p) const {
    const double x = (p - center) / width;
    return amplitude * std::exp(-0.5 * x * x);
}

void validate(const MomentumProfile& h) {
    if (const auto* g = std::get_if<GaussianProfile>(&h)) {
        if (!(g->width > 0.0) || !std::isfinite(g->width)) {
            throw InvalidArgument("gaussian width must be > 0");
        }
        if (!std::isfinite(g->center) || !std::isfinite(g->amplitude.real()) ||
            !std::isfinite(g->amplitude.imag())) {
            throw InvalidArgument("gaussian profile must be finite");
        }
        return;
    }
    const auto& d = std::get<DiscreteProfile>(h);
    if (d.modes.empty()) {
        throw InvalidArgument("discrete profile has no modes");
    }
    for (const auto& m : d.modes) {
        if (!(m.weight >= 0.0) || !std::isfinite(m.weight)) {
            throw InvalidArgument("mode weight must be finite and >= 0");
        }
        if (!(m.momentum >= 0.0) || !std::isfinite(m.momentum)) {
            throw InvalidArgument("mode momentum must be finite and >= 0");
        }
        if (!std::isfinite(m.amplitude.real()) || !std::isfinite(m.amplitude.imag())) {
            throw InvalidArgument("mode amplitude must be finite");
        }
    }
}

bool is_discrete(const MomentumProfile& h) {
    return std::holds_alternative<DiscreteProfile>(h);
}

DiscreteProfile discretize(const GaussianProfile& h, double mass, double p_max, int modes) {
    validate(MomentumProfile{h});
    if (modes < 1) {
        throw InvalidArgument("need at least one mode");
    }
    if (!(p_max > 0.0)) {
        throw InvalidArgument("p_max must be > 0");
    }
    const double dp = p_max / modes;
    DiscreteProfile out;
    out.modes.reserve(static_cast<std::size_t>(modes));
    for (int k = 0; k < modes; ++k) {
        const double p = (k + 0.5) * dp;
        const double w = mode_energy(p, mass);
        out.modes.push_back({p * p * dp / (4.0 * kPi * kPi * w), p, h(p)});
    }
    return out;
}

SampledPair sample_on_common_grid(const MomentumProfile& h_a, const MomentumProfile& h_b) {
    validate(h_a);
    validate(h_b);
    const DiscreteProfile* grid = std::get_if<DiscreteProfile>(&h_a);
    if (grid == nullptr) {
        grid = std::get_if<DiscreteProfile>(&h_b);
    }
    if (grid == nullptr) {
        throw InvalidArgument("no discrete profile to sample on");
    }
    const auto* da = std::get_if<DiscreteProfile>(&h_a);
    const auto* db = std::get_if<DiscreteProfile>(&h_b);
    if (da != nullptr && db != nullptr) {
        if (da->modes.size() != db->modes.size()) {
            throw InvalidArgument("discrete profiles have different grids");
        }
        for (std::size_t k = 0; k < da->modes.size(); ++k) {
            if (da->modes[k].weight != db->modes[k].weight || da->modes[k].momentum != db->modes[k].momentum) {
                throw InvalidArgument("discrete profiles have different grids");
            }
        }
    }
    auto eval = [](const MomentumProfile& h, std::size_t k, double p) -> cplx {
        if (const auto* d = std::get_if<DiscreteProfile>(&h)) {
            return d->modes[k].amplitude;
        }
        return std::get<GaussianProfile>(h)(p);
    };
    SampledPair s;
    for (std::size_t k = 0; k < grid->modes.size(); ++k) {
        const double p = grid->modes[k].momentum;
        s.weight.push_back(grid->modes[k].weight);
        s.momentum.push_back(p);
        s.h_a.push_back(eval(h_a, k, p));
        s.h_b.push_back(eval(h_b, k, p));
    }
    return s;
}

double delta_squared(const JCParams& jc_in, const MomentumProfile& h_a, const MomentumProfile& h_b,
                     const QuadratureOptions& opts) {
    const JCParams jc = validate(jc_in);
    const double gap = 4.0 * jc.exchange_j;
    if (is_discrete(h_a) || is_discrete(h_b)) {
        const SampledPair s = sample_on_common_grid(h_a, h_b);
        double sum = 0.0;
        for (std::size_t k = 0; k < s.weight.size(); ++k) {
            const double d = gap + mode_energy(s.momentum[k], jc.mass);
            sum += s.weight[k] * std::norm(jc.omega_a * s.h_a[k] - jc.omega_b * s.h_b[k]) / (2.0 * d * d);
        }
        return sum;
    }
    validate(h_a);
    validate(h_b);
    const auto& ga = std::get<GaussianProfile>(h_a);
    const auto& gb = std::get<GaussianProfile>(h_b);
    auto integrand = [&](double p) {
        const double d = gap + mode_energy(p, jc.mass);
        const double g2 = std::norm(jc.omega_a * ga(p) - jc.omega_b * gb(p));
        return kRadialMeasure * radial_density(p, jc.mass) * g2 / (2.0 * d * d);
    };
    // p^2/(2 omega) <= p/2, (4J + omega) >= (4J + m), |g|^2 <= 2 sum |Omega a|^2 e^{-(p-c)^2/s^2}
    const auto terms = gaussian_terms(jc, ga, gb);
    const double floor_gap = gap + jc.mass;
    auto tail = [&](double cutoff) {
        return kRadialMeasure * 0.5 * 2.0 * terms_tail(terms, cutoff) / (2.0 * floor_gap * floor_gap);
    };
    const QuadratureResult r = integrate_radial(integrand, tail, initial_cutoff(ga, gb), opts);
    return std::max(r.value, 0.0);
}

double SecondOrderState::one_particle_amplitude(double p) const {
    const auto* ga = std::get_if<GaussianProfile>(&h_a);
    const auto* gb = std::get_if<GaussianProfile>(&h_b);
    if (ga == nullptr || gb == nullptr) {
        throw InvalidArgument("one_particle_amplitude(p) needs Gaussian profiles; use mode_amplitudes");
    }
    const double d = 4.0 * jc.exchange_j + mode_energy(p, jc.mass);
    return -(jc.omega_a * (*ga)(p).real() - jc.omega_b * (*gb)(p).real()) / (2.0 * d);
}

SecondOrderState second_order_state(const JCParams& jc_in, const MomentumProfile& h_a, const MomentumProfile& h_b,
                                    const QuadratureOptions& opts) {
    const JCParams jc = validate(jc_in);
    SecondOrderState out;
    out.jc = jc;
    out.h_a = h_a;
    out.h_b = h_b;
    const double gap = 4.0 * jc.exchange_j;
    const double jj = jc.exchange_j;
    if (is_discrete(h_a) || is_discrete(h_b)) {
        const SampledPair s = sample_on_common_grid(h_a, h_b);
        require_real(s);
        double psi1 = 0.0;
        for (std::size_t k = 0; k < s.weight.size(); ++k) {
            const double d = gap + mode_energy(s.momentum[k], jc.mass);
            const double xa = jc.omega_a * s.h_a[k].real();
            const double xb = jc.omega_b * s.h_b[k].real();
            psi1 += s.weight[k] * (xa * xa - xb * xb) / (8.0 * jj * d);
            out.mode_momenta.push_back(s.momentum[k]);
            out.mode_amplitudes.push_back(-(xa - xb) / (2.0 * d));
        }
        out.amplitude_psi1 = psi1;
    } else {
        const auto& ga = std::get<GaussianProfile>(h_a);
        const auto& gb = std::get<GaussianProfile>(h_b);
        require_real(ga);
        require_real(gb);
        validate(h_a);
        validate(h_b);
        auto integrand = [&](double p) {
            const double d = gap + mode_energy(p, jc.mass);
            const double xa = jc.omega_a * ga(p).real();
            const double xb = jc.omega_b * gb(p).real();
            return kRadialMeasure * radial_density(p, jc.mass) * (xa * xa - xb * xb) / (8.0 * jj * d);
        };
        const auto terms = gaussian_terms(jc, ga, gb);
        const double floor_gap = gap + jc.mass;
        auto tail = [&](double cutoff) {
            return kRadialMeasure * 0.5 * terms_tail(terms, cutoff) / (8.0 * jj * floor_gap);
        };
        out.amplitude_psi1 = integrate_radial(integrand, tail, initial_cutoff(ga, gb), opts).value;
    }
    out.delta_sq = delta_squared(jc, h_a, h_b, opts);
    out.amplitude_singlet = 1.0 - 0.5 * out.delta_sq;
    return out;
}

namespace {

// Two-qubit operators in the order ++, +-, -+, --.
Eigen::Matrix4d heisenberg(double j) {
    // J (sx sx + sy sy + sz sz) = J (2 SWAP - 1)
    Eigen::Matrix4d swap = Eigen::Matrix4d::Zero();
    swap(0, 0) = swap(3, 3) = 1.0;
    swap(1, 2) = swap(2, 1) = 1.0;
    return j * (2.0 * swap - Eigen::Matrix4d::Identity());
}

Eigen::Matrix4d raise(Party party) {
    Eigen::Matrix2d sp = Eigen::Matrix2d::Zero();
    sp(0, 1) = 1.0;
    const Eigen::Matrix2d id = Eigen::Matrix2d::Identity();
    const Eigen::Matrix2d& left = party == Party::alice ? sp : id;
    const Eigen::Matrix2d& right = party == Party::alice ? id : sp;
    Eigen::Matrix4d out;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                for (int d = 0; d < 2; ++d) out(2 * a + b, 2 * c + d) = left(a, c) * right(b, d);
    return out;
}

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index r = 0; r < a.rows(); ++r)
        for (Eigen::Index c = 0; c < a.cols(); ++c) out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
    return out;
}

} // namespace

Eigen::MatrixXd jc_hamiltonian(const JCParams& jc_in, const SampledPair& s) {
    const JCParams jc = validate(jc_in);
    require_real(s);
    const auto m = static_cast<Eigen::Index>(s.weight.size());
    Eigen::MatrixXd field = Eigen::MatrixXd::Zero(m + 1, m + 1);
    Eigen::MatrixXd lower_a = Eigen::MatrixXd::Zero(m + 1, m + 1);
    Eigen::MatrixXd lower_b = Eigen::MatrixXd::Zero(m + 1, m + 1);
    for (Eigen::Index k = 0; k < m; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        field(k + 1, k + 1) = mode_energy(s.momentum[ku], jc.mass);
        lower_a(0, k + 1) = std::sqrt(s.weight[ku]) * s.h_a[ku].real();
        lower_b(0, k + 1) = std::sqrt(s.weight[ku]) * s.h_b[ku].real();
    }
    const Eigen::MatrixXd id_f = Eigen::MatrixXd::Identity(m + 1, m + 1);
    const Eigen::MatrixXd id_q = Eigen::MatrixXd::Identity(4, 4);
    const Eigen::Matrix4d sp_a = raise(Party::alice);
    const Eigen::Matrix4d sp_b = raise(Party::bob);
    Eigen::MatrixXd h = kron(heisenberg(jc.exchange_j), id_f) + kron(id_q, field);
    h += jc.omega_a * (kron(sp_a, lower_a) + kron(sp_a.transpose(), lower_a.transpose()));
    h += jc.omega_b * (kron(sp_b, lower_b) + kron(sp_b.transpose(), lower_b.transpose()));
    return h;
}

Eigen::MatrixXd excitation_number(int modes) {
    Eigen::VectorXd up(4);
    up << 2.0, 1.0, 1.0, 0.0;
    Eigen::VectorXd particles = Eigen::VectorXd::Ones(modes + 1);
    particles(0) = 0.0;
    return kron(up.asDiagonal().toDenseMatrix(), Eigen::MatrixXd::Identity(modes + 1, modes + 1)) +
           kron(Eigen::MatrixXd::Identity(4, 4), particles.asDiagonal().toDenseMatrix());
}

OracleGroundState perturbation_oracle(const JCParams& jc_in, const MomentumProfile& h_a, const MomentumProfile& h_b,
                                      double tolerance) {
    const JCParams jc = validate(jc_in);
    const SampledPair s = sample_on_common_grid(h_a, h_b);
    for (double p : s.momentum) {
        if (!(mode_energy(p, jc.mass) > 0.0)) {
            throw InvalidArgument("oracle modes need omega_k > 0");
        }
    }
    const int m = static_cast<int>(s.weight.size());
    const Eigen::MatrixXd h = jc_hamiltonian(jc, s);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("JC eigensolver failed");
    }
    if (solver.eigenvalues()(1) - solver.eigenvalues()(0) < 1e-12) {
        throw NumericalError("JC ground state is degenerate");
    }
    OracleGroundState out;
    out.modes = m;
    out.energy = solver.eigenvalues()(0);
    out.state = solver.eigenvectors().col(0);
    out.residual = (h * out.state - out.energy * out.state).norm();
    if (!(out.residual <= tolerance)) {
        throw NumericalError("JC eigenvector residual " + std::to_string(out.residual) + " above tolerance");
    }
    const int stride = m + 1;
    const double r2 = std::sqrt(0.5);
    double alpha = r2 * (out.state(1 * stride) - out.state(2 * stride));
    if (alpha < 0.0) {
        out.state = -out.state;
        alpha = -alpha;
    }
    out.alpha = alpha;
    out.beta = r2 * (out.state(1 * stride) + out.state(2 * stride));
    for (int k = 0; k < m; ++k) {
        const double w = s.weight[static_cast<std::size_t>(k)];
        const double c = out.state(3 * stride + 1 + k);
        out.one_particle.push_back(w > 0.0 ? c / (std::sqrt(2.0) * std::sqrt(w)) : 0.0);
    }
    const Eigen::VectorXd nexc = excitation_number(m).diagonal();
    double leak = 0.0;
    for (Eigen::Index i = 0; i < nexc.size(); ++i) {
        if (nexc(i) != 1.0) {
            leak += out.state(i) * out.state(i);
        }
    }
    out.excitation_leak = leak;
    return out;
}

double corrected_chsh_pipeline(const ModularParams& p, const JCParams& jc, const MomentumProfile& h_a,
                               const MomentumProfile& h_b, const QuadratureOptions& opts) {
    return chsh_corrected(p, delta_squared(jc, h_a, h_b, opts));
}

double oracle_chsh_expectation(const ModularParams& p, const OracleGroundState& ground, const FockConfig& cfg) {
    const int stride = ground.modes + 1;
    if (ground.state.size() != 4 * stride) {
        throw InvalidArgument("ground state has the wrong dimension");
    }
    const BellAssembly bell{build_dichotomic(Observable::A, p, 2, cfg),
                            build_dichotomic(Observable::A_prime, p, 2, cfg),
                            singlet_adapted(build_dichotomic(Observable::B, p, 2, cfg)),
                            singlet_adapted(build_dichotomic(Observable::B_prime, p, 2, cfg)),
                            Eigen::MatrixXcd()};
    const Eigen::VectorXcd field = frame_reference_state(p, cfg, FieldFrame::wedge_local);
    double total = 0.0;
    for (int k = 0; k < stride; ++k) {
        Eigen::VectorXcd qubits(4);
        for (int q = 0; q < 4; ++q) {
            qubits(q) = ground.state(q * stride + k);
        }
        if (qubits.squaredNorm() == 0.0) {
            continue;
        }
        total += bell_expectation(bell, product_state(field, qubits, 2));
    }
    return total;
}

} // namespace weylchsh
