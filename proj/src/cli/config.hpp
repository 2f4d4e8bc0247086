// config.hpp: JSON run configuration for the weylchsh tool

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "weylchsh/dichotomic_bell.hpp"
#include "weylchsh/jc_perturbation.hpp"
#include "weylchsh/modular_geometry.hpp"
#include "weylchsh/optimizer.hpp"
#include "weylchsh/spin_composite.hpp"

namespace weylchsh::cli {

using ordered_json = nlohmann::ordered_json;

struct StateConfig {
    std::string kind{"maximal"};  // maximal | finite | squeezed
    int levels{2};
    std::vector<cplx> coefficients;
    double delta{0.5};
    int m_max{0};

    BipartiteState build() const;
};

struct OracleConfig {
    FieldFrame frame{FieldFrame::wedge_local};
    long norm_max_dimension{2000};
};

struct JcOracleConfig {
    int modes{1};
    double p_max{0.0};  // 0: center + 6 width of the wider profile
    int n_max{16};
};

struct SweepAxis {
    double lo{0.0};
    double hi{1.0};
    int points{20};

    double at(int i) const { return points == 1 ? lo : lo + (hi - lo) * i / (points - 1); }
};

struct SweepConfig {
    SweepAxis eta{0.0, 3.0, 20};
    SweepAxis eta_prime{0.0, 3.0, 20};
    SweepAxis lambda{0.01, 0.99, 20};
    int norm_check_n_max{0};  // > 0: dense ||C|| at this truncation for every point
};

struct OptimizerConfig {
    std::string target{"qft"};  // qft | spin
    long budget{-1};            // -1: module default
    std::uint64_t seed{0};
    QftBounds bounds{};
    SpinState state{SpinState::double_singlet};
    std::optional<AngleSet> start;
};

struct Tolerances {
    double oracle{1e-6};
    double quadrature_rel{1e-8};
};

struct RunConfig {
    ModularParams modular{kReferenceParams};
    FockConfig fock{16};
    StateConfig state{};
    OracleConfig oracle{};
    JCParams jc{0.01, 0.0, 0.05, 0.1};
    MomentumProfile profile_a{DiscreteProfile{{{1.0, 0.0, cplx{1.0, 0.0}}}}};
    MomentumProfile profile_b{DiscreteProfile{{{1.0, 0.0, cplx{0.0, 0.0}}}}};
    JcOracleConfig jc_oracle{};
    AngleSet angles{reference_angles()};
    SpinState spin_state{SpinState::double_singlet};
    OptimizerConfig optimizer{};
    SweepConfig sweep{};
    Tolerances tolerances{};
};

// Rejects unknown keys and validates physical parameters. Throws InvalidArgument.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

ordered_json to_json(const RunConfig& c);
ordered_json to_json(const ModularParams& p);
ordered_json to_json(const AngleSet& a);
ordered_json to_json(const MomentumProfile& h);

std::string to_string(SpinState s);
std::string to_string(FieldFrame f);

} // namespace weylchsh::cli
