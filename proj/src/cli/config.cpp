#include "cli/config.hpp"

#include <fstream>
#include <initializer_list>
#include <set>

#include "weylchsh/errors.hpp"

namespace weylchsh::cli {

namespace {

using nlohmann::json;

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!j.is_object()) {
        throw InvalidArgument(where + " must be an object");
    }
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& item : j.items()) {
        if (!ok.count(item.key())) {
            throw InvalidArgument("unknown field '" + item.key() + "' in " + where);
        }
    }
}

double get_number(const json& j, const char* key, double fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) {
        throw InvalidArgument(where + "." + key + " must be a number");
    }
    return j.at(key).get<double>();
}

long get_integer(const json& j, const char* key, long fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number_integer()) {
        throw InvalidArgument(where + "." + key + " must be an integer");
    }
    return j.at(key).get<long>();
}

std::string get_string(const json& j, const char* key, const std::string& fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_string()) {
        throw InvalidArgument(where + "." + key + " must be a string");
    }
    return j.at(key).get<std::string>();
}

cplx parse_complex(const json& j, const std::string& where) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return {j[0].get<double>(), j[1].get<double>()};
    }
    throw InvalidArgument(where + " must be a number or [re, im]");
}

ordered_json complex_json(cplx c) {
    if (c.imag() == 0.0) return c.real();
    return ordered_json::array({c.real(), c.imag()});
}

SpinState parse_spin_state(const std::string& s) {
    if (s == "double_singlet") return SpinState::double_singlet;
    if (s == "product") return SpinState::product;
    throw InvalidArgument("unknown spin state: " + s);
}

FieldFrame parse_frame(const std::string& s) {
    if (s == "wedge_local") return FieldFrame::wedge_local;
    if (s == "global_modes") return FieldFrame::global_modes;
    throw InvalidArgument("unknown frame: " + s);
}

ModularParams parse_modular(const json& j) {
    check_keys(j, {"eta", "eta_prime", "lambda"}, "modular");
    ModularParams p{get_number(j, "eta", kReferenceParams.eta, "modular"),
                    get_number(j, "eta_prime", kReferenceParams.eta_prime, "modular"),
                    get_number(j, "lambda", kReferenceParams.lambda, "modular")};
    return validate_params(p);
}

AngleSet parse_angles(const json& j, const std::string& where) {
    check_keys(j, {"alpha1", "alpha2", "alpha1p", "alpha2p", "beta1", "beta2", "beta1p", "beta2p"}, where);
    const AngleSet r = reference_angles();
    AngleSet a{get_number(j, "alpha1", r.alpha1, where), get_number(j, "alpha2", r.alpha2, where),
               get_number(j, "alpha1p", r.alpha1p, where), get_number(j, "alpha2p", r.alpha2p, where),
               get_number(j, "beta1", r.beta1, where),   get_number(j, "beta2", r.beta2, where),
               get_number(j, "beta1p", r.beta1p, where), get_number(j, "beta2p", r.beta2p, where)};
    if (!a.is_finite()) throw InvalidArgument(where + " angles must be finite");
    return a;
}

MomentumProfile parse_profile(const json& j, const std::string& where) {
    const std::string kind = get_string(j, "kind", "gaussian", where);
    if (kind == "gaussian") {
        check_keys(j, {"kind", "amplitude", "center", "width"}, where);
        GaussianProfile g;
        if (j.contains("amplitude")) g.amplitude = parse_complex(j.at("amplitude"), where + ".amplitude");
        g.center = get_number(j, "center", 0.0, where);
        g.width = get_number(j, "width", 1.0, where);
        MomentumProfile h{g};
        validate(h);
        return h;
    }
    if (kind == "discrete") {
        check_keys(j, {"kind", "modes"}, where);
        if (!j.contains("modes") || !j.at("modes").is_array()) {
            throw InvalidArgument(where + ".modes must be an array");
        }
        DiscreteProfile d;
        for (const auto& m : j.at("modes")) {
            const std::string w = where + ".modes[]";
            check_keys(m, {"weight", "momentum", "amplitude"}, w);
            DiscreteMode mode;
            mode.weight = get_number(m, "weight", 0.0, w);
            mode.momentum = get_number(m, "momentum", 0.0, w);
            if (m.contains("amplitude")) mode.amplitude = parse_complex(m.at("amplitude"), w + ".amplitude");
            d.modes.push_back(mode);
        }
        MomentumProfile h{d};
        validate(h);
        return h;
    }
    throw InvalidArgument("unknown profile kind: " + kind);
}

SweepAxis parse_axis(const json& j, const SweepAxis& fallback, const std::string& where) {
    check_keys(j, {"lo", "hi", "points"}, where);
    SweepAxis a{get_number(j, "lo", fallback.lo, where), get_number(j, "hi", fallback.hi, where),
                static_cast<int>(get_integer(j, "points", fallback.points, where))};
    if (a.points < 1 || !(a.lo <= a.hi)) {
        throw InvalidArgument(where + " needs lo <= hi and points >= 1");
    }
    return a;
}

ordered_json axis_json(const SweepAxis& a) {
    return {{"lo", a.lo}, {"hi", a.hi}, {"points", a.points}};
}

} // namespace

BipartiteState StateConfig::build() const {
    if (kind == "maximal") return BipartiteState::maximal(levels);
    if (kind == "finite") return BipartiteState::finite(coefficients);
    if (kind == "squeezed") return BipartiteState::squeezed(delta, m_max);
    throw InvalidArgument("unknown state kind: " + kind);
}

std::string to_string(SpinState s) {
    return s == SpinState::product ? "product" : "double_singlet";
}

std::string to_string(FieldFrame f) {
    return f == FieldFrame::global_modes ? "global_modes" : "wedge_local";
}

RunConfig parse_config(const json& j) {
    check_keys(j, {"modular", "fock", "state", "oracle", "jc", "profile_a", "profile_b", "jc_oracle", "angles",
                   "spin_state", "optimizer", "sweep", "tolerances"},
               "config");
    RunConfig c;
    if (j.contains("modular")) c.modular = parse_modular(j.at("modular"));
    if (j.contains("fock")) {
        check_keys(j.at("fock"), {"n_max"}, "fock");
        c.fock.n_max = static_cast<int>(get_integer(j.at("fock"), "n_max", c.fock.n_max, "fock"));
    }
    validate(c.fock);
    if (j.contains("state")) {
        const json& s = j.at("state");
        check_keys(s, {"kind", "levels", "coefficients", "delta", "m_max"}, "state");
        c.state.kind = get_string(s, "kind", c.state.kind, "state");
        c.state.levels = static_cast<int>(get_integer(s, "levels", c.state.levels, "state"));
        c.state.delta = get_number(s, "delta", c.state.delta, "state");
        c.state.m_max = static_cast<int>(get_integer(s, "m_max", c.state.m_max, "state"));
        if (s.contains("coefficients")) {
            if (!s.at("coefficients").is_array()) throw InvalidArgument("state.coefficients must be an array");
            for (const auto& x : s.at("coefficients")) c.state.coefficients.push_back(parse_complex(x, "state.coefficients[]"));
            c.state.levels = static_cast<int>(c.state.coefficients.size());
        }
    }
    c.state.build();
    if (j.contains("oracle")) {
        const json& o = j.at("oracle");
        check_keys(o, {"frame", "norm_max_dimension"}, "oracle");
        c.oracle.frame = parse_frame(get_string(o, "frame", to_string(c.oracle.frame), "oracle"));
        c.oracle.norm_max_dimension = get_integer(o, "norm_max_dimension", c.oracle.norm_max_dimension, "oracle");
    }
    if (j.contains("jc")) {
        const json& o = j.at("jc");
        check_keys(o, {"omega_a", "omega_b", "exchange_j", "mass"}, "jc");
        c.jc = JCParams{get_number(o, "omega_a", c.jc.omega_a, "jc"), get_number(o, "omega_b", c.jc.omega_b, "jc"),
                        get_number(o, "exchange_j", c.jc.exchange_j, "jc"), get_number(o, "mass", c.jc.mass, "jc")};
    }
    validate(c.jc);
    if (j.contains("profile_a")) c.profile_a = parse_profile(j.at("profile_a"), "profile_a");
    if (j.contains("profile_b")) c.profile_b = parse_profile(j.at("profile_b"), "profile_b");
    if (is_discrete(c.profile_a) || is_discrete(c.profile_b)) {
        sample_on_common_grid(c.profile_a, c.profile_b);
    }
    if (j.contains("jc_oracle")) {
        const json& o = j.at("jc_oracle");
        check_keys(o, {"modes", "p_max", "n_max"}, "jc_oracle");
        c.jc_oracle.modes = static_cast<int>(get_integer(o, "modes", c.jc_oracle.modes, "jc_oracle"));
        c.jc_oracle.p_max = get_number(o, "p_max", c.jc_oracle.p_max, "jc_oracle");
        c.jc_oracle.n_max = static_cast<int>(get_integer(o, "n_max", c.jc_oracle.n_max, "jc_oracle"));
        if (c.jc_oracle.modes < 1 || c.jc_oracle.p_max < 0.0) {
            throw InvalidArgument("jc_oracle needs modes >= 1 and p_max >= 0");
        }
        validate(FockConfig{c.jc_oracle.n_max});
    }
    if (j.contains("angles")) c.angles = parse_angles(j.at("angles"), "angles");
    if (j.contains("spin_state")) {
        if (!j.at("spin_state").is_string()) throw InvalidArgument("spin_state must be a string");
        c.spin_state = parse_spin_state(j.at("spin_state").get<std::string>());
    }
    if (j.contains("optimizer")) {
        const json& o = j.at("optimizer");
        check_keys(o, {"target", "budget", "seed", "bounds", "state", "start"}, "optimizer");
        c.optimizer.target = get_string(o, "target", c.optimizer.target, "optimizer");
        if (c.optimizer.target != "qft" && c.optimizer.target != "spin") {
            throw InvalidArgument("optimizer.target must be qft or spin");
        }
        c.optimizer.budget = get_integer(o, "budget", c.optimizer.budget, "optimizer");
        if (o.contains("seed")) {
            if (!o.at("seed").is_number_unsigned()) throw InvalidArgument("optimizer.seed must be a nonnegative integer");
            c.optimizer.seed = o.at("seed").get<std::uint64_t>();
        }
        if (o.contains("bounds")) {
            const json& b = o.at("bounds");
            check_keys(b, {"lo", "hi"}, "optimizer.bounds");
            for (const char* key : {"lo", "hi"}) {
                if (!b.contains(key)) continue;
                const json& arr = b.at(key);
                if (!arr.is_array() || arr.size() != 3) {
                    throw InvalidArgument(std::string("optimizer.bounds.") + key + " must be [eta, eta_prime, lambda]");
                }
                auto& dst = std::string(key) == "lo" ? c.optimizer.bounds.lo : c.optimizer.bounds.hi;
                for (std::size_t i = 0; i < 3; ++i) {
                    if (!arr[i].is_number()) throw InvalidArgument("optimizer bounds must be numbers");
                    dst[i] = arr[i].get<double>();
                }
            }
        }
        validate(c.optimizer.bounds);
        if (o.contains("state")) {
            if (!o.at("state").is_string()) throw InvalidArgument("optimizer.state must be a string");
            c.optimizer.state = parse_spin_state(o.at("state").get<std::string>());
        }
        if (o.contains("start")) c.optimizer.start = parse_angles(o.at("start"), "optimizer.start");
    }
    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        check_keys(s, {"eta", "eta_prime", "lambda", "norm_check_n_max"}, "sweep");
        if (s.contains("eta")) c.sweep.eta = parse_axis(s.at("eta"), c.sweep.eta, "sweep.eta");
        if (s.contains("eta_prime")) c.sweep.eta_prime = parse_axis(s.at("eta_prime"), c.sweep.eta_prime, "sweep.eta_prime");
        if (s.contains("lambda")) c.sweep.lambda = parse_axis(s.at("lambda"), c.sweep.lambda, "sweep.lambda");
        c.sweep.norm_check_n_max = static_cast<int>(get_integer(s, "norm_check_n_max", 0, "sweep"));
        if (c.sweep.norm_check_n_max < 0) throw InvalidArgument("sweep.norm_check_n_max must be >= 0");
    }
    if (c.sweep.eta.lo < 0.0 || c.sweep.eta_prime.lo < 0.0 || c.sweep.lambda.lo <= 0.0 || c.sweep.lambda.hi >= 1.0) {
        throw InvalidArgument("sweep box must satisfy eta, eta_prime >= 0 and 0 < lambda < 1");
    }
    if (j.contains("tolerances")) {
        const json& t = j.at("tolerances");
        check_keys(t, {"oracle", "quadrature_rel"}, "tolerances");
        c.tolerances.oracle = get_number(t, "oracle", c.tolerances.oracle, "tolerances");
        c.tolerances.quadrature_rel = get_number(t, "quadrature_rel", c.tolerances.quadrature_rel, "tolerances");
        if (!(c.tolerances.oracle > 0.0) || !(c.tolerances.quadrature_rel > 0.0)) {
            throw InvalidArgument("tolerances must be positive");
        }
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidArgument("cannot open config file: " + path);
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(j);
}

ordered_json to_json(const ModularParams& p) {
    return {{"eta", p.eta}, {"eta_prime", p.eta_prime}, {"lambda", p.lambda}};
}

ordered_json to_json(const AngleSet& a) {
    return {{"alpha1", a.alpha1}, {"alpha2", a.alpha2}, {"alpha1p", a.alpha1p}, {"alpha2p", a.alpha2p},
            {"beta1", a.beta1},   {"beta2", a.beta2},   {"beta1p", a.beta1p},   {"beta2p", a.beta2p}};
}

ordered_json to_json(const MomentumProfile& h) {
    if (const auto* g = std::get_if<GaussianProfile>(&h)) {
        return {{"kind", "gaussian"}, {"amplitude", complex_json(g->amplitude)}, {"center", g->center}, {"width", g->width}};
    }
    ordered_json modes = ordered_json::array();
    for (const auto& m : std::get<DiscreteProfile>(h).modes) {
        modes.push_back({{"weight", m.weight}, {"momentum", m.momentum}, {"amplitude", complex_json(m.amplitude)}});
    }
    return {{"kind", "discrete"}, {"modes", modes}};
}

ordered_json to_json(const RunConfig& c) {
    ordered_json coeffs = ordered_json::array();
    for (const cplx& x : c.state.coefficients) coeffs.push_back(complex_json(x));
    ordered_json state{{"kind", c.state.kind}, {"levels", c.state.levels}};
    if (c.state.kind == "finite") state["coefficients"] = coeffs;
    if (c.state.kind == "squeezed") {
        state["delta"] = c.state.delta;
        state["m_max"] = c.state.m_max;
    }
    ordered_json optimizer{{"target", c.optimizer.target},
                           {"budget", c.optimizer.budget},
                           {"seed", c.optimizer.seed},
                           {"bounds", {{"lo", c.optimizer.bounds.lo}, {"hi", c.optimizer.bounds.hi}}},
                           {"state", to_string(c.optimizer.state)}};
    if (c.optimizer.start) optimizer["start"] = to_json(*c.optimizer.start);
    return {{"modular", to_json(c.modular)},
            {"fock", {{"n_max", c.fock.n_max}}},
            {"state", state},
            {"oracle", {{"frame", to_string(c.oracle.frame)}, {"norm_max_dimension", c.oracle.norm_max_dimension}}},
            {"jc", {{"omega_a", c.jc.omega_a}, {"omega_b", c.jc.omega_b}, {"exchange_j", c.jc.exchange_j}, {"mass", c.jc.mass}}},
            {"profile_a", to_json(c.profile_a)},
            {"profile_b", to_json(c.profile_b)},
            {"jc_oracle", {{"modes", c.jc_oracle.modes}, {"p_max", c.jc_oracle.p_max}, {"n_max", c.jc_oracle.n_max}}},
            {"angles", to_json(c.angles)},
            {"spin_state", to_string(c.spin_state)},
            {"optimizer", optimizer},
            {"sweep",
             {{"eta", axis_json(c.sweep.eta)},
              {"eta_prime", axis_json(c.sweep.eta_prime)},
              {"lambda", axis_json(c.sweep.lambda)},
              {"norm_check_n_max", c.sweep.norm_check_n_max}}},
            {"tolerances", {{"oracle", c.tolerances.oracle}, {"quadrature_rel", c.tolerances.quadrature_rel}}}};
}

} // namespace weylchsh::cli
