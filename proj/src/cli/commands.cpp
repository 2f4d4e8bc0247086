#include "cli/commands.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "cli/json_writer.hpp"
#include "weylchsh/errors.hpp"
#include "weylchsh/weyl_correlator.hpp"

namespace weylchsh::cli {

namespace {

constexpr double kNormSlack = 1e-9;

std::string csv_bool(bool b) { return b ? "true" : "false"; }

std::string csv_row(std::initializer_list<std::string> cells) {
    std::string s;
    bool first = true;
    for (const auto& c : cells) {
        if (!first) s += ",";
        first = false;
        s += c;
    }
    return s + "\n";
}

std::string f(double x) { return format_double(x); }

ordered_json nullable(double x, bool present) {
    return present ? ordered_json(x) : ordered_json(nullptr);
}

std::vector<int> oracle_ladder(int n) {
    std::vector<int> out;
    for (int k : {n / 2, (3 * n) / 4, n, (5 * n) / 4}) {
        k = std::max(k, 1);
        if (out.empty() || out.back() != k) out.push_back(k);
    }
    return out;
}

DiscreteProfile oracle_grid(const MomentumProfile& h, double mass, double p_max, int modes) {
    if (const auto* d = std::get_if<DiscreteProfile>(&h)) return *d;
    return discretize(std::get<GaussianProfile>(h), mass, p_max, modes);
}

double auto_p_max(const RunConfig& c) {
    if (c.jc_oracle.p_max > 0.0) return c.jc_oracle.p_max;
    double p = 1.0;
    for (const auto* h : {&c.profile_a, &c.profile_b}) {
        if (const auto* g = std::get_if<GaussianProfile>(h)) p = std::max(p, g->center + 6.0 * g->width);
    }
    return p;
}

} // namespace

Report cmd_correlator(const RunConfig& c) {
    const CorrelatorReport r = chsh_correlator(c.modular);
    Report out;
    out.result = {{"value", r.value},
                  {"terms", {{"w_f_jf", r.terms[0]}, {"w_fp_jf", r.terms[1]}, {"w_fp_jfp", r.terms[2]}}},
                  {"violation", r.violation},
                  {"tsirelson_bound", kTsirelsonBound}};
    out.csv = csv_row({"eta", "eta_prime", "lambda", "C0", "term1", "term2", "term3", "violation"}) +
              csv_row({f(c.modular.eta), f(c.modular.eta_prime), f(c.modular.lambda), f(r.value), f(r.terms[0]),
                       f(r.terms[1]), f(r.terms[2]), csv_bool(r.violation)});
    return out;
}

Report cmd_oracle(const RunConfig& c) {
    const BipartiteState state = c.state.build();
    const double c0 = chsh_closed_form(c.modular);
    const double r = qm_reduction(state);
    const double closed = r * c0;

    Report out;
    ordered_json table = ordered_json::array();
    std::string csv = csv_row({"n_max", "dimension", "oracle", "abs_error", "operator_norm"});
    double at_requested = 0.0;
    double norm_at_requested = 0.0;
    bool norm_present = false;
    bool monotone = true;
    double previous_error = 0.0;
    double max_norm = 0.0;
    bool first = true;
    for (int n : oracle_ladder(c.fock.n_max)) {
        const FockConfig cfg{n};
        const BellAssembly bell = make_assembly(c.modular, state, cfg, c.oracle.frame);
        const double value = bell_expectation(bell);
        const double err = std::abs(value - closed);
        const long dim = static_cast<long>(bell.a.dimension());
        const bool with_norm = dim <= c.oracle.norm_max_dimension;
        const double norm = with_norm ? operator_norm(bell_operator(bell)) : 0.0;
        if (with_norm) max_norm = std::max(max_norm, norm);
        if (!first && !(err < previous_error)) monotone = false;
        first = false;
        previous_error = err;
        if (n == c.fock.n_max) {
            at_requested = value;
            norm_at_requested = norm;
            norm_present = with_norm;
        }
        table.push_back({{"n_max", n}, {"dimension", dim}, {"oracle", value}, {"abs_error", err},
                         {"operator_norm", nullable(norm, with_norm)}});
        csv += csv_row({std::to_string(n), std::to_string(dim), f(value), f(err), with_norm ? f(norm) : ""});
    }
    const double diff = std::abs(at_requested - closed);
    out.result = {{"closed_form", closed},
                  {"c0", c0},
                  {"reduction", r},
                  {"oracle", at_requested},
                  {"abs_difference", diff},
                  {"operator_norm", nullable(norm_at_requested, norm_present)},
                  {"frame", to_string(c.oracle.frame)},
                  {"monotone", monotone},
                  {"convergence", table}};
    out.csv = csv;
    if (diff > c.tolerances.oracle) {
        out.status = kNumericalFailure;
        out.diagnostic = "oracle differs from closed form by " + f(diff);
    }
    if (max_norm > kTsirelsonBound + kNormSlack) {
        out.status = kNumericalFailure;
        out.diagnostic = "operator norm " + f(max_norm) + " exceeds 2 sqrt 2";
    }
    return out;
}

Report cmd_jc(const RunConfig& c) {
    const QuadratureOptions q{c.tolerances.quadrature_rel};
    const double c0 = chsh_closed_form(c.modular);
    const double d2 = delta_squared(c.jc, c.profile_a, c.profile_b, q);
    const double corrected = chsh_corrected(c.modular, d2);

    const double p_max = auto_p_max(c);
    const MomentumProfile ga{oracle_grid(c.profile_a, c.jc.mass, p_max, c.jc_oracle.modes)};
    const MomentumProfile gb{oracle_grid(c.profile_b, c.jc.mass, p_max, c.jc_oracle.modes)};
    const SecondOrderState second = second_order_state(c.jc, ga, gb, q);
    const OracleGroundState ground = perturbation_oracle(c.jc, ga, gb);
    const double oracle = oracle_chsh_expectation(c.modular, ground, FockConfig{c.jc_oracle.n_max});
    const double pipeline_grid = corrected_chsh_pipeline(c.modular, c.jc, ga, gb, q);

    Report out;
    out.result = {{"delta_sq", d2},
                  {"c0", c0},
                  {"corrected", corrected},
                  {"oracle",
                   {{"modes", ground.modes},
                    {"p_max", p_max},
                    {"delta_sq", second.delta_sq},
                    {"energy", ground.energy},
                    {"amplitude_singlet", ground.alpha},
                    {"amplitude_singlet_predicted", second.amplitude_singlet},
                    {"amplitude_psi1", ground.beta},
                    {"amplitude_psi1_predicted", second.amplitude_psi1},
                    {"chsh", oracle},
                    {"corrected", pipeline_grid},
                    {"residual", oracle - pipeline_grid}}}};
    out.csv = csv_row({"delta_sq", "C0", "corrected", "oracle_delta_sq", "oracle_chsh", "oracle_corrected", "residual"}) +
              csv_row({f(d2), f(c0), f(corrected), f(second.delta_sq), f(oracle), f(pipeline_grid),
                       f(oracle - pipeline_grid)});
    return out;
}

Report cmd_spin(const RunConfig& c) {
    const double signed_matrix = chsh_spin_signed(c.angles, c.spin_state);
    const bool singlet = c.spin_state == SpinState::double_singlet;
    const double closed = singlet ? chsh_spin_closed_form(c.angles) : 0.0;
    const double norm = operator_norm(spin_bell_operator(c.angles));
    Report out;
    out.result = {{"state", to_string(c.spin_state)},
                  {"angles_reduced", to_json(c.angles.reduced())},
                  {"chsh_matrix", std::abs(signed_matrix)},
                  {"chsh_closed_form", nullable(std::abs(closed), singlet)},
                  {"signed_matrix", signed_matrix},
                  {"signed_closed_form", nullable(closed, singlet)},
                  {"bell_operator_norm", norm},
                  {"violation", is_violation(signed_matrix)}};
    out.csv = csv_row({"state", "chsh_matrix", "chsh_closed_form", "bell_operator_norm", "violation"}) +
              csv_row({to_string(c.spin_state), f(std::abs(signed_matrix)), singlet ? f(std::abs(closed)) : "",
                       f(norm), csv_bool(is_violation(signed_matrix))});
    if (norm > kTsirelsonBound + 1e-12) {
        out.status = kNumericalFailure;
        out.diagnostic = "spin Bell operator norm exceeds 2 sqrt 2";
    }
    return out;
}

Report cmd_optimize(const RunConfig& c) {
    const auto& o = c.optimizer;
    Report out;
    if (o.target == "qft") {
        const long budget = o.budget < 0 ? kDefaultQftBudget : o.budget;
        const OptimizationResult r = maximize_chsh_qft(o.bounds, o.seed, budget);
        const auto& p = std::get<ModularParams>(r.best_params);
        out.result = {{"target", "qft"},       {"best_value", r.best_value}, {"best_params", to_json(p)},
                      {"starts", r.starts},    {"evaluations", r.evaluations}, {"seed", r.seed},
                      {"budget", budget}};
        out.csv = csv_row({"best_value", "eta", "eta_prime", "lambda", "starts", "evaluations", "seed"}) +
                  csv_row({f(r.best_value), f(p.eta), f(p.eta_prime), f(p.lambda), std::to_string(r.starts),
                           std::to_string(r.evaluations), std::to_string(r.seed)});
        return out;
    }
    const long budget = o.budget < 0 ? kDefaultSpinBudget : o.budget;
    const OptimizationResult r = maximize_chsh_spin(o.seed, budget, o.state, o.start);
    const auto& a = std::get<AngleSet>(r.best_params);
    out.result = {{"target", "spin"},      {"state", to_string(o.state)}, {"best_value", r.best_value},
                  {"best_params", to_json(a)}, {"starts", r.starts},      {"evaluations", r.evaluations},
                  {"seed", r.seed},        {"budget", budget}};
    out.csv = csv_row({"best_value", "alpha1", "alpha2", "alpha1p", "alpha2p", "beta1", "beta2", "beta1p", "beta2p",
                       "starts", "evaluations", "seed"}) +
              csv_row({f(r.best_value), f(a.alpha1), f(a.alpha2), f(a.alpha1p), f(a.alpha2p), f(a.beta1), f(a.beta2),
                       f(a.beta1p), f(a.beta2p), std::to_string(r.starts), std::to_string(r.evaluations),
                       std::to_string(r.seed)});
    return out;
}

Report cmd_sweep(const RunConfig& c) {
    const auto& s = c.sweep;
    Report out;
    std::ostringstream csv;
    csv << "eta,eta_prime,lambda,C0,violation\n";
    ordered_json rows = ordered_json::array();
    double max_c0 = -1.0;
    double max_norm = 0.0;
    long points = 0;
    long violations = 0;
    const BipartiteState maximal = BipartiteState::maximal(2);
    for (int i = 0; i < s.eta.points; ++i) {
        for (int j = 0; j < s.eta_prime.points; ++j) {
            for (int k = 0; k < s.lambda.points; ++k) {
                const ModularParams p{s.eta.at(i), s.eta_prime.at(j), s.lambda.at(k)};
                const double v = chsh_closed_form(validate_params(p));
                const bool viol = is_violation(v);
                if (s.norm_check_n_max > 0) {
                    const BellAssembly bell = make_assembly(p, maximal, FockConfig{s.norm_check_n_max});
                    max_norm = std::max(max_norm, operator_norm(bell_operator(bell)));
                }
                max_c0 = std::max(max_c0, std::abs(v));
                violations += viol ? 1 : 0;
                ++points;
                csv << f(p.eta) << ',' << f(p.eta_prime) << ',' << f(p.lambda) << ',' << f(v) << ','
                    << csv_bool(viol) << '\n';
                rows.push_back(ordered_json::array({p.eta, p.eta_prime, p.lambda, v, viol}));
            }
        }
    }
    out.csv = csv.str();
    out.result = {{"columns", {"eta", "eta_prime", "lambda", "C0", "violation"}},
                  {"points", points},
                  {"violations", violations},
                  {"max_abs_c0", max_c0},
                  {"max_operator_norm", nullable(max_norm, s.norm_check_n_max > 0)},
                  {"rows", rows}};
    if (max_c0 > kTsirelsonBound || max_norm > kTsirelsonBound + kNormSlack) {
        out.status = kNumericalFailure;
        out.diagnostic = "sweep point exceeds 2 sqrt 2";
    }
    return out;
}

ordered_json envelope(const std::string& command, const RunConfig& c, const Report& r) {
    return {{"tool", "weylchsh"},
            {"version", WEYLCHSH_VERSION},
            {"command", command},
            {"status", r.status == kSuccess ? "ok" : "failed"},
            {"config", to_json(c)},
            {"result", r.result}};
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bell-CHSH correlators for Weyl operators, qubits and spin composites", "weylchsh"};
    app.set_version_flag("--version", WEYLCHSH_VERSION);
    app.require_subcommand(1);

    std::string config_path;
    std::string format = "auto";
    std::uint64_t seed = 0;
    int nmax = 0;
    std::string out_path;

    const std::map<std::string, std::pair<std::string, std::function<Report(const RunConfig&)>>> commands{
        {"correlator", {"closed-form <C0> and its three terms", cmd_correlator}},
        {"oracle", {"truncated Fock-space Bell operator vs closed form", cmd_oracle}},
        {"jc", {"second-order JC correction and exact-diagonalization check", cmd_jc}},
        {"spin", {"spin-1 (x) spin-1/2 CHSH value", cmd_spin}},
        {"optimize", {"multistart search for the largest CHSH value", cmd_optimize}},
        {"sweep", {"<C0> over a lattice in (eta, eta', lambda)", cmd_sweep}},
    };
    for (const auto& [name, entry] : commands) {
        CLI::App* sub = app.add_subcommand(name, entry.first);
        sub->add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
        sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"auto", "json", "csv"}));
        sub->add_option("--seed", seed, "optimizer seed");
        sub->add_option("--nmax", nmax, "Fock occupation cutoff per mode")->check(CLI::PositiveNumber);
        sub->add_option("--out", out_path, "write the report here instead of stdout");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kInvalidConfig;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    const CLI::App* sub = app.get_subcommands().front();
    RunConfig cfg;
    Report report;
    try {
        cfg = config_path.empty() ? parse_config(nlohmann::json::object()) : load_config(config_path);
        if (sub->count("--seed")) cfg.optimizer.seed = seed;
        if (sub->count("--nmax")) cfg.fock.n_max = validate(FockConfig{nmax}).n_max;
        report = commands.at(command).second(cfg);
    } catch (const InvalidArgument& e) {
        err << "invalid configuration: " << e.what() << '\n';
        return kInvalidConfig;
    } catch (const nlohmann::json::exception& e) {
        err << "invalid configuration: " << e.what() << '\n';
        return kInvalidConfig;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    }

    const bool csv = format == "csv" || (format == "auto" && command == "sweep");
    const std::string text = csv ? report.csv : write_json(envelope(command, cfg, report));
    if (out_path.empty()) {
        out << text;
    } else {
        std::ofstream file(out_path, std::ios::binary);
        if (!file) {
            err << "cannot write " << out_path << '\n';
            return kNumericalFailure;
        }
        file << text;
    }
    if (report.status != kSuccess) {
        err << report.diagnostic << '\n';
    }
    return report.status;
}

} // namespace weylchsh::cli
