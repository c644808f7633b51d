#include "cavitynoon/runner.hpp"

#include <charconv>
#include <set>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cavitynoon/dynamics.hpp"
#include "cavitynoon/entanglement.hpp"
#include "cavitynoon/oracle.hpp"
#include "parallel.hpp"

namespace cavitynoon::runner {

namespace {

using nlohmann::ordered_json;

// fixed 9-significant-digit, locale-independent float formatting
std::string fmt9(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 9);
    return std::string(buf, res.ptr);
}

void write_text_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot open output file: " + path);
    out << body;
    if (!out) throw std::ios_base::failure("write failed: " + path);
}

std::vector<double> time_grid(const RunConfig& c) {
    if (c.explicit_grid) return *c.explicit_grid;
    if (c.steps < 1) throw CLI::ValidationError("steps", "must be >= 1");
    std::vector<double> grid;
    grid.reserve(c.steps);
    if (c.steps == 1) {
        grid.push_back(c.t_max);
    } else {
        for (int i = 0; i < c.steps; ++i)
            grid.push_back(c.t_max * static_cast<double>(i) / (c.steps - 1));
    }
    return grid;
}

std::string mode_name(Mode m) {
    switch (m) {
        case Mode::Spectrum: return "spectrum";
        case Mode::Simulate: return "simulate";
        case Mode::BellFit: return "bellfit";
        case Mode::OracleCompare: return "oracle-compare";
        case Mode::Degeneracy: return "degeneracy";
        case Mode::IdentityCheck: return "identity-check";
    }
    return "?";
}

ordered_json base_manifest(const RunConfig& c) {
    ordered_json m;
    m["mode"] = mode_name(c.mode);
    m["omega"] = c.params.omega;
    m["delta"] = c.params.delta;
    m["lambda"] = c.params.lambda;
    m["nu"] = c.params.nu;
    m["c_re"] = c.state.c.real();
    m["c_im"] = c.state.c.imag();
    m["n"] = c.state.n;
    m["epsilon"] = c.epsilon;
    m["truncation_cap"] = c.truncation_cap;
    m["t_max"] = c.t_max;
    m["steps"] = c.steps;
    m["n0"] = c.block.n0;
    m["n1"] = c.block.n1;
    m["lambda_min"] = c.lambda_min;
    m["lambda_max"] = c.lambda_max;
    m["lambda_steps"] = c.lambda_steps;
    m["omega_t"] = c.omega_t;
    m["identity_x"] = c.identity_x;
    m["identity_n_max"] = c.identity_n_max;
    m["identity_max_n"] = c.identity_max_n;
    m["n_max_local"] = c.n_max_local;
    m["zero_tol"] = c.zero_tol;
    m["seed"] = c.seed;
    m["output"] = c.output;
    m["threads"] = detail::thread_budget();
    m["adiabatic_regime_flagged"] = c.params.adiabatic_flagged();
    return m;
}

void finish_manifest(const RunConfig& c, ordered_json& m,
                     std::chrono::steady_clock::time_point started) {
    const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started);
    m["wall_time_seconds"] = elapsed.count();
    write_text_file(c.output + ".manifest.json", m.dump(2) + "\n");
}

int run_simulate(const RunConfig& c, ordered_json& manifest) {
    const auto grid = time_grid(c);
    const NoonSimulator sim(c.state, c.params, c.epsilon, c.truncation_cap);
    manifest["truncation_n_max"] = sim.n_max();
    manifest["captured_weight"] = sim.captured_weight();

    std::vector<TracePoint> trace(grid.size());
    detail::parallel_for(grid.size(), [&](std::size_t i) {
        trace[i].omega_t = grid[i];
        trace[i].rho = sim.reduced_density(grid[i]);
        trace[i].concurrence = entanglement::concurrence(trace[i].rho.rho);
    });

    static constexpr int kUpper[10][2] = {{0, 0}, {0, 1}, {0, 2}, {0, 3}, {1, 1},
                                          {1, 2}, {1, 3}, {2, 2}, {2, 3}, {3, 3}};
    std::ostringstream csv;
    csv << "omega_t,concurrence";
    for (const auto& ij : kUpper)
        csv << ",rho_re_" << ij[0] << ij[1] << ",rho_im_" << ij[0] << ij[1];
    csv << "\n";
    for (const auto& pt : trace) {
        csv << fmt9(pt.omega_t) << "," << fmt9(pt.concurrence);
        for (const auto& ij : kUpper) {
            const auto v = pt.rho.rho(ij[0], ij[1]);
            csv << "," << fmt9(v.real()) << "," << fmt9(v.imag());
        }
        csv << "\n";
    }
    write_text_file(c.output, csv.str());

    const auto death = entanglement::detect_sudden_death(trace, c.zero_tol);
    ordered_json intervals = ordered_json::array();
    for (const auto& iv : death.intervals)
        intervals.push_back({{"t_start", iv.t_start}, {"t_end", iv.t_end}});
    manifest["sudden_death_intervals"] = intervals;
    manifest["sudden_death_longest"] = death.longest_duration;
    return kOk;
}

int run_spectrum(const RunConfig& c, ordered_json& manifest) {
    if (c.lambda_steps < 1) throw CLI::ValidationError("lambda-steps", "must be >= 1");
    std::vector<double> grid;
    for (int i = 0; i < c.lambda_steps; ++i)
        grid.push_back(c.lambda_steps == 1
                           ? c.lambda_min
                           : c.lambda_min + (c.lambda_max - c.lambda_min) * i / (c.lambda_steps - 1));
    const auto rows = energy_sweep(c.params, c.block, grid);
    std::ostringstream csv;
    csv << "lambda,E0,E1,Eplus,Eminus,parity0,parity1,parityP,parityM\n";
    for (const auto& r : rows) {
        csv << fmt9(r.lambda);
        for (double e : r.energy) csv << "," << fmt9(e);
        for (int p : r.parity) csv << "," << p;
        csv << "\n";
    }
    write_text_file(c.output, csv.str());
    manifest["rows"] = rows.size();
    return kOk;
}

int run_degeneracy(const RunConfig& c, ordered_json& manifest) {
    const auto couplings = degeneracy_couplings(c.params, c.block, c.lambda_max);
    std::ostringstream csv;
    csv << "k,lambda\n";
    for (std::size_t i = 0; i < couplings.size(); ++i)
        csv << (i + 1) << "," << fmt9(couplings[i]) << "\n";
    write_text_file(c.output, csv.str());
    manifest["count"] = couplings.size();
    return kOk;
}

int run_bellfit(const RunConfig& c, ordered_json& manifest) {
    const NoonSimulator sim(c.state, c.params, c.epsilon, c.truncation_cap);
    manifest["truncation_n_max"] = sim.n_max();
    manifest["captured_weight"] = sim.captured_weight();
    const QubitDensityMatrix rho = sim.reduced_density(c.omega_t);
    const auto fit = entanglement::bell_fit(rho.rho);
    const double conc = entanglement::concurrence(rho.rho);

    ordered_json out;
    out["omega_t"] = c.omega_t;
    out["concurrence"] = conc;
    out["distance"] = fit.distance;
    out["dominant"] = entanglement::to_string(fit.dominant);
    out["degenerate_top"] = fit.degenerate_top;
    const auto put = [&](ordered_json& dst, const char* name, std::complex<double> v) {
        dst["coefficients"][name] = {{"re", v.real()}, {"im", v.imag()}};
    };
    put(out, "phi_plus", fit.alpha);
    put(out, "phi_minus", fit.beta);
    put(out, "psi_plus", fit.gamma);
    put(out, "psi_minus", fit.delta);

    // restricted to real mixtures of the generalized Bell states
    const auto real_fit = entanglement::bell_fit_real(rho.rho);
    ordered_json real_out;
    real_out["distance"] = real_fit.distance;
    real_out["dominant"] = entanglement::to_string(real_fit.dominant);
    real_out["degenerate_top"] = real_fit.degenerate_top;
    put(real_out, "phi_plus", real_fit.alpha);
    put(real_out, "phi_minus", real_fit.beta);
    put(real_out, "psi_plus", real_fit.gamma);
    put(real_out, "psi_minus", real_fit.delta);
    out["real_mixture"] = real_out;

    write_text_file(c.output, out.dump(2) + "\n");
    return kOk;
}

int run_oracle_compare(const RunConfig& c, ordered_json& manifest) {
    const auto grid = time_grid(c);
    const NoonSimulator sim(c.state, c.params, c.epsilon, c.truncation_cap);
    const oracle::FockTruncation trunc{c.n_max_local};
    const oracle::ExactEvolution exact(c.state, c.params, trunc);
    manifest["truncation_n_max"] = sim.n_max();
    manifest["captured_weight"] = sim.captured_weight();
    manifest["oracle_dimension"] = trunc.dimension();

    std::ostringstream csv;
    csv << "omega_t,max_abs_deviation,concurrence_adiabatic,concurrence_exact\n";
    double worst = 0.0;
    for (double t : grid) {
        const QubitDensityMatrix a = sim.reduced_density(t);
        const QubitDensityMatrix e = exact.reduced_density(t);
        double dev = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                dev = std::max(dev, std::abs(a.rho(i, j) - e.rho(i, j)));
        worst = std::max(worst, dev);
        csv << fmt9(t) << "," << fmt9(dev) << "," << fmt9(entanglement::concurrence(a.rho))
            << "," << fmt9(entanglement::concurrence(e.rho)) << "\n";
    }
    write_text_file(c.output, csv.str());
    manifest["max_abs_deviation"] = worst;
    manifest["parity_commutator_norm"] = oracle::parity_commutator_norm(c.params, trunc);
    return kOk;
}

int run_identity_check(const RunConfig& c, ordered_json& manifest) {
    std::vector<double> xs;
    if (c.identity_x > 0.0) {
        xs.push_back(c.identity_x);
    } else {
        const double l2 = c.params.lambda * c.params.lambda;
        xs.push_back(2.0 * l2 / (c.params.omega0() * c.params.omega0()));
        xs.push_back(2.0 * l2 / (c.params.omega1() * c.params.omega1()));
    }
    std::ostringstream csv;
    csv << "n0,n1,n0p,n1p,x,lhs,rhs,abs_err,rel_err\n";
    double worst_rel = 0.0, worst_abs = 0.0;
    for (double x : xs) {
        const auto results = states::hypergeometric_identity_grid(c.identity_max_n, x, c.identity_n_max);
        for (const auto& r : results) {
            const double abs_err = std::abs(r.lhs - r.rhs);
            const double rel_err = r.rhs != 0.0 ? abs_err / std::abs(r.rhs) : 0.0;
            if (r.rhs != 0.0)
                worst_rel = std::max(worst_rel, rel_err);
            else
                worst_abs = std::max(worst_abs, abs_err);
            csv << r.n0 << "," << r.n1 << "," << r.n0p << "," << r.n1p << "," << fmt9(x) << ","
                << fmt9(r.lhs) << "," << fmt9(r.rhs) << "," << fmt9(abs_err) << "," << fmt9(rel_err)
                << "\n";
        }
    }
    write_text_file(c.output, csv.str());
    manifest["worst_diagonal_rel_err"] = worst_rel;
    manifest["worst_offdiagonal_abs_err"] = worst_abs;
    return kOk;
}

// layered option: value precedence is flag > config file > default
struct ConfigLayer {
    struct Binding {
        std::string key;
        CLI::Option* option = nullptr;
        std::function<void(const nlohmann::json&)> apply;
    };
    std::vector<Binding> bindings;
    std::string path;

    void bind_double(CLI::Option* opt, const std::string& key, double* target) {
        bindings.push_back({key, opt, [target](const nlohmann::json& v) { *target = v.get<double>(); }});
    }
    void bind_int(CLI::Option* opt, const std::string& key, int* target) {
        bindings.push_back({key, opt, [target](const nlohmann::json& v) { *target = v.get<int>(); }});
    }
    void bind_string(CLI::Option* opt, const std::string& key, std::string* target) {
        bindings.push_back({key, opt, [target](const nlohmann::json& v) { *target = v.get<std::string>(); }});
    }

    void apply() const {
        if (path.empty()) return;
        std::ifstream in(path);
        if (!in) throw std::ios_base::failure("cannot open config file: " + path);
        nlohmann::json doc;
        in >> doc;
        if (!doc.is_object()) throw std::ios_base::failure("config file must hold a flat JSON object");
        // every subcommand registers its own copy of the shared options, so a
        // key counts as flag-provided if any of its options was parsed
        std::set<std::string> provided;
        for (const auto& b : bindings)
            if (b.option->count() > 0) provided.insert(b.key);
        for (const auto& b : bindings)
            if (!provided.contains(b.key) && doc.contains(b.key)) b.apply(doc.at(b.key));
    }
};

struct ParsedCli {
    RunConfig config;
    ConfigLayer layer;
    double c_re = 0.0, c_im = 0.0;
    std::string t_list;
    bool has_subcommand = false;
};

void add_physics_options(CLI::App* cmd, ParsedCli& p, bool with_state) {
    auto& c = p.config;
    auto& L = p.layer;
    L.bind_double(cmd->add_option("--omega", c.params.omega, "oscillator frequency"), "omega", &c.params.omega);
    L.bind_double(cmd->add_option("--delta", c.params.delta, "qubit splitting"), "delta", &c.params.delta);
    L.bind_double(cmd->add_option("--lambda", c.params.lambda, "qubit-oscillator coupling"), "lambda", &c.params.lambda);
    L.bind_double(cmd->add_option("--nu", c.params.nu, "photon hopping"), "nu", &c.params.nu);
    if (with_state) {
        L.bind_int(cmd->add_option("--n", c.state.n, "N00N photon number"), "n", &c.state.n);
        L.bind_double(cmd->add_option("--c-re", p.c_re, "Re c"), "c-re", &p.c_re);
        L.bind_double(cmd->add_option("--c-im", p.c_im, "Im c"), "c-im", &p.c_im);
        L.bind_double(cmd->add_option("--epsilon", c.epsilon, "truncation tail tolerance"), "epsilon", &c.epsilon);
        L.bind_int(cmd->add_option("--truncation-cap", c.truncation_cap, "hard per-mode N_max cap"),
                   "truncation-cap", &c.truncation_cap);
    }
    L.bind_string(cmd->add_option("--output", c.output, "output data file"), "output", &c.output);
    L.bind_int(cmd->add_option("--seed", c.seed, "seed (randomized tooling only)"), "seed", &c.seed);
    cmd->add_option("--config", p.layer.path, "flat JSON config file; flags override");
}

void add_grid_options(CLI::App* cmd, ParsedCli& p) {
    auto& c = p.config;
    auto& L = p.layer;
    L.bind_double(cmd->add_option("--t-max", c.t_max, "largest omega*t"), "t-max", &c.t_max);
    L.bind_int(cmd->add_option("--steps", c.steps, "grid points"), "steps", &c.steps);
    L.bind_string(cmd->add_option("--t-list", p.t_list, "explicit comma-separated omega*t list"),
                  "t-list", &p.t_list);
}

} // namespace

int thread_budget() { return detail::thread_budget(); }

std::optional<RunConfig> parse_cli(const std::vector<std::string>& args, int& exit_code,
                                   std::string& error_message) {
    ParsedCli parsed;
    RunConfig& c = parsed.config;
    c.output = "";

    CLI::App app{"two-cavity N00N-state entanglement dynamics"};
    app.require_subcommand(1);

    CLI::App* simulate = app.add_subcommand("simulate", "concurrence/density-matrix trace CSV");
    add_physics_options(simulate, parsed, true);
    add_grid_options(simulate, parsed);
    parsed.layer.bind_double(simulate->add_option("--zero-tol", c.zero_tol, "sudden-death tolerance"),
                             "zero-tol", &c.zero_tol);

    CLI::App* spectrum = app.add_subcommand("spectrum", "block energies over a coupling grid");
    add_physics_options(spectrum, parsed, false);
    parsed.layer.bind_int(spectrum->add_option("--n0", c.block.n0, "delocalized N0"), "n0", &c.block.n0);
    parsed.layer.bind_int(spectrum->add_option("--n1", c.block.n1, "delocalized N1"), "n1", &c.block.n1);
    parsed.layer.bind_double(spectrum->add_option("--lambda-min", c.lambda_min, "grid start"),
                             "lambda-min", &c.lambda_min);
    parsed.layer.bind_double(spectrum->add_option("--lambda-max", c.lambda_max, "grid end"),
                             "lambda-max", &c.lambda_max);
    parsed.layer.bind_int(spectrum->add_option("--lambda-steps", c.lambda_steps, "grid points"),
                          "lambda-steps", &c.lambda_steps);

    CLI::App* degeneracy = app.add_subcommand("degeneracy", "couplings where the block coupling vanishes");
    add_physics_options(degeneracy, parsed, false);
    parsed.layer.bind_int(degeneracy->add_option("--n0", c.block.n0, "delocalized N0"), "n0", &c.block.n0);
    parsed.layer.bind_int(degeneracy->add_option("--n1", c.block.n1, "delocalized N1"), "n1", &c.block.n1);
    parsed.layer.bind_double(degeneracy->add_option("--lambda-max", c.lambda_max, "search bound"),
                             "lambda-max", &c.lambda_max);

    CLI::App* bellfit = app.add_subcommand("bellfit", "nearest generalized Bell state at one instant");
    add_physics_options(bellfit, parsed, true);
    parsed.layer.bind_double(bellfit->add_option("--omega-t", c.omega_t, "instant (omega*t)"),
                             "omega-t", &c.omega_t);

    CLI::App* oracle_cmp = app.add_subcommand("oracle-compare", "adiabatic vs exact reduced density");
    add_physics_options(oracle_cmp, parsed, true);
    add_grid_options(oracle_cmp, parsed);
    parsed.layer.bind_int(oracle_cmp->add_option("--n-max-local", c.n_max_local, "per-cavity Fock cutoff"),
                          "n-max-local", &c.n_max_local);

    CLI::App* identity = app.add_subcommand("identity-check", "orthonormality identity sweep");
    add_physics_options(identity, parsed, false);
    parsed.layer.bind_double(identity->add_option("--x", c.identity_x, "identity argument (0: derive per mode)"),
                             "x", &c.identity_x);
    parsed.layer.bind_int(identity->add_option("--nmax", c.identity_n_max, "truncation of the double sum"),
                          "nmax", &c.identity_n_max);
    parsed.layer.bind_int(identity->add_option("--max-n", c.identity_max_n, "photon index bound"),
                          "max-n", &c.identity_max_n);

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    try {
        app.parse(argv_rev);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        exit_code = kOk;
        return std::nullopt;
    } catch (const CLI::ParseError& e) {
        error_message = std::string("error: config: ") + e.what();
        exit_code = kConfigError;
        return std::nullopt;
    }

    try {
        parsed.layer.apply();
    } catch (const std::exception& e) {
        error_message = std::string("error: io: ") + e.what();
        exit_code = kConfigError;
        return std::nullopt;
    }

    if (simulate->parsed()) c.mode = Mode::Simulate;
    if (spectrum->parsed()) c.mode = Mode::Spectrum;
    if (degeneracy->parsed()) c.mode = Mode::Degeneracy;
    if (bellfit->parsed()) c.mode = Mode::BellFit;
    if (oracle_cmp->parsed()) c.mode = Mode::OracleCompare;
    if (identity->parsed()) c.mode = Mode::IdentityCheck;

    c.state.c = {parsed.c_re, parsed.c_im};
    if (!parsed.t_list.empty()) {
        std::vector<double> grid;
        std::stringstream ss(parsed.t_list);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                grid.push_back(std::stod(item));
            } catch (...) {
                error_message = "error: config: bad --t-list entry '" + item + "'";
                exit_code = kConfigError;
                return std::nullopt;
            }
        }
        c.explicit_grid = grid;
    }
    if (c.output.empty()) c.output = mode_name(c.mode) + std::string(".csv");
    exit_code = kOk;
    return c;
}

int run(const RunConfig& config) {
    const auto started = std::chrono::steady_clock::now();
    try {
        config.params.validate();
        ordered_json manifest = base_manifest(config);
        int rc = kOk;
        switch (config.mode) {
            case Mode::Simulate: rc = run_simulate(config, manifest); break;
            case Mode::Spectrum: rc = run_spectrum(config, manifest); break;
            case Mode::Degeneracy: rc = run_degeneracy(config, manifest); break;
            case Mode::BellFit: rc = run_bellfit(config, manifest); break;
            case Mode::OracleCompare: rc = run_oracle_compare(config, manifest); break;
            case Mode::IdentityCheck: rc = run_identity_check(config, manifest); break;
        }
        if (rc == kOk) finish_manifest(config, manifest, started);
        return rc;
    } catch (const PhysicsDomainError& e) {
        std::cerr << "error: physics-domain: " << e.what() << "\n";
        return kPhysicsError;
    } catch (const TruncationCapError& e) {
        std::cerr << "error: truncation-cap: " << e.what() << "\n";
        return kTruncationError;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: io: " << e.what() << "\n";
        return kConfigError;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return kConfigError;
    }
}

int run_cli(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    int exit_code = kOk;
    std::string error;
    const auto config = parse_cli(args, exit_code, error);
    if (!config) {
        if (!error.empty()) std::cerr << error << "\n";
        return exit_code;
    }
    return run(*config);
}

} // namespace cavitynoon::runner
