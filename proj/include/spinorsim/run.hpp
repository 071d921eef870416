#ifndef SPINORSIM_RUN_HPP
#define SPINORSIM_RUN_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "evolve.hpp"
#include "ground.hpp"
#include "prepare.hpp"
#include "squeeze.hpp"

namespace spinorsim {

/// One fully validated experiment description parsed from a flat
/// `key = value` config file.
struct RunConfig {
    std::string subcommand; // ground | evolve | stationary | validate
    int total_n = 0;
    ModelParams params;

    std::string state_kind = "fock"; // fock | coherent | angular
    ModeOccupation occupation{};
    std::optional<double> p0;
    double theta = 0.0;
    std::optional<std::array<cplx, 3>> alphas;
    int angular_l = 0;
    int angular_m = 0;

    int ground_m = 0;

    TimeGrid grid{0.0, 3.14159265358979323846, 512};
    double scan_phi = 2.0 * 3.14159265358979323846 / 3.0;
    double scan_alpha = 0.0;
    int phi_points = 180;
    int alpha_points = 180;

    std::string csv_path = "run.csv";
    std::string report_path = "report.txt";
    bool emit_plot_script = false;
    std::string plot_script_path = "plot.gp";

    int threads = 1;
    unsigned long seed = 12345;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw config_error(key, "expected a number, got '" + value + "'");
    }
}

inline int parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        int v = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw config_error(key, "expected an integer, got '" + value + "'");
    }
}

inline bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw config_error(key, "expected a boolean, got '" + value + "'");
}

} // namespace detail

/// Parse and fully validate a config file. Unknown keys are rejected; every
/// error is a config_error naming the offending field.
inline RunConfig parse_config(const std::string& path, const std::string& subcommand) {
    std::ifstream in(path);
    if (!in) throw config_error("config", "cannot open '" + path + "'");
    RunConfig cfg;
    cfg.subcommand = subcommand;

    bool has_n = false;
    std::optional<double> alpha_b, beta_b, gamma_b;
    std::array<std::optional<double>, 6> alpha_parts; // (-,0,+) x (re,im)
    std::optional<int> occ_minus, occ_zero, occ_plus, ang_l, ang_m;

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("line " + std::to_string(lineno), "expected 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw config_error("line " + std::to_string(lineno), "empty key or value");

        if (key == "N") {
            cfg.total_n = detail::parse_int(key, value);
            has_n = true;
        } else if (key == "params.lambda_a") {
            cfg.params.lambda_a = detail::parse_double(key, value);
        } else if (key == "params.lambda_s") {
            cfg.params.lambda_s = detail::parse_double(key, value);
        } else if (key == "params.mu") {
            cfg.params.mu = detail::parse_double(key, value);
        } else if (key == "params.alpha_B") {
            alpha_b = detail::parse_double(key, value);
        } else if (key == "params.beta_B") {
            beta_b = detail::parse_double(key, value);
        } else if (key == "params.gamma_B") {
            gamma_b = detail::parse_double(key, value);
        } else if (key == "state.kind") {
            if (value != "fock" && value != "coherent" && value != "angular")
                throw config_error(key, "expected fock | coherent | angular");
            cfg.state_kind = value;
        } else if (key == "state.n_minus") {
            occ_minus = detail::parse_int(key, value);
        } else if (key == "state.n_zero") {
            occ_zero = detail::parse_int(key, value);
        } else if (key == "state.n_plus") {
            occ_plus = detail::parse_int(key, value);
        } else if (key == "state.P0") {
            cfg.p0 = detail::parse_double(key, value);
        } else if (key == "state.theta") {
            cfg.theta = detail::parse_double(key, value);
        } else if (key == "state.alpha_minus_re") {
            alpha_parts[0] = detail::parse_double(key, value);
        } else if (key == "state.alpha_minus_im") {
            alpha_parts[1] = detail::parse_double(key, value);
        } else if (key == "state.alpha_zero_re") {
            alpha_parts[2] = detail::parse_double(key, value);
        } else if (key == "state.alpha_zero_im") {
            alpha_parts[3] = detail::parse_double(key, value);
        } else if (key == "state.alpha_plus_re") {
            alpha_parts[4] = detail::parse_double(key, value);
        } else if (key == "state.alpha_plus_im") {
            alpha_parts[5] = detail::parse_double(key, value);
        } else if (key == "state.l") {
            ang_l = detail::parse_int(key, value);
        } else if (key == "state.m") {
            ang_m = detail::parse_int(key, value);
        } else if (key == "ground.m") {
            cfg.ground_m = detail::parse_int(key, value);
        } else if (key == "time.start") {
            cfg.grid.t_start = detail::parse_double(key, value);
        } else if (key == "time.stop") {
            cfg.grid.t_stop = detail::parse_double(key, value);
        } else if (key == "time.steps") {
            cfg.grid.steps = detail::parse_int(key, value);
        } else if (key == "scan.phi") {
            cfg.scan_phi = detail::parse_double(key, value);
        } else if (key == "scan.alpha") {
            cfg.scan_alpha = detail::parse_double(key, value);
        } else if (key == "scan.phi_points") {
            cfg.phi_points = detail::parse_int(key, value);
        } else if (key == "scan.alpha_points") {
            cfg.alpha_points = detail::parse_int(key, value);
        } else if (key == "output.csv") {
            cfg.csv_path = value;
        } else if (key == "output.report") {
            cfg.report_path = value;
        } else if (key == "output.plot_script") {
            cfg.emit_plot_script = detail::parse_bool(key, value);
        } else if (key == "output.plot_script_path") {
            cfg.plot_script_path = value;
        } else {
            throw config_error(key, "unknown key");
        }
    }

    if (!has_n) throw config_error("N", "missing");
    if (cfg.total_n < 1) throw config_error("N", "must be >= 1");
    if (alpha_b || beta_b || gamma_b)
        cfg.params.magnetic = MagneticParams{alpha_b.value_or(0.0), beta_b.value_or(0.0),
                                             gamma_b.value_or(0.0)};

    // only evolve and stationary build an initial state
    const bool needs_state = subcommand == "evolve" || subcommand == "stationary";
    if (!needs_state) {
        // keep defaults; state keys are still parsed and type-checked above
    } else if (cfg.state_kind == "fock") {
        if (!occ_minus || !occ_zero || !occ_plus)
            throw config_error("state.n_minus", "fock state needs n_minus, n_zero, n_plus");
        cfg.occupation = ModeOccupation{*occ_minus, *occ_zero, *occ_plus};
        if (!cfg.occupation.valid()) throw config_error("state.n_minus", "negative occupation");
        if (cfg.occupation.total() != cfg.total_n)
            throw config_error("state.n_zero", "occupations must sum to N");
    } else if (cfg.state_kind == "coherent") {
        bool any_part = false;
        for (const auto& p : alpha_parts) any_part = any_part || p.has_value();
        if (cfg.p0 && any_part)
            throw config_error("state.P0", "give P0/theta or explicit alphas, not both");
        if (cfg.p0) {
            if (*cfg.p0 < 0.0 || *cfg.p0 > 1.0) throw config_error("state.P0", "out of [0,1]");
        } else if (any_part) {
            std::array<cplx, 3> a;
            for (int j = 0; j < 3; ++j)
                a[j] = cplx(alpha_parts[2 * j].value_or(0.0), alpha_parts[2 * j + 1].value_or(0.0));
            const double n2 = std::norm(a[0]) + std::norm(a[1]) + std::norm(a[2]);
            if (std::abs(n2 - 1.0) > 1e-9)
                throw config_error("state.alpha_zero_re", "amplitudes must be normalized");
            cfg.alphas = a;
        } else {
            throw config_error("state.P0", "coherent state needs P0/theta or explicit alphas");
        }
    } else { // angular
        if (!ang_l || !ang_m) throw config_error("state.l", "angular state needs l and m");
        cfg.angular_l = *ang_l;
        cfg.angular_m = *ang_m;
        if (!AngularLabel{cfg.angular_l, cfg.angular_m, cfg.total_n}.valid())
            throw config_error("state.l", "invalid (l, m) for this N");
    }

    if (std::abs(cfg.ground_m) > cfg.total_n) throw config_error("ground.m", "|m| > N");
    try {
        cfg.grid.validate();
    } catch (const std::exception& e) {
        throw config_error("time.steps", e.what());
    }
    if (cfg.phi_points < 3) throw config_error("scan.phi_points", "must be >= 3");
    if (cfg.alpha_points < 3) throw config_error("scan.alpha_points", "must be >= 3");
    return cfg;
}

inline StateVector initial_state(const RunConfig& cfg) {
    if (cfg.state_kind == "fock") return fock_state(cfg.occupation);
    if (cfg.state_kind == "coherent") {
        CoherentSpec spec = cfg.alphas
                                ? CoherentSpec{*cfg.alphas, cfg.total_n}
                                : CoherentSpec::from_populations(cfg.total_n, *cfg.p0, cfg.theta);
        return coherent_state(spec);
    }
    return angular_state(AngularLabel{cfg.angular_l, cfg.angular_m, cfg.total_n});
}

namespace detail {

/// Fixed CSV number format: 17 significant digits, '.' decimal point.
inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline void write_csv(const std::string& path, const std::vector<std::string>& columns,
                      const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path, std::ios::binary); // '\n' endings on every platform
    if (!out) throw config_error("output.csv", "cannot open '" + path + "' for writing");
    for (std::size_t j = 0; j < columns.size(); ++j)
        out << (j ? "," : "") << columns[j];
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t j = 0; j < row.size(); ++j)
            out << (j ? "," : "") << fmt17(row[j]);
        out << '\n';
    }
}

inline void parallel_for(int count, int threads, const std::function<void(int)>& body) {
    if (threads <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    const int k = std::min(threads, count);
    for (int w = 0; w < k; ++w)
        pool.emplace_back([&, w] {
            for (int i = w; i < count; i += k) body(i);
        });
    for (auto& t : pool) t.join();
}

} // namespace detail

/// gnuplot script rendering the named columns of a CSV against its first
/// column; layout mirrors the artifact figures.
inline void emit_plot_script(const std::string& script_path, const std::string& csv_path,
                             const std::vector<std::string>& all_columns,
                             const std::vector<std::string>& plot_columns,
                             const std::string& xlabel) {
    auto index_of = [&](const std::string& name) -> int {
        for (std::size_t j = 0; j < all_columns.size(); ++j)
            if (all_columns[j] == name) return static_cast<int>(j) + 1; // gnuplot is 1-based
        throw config_error("output.plot_script", "column '" + name + "' not in the CSV");
    };
    std::ofstream out(script_path, std::ios::binary);
    if (!out) throw config_error("output.plot_script", "cannot open '" + script_path + "'");
    out << "set datafile separator ','\n";
    out << "set key autotitle columnhead\n";
    out << "set xlabel '" << xlabel << "'\n";
    out << "plot";
    bool first = true;
    for (const auto& name : plot_columns) {
        out << (first ? " " : ", \\\n     ") << "'" << csv_path << "' using 1:" << index_of(name)
            << " with lines title '" << name << "'";
        first = false;
    }
    out << "\n";
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

inline int run_ground(const RunConfig& cfg, std::ostream& log) {
    GroundState g = ground_state(cfg.total_n, cfg.ground_m, cfg.params);
    FragmentationReport frag = one_particle_density(g.state);

    const bool with_gauss = cfg.ground_m == 0 && cfg.total_n % 2 == 0 && cfg.total_n >= 4;
    StateVector gauss = with_gauss ? gaussian_profile(cfg.total_n) : StateVector(cfg.total_n);

    FockBlock block(cfg.total_n, cfg.ground_m);
    std::vector<std::string> columns{"n_zero", "Y", "psi_exact"};
    if (with_gauss) columns.push_back("psi_gauss");
    std::vector<std::vector<double>> rows;
    const auto& exact = g.state.block(cfg.ground_m);
    for (int i = 0; i < block.dimension(); ++i) {
        const int n0 = block.state_at(i).n_zero;
        std::vector<double> row{double(n0), cfg.total_n / 3.0 - n0, std::real(exact[i])};
        if (with_gauss) row.push_back(std::real(gauss.block(0)[i]));
        rows.push_back(std::move(row));
    }
    detail::write_csv(cfg.csv_path, columns, rows);

    std::ofstream rep(cfg.report_path, std::ios::binary);
    rep << "ground-state report\n";
    rep << "N = " << cfg.total_n << ", m = " << cfg.ground_m << "\n";
    rep << "energy = " << detail::fmt17(g.energy) << "\n";
    rep << "rho diagonal = (" << detail::fmt17(std::real(frag.density.entries[0][0])) << ", "
        << detail::fmt17(std::real(frag.density.entries[1][1])) << ", "
        << detail::fmt17(std::real(frag.density.entries[2][2])) << ")\n";
    rep << "rho eigenvalues = (" << detail::fmt17(frag.eigenvalues[0]) << ", "
        << detail::fmt17(frag.eigenvalues[1]) << ", " << detail::fmt17(frag.eigenvalues[2])
        << ")\n";
    rep << "fragmented = " << (frag.fragmented ? "yes" : "no")
        << " (threshold " << detail::fmt17(frag.threshold_fraction) << " * N)\n";
    if (cfg.total_n >= 4) {
        ChainResult even = chain_solver(cfg.total_n, ChainParity::even);
        ChainResult odd = chain_solver(cfg.total_n, ChainParity::odd);
        rep << "chain ground energies even/odd = " << detail::fmt17(even.energies[0]) << " / "
            << detail::fmt17(odd.energies[0]) << "\n";
    }

    if (cfg.emit_plot_script) {
        std::vector<std::string> plot = with_gauss
                                            ? std::vector<std::string>{"psi_exact", "psi_gauss"}
                                            : std::vector<std::string>{"psi_exact"};
        emit_plot_script(cfg.plot_script_path, cfg.csv_path, columns, plot, "n_zero");
    }
    log << "ground: wrote " << cfg.csv_path << " and " << cfg.report_path << "\n";
    return 0;
}

inline std::vector<std::string> evolve_columns() {
    return {"t",           "n_minus",    "n_zero",       "n_plus",      "Y",
            "T3",          "xi_phi_fixed", "xi_phi_min", "phi_min",     "phi_defined",
            "xi_uv_fixed", "xi_uv_min",  "alpha_min",    "uv_defined",  "xi_plus_sq",
            "xi_minus_sq", "two_mode_sum", "pm_defined"};
}

inline std::vector<double> evolve_row(const StateVector& psi, double t, const RunConfig& cfg) {
    SqueezeReport sq = squeeze_report(psi, t, cfg.scan_alpha, cfg.scan_phi, cfg.alpha_points,
                                      cfg.phi_points);
    double pops[3];
    for (int mode = 0; mode < 3; ++mode) {
        double s = 0.0;
        for (const auto& [m, amps] : psi.blocks) {
            FockBlock b(psi.total_n, m);
            for (std::size_t i = 0; i < amps.size(); ++i)
                s += detail::occ_component(b.state_at(static_cast<int>(i)), mode) *
                     std::norm(amps[i]);
        }
        pops[mode] = s;
    }
    return {t,
            pops[0],
            pops[1],
            pops[2],
            std::real(expectation(psi, OperatorKind::Y)),
            std::real(expectation(psi, OperatorKind::T3)),
            sq.xi_phi_fixed,
            sq.xi_phi_min,
            sq.phi_min,
            sq.phi_defined ? 1.0 : 0.0,
            sq.xi_uv_fixed,
            sq.xi_uv_min,
            sq.alpha_min,
            sq.uv_defined ? 1.0 : 0.0,
            sq.xi_plus_sq,
            sq.xi_minus_sq,
            sq.two_mode_sum,
            sq.pm_defined ? 1.0 : 0.0};
}

inline int run_evolve(const RunConfig& cfg, std::ostream& log) {
    StateVector psi0 = initial_state(cfg);
    Evolver evolver(cfg.params, cfg.total_n);
    (void)evolver.at(psi0, cfg.grid.t_start); // populate the eigensystem cache once

    std::vector<std::vector<double>> rows(cfg.grid.steps);
    detail::parallel_for(cfg.grid.steps, cfg.threads, [&](int i) {
        const double t = cfg.grid.time_at(i);
        rows[i] = evolve_row(evolver.at(psi0, t), t, cfg);
    });
    const std::vector<std::string> columns = evolve_columns();
    detail::write_csv(cfg.csv_path, columns, rows);

    std::ofstream rep(cfg.report_path, std::ios::binary);
    rep << "evolution report\n";
    rep << "N = " << cfg.total_n << ", state = " << cfg.state_kind << ", steps = "
        << cfg.grid.steps << " over t in [" << detail::fmt17(cfg.grid.t_start) << ", "
        << detail::fmt17(cfg.grid.t_stop) << "]\n";
    double min_uv = std::numeric_limits<double>::infinity();
    double min_sum = std::numeric_limits<double>::infinity();
    double min_phi = std::numeric_limits<double>::infinity();
    for (const auto& row : rows) {
        if (row[13] > 0.5) min_uv = std::min(min_uv, row[11]);
        if (row[17] > 0.5) min_sum = std::min(min_sum, row[16]);
        if (row[9] > 0.5) min_phi = std::min(min_phi, row[7]);
    }
    auto fmt_min = [](double v) {
        return std::isfinite(v) ? detail::fmt17(v) : std::string("undefined");
    };
    rep << "min optimized xi_uv = " << fmt_min(min_uv) << " (squeezed iff < 0.75)\n";
    rep << "min two_mode_sum  = " << fmt_min(min_sum) << " (entangled iff < 2)\n";
    rep << "min optimized xi_phi = " << fmt_min(min_phi) << " (squeezed iff < 1)\n";

    if (cfg.emit_plot_script)
        emit_plot_script(cfg.plot_script_path, cfg.csv_path, columns,
                         {"xi_uv_min", "two_mode_sum", "xi_phi_min"}, "t");
    log << "evolve: wrote " << cfg.csv_path << " and " << cfg.report_path << "\n";
    return 0;
}

inline int run_stationary(const RunConfig& cfg, std::ostream& log) {
    if (cfg.state_kind != "coherent")
        throw config_error("state.kind", "stationary check requires a coherent state");
    CoherentSpec spec = cfg.alphas
                            ? CoherentSpec{*cfg.alphas, cfg.total_n}
                            : CoherentSpec::from_populations(cfg.total_n, *cfg.p0, cfg.theta);
    EtaResult et = eta(spec);
    StateVector psi0 = coherent_state(spec);

    Evolver evolver(cfg.params, cfg.total_n);
    std::vector<Observer> obs{population_observer("n_minus", 0), population_observer("n_zero", 1),
                              population_observer("n_plus", 2)};
    std::vector<double> base(3);
    for (int j = 0; j < 3; ++j) base[j] = obs[j].eval(psi0);
    std::vector<std::vector<double>> rows(cfg.grid.steps);
    double max_drift = 0.0;
    for (int i = 0; i < cfg.grid.steps; ++i) {
        const double t = cfg.grid.time_at(i);
        StateVector psi = evolver.at(psi0, t);
        rows[i] = {t, obs[0].eval(psi), obs[1].eval(psi), obs[2].eval(psi)};
        for (int j = 0; j < 3; ++j)
            max_drift = std::max(max_drift, std::abs(rows[i][j + 1] - base[j]));
    }
    detail::write_csv(cfg.csv_path, {"t", "n_minus", "n_zero", "n_plus"}, rows);

    std::ofstream rep(cfg.report_path, std::ios::binary);
    rep << "stationarity report\n";
    rep << "N = " << cfg.total_n << "\n";
    if (et.defined)
        rep << "eta = " << detail::fmt17(std::real(et.value)) << " + "
            << detail::fmt17(std::imag(et.value)) << " i\n";
    else
        rep << "eta = undefined (alpha_- alpha_+ = 0)\n";
    rep << "stationary (eta = 1) = " << (et.defined && et.stationary ? "yes" : "no") << "\n";
    rep << "max population drift over the grid = " << detail::fmt17(max_drift) << "\n";
    log << "stationary: wrote " << cfg.csv_path << " and " << cfg.report_path << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// validation suite
// ---------------------------------------------------------------------------

namespace detail {

struct Check {
    std::string name;
    bool pass;
    std::string detail;
};

inline StateVector random_state(int total_n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    StateVector psi(total_n);
    for (const FockBlock& b : enumerate_full(total_n)) {
        if (b.dimension() == 0) continue;
        auto& amps = psi.block(b.magnetization());
        for (auto& a : amps) a = cplx(g(rng), g(rng));
    }
    psi.normalize();
    return psi;
}

inline CoherentSpec random_coherent(int total_n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::array<cplx, 3> a;
    double n2 = 0.0;
    for (auto& x : a) {
        x = cplx(g(rng), g(rng));
        n2 += std::norm(x);
    }
    for (auto& x : a) x /= std::sqrt(n2);
    return CoherentSpec{a, total_n};
}

} // namespace detail

/// Self-contained oracle/identity suite behind the `validate` subcommand.
/// Returns the individual verdicts; the runner turns any failure into exit 1.
inline std::vector<detail::Check> validation_suite(unsigned long seed) {
    using detail::Check;
    std::vector<Check> checks;
    std::mt19937_64 rng(seed);
    auto add = [&](const std::string& name, bool pass, const std::string& d = "") {
        checks.push_back({name, pass, d});
    };

    { // operator identities
        IdentityReport rep = verify_identities(8);
        add("L2 decomposition identity", rep.eq_l2_decomposition <= 1e-10 * rep.l2_scale,
            "residual " + detail::fmt17(rep.eq_l2_decomposition));
        add("singlet identity (coefficient 3)", rep.singlet_coeff3 <= 1e-10,
            "residual " + detail::fmt17(rep.singlet_coeff3));
        add("singlet coefficient 1 demonstrably fails", rep.singlet_coeff1 > 1e-3);
        add("commutator table", rep.max_commutator() <= 1e-12,
            "max residual " + detail::fmt17(rep.max_commutator()));
        add("disentangling coefficient adjudication", rep.bch_match == "eta^2",
            "matched '" + rep.bch_match + "'");
    }

    { // spectrum law, N = 24
        const int n = 24;
        bool ok = true;
        double worst = 0.0;
        for (int m = -n; m <= n; ++m) {
            EigenSystem eig = diagonalize_block(hamiltonian_block(ModelParams{}, BlockKey{n, m}));
            std::vector<double> expect;
            for (int l = std::abs(m) + ((n - std::abs(m)) % 2); l <= n; l += 2)
                expect.push_back(-(double(l) * (l + 1) - 2.0 * n));
            std::sort(expect.begin(), expect.end());
            if (expect.size() != eig.eigenvalues.size()) ok = false;
            for (std::size_t i = 0; ok && i < expect.size(); ++i)
                worst = std::max(worst, std::abs(expect[i] - eig.eigenvalues[i]) /
                                            std::max(1.0, std::abs(expect[i])));
        }
        add("block spectrum law", ok && worst <= 1e-9, "worst rel dev " + detail::fmt17(worst));
    }

    { // dual-oracle evolution + revival, N = 20
        const int n = 20;
        ModelParams params;
        double worst = 0.0;
        for (int trial = 0; trial < 5; ++trial) {
            StateVector psi0 = coherent_state(detail::random_coherent(n, rng));
            for (double t : {0.1, 1.0, 3.14159265358979323846}) {
                StateVector a = evolve(psi0, params, t);
                StateVector b = evolve_oracle_angular(psi0, params, t);
                worst = std::max(worst, 1.0 - std::abs(inner(a, b)));
            }
        }
        add("dual-oracle evolution agreement", worst <= 1e-8,
            "worst overlap deficit " + detail::fmt17(worst));
        StateVector psi0 = detail::random_state(n, rng);
        const double revival =
            std::abs(inner(psi0, evolve(psi0, params, 3.14159265358979323846)));
        add("exact revival at t = pi", revival >= 1.0 - 1e-9,
            "overlap " + detail::fmt17(revival));
    }

    { // quadrature identity + lower bound, random states at N = 10
        double worst_id = 0.0, worst_bound = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            StateVector psi = detail::random_state(10, rng);
            const double alpha = 0.31 * trial;
            QuadratureStats q = quadrature_stats(psi, alpha);
            const double lhs = q.var_qplus + q.var_qminus_perp;
            const double rhs =
                0.25 * (q.var_xu + q.var_xv + q.var_xu_perp + q.var_xv_perp) + q.c_uv;
            worst_id = std::max(worst_id, std::abs(lhs - rhs));
            const double y = std::real(expectation(psi, OperatorKind::Y));
            worst_bound = std::max(worst_bound, 0.75 * std::abs(y) + q.c_uv - lhs);
        }
        add("quadrature variance identity", worst_id <= 1e-10,
            "worst residual " + detail::fmt17(worst_id));
        add("quadrature lower bound", worst_bound <= 1e-9,
            "worst violation " + detail::fmt17(worst_bound));
    }

    { // coherent-state moments and the stationary eigenstate property
        const int n = 40;
        CoherentSpec spec = CoherentSpec::from_populations(n, 0.5, 0.0); // eta = 1
        StateVector psi = coherent_state(spec);
        bool pops_ok = true;
        for (int mode = 0; mode < 3; ++mode) {
            const double want = n * std::norm(spec.alphas[mode]);
            const double got = population_observer("p", mode).eval(psi);
            if (std::abs(got - want) > 1e-9 * n) pops_ok = false;
        }
        add("coherent populations N|alpha|^2", pops_ok);
        // an eta = 1 state lives entirely in the l = N manifold: L2 psi = N(N+1) psi
        StateVector hpsi = apply(OperatorKind::L2, psi);
        const double e = double(n) * (n + 1.0);
        StateVector resid = hpsi + (-e) * psi;
        add("eta = 1 state is an exact eigenstate", resid.norm() <= 1e-9,
            "residual " + detail::fmt17(resid.norm()));
    }

    { // angular-basis coefficients
        bool overlap_ok = true, ortho_ok = true;
        for (int n : {7, 12}) {
            for (int m = -n; m <= n; m += 3) {
                FockBlock b(n, m);
                std::vector<StateVector> analytic;
                std::vector<int> ls;
                for (int l = std::abs(m) + ((n - std::abs(m)) % 2); l <= n; l += 2) {
                    AngularLabel lab{l, m, n};
                    StateVector a = angular_state(lab, AngularMethod::analytic);
                    StateVector c = angular_state(lab, AngularMethod::numeric);
                    if (std::abs(inner(a, c)) < 1.0 - 1e-10) overlap_ok = false;
                    analytic.push_back(std::move(a));
                    ls.push_back(l);
                }
                for (std::size_t i = 0; i < analytic.size(); ++i)
                    for (std::size_t j = 0; j < analytic.size(); ++j) {
                        const double want = i == j ? 1.0 : 0.0;
                        if (std::abs(std::abs(inner(analytic[i], analytic[j])) - want) > 1e-10)
                            ortho_ok = false;
                    }
            }
        }
        add("angular coefficients: analytic vs numeric", overlap_ok);
        add("angular coefficients: orthonormality", ortho_ok);
    }

    { // basis bookkeeping round trip
        bool ok = true;
        for (int n : {5, 30}) {
            int total = 0;
            for (const FockBlock& b : enumerate_full(n)) {
                total += b.dimension();
                for (int i = 0; i < b.dimension(); ++i)
                    if (b.index_of(b.state_at(i)) != i) ok = false;
            }
            if (total != (n + 1) * (n + 2) / 2) ok = false;
        }
        add("Fock basis round trip and counting", ok);
    }

    { // ground-state structure at a desk scale
        const int n = 200;
        GroundState g = ground_state(n, 0, ModelParams{});
        StateVector gauss = gaussian_profile(n);
        const double ov = std::norm(inner(g.state, gauss));
        add("Gaussian ground-state profile overlap", ov >= 0.99, "overlap " + detail::fmt17(ov));
        FragmentationReport frag = one_particle_density(g.state);
        add("ferromagnetic fragmentation verdict", frag.fragmented);
    }

    return checks;
}

inline int run_validate(const RunConfig& cfg, std::ostream& log) {
    std::vector<detail::Check> checks = validation_suite(cfg.seed);
    std::ostringstream table;
    int failed = 0;
    for (const auto& c : checks) {
        table << (c.pass ? "PASS" : "FAIL") << "  " << c.name;
        if (!c.detail.empty()) table << "  [" << c.detail << "]";
        table << "\n";
        if (!c.pass) ++failed;
    }
    table << checks.size() - failed << "/" << checks.size() << " checks passed\n";
    std::ofstream rep(cfg.report_path, std::ios::binary);
    rep << "validation report (seed " << cfg.seed << ")\n" << table.str();
    log << table.str();
    return failed == 0 ? 0 : 1;
}

/// Dispatch one parsed config; returns the process exit status (0/1).
/// config_error / numerical_error / resource_error propagate to the caller,
/// which maps them to exits 2 and 3.
inline int run(const RunConfig& cfg, std::ostream& log) {
    if (cfg.subcommand == "ground") return run_ground(cfg, log);
    if (cfg.subcommand == "evolve") return run_evolve(cfg, log);
    if (cfg.subcommand == "stationary") return run_stationary(cfg, log);
    if (cfg.subcommand == "validate") return run_validate(cfg, log);
    throw config_error("subcommand", "unknown subcommand '" + cfg.subcommand + "'");
}

} // namespace spinorsim

#endif
