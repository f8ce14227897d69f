// scenarios.cpp — figure reproductions, steady-state sweep and custom trajectories

#include "scenarios.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <initializer_list>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "sqz/bath.hpp"
#include "sqz/couplings.hpp"
#include "sqz/csv.hpp"
#include "sqz/dynamics.hpp"
#include "sqz/errors.hpp"
#include "sqz/observables.hpp"

namespace sqzsim {

namespace fs = std::filesystem;
using namespace sqz;

namespace {

const std::map<std::string, std::set<std::string>>& scenario_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"fig2a_couplings", {"rho_points"}},
        {"fig2b_squeezing", {"t_max", "n_points"}},
        {"fig2c_relaxation", {"t_max", "n_points"}},
        {"sweep", {"sweep_r", "sweep_a_over_lambda", "sweep_n_qubits"}},
        {"custom", {"t_max", "n_points", "initial_state", "css_theta", "css_phi", "generator_mode"}},
    };
    return keys;
}

double extra_double(const LoadedConfig& cfg, const std::string& key, double fallback) {
    const auto it = cfg.extras.find(key);
    if (it == cfg.extras.end()) {
        return fallback;
    }
    try {
        std::size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) {
            throw std::invalid_argument(key);
        }
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': cannot parse number from '" + it->second + "'");
    }
}

int extra_int(const LoadedConfig& cfg, const std::string& key, int fallback) {
    const double v = extra_double(cfg, key, fallback);
    if (v != std::floor(v) || std::abs(v) > 1e9) {
        throw ConfigError("key '" + key + "' must be an integer");
    }
    return static_cast<int>(v);
}

std::vector<double> extra_list(const LoadedConfig& cfg, const std::string& key, std::vector<double> fallback) {
    const auto it = cfg.extras.find(key);
    if (it == cfg.extras.end()) {
        return fallback;
    }
    std::vector<double> out;
    std::stringstream ss(it->second);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(item, &pos));
            while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) {
                ++pos;
            }
            if (pos != item.size()) {
                throw std::invalid_argument(key);
            }
        } catch (const std::exception&) {
            throw ConfigError("key '" + key + "': bad list entry '" + item + "'");
        }
    }
    if (out.empty()) {
        throw ConfigError("key '" + key + "' is empty");
    }
    return out;
}

std::vector<double> time_grid(double t_max, int points) {
    if (!(t_max > 0.0) || points < 2) {
        throw ConfigError("time grid needs t_max > 0 and at least two points");
    }
    std::vector<double> g(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        g[static_cast<std::size_t>(i)] = t_max * i / (points - 1);
    }
    return g;
}

std::vector<std::string> provenance(const Scenario& s, const LoadedConfig& cfg,
                                    const ArrayGeometry* geometry = nullptr) {
    std::vector<std::string> p{"sqzsim scenario = " + s.name, "rtol = " + csv::number(s.rtol),
                               "atol = " + csv::number(s.atol)};
    for (const auto& line : csv::lines(serialize(cfg.params, geometry ? *geometry : cfg.geometry))) {
        p.push_back(line);
    }
    for (const auto& [k, v] : cfg.extras) {
        p.push_back(k + " = " + v);
    }
    return p;
}

// The figure scenarios fix these from the caption; a user value would be silently ignored.
void reject_fixed_keys(const Scenario& s, std::initializer_list<const char*> keys) {
    for (const char* k : keys) {
        if (s.overrides.count(k) != 0) {
            throw ConfigError(std::string("key '") + k + "' is fixed by scenario " + s.name +
                              "; use the custom or sweep scenario to vary it");
        }
    }
}

void emit(const fs::path& path, const csv::Table& t, std::vector<fs::path>& written) {
    written.push_back(path);
    csv::write(path, t);
}

std::string label(double v) {
    std::ostringstream o;
    o << v;
    return o.str();
}

void write_coupling_matrices(const CouplingSet& c, const fs::path& dir, const std::vector<std::string>& prov,
                             std::vector<fs::path>& written) {
    const std::pair<const char*, Eigen::MatrixXcd> channels[] = {
        {"J", c.J.cast<std::complex<double>>()},
        {"Gamma_mp", c.Gamma_mp.cast<std::complex<double>>()},
        {"Gamma_pm", c.Gamma_pm.cast<std::complex<double>>()},
        {"Gamma_pp", c.Gamma_pp},
        {"Gamma_mm", c.Gamma_mm},
    };
    for (const auto& [name, m] : channels) {
        auto p = prov;
        p.push_back(std::string("channel = ") + name);
        emit(dir / (std::string("couplings_") + name + ".csv"), csv::matrix_table(m, "Hz", p), written);
    }
}

// ------------------------------------------------------------------ fig2a

void run_fig2a(const Scenario& s, const LoadedConfig& cfg, std::vector<fs::path>& written) {
    const int points = extra_int(cfg, "rho_points", 300);
    if (points < 2) {
        throw ConfigError("rho_points must be >= 2");
    }
    const bath::BathState b = bath::make_bath(cfg.params);
    const auto prov = provenance(s, cfg);
    csv::Table t;
    t.provenance = prov;
    t.header = {"rho_over_lambda [1]", "J [Hz]",           "Gamma_mp [Hz]",    "Gamma_pm [Hz]",
                "Gamma_pp_re [Hz]",    "Gamma_pp_im [Hz]", "Gamma_mm_re [Hz]", "Gamma_mm_im [Hz]"};
    for (int i = 0; i < points; ++i) {
        const double x = 0.05 + (3.0 - 0.05) * i / (points - 1);
        const CouplingSet c = build_couplings(ArrayGeometry::chain(2, x), cfg.params, b);
        t.rows.push_back({csv::number(x), csv::number(c.J(0, 1)), csv::number(c.Gamma_mp(0, 1)),
                          csv::number(c.Gamma_pm(0, 1)), csv::number(c.Gamma_pp(0, 1).real()),
                          csv::number(c.Gamma_pp(0, 1).imag()), csv::number(c.Gamma_mm(0, 1).real()),
                          csv::number(c.Gamma_mm(0, 1).imag())});
    }
    emit(s.output_dir / "fig2a_couplings.csv", t, written);
    const CouplingSet c = build_couplings(cfg.geometry, cfg.params, b);
    c.check_invariants();
    write_coupling_matrices(c, s.output_dir, prov, written);
}

// ------------------------------------------------------------------ fig2b

struct SqueezingCase {
    double r;
    double a_over_lambda;
    InitialKind init;
    const char* name;
};

const SqueezingCase kFig2bCases[] = {
    {0.0, 0.5, InitialKind::all_excited, "r0_a0.5_excited"},
    {0.25, 0.5, InitialKind::all_excited, "r0.25_a0.5_excited"},
    {0.25, 1.0, InitialKind::all_excited, "r0.25_a1_excited"},
    {0.25, 0.5, InitialKind::all_ground, "r0.25_a0.5_ground"},
};

void run_fig2b(const Scenario& s, const LoadedConfig& cfg, std::vector<fs::path>& written) {
    const auto grid = time_grid(extra_double(cfg, "t_max", 20.0), extra_int(cfg, "n_points", 400));
    reject_fixed_keys(s, {"n_qubits", "a_over_lambda", "positions_lambda", "squeezing_r"});
    const EvolveOptions opts{s.rtol, s.atol, false};
    const ArrayGeometry base = ArrayGeometry::chain(2, 0.5);
    const auto prov = provenance(s, cfg, &base);

    csv::Table wide;
    wide.provenance = prov;
    wide.provenance.push_back("N = 2; squeezing_r and a_over_lambda per column as named (r0.25_a1: r = 0.25, "
                              "a_over_lambda = 1)");
    wide.provenance.push_back("inverse Wineland parameter, empty where the mean spin vanishes");
    wide.header.push_back("gamma0_t [1]");
    csv::Table steady;
    steady.provenance = prov;
    steady.header = {"case", "r [1]", "a_over_lambda [1]", "initial_state", "inv_xi_R2_final [1]",
                     "inv_xi_R2_steady [1]"};

    std::vector<Trajectory> trajs;
    for (const auto& c : kFig2bCases) {
        PhysicalParams p = cfg.params;
        p.squeezing_r = c.r;
        const CouplingSet cs = build_couplings(ArrayGeometry::chain(2, c.a_over_lambda), p, bath::make_bath(p));
        cs.check_invariants();
        const Generator gen = build_generator(cs, GeneratorMode::jump_operator);
        trajs.push_back(evolve(initial_state(c.init, 2), gen, grid, opts));
        const QubitState ss = steady_state(gen);
        const SpinSummary sum = wineland_xi2(ss.rho, 2);
        const auto& last = trajs.back().xi_R_squared.back();
        steady.rows.push_back({c.name, csv::number(c.r), csv::number(c.a_over_lambda),
                               c.init == InitialKind::all_ground ? "all_ground" : "all_excited",
                               last ? csv::number(1.0 / *last) : "", csv::number(1.0 / sum.xi_R_squared)});
        wide.header.push_back(std::string("inv_xi_R2_") + c.name + " [1]");

        const ArrayGeometry geo = ArrayGeometry::chain(2, c.a_over_lambda);
        auto tp = provenance(s, cfg, &geo);
        tp.push_back(std::string("case = ") + c.name + ", squeezing_r = " + csv::number(c.r));
        emit(s.output_dir / (std::string("fig2b_") + c.name + ".csv"), csv::trajectory_table(trajs.back(), tp),
             written);
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::vector<std::string> row{csv::number(grid[i])};
        for (const auto& tr : trajs) {
            const auto& xi = tr.xi_R_squared[i];
            row.push_back(xi ? csv::number(1.0 / *xi) : "");
        }
        wide.rows.push_back(std::move(row));
    }
    emit(s.output_dir / "fig2b_squeezing.csv", wide, written);
    emit(s.output_dir / "fig2b_steady.csv", steady, written);
}

// ------------------------------------------------------------------ fig2c

void run_fig2c(const Scenario& s, const LoadedConfig& cfg, std::vector<fs::path>& written) {
    const auto grid = time_grid(extra_double(cfg, "t_max", 5.0), extra_int(cfg, "n_points", 500));
    const EvolveOptions opts{s.rtol, s.atol, false};
    reject_fixed_keys(s, {"n_qubits", "a_over_lambda", "positions_lambda", "squeezing_r"});
    const int n = 4;
    const double a = 0.4;
    const ArrayGeometry geo = ArrayGeometry::chain(n, a);
    csv::Table t;
    t.provenance = provenance(s, cfg, &geo);
    t.provenance.push_back("all spins excited at t = 0; squeezing_r per column (R_corr_r0.5: r = 0.5)");
    t.provenance.push_back("relaxation rate -1/2 d<Sz>/dt normalized by N*Gamma0; uncorr = independent qubits");
    t.header.push_back("gamma0_t [1]");
    std::vector<std::vector<double>> columns;
    for (double r : {0.0, 0.5, 1.0}) {
        PhysicalParams p = cfg.params;
        p.squeezing_r = r;
        const CouplingSet cs = build_couplings(geo, p, bath::make_bath(p));
        cs.check_invariants();
        for (bool correlated : {true, false}) {
            const Generator gen =
                build_generator(correlated ? cs : cs.uncorrelated(), GeneratorMode::jump_operator);
            columns.push_back(evolve(initial_state(InitialKind::all_excited, n), gen, grid, opts).relaxation_rate);
            t.header.push_back(std::string(correlated ? "R_corr_r" : "R_uncorr_r") + label(r) + " [N*Gamma0]");
        }
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::vector<std::string> row{csv::number(grid[i])};
        for (const auto& col : columns) {
            row.push_back(csv::number(col[i]));
        }
        t.rows.push_back(std::move(row));
    }
    emit(s.output_dir / "fig2c_relaxation.csv", t, written);
}

// ------------------------------------------------------------------ sweep

struct SweepPoint {
    int n;
    double a;
    double r;
};

struct SweepResult {
    std::optional<SpinSummary> summary;
    double min_eig{0.0};
    Eigen::Vector3d mean_S;
};

void run_sweep(const Scenario& s, const LoadedConfig& cfg, std::vector<fs::path>& written) {
    const auto rs = extra_list(cfg, "sweep_r", {0.0, 0.25, 0.5});
    const auto as = extra_list(cfg, "sweep_a_over_lambda", {0.5, 1.0});
    const auto ns = extra_list(cfg, "sweep_n_qubits", {1, 2, 3});
    std::vector<SweepPoint> points;
    for (double nd : ns) {
        if (nd != std::floor(nd) || nd < 1 || nd > kMaxSteadyStateQubits) {
            throw ConfigError("sweep_n_qubits entries must be integers in [1, " +
                              std::to_string(kMaxSteadyStateQubits) + "]");
        }
        for (double a : as) {
            for (double r : rs) {
                points.push_back({static_cast<int>(nd), a, r});
            }
        }
    }
    // validate every point before spending time on any of them
    for (const auto& pt : points) {
        PhysicalParams p = cfg.params;
        p.squeezing_r = pt.r;
        p.validate();
        ArrayGeometry::chain(pt.n, pt.a).validate();
    }

    std::vector<SweepResult> results(points.size());
    std::vector<std::exception_ptr> errors(points.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next++; i < points.size(); i = next++) {
            try {
                const auto& pt = points[i];
                PhysicalParams p = cfg.params;
                p.squeezing_r = pt.r;
                const CouplingSet cs = build_couplings(ArrayGeometry::chain(pt.n, pt.a), p, bath::make_bath(p));
                const QubitState ss = steady_state(build_generator(cs, GeneratorMode::jump_operator));
                SweepResult& out = results[i];
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(ss.rho, Eigen::EigenvaluesOnly);
                out.min_eig = es.eigenvalues().minCoeff();
                out.mean_S = collective_spin(ss.rho);
                try {
                    out.summary = wineland_xi2(ss.rho, pt.n);
                } catch (const UndefinedQuantity&) {
                    out.summary.reset();
                }
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int threads = std::max(1, std::min<int>(s.threads, static_cast<int>(points.size())));
    std::vector<std::thread> pool;
    for (int i = 1; i < threads; ++i) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& th : pool) {
        th.join();
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }

    csv::Table t;
    t.provenance = provenance(s, cfg);
    t.provenance.push_back("steady states of the jump-operator generator; empty xi where the mean spin vanishes");
    t.header = {"n_qubits [1]", "a_over_lambda [1]", "r [1]", "Sz [1]", "xi_R2 [1]", "inv_xi_R2 [1]",
                "min_eig [1]"};
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& pt = points[i];
        const auto& res = results[i];
        t.rows.push_back({std::to_string(pt.n), csv::number(pt.a), csv::number(pt.r), csv::number(res.mean_S.z()),
                          res.summary ? csv::number(res.summary->xi_R_squared) : "",
                          res.summary ? csv::number(1.0 / res.summary->xi_R_squared) : "",
                          csv::number(res.min_eig)});
    }
    emit(s.output_dir / "sweep_steady_state.csv", t, written);
}

// ------------------------------------------------------------------ custom

void run_custom(const Scenario& s, const LoadedConfig& cfg, std::vector<fs::path>& written) {
    const auto grid = time_grid(extra_double(cfg, "t_max", 20.0), extra_int(cfg, "n_points", 400));
    const int n = cfg.geometry.size();
    if (n > kMaxQubits) {
        throw ConfigError("custom: at most " + std::to_string(kMaxQubits) + " qubits");
    }
    InitialKind kind = InitialKind::all_excited;
    const auto init = cfg.extras.count("initial_state") ? cfg.extras.at("initial_state") : "all_excited";
    if (init == "all_ground") {
        kind = InitialKind::all_ground;
    } else if (init == "css") {
        kind = InitialKind::css;
    } else if (init != "all_excited") {
        throw ConfigError("initial_state must be all_excited, all_ground or css");
    }
    GeneratorMode mode = GeneratorMode::jump_operator;
    const auto m = cfg.extras.count("generator_mode") ? cfg.extras.at("generator_mode") : "jump_operator";
    if (m == "four_channel") {
        mode = GeneratorMode::four_channel;
    } else if (m != "jump_operator") {
        throw ConfigError("generator_mode must be jump_operator or four_channel");
    }
    const CouplingSet cs = build_couplings(cfg.geometry, cfg.params, bath::make_bath(cfg.params));
    cs.check_invariants();
    const auto prov = provenance(s, cfg);
    write_coupling_matrices(cs, s.output_dir, prov, written);
    const QubitState rho0 =
        initial_state(kind, n, extra_double(cfg, "css_theta", 0.0), extra_double(cfg, "css_phi", 0.0));
    const Trajectory tr = evolve(rho0, build_generator(cs, mode), grid, {s.rtol, s.atol, false});
    emit(s.output_dir / "custom_trajectory.csv", csv::trajectory_table(tr, prov), written);
}

} // namespace

bool known_scenario(const std::string& name) { return scenario_keys().count(name) != 0; }

void run_scenario(const Scenario& s, std::vector<fs::path>& written) {
    if (!known_scenario(s.name)) {
        throw ConfigError("unknown scenario '" + s.name + "'");
    }
    if (!(s.rtol > 0.0) || !(s.atol > 0.0)) {
        throw ConfigError("rtol and atol must be positive");
    }
    if (s.threads < 1) {
        throw ConfigError("--threads must be >= 1");
    }
    const LoadedConfig cfg = load_config(s.overrides, scenario_keys().at(s.name));
    std::error_code ec;
    fs::create_directories(s.output_dir, ec);
    if (ec || !fs::is_directory(s.output_dir)) {
        throw ConfigError("output directory '" + s.output_dir.string() + "' is not writable");
    }
    if (s.name == "fig2a_couplings") {
        run_fig2a(s, cfg, written);
    } else if (s.name == "fig2b_squeezing") {
        run_fig2b(s, cfg, written);
    } else if (s.name == "fig2c_relaxation") {
        run_fig2c(s, cfg, written);
    } else if (s.name == "sweep") {
        run_sweep(s, cfg, written);
    } else {
        run_custom(s, cfg, written);
    }
}

} // namespace sqzsim
