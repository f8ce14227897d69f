// params.cpp — unit table, config parsing, validation and canonical serialization

#include "sqz/params.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <sstream>

#include "sqz/errors.hpp"

namespace sqz {

// ---------------------------------------------------------------- derived

double PhysicalParams::stiffness() const { return spin_stiffness_erg_cm2 / units::kHbar; }
double PhysicalParams::detuning() const { return units::angular(detuning_MHz * 1e6); }
double PhysicalParams::gap() const {
    return anisotropy_gap_2As_erg / units::kHbar + gamma_bath * bias_field_G();
}
double PhysicalParams::qubit_frequency() const { return gap() + detuning(); }
double PhysicalParams::drive_frequency() const { return 2.0 * qubit_frequency(); }
double PhysicalParams::zero_field_splitting() const {
    return units::angular(zero_field_splitting_GHz * 1e9);
}
double PhysicalParams::squeeze_bandwidth() const {
    return units::angular(squeeze_bandwidth_MHz * 1e6);
}
double PhysicalParams::film_thickness_cm() const { return film_thickness_nm * units::kNm; }
double PhysicalParams::distance_cm() const { return qubit_film_distance_nm * units::kNm; }
double PhysicalParams::site_density() const {
    const double a0 = lattice_const_angstrom * units::kAngstrom;
    return 1.0 / (a0 * a0 * a0);
}
double PhysicalParams::bias_field_G() const { return bias_field_mT * units::kGauss_per_mT; }
double PhysicalParams::nv_frequency_estimate() const {
    return zero_field_splitting() - gamma_qubit * bias_field_G();
}

void PhysicalParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw ConfigError(std::string("non-positive quantity: ") + name);
        }
    };
    positive(spin_stiffness_erg_cm2, "spin_stiffness");
    positive(surface_spin_density, "surface_spin_density");
    positive(anisotropy_gap_2As_erg, "anisotropy_gap_2As");
    positive(film_thickness_nm, "film_thickness");
    positive(lattice_const_angstrom, "lattice_const");
    positive(magnetoelastic_Bxy_GHz, "magnetoelastic_Bxy");
    positive(bias_field_mT, "bias_field");
    positive(gamma_bath, "gamma_bath");
    positive(gamma_qubit, "gamma_qubit");
    positive(zero_field_splitting_GHz, "zero_field_splitting");
    positive(squeeze_bandwidth_MHz, "squeeze_bandwidth");
    positive(qubit_film_distance_nm, "qubit_film_distance");
    positive(nu_Hz, "nu");
    if (!(detuning_MHz > 0.0)) {
        throw ConfigError("omega_q <= Delta_F (ω_q ≤ Δ_F): the qubit must sit inside the magnon "
                          "continuum, detuning must be positive");
    }
    if (!(strain_Exy >= 0.0)) {
        throw ConfigError("strain_Exy must be non-negative");
    }
    if (!(coupling_g_MHz >= 0.0)) {
        throw ConfigError("coupling_g must be non-negative");
    }
    if (squeezing_r && !(*squeezing_r >= 0.0 && std::isfinite(*squeezing_r))) {
        throw ConfigError("squeezing_r must be finite and non-negative");
    }
    if (!std::isfinite(squeezing_phase_rad)) {
        throw ConfigError("squeezing_phase must be finite");
    }
}

// ---------------------------------------------------------------- geometry

ArrayGeometry ArrayGeometry::chain(int n, double a_over_lambda) {
    ArrayGeometry g;
    g.a_over_lambda = a_over_lambda;
    for (int i = 0; i < n; ++i) {
        g.positions.push_back({i * a_over_lambda, 0.0});
    }
    return g;
}

double ArrayGeometry::distance(int a, int b) const {
    const auto& pa = positions.at(static_cast<std::size_t>(a));
    const auto& pb = positions.at(static_cast<std::size_t>(b));
    return std::hypot(pa[0] - pb[0], pa[1] - pb[1]);
}

std::uint64_t ArrayGeometry::hash() const {
    // FNV-1a over the raw coordinates
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](double v) {
        unsigned char bytes[sizeof(double)];
        std::memcpy(bytes, &v, sizeof(double));
        for (unsigned char c : bytes) {
            h ^= c;
            h *= 1099511628211ULL;
        }
    };
    for (const auto& p : positions) {
        mix(p[0]);
        mix(p[1]);
    }
    return h;
}

void ArrayGeometry::validate() const {
    if (positions.empty()) {
        throw ConfigError("geometry: at least one qubit is required");
    }
    if (!explicit_positions && !(a_over_lambda > 0.0)) {
        throw ConfigError("non-positive quantity: a_over_lambda");
    }
    for (int a = 0; a < size(); ++a) {
        for (int b = a + 1; b < size(); ++b) {
            if (!(distance(a, b) > 0.0)) {
                throw ConfigError("geometry: qubits " + std::to_string(a) + " and " +
                                  std::to_string(b) + " coincide");
            }
        }
    }
}

// ---------------------------------------------------------------- parsing

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto* end = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(t.data(), end, v);
    if (ec != std::errc() || ptr != end || t.empty()) {
        throw ConfigError("key '" + key + "': cannot parse number from '" + text + "'");
    }
    return v;
}

int parse_int(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    int v = 0;
    const auto* end = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(t.data(), end, v);
    if (ec != std::errc() || ptr != end || t.empty()) {
        throw ConfigError("key '" + key + "': cannot parse integer from '" + text + "'");
    }
    return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    if (t == "true" || t == "1" || t == "yes" || t == "on") {
        return true;
    }
    if (t == "false" || t == "0" || t == "no" || t == "off") {
        return false;
    }
    throw ConfigError("key '" + key + "': expected a boolean, got '" + text + "'");
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct UnitOption {
    const char* suffix;
    double to_canonical;
};

// A quantity stored in PhysicalParams. The first unit is canonical (factor exactly 1).
struct Quantity {
    const char* name;
    std::vector<UnitOption> units;
    double PhysicalParams::*field;
};

const std::vector<Quantity>& quantities() {
    static const std::vector<Quantity> table = {
        {"spin_stiffness", {{"erg_cm2", 1.0}, {"J_m2", 1e11}}, &PhysicalParams::spin_stiffness_erg_cm2},
        {"surface_spin_density", {{"G2_cm_s", 1.0}}, &PhysicalParams::surface_spin_density},
        {"anisotropy_gap_2As", {{"erg", 1.0}, {"J", 1e7}}, &PhysicalParams::anisotropy_gap_2As_erg},
        {"film_thickness", {{"nm", 1.0}, {"m", 1e9}, {"cm", 1e7}}, &PhysicalParams::film_thickness_nm},
        {"lattice_const", {{"A", 1.0}, {"nm", 10.0}, {"m", 1e10}}, &PhysicalParams::lattice_const_angstrom},
        {"magnetoelastic_Bxy", {{"GHz", 1.0}, {"MHz", 1e-3}, {"Hz", 1e-9}}, &PhysicalParams::magnetoelastic_Bxy_GHz},
        {"bias_field", {{"mT", 1.0}, {"T", 1e3}, {"G", 0.1}}, &PhysicalParams::bias_field_mT},
        {"gamma_bath", {{"rad_per_s_G", 1.0}, {"rad_per_s_T", 1e-4}}, &PhysicalParams::gamma_bath},
        {"gamma_qubit", {{"rad_per_s_G", 1.0}, {"rad_per_s_T", 1e-4}}, &PhysicalParams::gamma_qubit},
        {"zero_field_splitting", {{"GHz", 1.0}, {"MHz", 1e-3}, {"Hz", 1e-9}}, &PhysicalParams::zero_field_splitting_GHz},
        {"strain_Exy", {{"", 1.0}}, &PhysicalParams::strain_Exy},
        {"squeeze_bandwidth", {{"MHz", 1.0}, {"kHz", 1e-3}, {"Hz", 1e-6}, {"GHz", 1e3}}, &PhysicalParams::squeeze_bandwidth_MHz},
        {"qubit_film_distance", {{"nm", 1.0}, {"m", 1e9}, {"cm", 1e7}}, &PhysicalParams::qubit_film_distance_nm},
        {"nu", {{"Hz", 1.0}, {"kHz", 1e3}}, &PhysicalParams::nu_Hz},
        {"detuning", {{"MHz", 1.0}, {"GHz", 1e3}, {"kHz", 1e-3}, {"Hz", 1e-6}}, &PhysicalParams::detuning_MHz},
        {"coupling_g", {{"MHz", 1.0}, {"kHz", 1e-3}, {"Hz", 1e-6}}, &PhysicalParams::coupling_g_MHz},
        {"squeezing_phase", {{"rad", 1.0}, {"deg", units::kPi / 180.0}}, &PhysicalParams::squeezing_phase_rad},
    };
    return table;
}

std::string key_of(const Quantity& q, const UnitOption& u) {
    return u.suffix[0] == '\0' ? std::string(q.name) : std::string(q.name) + "_" + u.suffix;
}

std::vector<std::array<double, 2>> parse_positions(const std::string& key, const std::string& text) {
    std::vector<std::array<double, 2>> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';')) {
        if (trim(item).empty()) {
            continue;
        }
        const auto comma = item.find(',');
        if (comma == std::string::npos) {
            throw ConfigError("key '" + key + "': expected 'x,y' pairs separated by ';'");
        }
        out.push_back({parse_double(key, item.substr(0, comma)),
                       parse_double(key, item.substr(comma + 1))});
    }
    return out;
}

constexpr std::array<const char*, 3> kDriveKeys = {"drive_frequency_GHz", "drive_frequency_MHz",
                                                   "drive_frequency_Hz"};
constexpr std::array<double, 3> kDriveScale = {1e9, 1e6, 1.0};

} // namespace

KeyValues parse_key_values(const std::string& text) {
    KeyValues kv;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        }
        if (!kv.emplace(key, value).second) {
            throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        }
    }
    return kv;
}

LoadedConfig load_config(const KeyValues& kv, const std::set<std::string>& extra_keys) {
    LoadedConfig cfg;
    PhysicalParams& p = cfg.params;
    std::set<std::string> consumed;

    for (const auto& q : quantities()) {
        const char* seen = nullptr;
        for (const auto& u : q.units) {
            const std::string key = key_of(q, u);
            const auto it = kv.find(key);
            if (it == kv.end()) {
                continue;
            }
            if (seen != nullptr) {
                throw ConfigError("quantity '" + std::string(q.name) + "' given twice (" + seen +
                                  " and " + key + ")");
            }
            seen = it->first.c_str();
            const double value = parse_double(key, it->second);
            p.*q.field = (u.to_canonical == 1.0) ? value : value * u.to_canonical;
            consumed.insert(key);
        }
    }

    if (const auto it = kv.find("squeezing_r"); it != kv.end()) {
        p.squeezing_r = parse_double(it->first, it->second);
        consumed.insert(it->first);
    }
    if (const auto it = kv.find("g_from_strain"); it != kv.end()) {
        p.g_from_strain = parse_bool(it->first, it->second);
        consumed.insert(it->first);
    }
    if (const auto it = kv.find("finite_distance_correction"); it != kv.end()) {
        p.finite_distance_correction = parse_bool(it->first, it->second);
        consumed.insert(it->first);
    }

    p.validate();

    // omega_s is implied by omega_q; a config may only restate it.
    for (std::size_t i = 0; i < kDriveKeys.size(); ++i) {
        if (const auto it = kv.find(kDriveKeys[i]); it != kv.end()) {
            const double omega_s = units::angular(parse_double(it->first, it->second) * kDriveScale[i]);
            if (std::abs(omega_s - p.drive_frequency()) > 1e-9 * p.drive_frequency()) {
                throw ConfigError("drive frequency must equal 2*omega_q (" +
                                  format_double(units::cycles(p.drive_frequency()) / kDriveScale[i]) +
                                  " in the given unit)");
            }
            consumed.insert(it->first);
        }
    }

    int n_qubits = 2;
    bool have_n = false;
    if (const auto it = kv.find("n_qubits"); it != kv.end()) {
        n_qubits = parse_int(it->first, it->second);
        have_n = true;
        consumed.insert(it->first);
    }
    if (n_qubits < 1) {
        throw ConfigError("n_qubits must be >= 1");
    }
    double a_over_lambda = 0.5;
    if (const auto it = kv.find("a_over_lambda"); it != kv.end()) {
        a_over_lambda = parse_double(it->first, it->second);
        consumed.insert(it->first);
    }
    if (const auto it = kv.find("positions_lambda"); it != kv.end()) {
        cfg.geometry.positions = parse_positions(it->first, it->second);
        cfg.geometry.explicit_positions = true;
        cfg.geometry.a_over_lambda = a_over_lambda;
        consumed.insert(it->first);
        if (have_n && n_qubits != cfg.geometry.size()) {
            throw ConfigError("n_qubits disagrees with the number of positions_lambda entries");
        }
    } else {
        cfg.geometry = ArrayGeometry::chain(n_qubits, a_over_lambda);
    }
    cfg.geometry.validate();

    for (const auto& [key, value] : kv) {
        if (consumed.count(key) != 0) {
            continue;
        }
        if (extra_keys.count(key) != 0) {
            cfg.extras.emplace(key, value);
            continue;
        }
        throw ConfigError("unknown config key '" + key + "'");
    }
    return cfg;
}

LoadedConfig load_config(const std::filesystem::path& path, const std::set<std::string>& extra_keys) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path.string() + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return load_config(parse_key_values(buf.str()), extra_keys);
}

std::string serialize(const PhysicalParams& params, const ArrayGeometry& geometry) {
    std::ostringstream out;
    for (const auto& q : quantities()) {
        out << key_of(q, q.units.front()) << " = " << format_double(params.*q.field) << "\n";
    }
    if (params.squeezing_r) {
        out << "squeezing_r = " << format_double(*params.squeezing_r) << "\n";
    }
    out << "g_from_strain = " << (params.g_from_strain ? "true" : "false") << "\n";
    out << "finite_distance_correction = " << (params.finite_distance_correction ? "true" : "false")
        << "\n";
    out << "n_qubits = " << geometry.size() << "\n";
    out << "a_over_lambda = " << format_double(geometry.a_over_lambda) << "\n";
    if (geometry.explicit_positions) {
        out << "positions_lambda = ";
        for (std::size_t i = 0; i < geometry.positions.size(); ++i) {
            out << (i ? "; " : "") << format_double(geometry.positions[i][0]) << ","
                << format_double(geometry.positions[i][1]);
        }
        out << "\n";
    }
    return out.str();
}

} // namespace sqz
