// params.hpp — physical constants, unit conventions, array geometry and the key/value config

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace sqz {

namespace units {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kHbar = 1.054571817e-27; // erg s

// Every frequency quoted in cycles (Hz, MHz, GHz) becomes angular here and nowhere else.
constexpr double angular(double hz) { return 2.0 * kPi * hz; }
constexpr double cycles(double rad_per_s) { return rad_per_s / (2.0 * kPi); }

inline constexpr double kNm = 1e-7; // cm
inline constexpr double kAngstrom = 1e-8;
inline constexpr double kGauss_per_mT = 10.0;

} // namespace units

// Material, drive and qubit constants in the units they are quoted in (CGS-Gaussian,
// cycle frequencies). Derived quantities are exposed as angular (rad/s) and cm.
struct PhysicalParams {
    double spin_stiffness_erg_cm2{5.1e-28};   // D
    double surface_spin_density{1.2e-10};     // s, quoted as G^2 cm s; opaque
    double anisotropy_gap_2As_erg{3.6e-18};   // 2As, read as an energy
    double film_thickness_nm{20.0};           // L
    double lattice_const_angstrom{12.3};      // a0, n = 1/a0^3
    double magnetoelastic_Bxy_GHz{1988.0};
    double bias_field_mT{40.0};
    double gamma_bath{1.76e7};                // rad/(s G)
    double gamma_qubit{1.76e7};               // rad/(s G)
    double zero_field_splitting_GHz{2.87};    // Delta_0
    double strain_Exy{1e-4};
    double squeeze_bandwidth_MHz{0.25};       // Dbar
    double qubit_film_distance_nm{10.0};      // d
    double nu_Hz{75.0};
    double detuning_MHz{100.0};               // omega_q - Delta_F

    // Bath selection: squeezing_r wins, then g_from_strain, else |g| = coupling_g_MHz.
    std::optional<double> squeezing_r;
    double squeezing_phase_rad{-units::kPi / 2.0};
    double coupling_g_MHz{0.1};
    bool g_from_strain{false};

    bool finite_distance_correction{false};

    // Derived, angular CGS.
    double stiffness() const;            // D/hbar, rad/s cm^2
    double detuning() const;             // rad/s
    double gap() const;                  // Delta_F = 2As/hbar + gamma B0
    double qubit_frequency() const;      // omega_q = Delta_F + detuning
    double drive_frequency() const;      // omega_s = 2 omega_q
    double zero_field_splitting() const; // rad/s
    double squeeze_bandwidth() const;    // rad/s
    double film_thickness_cm() const;
    double distance_cm() const;
    double site_density() const;         // n = 1/a0^3, cm^-3
    double bias_field_G() const;
    double nv_frequency_estimate() const; // Delta_0 - gamma~ B0, diagnostic only

    void validate() const;
};

// Qubit positions in units of lambda.
struct ArrayGeometry {
    std::vector<std::array<double, 2>> positions;
    double a_over_lambda{0.5};
    bool explicit_positions{false};

    static ArrayGeometry chain(int n, double a_over_lambda);

    int size() const { return static_cast<int>(positions.size()); }
    double distance(int a, int b) const; // rho_ab / lambda
    std::uint64_t hash() const;
    void validate() const;
};

struct LoadedConfig {
    PhysicalParams params;
    ArrayGeometry geometry;
    std::map<std::string, std::string> extras; // caller-declared keys, unparsed
};

using KeyValues = std::map<std::string, std::string>;

// "key = value" lines, '#' comments. Duplicate keys are errors.
KeyValues parse_key_values(const std::string& text);

// Applies overrides on top of defaults. Keys not recognized and not in extra_keys are errors.
LoadedConfig load_config(const KeyValues& kv, const std::set<std::string>& extra_keys = {});
LoadedConfig load_config(const std::filesystem::path& path,
                         const std::set<std::string>& extra_keys = {});

// Canonical key/value text; load_config(parse_key_values(serialize(c))) reproduces every field.
std::string serialize(const PhysicalParams& params, const ArrayGeometry& geometry);

} // namespace sqz
