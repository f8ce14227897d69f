// bath.hpp — magnon dispersion, SAW-driven two-mode squeezing and bath correlators

#pragma once

#include <complex>

#include "sqz/numerics.hpp"
#include "sqz/params.hpp"

namespace sqz::bath {

using cplx = std::complex<double>;

// Squeezed-vacuum state of the magnon modes resonant with the qubits.
struct BathState {
    double r{0.0};       // squeezing parameter r_kq
    double phi{0.0};     // squeezing phase (rad)
    double N{0.0};       // sinh^2 r
    cplx M{0.0, 0.0};    // -cosh r sinh r e^{i phi}
    double k_q{0.0};     // resonant wavevector (1/cm)
    double lambda{0.0};  // 1/k_q (cm)
    double g_mag{0.0};   // |g| (Hz); 0 when r was set directly
};

struct Resonance {
    double k_q;    // 1/cm
    double lambda; // cm
};

// omega_k = D k^2 + Delta_F in rad/s; k in 1/cm.
double magnon_dispersion(double k, const PhysicalParams& p);

// lambda = sqrt(D / (omega_q - Delta_F)).
Resonance resonant_wavelength(const PhysicalParams& p);

// g = -i n L B_xy E_xy / (2 s), returned in Hz.
cplx saw_coupling(const PhysicalParams& p);

// r = arctanh(|g|/Dbar)/2 and the pure squeezed-vacuum moments. g and dbar share a unit.
// fallback_phase is used when g = 0. Throws ConfigError for |g| >= Dbar.
BathState squeezing_parameter(cplx g, double dbar, double fallback_phase = -units::kPi / 2.0);

// Moments for a directly specified r.
BathState squeezed_vacuum(double r, double phi);

// Resolves the configured bath source (r, |g|, or strain) and fills the resonance fields.
BathState make_bath(const PhysicalParams& p);

// Moments seen by mode k: the squeezed moments inside the flat band
// |omega_k - omega_q| <= Dbar, vacuum (N = 0, M = 0) outside.
struct Moments {
    double N;
    cplx M;
};
Moments moments_at(double k, const BathState& bath, const PhysicalParams& p);

enum class MagnonPair { mm, mdag_mdag, mdag_m, m_mdag };

// <O(t) O'(t')> per unit (2 pi)^2 delta^2 momentum factor; t in seconds.
cplx magnon_correlator(MagnonPair kind, double k, double t, double t_prime, const BathState& bath,
                       const PhysicalParams& p);

enum class FieldPair { minus_plus, plus_minus, minus_minus, plus_plus };

struct FieldCorrelatorOptions {
    double rel_tol{1e-9};
    int initial_panels{64};
};

// Stray-field correlator <B^mu_a(t) B^nu_b(t')> for an out-of-plane equilibrium magnetization:
// pi gamma^2 s int dk k^3 e^{-2kd} J0(k rho) (phase x moment). rho in cm, t in s.
num::QuadratureResult field_correlator(FieldPair kind, double rho, double t, double t_prime,
                                       const PhysicalParams& p, const BathState& bath,
                                       const FieldCorrelatorOptions& opts = {});

// Upper k limit used by field_correlator (1/cm).
double field_cutoff(const PhysicalParams& p);

} // namespace sqz::bath
