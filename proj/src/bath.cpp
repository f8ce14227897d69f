// bath.cpp — squeezed magnon bath: dispersion, drive coupling, moments and correlators

#include "sqz/bath.hpp"

#include <cmath>
#include <sstream>

#include "sqz/errors.hpp"

namespace sqz::bath {

double magnon_dispersion(double k, const PhysicalParams& p) {
    return p.stiffness() * k * k + p.gap();
}

Resonance resonant_wavelength(const PhysicalParams& p) {
    const double detuning = p.detuning();
    if (!(detuning > 0.0)) {
        throw ConfigError("omega_q <= Delta_F (ω_q ≤ Δ_F): no resonant magnon");
    }
    const double lambda = std::sqrt(p.stiffness() / detuning);
    return {1.0 / lambda, lambda};
}

cplx saw_coupling(const PhysicalParams& p) {
    const double magnitude = p.site_density() * p.film_thickness_cm() *
                             (p.magnetoelastic_Bxy_GHz * 1e9) * p.strain_Exy /
                             (2.0 * p.surface_spin_density);
    return {0.0, -magnitude};
}

BathState squeezed_vacuum(double r, double phi) {
    if (!(r >= 0.0) || !std::isfinite(r)) {
        throw ConfigError("squeezing parameter must be finite and non-negative");
    }
    BathState b;
    b.r = r;
    b.phi = phi;
    const double sh = std::sinh(r);
    const double ch = std::cosh(r);
    b.N = sh * sh;
    b.M = -ch * sh * std::polar(1.0, phi);
    return b;
}

BathState squeezing_parameter(cplx g, double dbar, double fallback_phase) {
    if (!(dbar > 0.0)) {
        throw ConfigError("squeezing bandwidth must be positive");
    }
    const double g_mag = std::abs(g);
    if (!(g_mag < dbar)) {
        std::ostringstream msg;
        msg << "unstable drive: |g| = " << g_mag << " >= bandwidth " << dbar
            << " (outside the stable domain |g| < Dbar)";
        throw ConfigError(msg.str());
    }
    const double phi = g_mag > 0.0 ? std::arg(g) : fallback_phase;
    BathState b = squeezed_vacuum(0.5 * std::atanh(g_mag / dbar), phi);
    b.g_mag = g_mag;
    return b;
}

BathState make_bath(const PhysicalParams& p) {
    BathState b;
    if (p.squeezing_r) {
        b = squeezed_vacuum(*p.squeezing_r, p.squeezing_phase_rad);
    } else if (p.g_from_strain) {
        b = squeezing_parameter(saw_coupling(p), p.squeeze_bandwidth_MHz * 1e6, p.squeezing_phase_rad);
    } else {
        // |g| given directly; its phase follows the drive formula, g = -i|g|
        b = squeezing_parameter(cplx(0.0, -p.coupling_g_MHz), p.squeeze_bandwidth_MHz,
                                p.squeezing_phase_rad);
        b.g_mag = p.coupling_g_MHz * 1e6;
    }
    const Resonance res = resonant_wavelength(p);
    b.k_q = res.k_q;
    b.lambda = res.lambda;
    return b;
}

Moments moments_at(double k, const BathState& bath, const PhysicalParams& p) {
    const double offset = std::abs(magnon_dispersion(k, p) - p.qubit_frequency());
    if (offset <= p.squeeze_bandwidth()) {
        return {bath.N, bath.M};
    }
    return {0.0, {0.0, 0.0}};
}

cplx magnon_correlator(MagnonPair kind, double k, double t, double t_prime, const BathState& bath,
                       const PhysicalParams& p) {
    const double w = magnon_dispersion(k, p);
    const Moments m = moments_at(k, bath, p);
    switch (kind) {
    case MagnonPair::mm:
        return m.M * std::polar(1.0, -w * (t + t_prime));
    case MagnonPair::mdag_mdag:
        return std::conj(m.M) * std::polar(1.0, w * (t + t_prime));
    case MagnonPair::mdag_m:
        return m.N * std::polar(1.0, w * (t - t_prime));
    case MagnonPair::m_mdag:
        return (m.N + 1.0) * std::polar(1.0, -w * (t - t_prime));
    }
    return {};
}

double field_cutoff(const PhysicalParams& p) {
    const double d = p.distance_cm();
    if (d > 0.0) {
        return -std::log(1e-12) / (2.0 * d);
    }
    return 40.0 / resonant_wavelength(p).lambda;
}

num::QuadratureResult field_correlator(FieldPair kind, double rho, double t, double t_prime,
                                       const PhysicalParams& p, const BathState& bath,
                                       const FieldCorrelatorOptions& opts) {
    const double d = p.distance_cm();
    const double amplitude = units::kPi * p.gamma_bath * p.gamma_bath * p.surface_spin_density;
    const double omega_q = p.qubit_frequency();
    const double dbar = p.squeeze_bandwidth();

    auto integrand = [&](double k) -> cplx {
        const double w = magnon_dispersion(k, p);
        const double kernel = k * k * k * std::exp(-2.0 * k * d) * num::bessel_j0(k * rho);
        const Moments m = moments_at(k, bath, p);
        switch (kind) {
        case FieldPair::minus_plus:
        case FieldPair::plus_minus:
            // both orderings carry N e^{i w (t-t')} + (N+1) e^{-i w (t-t')}
            return kernel * (m.N * std::polar(1.0, w * (t - t_prime)) +
                             (m.N + 1.0) * std::polar(1.0, -w * (t - t_prime)));
        case FieldPair::minus_minus:
            return kernel * m.M * std::polar(1.0, w * (t + t_prime));
        case FieldPair::plus_plus:
            return kernel * std::conj(m.M) * std::polar(1.0, -w * (t + t_prime));
        }
        return {};
    };

    // band edges are discontinuities of the moments
    const double D = p.stiffness();
    const double gap = p.gap();
    num::QuadOptions q;
    q.abs_tol = 0.0;
    q.rel_tol = opts.rel_tol;
    q.initial_panels = opts.initial_panels;
    for (double edge : {omega_q - dbar, omega_q + dbar}) {
        if (edge > gap) {
            q.breakpoints.push_back(std::sqrt((edge - gap) / D));
        }
    }
    const double kmax = field_cutoff(p);
    num::QuadratureResult res;
    try {
        res = num::quad_adaptive(integrand, 0.0, kmax, q);
    } catch (const NumericalError& e) {
        throw NumericalError(std::string("field_correlator: ") + e.what());
    }
    res.value *= amplitude;
    res.abs_error_estimate *= amplitude;
    return res;
}

} // namespace sqz::bath
