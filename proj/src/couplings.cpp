// couplings.cpp — closed-form coupling matrices and the correlator-integral oracle

#include "sqz/couplings.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "sqz/errors.hpp"
#include "sqz/numerics.hpp"

namespace sqz {

using cplx = std::complex<double>;

// ------------------------------------------------------------------ closed form

CouplingSet build_couplings(const ArrayGeometry& geometry, const PhysicalParams& params,
                            const bath::BathState& bath) {
    geometry.validate();
    const int n = geometry.size();
    CouplingSet c;
    c.nu = params.nu_Hz;
    c.prefactor = units::kPi * params.detuning() / params.zero_field_splitting();
    c.gamma0 = c.nu * c.prefactor;
    c.bath = bath;
    c.geometry_hash = geometry.hash();

    double fd = 1.0;
    if (params.finite_distance_correction) {
        fd = std::exp(-2.0 * params.distance_cm() / bath.lambda);
    }

    c.J = Eigen::MatrixXd::Zero(n, n);
    c.weight.resize(n, n);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            const double x = geometry.distance(a, b);
            c.weight(a, b) = c.gamma0 * fd * (a == b ? 1.0 : num::bessel_j0(x));
            if (a != b) {
                c.J(a, b) = -0.5 * c.gamma0 * fd * num::bessel_y0(x);
            }
        }
    }
    c.Gamma_pm = (bath.N + 1.0) * c.weight;
    c.Gamma_mp = bath.N * c.weight;
    c.Gamma_mm = bath.M * c.weight.cast<cplx>();
    c.Gamma_pp = std::conj(bath.M) * c.weight.cast<cplx>();
    return c;
}

Eigen::MatrixXcd CouplingSet::dissipation_block() const {
    const int n = size();
    Eigen::MatrixXcd k(2 * n, 2 * n);
    k.topLeftCorner(n, n) = Gamma_pm.cast<cplx>();
    k.topRightCorner(n, n) = Gamma_pp;
    k.bottomLeftCorner(n, n) = Gamma_mm;
    k.bottomRightCorner(n, n) = Gamma_mp.cast<cplx>();
    return k;
}

CouplingSet CouplingSet::uncorrelated() const {
    CouplingSet c = *this;
    const int n = size();
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (a != b) {
                c.J(a, b) = 0.0;
                c.weight(a, b) = 0.0;
                c.Gamma_mp(a, b) = 0.0;
                c.Gamma_pm(a, b) = 0.0;
                c.Gamma_pp(a, b) = 0.0;
                c.Gamma_mm(a, b) = 0.0;
            }
        }
    }
    return c;
}

void CouplingSet::check_invariants(double tol) const {
    auto fail = [](const std::string& what) { throw InvariantViolation("CouplingSet: " + what); };
    const double scale = std::max(gamma0 * (bath.N + 1.0), 1e-300);
    const double atol = tol * scale;
    auto symmetric = [&](const auto& m, const char* name) {
        if ((m - m.transpose()).cwiseAbs().maxCoeff() > atol) {
            fail(std::string(name) + " is not symmetric");
        }
    };
    symmetric(J, "J");
    symmetric(Gamma_mp, "Gamma_mp");
    symmetric(Gamma_pm, "Gamma_pm");
    symmetric(Gamma_pp, "Gamma_pp");
    symmetric(Gamma_mm, "Gamma_mm");
    if ((Gamma_pp - Gamma_mm.conjugate()).cwiseAbs().maxCoeff() > atol) {
        fail("Gamma_pp != conj(Gamma_mm)");
    }
    if (bath.N > 0.0 &&
        (Gamma_pm * bath.N - Gamma_mp * (bath.N + 1.0)).cwiseAbs().maxCoeff() > atol * (bath.N + 1.0)) {
        fail("Gamma_pm / Gamma_mp != (N+1)/N");
    }
    if (J.size() > 0 && J.diagonal().cwiseAbs().maxCoeff() != 0.0) {
        fail("J has a non-zero diagonal");
    }
    const Eigen::MatrixXcd k = dissipation_block();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(k, Eigen::EigenvaluesOnly);
    const double norm = k.cwiseAbs().maxCoeff();
    if (es.eigenvalues().minCoeff() < -1e-10 * norm) {
        std::ostringstream msg;
        msg << "dissipation block is not positive semidefinite (min eigenvalue "
            << es.eigenvalues().minCoeff() << ")";
        fail(msg.str());
    }
}

// ----------------------------------------------------------------------- oracle

std::string to_string(Channel c) {
    switch (c) {
    case Channel::J: return "J";
    case Channel::J_pp: return "J_pp";
    case Channel::J_mm: return "J_mm";
    case Channel::Gamma_mp: return "Gamma_mp";
    case Channel::Gamma_pm: return "Gamma_pm";
    case Channel::Gamma_pp: return "Gamma_pp";
    case Channel::Gamma_mm: return "Gamma_mm";
    }
    return "?";
}

namespace {

// One term w * exp(i (a w_k t1 + b w_k t2)) of <B^mu(t1) B^nu(t2)>.
struct CorrelatorTerm {
    cplx weight;
    int a;
    int b;
};

// Field correlators for an out-of-plane magnetization, mode by mode; mu, nu = +1 / -1.
std::vector<CorrelatorTerm> correlator_terms(int mu, int nu, const bath::Moments& m) {
    if (mu == -1 && nu == +1) {
        return {{m.N, 1, -1}, {m.N + 1.0, -1, 1}};
    }
    if (mu == +1 && nu == -1) {
        return {{m.N + 1.0, -1, 1}, {m.N, 1, -1}};
    }
    if (mu == -1 && nu == -1) {
        return {{m.M, 1, 1}};
    }
    return {{std::conj(m.M), -1, -1}};
}

// The tau integrals of both orderings carry exp(-i x tau) with x = c_k w_k + c_q w_q:
//   first ordering:  c_k = b, c_q = nu
//   second ordering: c_k = a, c_q = mu
// int_0^inf e^{-i x tau} = pi delta(x) - i P/x. Only c_k = -c_q vanishes on shell; the
// other branch (|x| ~ 2 w_q) is the counter-rotating part and is dropped.
struct ResonantCoefficients {
    cplx delta; // multiplies delta(w_k - w_q)
    cplx pv;    // multiplies P 1/(w_k - w_q)
};

ResonantCoefficients resonant_coefficients(int mu, int nu, const bath::Moments& m) {
    ResonantCoefficients out{{0.0, 0.0}, {0.0, 0.0}};
    for (const auto& t : correlator_terms(mu, nu, m)) {
        const bool first = t.b == -nu;
        const bool second = t.a == -mu;
        if (first) {
            out.delta += units::kPi * t.weight;
            out.pv += 0.5 * t.weight * static_cast<double>(t.b);
        }
        if (second) {
            out.delta += units::kPi * t.weight;
            out.pv -= 0.5 * t.weight * static_cast<double>(t.a);
        }
    }
    return out;
}

struct ChannelSpec {
    bool dissipative;
    std::vector<std::pair<int, int>> pairs;
};

ChannelSpec channel_spec(Channel c) {
    switch (c) {
    case Channel::J: return {false, {{-1, +1}, {+1, -1}}};
    case Channel::J_pp: return {false, {{+1, +1}}};
    case Channel::J_mm: return {false, {{-1, -1}}};
    case Channel::Gamma_mp: return {true, {{-1, +1}}};
    case Channel::Gamma_pm: return {true, {{+1, -1}}};
    case Channel::Gamma_pp: return {true, {{+1, +1}}};
    case Channel::Gamma_mm: return {true, {{-1, -1}}};
    }
    return {true, {}};
}

} // namespace

cplx coupling_oracle(Channel channel, double x, const PhysicalParams& params,
                     const bath::BathState& bath, const OracleOptions& opts) {
    const ChannelSpec spec = channel_spec(channel);
    if (!(x >= 0.0) || !std::isfinite(x)) {
        throw std::domain_error("coupling_oracle: separation must be finite and non-negative");
    }
    if (!spec.dissipative && x == 0.0) {
        throw std::domain_error("coupling_oracle: coherent channels are undefined at zero separation");
    }

    // Dimensionless wavevector kappa = k lambda; w_k - w_q = detuning * (kappa^2 - 1).
    // Field-noise amplitude nu D^2/Delta0 turns every channel into
    // scale * int dkappa kappa^3 J0(kappa x) (...), scale = nu (w_q - Delta_F)/Delta0.
    const double detuning = params.detuning();
    const double scale = params.nu_Hz * detuning / params.zero_field_splitting();
    const double lambda = bath.lambda;
    const double d_over_lambda =
        params.finite_distance_correction ? params.distance_cm() / lambda : 0.0;

    auto coefficients = [&](double kappa) {
        const bath::Moments m = bath::moments_at(kappa / lambda, bath, params);
        ResonantCoefficients total{{0.0, 0.0}, {0.0, 0.0}};
        for (const auto& [mu, nu] : spec.pairs) {
            const ResonantCoefficients rc = resonant_coefficients(mu, nu, m);
            total.delta += rc.delta;
            total.pv += rc.pv;
        }
        return total;
    };

    num::QuadOptions q;
    q.abs_tol = 0.0;
    q.rel_tol = opts.rel_tol;

    if (spec.dissipative) {
        // delta(w_k - w_q) = delta(u)/detuning with u = kappa^2 - 1, broadened to a Gaussian
        const double sigma = opts.delta_width * params.squeeze_bandwidth() / detuning;
        const double half = 12.0 * sigma;
        auto integrand = [&](double kappa) -> cplx {
            const double u = kappa * kappa - 1.0;
            const double gauss =
                std::exp(-0.5 * u * u / (sigma * sigma)) / (sigma * std::sqrt(2.0 * units::kPi));
            return kappa * kappa * kappa * num::bessel_j0(kappa * x) *
                   std::exp(-2.0 * kappa * d_over_lambda) * coefficients(kappa).delta * gauss;
        };
        q.abs_tol = 1e-14;
        q.breakpoints = {1.0};
        q.initial_panels = 8;
        const auto res = num::quad_adaptive(integrand, std::sqrt(1.0 - half), std::sqrt(1.0 + half), q);
        return scale * res.value;
    }

    // Coherent part: kappa^3/(kappa^2 - 1) minus the static (w_q -> Delta_F) piece kappa leaves
    // kappa/(kappa^2 - 1); the static piece integrates to zero for x > 0.
    // PV on [0, 2] by subtracting the pole residue, then the oscillatory tail in u = kappa x.
    const double band = params.squeeze_bandwidth() / detuning;
    std::vector<double> edges;
    for (double e : {std::sqrt(1.0 - band), std::sqrt(1.0 + band)}) {
        edges.push_back(e);
    }
    auto f = [&](double kappa) -> cplx {
        return coefficients(kappa).pv * kappa * num::bessel_j0(kappa * x) / (kappa + 1.0);
    };
    const cplx f1 = f(1.0);
    auto near = [&](double kappa) -> cplx { return (f(kappa) - f1) / (kappa - 1.0); };
    q.abs_tol = 1e-13;
    q.initial_panels = 4;
    q.breakpoints = {edges[0]};
    cplx value = num::quad_adaptive(near, 0.0, 1.0, q).value;
    q.breakpoints = {edges[1]};
    value += num::quad_adaptive(near, 1.0, 2.0, q).value;
    // the principal value of 1/(kappa - 1) over [0, 2] vanishes, so f1 contributes nothing

    const double u0 = 2.0 * x;
    const double u_max = std::max(opts.tail_argument, u0 + 100.0);
    auto tail = [&](double u) -> cplx {
        const double kappa = u / x;
        return coefficients(kappa).pv * u * num::bessel_j0(u) / (u * u - x * x);
    };
    num::QuadOptions qt;
    qt.abs_tol = 1e-12;
    qt.initial_panels = static_cast<int>(std::ceil((u_max - u0) / units::kPi));
    qt.max_evaluations = 20'000'000;
    value += num::quad_adaptive(tail, u0, u_max, qt).value;
    // int_U^inf J0(u)/u du ~ -sqrt(2/pi) U^{-3/2} sin(U - pi/4); the kernel is out of band there
    const cplx far = coefficients(u_max / x).pv;
    value += far * (-std::sqrt(2.0 / units::kPi) * std::pow(u_max, -1.5) *
                    std::sin(u_max - units::kPi / 4.0));
    return scale * value;
}

} // namespace sqz
