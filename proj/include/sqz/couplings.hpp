// couplings.hpp — coherent and dissipative inter-qubit couplings, closed form and quadrature oracle

#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "sqz/bath.hpp"
#include "sqz/params.hpp"

namespace sqz {

// All matrices are rates in Hz (1/s), indexed by qubit. Channel names follow the superscripts
// of the field correlators: Gamma_pm ~ (N+1) is emission, Gamma_mp ~ N absorption,
// Gamma_mm ~ M and Gamma_pp ~ M* the pair channels.
struct CouplingSet {
    Eigen::MatrixXd J;
    Eigen::MatrixXd Gamma_mp;
    Eigen::MatrixXd Gamma_pm;
    Eigen::MatrixXcd Gamma_pp;
    Eigen::MatrixXcd Gamma_mm;
    Eigen::MatrixXd weight;   // nu * prefactor * J0(rho/lambda) [* e^{-2d/lambda}]
    double nu{0.0};           // Hz
    double prefactor{0.0};    // pi (omega_q - Delta_F) / Delta_0
    double gamma0{0.0};       // nu * prefactor: isolated-qubit emission rate at r = 0
    bath::BathState bath;
    std::uint64_t geometry_hash{0};

    int size() const { return static_cast<int>(J.rows()); }

    // 2N x 2N block [[Gamma_pm, Gamma_pp], [Gamma_mm, Gamma_mp]]; Hermitian.
    Eigen::MatrixXcd dissipation_block() const;

    // Same bath and rates with every off-diagonal entry removed (independent qubits).
    CouplingSet uncorrelated() const;

    // Throws InvariantViolation naming the first broken property.
    void check_invariants(double tol = 1e-12) const;
};

CouplingSet build_couplings(const ArrayGeometry& geometry, const PhysicalParams& params,
                            const bath::BathState& bath);

enum class Channel { J, J_pp, J_mm, Gamma_mp, Gamma_pm, Gamma_pp, Gamma_mm };

std::string to_string(Channel c);

struct OracleOptions {
    double rel_tol{1e-10};
    double delta_width{1e-3};   // Gaussian width of the resonance, in units of Dbar
    double tail_argument{3000}; // k rho beyond which the oscillatory tail is summed asymptotically
};

// Channel strength (Hz) from the field correlators and the tau integrals, done independently
// of the closed form: resonance delta broadened and integrated over k, principal values by
// singularity subtraction. rho_over_lambda = 0 is allowed for the Gamma channels only.
std::complex<double> coupling_oracle(Channel channel, double rho_over_lambda,
                                     const PhysicalParams& params, const bath::BathState& bath,
                                     const OracleOptions& opts = {});

} // namespace sqz
