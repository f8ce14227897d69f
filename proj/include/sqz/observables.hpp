// observables.hpp — collective spin, Wineland squeezing, relaxation rate and initial states

#pragma once

#include <stdexcept>

#include <Eigen/Dense>

#include "sqz/dynamics.hpp"

namespace sqz {

// Raised when a quantity has no defined value for the given state (vanishing mean spin).
class UndefinedQuantity : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// S^eta = sum_i sigma_i^eta (Pauli convention, eigenvalues of sigma are +-1).
struct CollectiveOps {
    Eigen::MatrixXcd Sx, Sy, Sz;
    int n_qubits{0};
};

CollectiveOps collective_ops(int n_qubits);

Eigen::Vector3d collective_spin(const Eigen::MatrixXcd& rho, const CollectiveOps& ops);
Eigen::Vector3d collective_spin(const Eigen::MatrixXcd& rho);

// Symmetrized covariance 1/2<S_i S_j + S_j S_i> - <S_i><S_j> of (Sx, Sy, Sz).
Eigen::Matrix3d spin_covariance(const Eigen::MatrixXcd& rho, const CollectiveOps& ops);

struct SpinSummary {
    Eigen::Vector3d mean_S;
    double min_perp_var{0.0};
    double max_perp_var{0.0};
    double xi_R_squared{0.0};
    double squeezing_angle{0.0}; // rad in [0, pi), measured from e1 towards e2
    Eigen::Vector3d e1, e2;      // perpendicular frame
};

// e1 from Gram-Schmidt of x^ against the mean-spin direction (y^ when parallel), e2 = n x e1.
// Throws UndefinedQuantity when |<S>| <= 1e-8 N.
SpinSummary wineland_xi2(const Eigen::MatrixXcd& rho, int n_qubits, const CollectiveOps& ops);
SpinSummary wineland_xi2(const Eigen::MatrixXcd& rho, int n_qubits);

// -1/2 Tr[Sz L(rho)] / N. The generator is in units of Gamma0, so this is normalized by N Gamma0.
double relaxation_rate(const Eigen::MatrixXcd& rho, const Generator& generator, const CollectiveOps& ops);
double relaxation_rate(const Eigen::MatrixXcd& rho, const Generator& generator);

enum class InitialKind { all_excited, all_ground, css };

// Product state; css uses cos(theta/2)|up> + e^{i phi} sin(theta/2)|down> on every site.
QubitState initial_state(InitialKind kind, int n_qubits, double theta = 0.0, double phi = 0.0);

} // namespace sqz
