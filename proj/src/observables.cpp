// observables.cpp — collective-spin moments and the Wineland parameter

#include "sqz/observables.hpp"

#include <cmath>

#include "sqz/errors.hpp"

namespace sqz {

using cplx = std::complex<double>;
using Eigen::MatrixXcd;

CollectiveOps collective_ops(int n) {
    CollectiveOps ops;
    ops.n_qubits = n;
    const int dim = 1 << n;
    ops.Sx = MatrixXcd::Zero(dim, dim);
    ops.Sy = MatrixXcd::Zero(dim, dim);
    ops.Sz = MatrixXcd::Zero(dim, dim);
    for (int i = 0; i < n; ++i) {
        ops.Sx += sigma_x(i, n);
        ops.Sy += sigma_y(i, n);
        ops.Sz += sigma_z(i, n);
    }
    return ops;
}

namespace {

int qubits_from_dim(Eigen::Index dim) {
    int n = 0;
    while ((Eigen::Index{1} << n) < dim) {
        ++n;
    }
    if ((Eigen::Index{1} << n) != dim || n < 1) {
        throw std::invalid_argument("density matrix dimension is not a power of two");
    }
    return n;
}

// Tr(a b) without forming the product.
cplx trace_product(const MatrixXcd& a, const MatrixXcd& b) {
    return a.cwiseProduct(b.transpose()).sum();
}

} // namespace

Eigen::Vector3d collective_spin(const MatrixXcd& rho, const CollectiveOps& ops) {
    return {trace_product(rho, ops.Sx).real(), trace_product(rho, ops.Sy).real(),
            trace_product(rho, ops.Sz).real()};
}

Eigen::Vector3d collective_spin(const MatrixXcd& rho) {
    return collective_spin(rho, collective_ops(qubits_from_dim(rho.rows())));
}

Eigen::Matrix3d spin_covariance(const MatrixXcd& rho, const CollectiveOps& ops) {
    const MatrixXcd* s[3] = {&ops.Sx, &ops.Sy, &ops.Sz};
    MatrixXcd rs[3];
    Eigen::Vector3d mean;
    for (int i = 0; i < 3; ++i) {
        rs[i] = rho * *s[i];
        mean[i] = rs[i].trace().real();
    }
    Eigen::Matrix3d cov;
    for (int i = 0; i < 3; ++i) {
        for (int j = i; j < 3; ++j) {
            // 1/2 Tr(rho {S_i, S_j}) = Re Tr(rho S_i S_j) for Hermitian rho, S
            const double second = 0.5 * (trace_product(rs[i], *s[j]) + trace_product(rs[j], *s[i])).real();
            cov(i, j) = cov(j, i) = second - mean[i] * mean[j];
        }
    }
    return cov;
}

SpinSummary wineland_xi2(const MatrixXcd& rho, int n, const CollectiveOps& ops) {
    SpinSummary out;
    out.mean_S = collective_spin(rho, ops);
    const double length = out.mean_S.norm();
    if (!(length > 1e-8 * n)) {
        throw UndefinedQuantity("wineland_xi2: mean spin vanishes, direction undefined");
    }
    const Eigen::Vector3d nhat = out.mean_S / length;
    Eigen::Vector3d e1 = Eigen::Vector3d::UnitX() - nhat.x() * nhat;
    if (e1.norm() < 1e-6) {
        e1 = Eigen::Vector3d::UnitY() - nhat.y() * nhat;
    }
    e1.normalize();
    const Eigen::Vector3d e2 = nhat.cross(e1);
    out.e1 = e1;
    out.e2 = e2;

    Eigen::Matrix<double, 3, 2> frame;
    frame.col(0) = e1;
    frame.col(1) = e2;
    const Eigen::Matrix2d c = frame.transpose() * spin_covariance(rho, ops) * frame;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(c);
    out.min_perp_var = std::max(es.eigenvalues()[0], 0.0);
    out.max_perp_var = es.eigenvalues()[1];
    const Eigen::Vector2d v = es.eigenvectors().col(0);
    double angle = std::atan2(v[1], v[0]);
    if (angle < 0.0) {
        angle += units::kPi;
    }
    if (angle >= units::kPi) {
        angle -= units::kPi;
    }
    out.squeezing_angle = angle;
    out.xi_R_squared = n * out.min_perp_var / (length * length);
    return out;
}

SpinSummary wineland_xi2(const MatrixXcd& rho, int n) {
    return wineland_xi2(rho, n, collective_ops(n));
}

double relaxation_rate(const MatrixXcd& rho, const Generator& gen, const CollectiveOps& ops) {
    return -0.5 * trace_product(gen.apply(rho), ops.Sz).real() / gen.n_qubits();
}

double relaxation_rate(const MatrixXcd& rho, const Generator& gen) {
    return relaxation_rate(rho, gen, collective_ops(gen.n_qubits()));
}

QubitState initial_state(InitialKind kind, int n, double theta, double phi) {
    if (n < 1 || n > kMaxQubits) {
        throw ConfigError("initial_state: qubit count must be in [1, " + std::to_string(kMaxQubits) + "]");
    }
    Eigen::Vector2cd single;
    switch (kind) {
    case InitialKind::all_excited: single << 1.0, 0.0; break;
    case InitialKind::all_ground: single << 0.0, 1.0; break;
    case InitialKind::css:
        single << std::cos(0.5 * theta), std::polar(std::sin(0.5 * theta), phi);
        break;
    }
    Eigen::VectorXcd psi(1);
    psi[0] = 1.0;
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXcd next(psi.size() * 2);
        for (Eigen::Index k = 0; k < psi.size(); ++k) {
            next[2 * k] = psi[k] * single[0];
            next[2 * k + 1] = psi[k] * single[1];
        }
        psi = next;
    }
    return {psi * psi.adjoint(), n, 0.0};
}

} // namespace sqz
