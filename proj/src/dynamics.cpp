// dynamics.cpp — Kossakowski-form generator, trajectory integration and steady state

#include "sqz/dynamics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "sqz/errors.hpp"
#include "sqz/numerics.hpp"
#include "sqz/observables.hpp"

namespace sqz {

using cplx = std::complex<double>;
using Eigen::MatrixXcd;

namespace {

// 2x2 single-site matrix in {up, down}.
MatrixXcd embed(const Eigen::Matrix2cd& op, int site, int n) {
    if (n < 1 || n > kMaxQubits) {
        throw ConfigError("qubit count must be in [1, " + std::to_string(kMaxQubits) + "]");
    }
    if (site < 0 || site >= n) {
        throw std::out_of_range("site index out of range");
    }
    const int dim = 1 << n;
    const int shift = n - 1 - site;
    const int mask = 1 << shift;
    MatrixXcd out = MatrixXcd::Zero(dim, dim);
    for (int j = 0; j < dim; ++j) {
        const int bj = (j >> shift) & 1;
        for (int bi = 0; bi < 2; ++bi) {
            const cplx v = op(bi, bj);
            if (v != cplx(0.0, 0.0)) {
                const int i = (j & ~mask) | (bi << shift);
                out(i, j) = v;
            }
        }
    }
    return out;
}

MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b) {
    MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

double min_eigenvalue(const MatrixXcd& rho) {
    const MatrixXcd h = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

} // namespace

MatrixXcd sigma_minus(int site, int n) {
    Eigen::Matrix2cd m;
    m << 0, 0, 1, 0;
    return embed(m, site, n);
}
MatrixXcd sigma_plus(int site, int n) {
    Eigen::Matrix2cd m;
    m << 0, 1, 0, 0;
    return embed(m, site, n);
}
MatrixXcd sigma_x(int site, int n) {
    Eigen::Matrix2cd m;
    m << 0, 1, 1, 0;
    return embed(m, site, n);
}
MatrixXcd sigma_y(int site, int n) {
    Eigen::Matrix2cd m;
    m << 0, cplx(0, -1), cplx(0, 1), 0;
    return embed(m, site, n);
}
MatrixXcd sigma_z(int site, int n) {
    Eigen::Matrix2cd m;
    m << 1, 0, 0, -1;
    return embed(m, site, n);
}

void QubitState::validate() const {
    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    if (n_qubits < 1 || n_qubits > kMaxQubits || rho.rows() != dim || rho.cols() != dim) {
        throw InvariantViolation("QubitState: density matrix has the wrong shape for " +
                                 std::to_string(n_qubits) + " qubits");
    }
    std::ostringstream msg;
    const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (!(herm < 1e-10)) {
        msg << "QubitState: not Hermitian (max |rho - rho^dag| = " << herm << ")";
        throw InvariantViolation(msg.str());
    }
    const double tr = std::abs(rho.trace() - 1.0);
    if (!(tr < 1e-9)) {
        msg << "QubitState: trace error " << tr;
        throw InvariantViolation(msg.str());
    }
    const double me = min_eigenvalue(rho);
    if (!(me >= -1e-8)) {
        msg << "QubitState: negative eigenvalue " << me;
        throw InvariantViolation(msg.str());
    }
}

// ---------------------------------------------------------------- generator

Generator::Generator(MatrixXcd hamiltonian, std::vector<MatrixXcd> ops, MatrixXcd kossakowski, int n_qubits)
    : h_(std::move(hamiltonian)), ops_(std::move(ops)), k_(std::move(kossakowski)), n_(n_qubits) {
    const auto m = static_cast<Eigen::Index>(ops_.size());
    if (k_.rows() != m || k_.cols() != m) {
        throw std::invalid_argument("Generator: Kossakowski matrix does not match the operator count");
    }
    const Eigen::Index dim = h_.rows();
    MatrixXcd q = MatrixXcd::Zero(dim, dim);
    mixed_.assign(ops_.size(), MatrixXcd::Zero(dim, dim));
    ops_dag_.reserve(ops_.size());
    for (const auto& a : ops_) {
        ops_dag_.push_back(a.adjoint());
    }
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) {
            const cplx kij = k_(i, j);
            if (kij == cplx(0.0, 0.0)) {
                continue;
            }
            mixed_[static_cast<std::size_t>(i)] += kij * ops_[static_cast<std::size_t>(j)];
            q += kij * (ops_dag_[static_cast<std::size_t>(i)] * ops_[static_cast<std::size_t>(j)]);
        }
    }
    h_nh_ = h_ - cplx(0.0, 0.5) * q;
}

MatrixXcd Generator::apply(const MatrixXcd& rho) const {
    // general form, so apply() is the linear map on non-Hermitian input too
    MatrixXcd out = cplx(0.0, -1.0) * (h_nh_ * rho - rho * h_nh_.adjoint());
    for (std::size_t i = 0; i < ops_.size(); ++i) {
        out.noalias() += mixed_[i] * rho * ops_dag_[i];
    }
    return out;
}

MatrixXcd Generator::liouvillian() const {
    const Eigen::Index dim = h_.rows();
    const MatrixXcd id = MatrixXcd::Identity(dim, dim);
    // vec(A rho B) = (B^T kron A) vec(rho)
    MatrixXcd l = cplx(0.0, -1.0) * kron(id, h_nh_) + cplx(0.0, 1.0) * kron(h_nh_.conjugate(), id);
    for (std::size_t i = 0; i < ops_.size(); ++i) {
        l += kron(ops_[i].conjugate(), mixed_[i]);
    }
    return l;
}

MatrixXcd effective_hamiltonian(const CouplingSet& c) {
    const int n = c.size();
    const int dim = 1 << n;
    MatrixXcd h = MatrixXcd::Zero(dim, dim);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (a != b && c.J(a, b) != 0.0) {
                h += (c.J(a, b) / c.gamma0) * (sigma_plus(a, n) * sigma_minus(b, n));
            }
        }
    }
    return h;
}

namespace {

void check_size(const CouplingSet& c) {
    if (c.size() < 1 || c.size() > kMaxQubits) {
        throw ConfigError("qubit count " + std::to_string(c.size()) + " outside [1, " +
                          std::to_string(kMaxQubits) + "]");
    }
    if (!(c.gamma0 > 0.0)) {
        throw ConfigError("coupling set has no time unit (gamma0 <= 0)");
    }
}

} // namespace

Generator build_generator(const CouplingSet& c, GeneratorMode mode) {
    check_size(c);
    const int n = c.size();
    const double g0 = c.gamma0;
    MatrixXcd h = effective_hamiltonian(c);
    std::vector<MatrixXcd> ops;
    MatrixXcd k;
    if (mode == GeneratorMode::jump_operator) {
        const double ch = std::cosh(c.bath.r);
        const cplx sh = std::sinh(c.bath.r) * std::polar(1.0, c.bath.phi);
        for (int a = 0; a < n; ++a) {
            ops.push_back(ch * sigma_minus(a, n) + sh * sigma_plus(a, n));
        }
        k = (c.weight / g0).cast<cplx>();
    } else {
        for (int a = 0; a < n; ++a) {
            ops.push_back(sigma_minus(a, n));
        }
        for (int a = 0; a < n; ++a) {
            ops.push_back(sigma_plus(a, n));
        }
        k.resize(2 * n, 2 * n);
        k.topLeftCorner(n, n) = c.Gamma_pm.cast<cplx>() / g0;
        k.topRightCorner(n, n) = -c.Gamma_mm / g0;
        k.bottomLeftCorner(n, n) = -c.Gamma_pp / g0;
        k.bottomRightCorner(n, n) = c.Gamma_mp.cast<cplx>() / g0;
    }
    return Generator(std::move(h), std::move(ops), std::move(k), n);
}

Generator build_literal_generator(const CouplingSet& c) {
    check_size(c);
    const int n = c.size();
    const double g0 = c.gamma0;
    std::vector<MatrixXcd> ops;
    for (int a = 0; a < n; ++a) {
        ops.push_back(sigma_minus(a, n));
    }
    for (int a = 0; a < n; ++a) {
        ops.push_back(sigma_plus(a, n));
    }
    MatrixXcd k(2 * n, 2 * n);
    k.topLeftCorner(n, n) = c.Gamma_mp.cast<cplx>() / g0;
    k.topRightCorner(n, n) = c.Gamma_mm / g0;
    k.bottomLeftCorner(n, n) = c.Gamma_pp / g0;
    k.bottomRightCorner(n, n) = c.Gamma_pm.cast<cplx>() / g0;
    return Generator(effective_hamiltonian(c), std::move(ops), std::move(k), n);
}

// ---------------------------------------------------------------- evolution

Trajectory evolve(const QubitState& rho0, const Generator& gen, std::span<const double> t_grid,
                  const EvolveOptions& opts) {
    if (rho0.n_qubits != gen.n_qubits()) {
        throw ConfigError("evolve: state and generator disagree on the qubit count");
    }
    rho0.validate();
    const int n = gen.n_qubits();
    const Eigen::Index dim = gen.dim();
    const CollectiveOps ops = collective_ops(n);
    const double trace_tol = std::max(10.0 * opts.atol, 1e-9);
    const double herm_tol = std::max(10.0 * opts.atol, 1e-10);

    Trajectory traj;
    traj.t.reserve(t_grid.size());

    auto rhs = [&gen, dim](const num::OdeState& y, num::OdeState& dy, double) {
        Eigen::Map<const MatrixXcd> rho(y.data(), dim, dim);
        dy.resize(y.size());
        Eigen::Map<MatrixXcd> out(dy.data(), dim, dim);
        out = gen.apply(rho);
    };
    auto observer = [&](const num::OdeState& y, double t) {
        Eigen::Map<const MatrixXcd> rho_map(y.data(), dim, dim);
        const MatrixXcd rho = rho_map;
        const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
        const double tr = std::abs(rho.trace() - 1.0);
        const double me = min_eigenvalue(rho);
        if (!(herm <= herm_tol) || !(tr <= trace_tol) || !(me >= -1e-8)) {
            std::ostringstream msg;
            msg << "evolve: state invariant violated at Gamma0 t = " << t << " (trace error " << tr
                << ", hermiticity error " << herm << ", min eigenvalue " << me << ")";
            throw InvariantViolation(msg.str());
        }
        traj.t.push_back(t);
        traj.trace_error.push_back(tr);
        traj.hermiticity_error.push_back(herm);
        traj.min_eig.push_back(me);
        traj.mean_S.push_back(collective_spin(rho, ops));
        try {
            traj.xi_R_squared.emplace_back(wineland_xi2(rho, n, ops).xi_R_squared);
        } catch (const UndefinedQuantity&) {
            traj.xi_R_squared.emplace_back(std::nullopt);
        }
        traj.relaxation_rate.push_back(relaxation_rate(rho, gen, ops));
        if (opts.store_states) {
            traj.states.push_back(rho);
        }
        traj.final_state = rho;
    };

    num::OdeState y0(rho0.rho.data(), rho0.rho.data() + rho0.rho.size());
    num::integrate_ode(rhs, std::move(y0), t_grid, opts.rtol, opts.atol, observer);
    return traj;
}

QubitState steady_state(const Generator& gen) {
    const int n = gen.n_qubits();
    if (n > kMaxSteadyStateQubits) {
        throw ConfigError("steady_state: at most " + std::to_string(kMaxSteadyStateQubits) +
                          " qubits (4^N eigenproblem)");
    }
    const Eigen::Index dim = gen.dim();
    double radius = 0.0;
    const auto pairs = num::eig_smallest(gen.liouvillian(), 2, &radius);
    if (pairs.size() > 1 && std::abs(pairs[1].value) < 1e-8 * radius) {
        std::ostringstream msg;
        msg << "steady_state: degenerate null space (|lambda_0| = " << std::abs(pairs[0].value)
            << ", |lambda_1| = " << std::abs(pairs[1].value) << ", spectral radius " << radius << ")";
        throw NumericalError(msg.str());
    }
    Eigen::Map<const MatrixXcd> v(pairs[0].vector.data(), dim, dim);
    const cplx tr = v.trace();
    if (std::abs(tr) < 1e-12) {
        throw NumericalError("steady_state: null vector has vanishing trace");
    }
    const MatrixXcd u = v / tr;
    MatrixXcd rho = 0.5 * (u + u.adjoint());
    QubitState s{rho, n, std::numeric_limits<double>::infinity()};
    s.validate();
    return s;
}

double trace_distance(const MatrixXcd& a, const MatrixXcd& b) {
    const MatrixXcd d = a - b;
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (d + d.adjoint()), Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

} // namespace sqz
