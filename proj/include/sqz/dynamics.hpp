// dynamics.hpp — qubit-array master equation: generator, time evolution and steady state

#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sqz/couplings.hpp"

namespace sqz {

inline constexpr int kMaxQubits = 8;
inline constexpr int kMaxSteadyStateQubits = 6;

// Basis per qubit {|up>, |down>}, index 0 = up; qubit 0 is the most significant factor.
struct QubitState {
    Eigen::MatrixXcd rho;
    int n_qubits{0};
    double time{0.0}; // Gamma0 t

    // Hermiticity 1e-10, trace 1e-9, min eigenvalue >= -1e-8; throws InvariantViolation.
    void validate() const;
};

// Single-site operators embedded in the N-qubit space.
Eigen::MatrixXcd sigma_minus(int site, int n_qubits);
Eigen::MatrixXcd sigma_plus(int site, int n_qubits);
Eigen::MatrixXcd sigma_x(int site, int n_qubits);
Eigen::MatrixXcd sigma_y(int site, int n_qubits);
Eigen::MatrixXcd sigma_z(int site, int n_qubits);

enum class GeneratorMode { four_channel, jump_operator };

// L(rho) = -i[H, rho] + sum_ij K_ij (A_j rho A_i^dag - 1/2 {A_i^dag A_j, rho}), in units of
// Gamma0 so that time is Gamma0 t.
//   jump_operator: A = (C_1..C_N), C = cosh r s- + sinh r e^{i phi} s+, K = weight
//   four_channel:  A = (s-_1..s-_N, s+_1..s+_N), K = [[Gamma_pm, -Gamma_mm], [-Gamma_pp, Gamma_mp]]
// The four-channel pairing is the expansion of the jump form: emission s-_b rho s+_a carries
// Gamma_pm ~ N+1, absorption carries Gamma_mp ~ N, and the pair terms come with -M.
class Generator {
public:
    Generator(Eigen::MatrixXcd hamiltonian, std::vector<Eigen::MatrixXcd> ops, Eigen::MatrixXcd kossakowski,
              int n_qubits);

    Eigen::MatrixXcd apply(const Eigen::MatrixXcd& rho) const;
    // Column-stacked superoperator, 4^N x 4^N.
    Eigen::MatrixXcd liouvillian() const;

    const Eigen::MatrixXcd& hamiltonian() const { return h_; }
    const Eigen::MatrixXcd& kossakowski() const { return k_; }
    const std::vector<Eigen::MatrixXcd>& operators() const { return ops_; }
    int n_qubits() const { return n_; }
    int dim() const { return static_cast<int>(h_.rows()); }

private:
    Eigen::MatrixXcd h_;
    std::vector<Eigen::MatrixXcd> ops_;
    Eigen::MatrixXcd k_;
    int n_;
    // rho -> -i (h_nh rho - rho h_nh^dag) + sum_i mixed_[i] rho ops_[i]^dag
    Eigen::MatrixXcd h_nh_;
    std::vector<Eigen::MatrixXcd> mixed_;
    std::vector<Eigen::MatrixXcd> ops_dag_;
};

// H_eff = sum_{a != b} J_ab s+_a s-_b, scaled by 1/Gamma0.
Eigen::MatrixXcd effective_hamiltonian(const CouplingSet& couplings);

Generator build_generator(const CouplingSet& couplings, GeneratorMode mode);

// The Lindbladian with the channel superscripts read literally: Gamma_mp on s- rho s+,
// Gamma_pm on s+ rho s-, Gamma_mm on s+ rho s+ and Gamma_pp on s- rho s- (all with + sign).
// Kept for comparison only; it is not the physical pairing.
Generator build_literal_generator(const CouplingSet& couplings);

struct EvolveOptions {
    double rtol{1e-8};
    double atol{1e-10};
    bool store_states{false};
};

struct Trajectory {
    std::vector<double> t; // Gamma0 t
    std::vector<Eigen::Vector3d> mean_S;
    std::vector<std::optional<double>> xi_R_squared; // empty where the mean spin vanishes
    std::vector<double> relaxation_rate;             // -1/2 d<Sz>/dt / (N Gamma0)
    std::vector<double> min_eig;
    std::vector<double> trace_error;
    std::vector<double> hermiticity_error;
    std::vector<Eigen::MatrixXcd> states; // filled when store_states
    Eigen::MatrixXcd final_state;
};

// Dense-output adaptive integration on t_grid (Gamma0 t). Every output state is checked:
// trace and Hermiticity within max(10 atol, 1e-9 / 1e-10), min eigenvalue >= -1e-8.
Trajectory evolve(const QubitState& rho0, const Generator& generator, std::span<const double> t_grid,
                  const EvolveOptions& opts = {});

// Null vector of the vectorized Liouvillian (N <= 6). Throws NumericalError when two
// eigenvalues lie below 1e-8 of the spectral radius.
QubitState steady_state(const Generator& generator);

double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

} // namespace sqz
