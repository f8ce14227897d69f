// numerics.hpp — special functions, quadrature, ODE integration and dense eigen kernels

#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace sqz::num {

using cplx = std::complex<double>;

// ---------------------------------------------------------------- Bessel

// Zeroth-order Bessel functions of the first and second kind.
// Absolute error <= 1e-10 on (0, 100]; power series below x = 20, Hankel expansion above.
double bessel_j0(double x);
double bessel_y0(double x); // throws std::domain_error for x <= 0

// ------------------------------------------------------------ Quadrature

struct QuadratureResult {
    cplx value{0.0, 0.0};
    double abs_error_estimate{0.0};
    int evaluations{0};
};

struct QuadOptions {
    double abs_tol{1e-10};
    double rel_tol{0.0};        // converged when error <= max(abs_tol, rel_tol*|value|)
    int initial_panels{1};      // uniform panels per breakpoint interval before refinement
    int max_evaluations{4'000'000};
    std::vector<double> breakpoints; // interior points where the integrand has kinks or peaks
};

// Globally adaptive Gauss-Kronrod (7/15) on [a, b]. Throws NumericalError when the
// evaluation budget runs out before the tolerance is met.
QuadratureResult quad_adaptive(const std::function<cplx(double)>& f, double a, double b,
                               const QuadOptions& opts);

inline QuadratureResult quad_adaptive(const std::function<cplx(double)>& f, double a, double b,
                                      double tol) {
    QuadOptions opts;
    opts.abs_tol = tol;
    return quad_adaptive(f, a, b, opts);
}

// ------------------------------------------------------------------- ODE

using OdeState = std::vector<cplx>;
using OdeRhs = std::function<void(const OdeState& y, OdeState& dydt, double t)>;
using OdeObserver = std::function<void(const OdeState& y, double t)>;

// Adaptive Dormand-Prince 5(4) with dense output at every grid time. The grid must be
// strictly increasing; the observer sees y(t_grid[0]) == y0 first.
void integrate_ode(const OdeRhs& f, OdeState y0, std::span<const double> t_grid, double rtol,
                   double atol, const OdeObserver& observer);

std::vector<OdeState> integrate_ode(const OdeRhs& f, OdeState y0, std::span<const double> t_grid,
                                    double rtol, double atol);

// ---------------------------------------------------------- Linear algebra

struct EigenPair {
    cplx value;
    Eigen::VectorXcd vector;
};

// Eigenpairs of a dense general matrix sorted by |eigenvalue|, the `count` smallest.
// spectral_radius, when given, receives the largest |eigenvalue|.
std::vector<EigenPair> eig_smallest(const Eigen::MatrixXcd& m, int count = 1,
                                    double* spectral_radius = nullptr);

// exp(t*m) v by a scaled Taylor series; never forms exp(t*m).
Eigen::VectorXcd matrix_exp_apply(const Eigen::MatrixXcd& m, const Eigen::VectorXcd& v, double t);

} // namespace sqz::num
