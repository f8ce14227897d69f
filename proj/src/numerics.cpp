// numerics.cpp — Bessel functions, adaptive Gauss-Kronrod, dense eigen and expm-action kernels

#include "sqz/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "sqz/errors.hpp"

namespace sqz::num {

namespace {

constexpr double kSeriesLimit = 20.0;
constexpr long double kEulerGamma = 0.577215664901532860606512090082402431L;

// sum_m (-q)^m / (m!)^2 with q = x^2/4; returns the J0 series and the harmonic-weighted
// companion sum_{m>=1} (-1)^{m+1} H_m q^m / (m!)^2 used by Y0.
struct SeriesSums {
    long double j0;
    long double harmonic;
};

SeriesSums small_argument_sums(double x) {
    const long double q = static_cast<long double>(x) * x / 4.0L;
    long double term = 1.0L; // q^m/(m!)^2 with sign (-1)^m
    long double j0 = 1.0L;
    long double harmonic = 0.0L;
    long double h = 0.0L;
    for (int m = 1; m < 200; ++m) {
        term *= -q / (static_cast<long double>(m) * m);
        h += 1.0L / m;
        j0 += term;
        harmonic -= h * term;
        if (std::fabs(term) * (1.0L + h) < 1e-22L * std::max<long double>(1.0L, std::fabs(j0))) {
            break;
        }
    }
    return {j0, harmonic};
}

// Hankel asymptotic amplitudes P0, Q0.
std::pair<double, double> hankel_pq(double x) {
    const double z8 = 8.0 * x;
    double term = 1.0;
    double p = 1.0;
    double q = 0.0;
    double prev = 1.0;
    for (int k = 1; k < 60; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= -(odd * odd) / (k * z8);
        if (std::fabs(term) > prev) {
            break; // asymptotic series starts diverging
        }
        prev = std::fabs(term);
        const int half = k / 2;
        if (k % 2 == 0) {
            p += (half % 2 == 0 ? 1.0 : -1.0) * term;
        } else {
            q += (half % 2 == 0 ? 1.0 : -1.0) * term;
        }
        if (prev < 1e-18) {
            break;
        }
    }
    return {p, q};
}

} // namespace

double bessel_j0(double x) {
    x = std::fabs(x);
    if (x < kSeriesLimit) {
        return static_cast<double>(small_argument_sums(x).j0);
    }
    const auto [p, q] = hankel_pq(x);
    const double chi = x - std::numbers::pi / 4.0;
    return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

double bessel_y0(double x) {
    if (!(x > 0.0)) {
        throw std::domain_error("bessel_y0: argument must be positive");
    }
    if (x < kSeriesLimit) {
        const auto s = small_argument_sums(x);
        const long double lg = std::log(static_cast<long double>(x) / 2.0L) + kEulerGamma;
        const long double two_over_pi = 2.0L / std::numbers::pi_v<long double>;
        return static_cast<double>(two_over_pi * (lg * s.j0 + s.harmonic));
    }
    const auto [p, q] = hankel_pq(x);
    const double chi = x - std::numbers::pi / 4.0;
    return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::sin(chi) + q * std::cos(chi));
}

// ------------------------------------------------------------ Quadrature

namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a;
    double b;
    cplx value;
    double error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gauss_kronrod(const std::function<cplx(double)>& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const cplx fc = f(center);
    cplx kronrod = fc * kWgk[7];
    cplx gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const cplx sum = f(center - dx) + f(center + dx);
        kronrod += kWgk[j] * sum;
        if (j % 2 == 1) {
            gauss += kWg[j / 2] * sum;
        }
    }
    kronrod *= half;
    gauss *= half;
    return {a, b, kronrod, std::abs(kronrod - gauss)};
}

} // namespace

QuadratureResult quad_adaptive(const std::function<cplx(double)>& f, double a, double b,
                               const QuadOptions& opts) {
    if (!(b > a)) {
        throw std::invalid_argument("quad_adaptive: requires b > a");
    }
    std::vector<double> edges{a};
    for (double p : opts.breakpoints) {
        if (p > a && p < b) {
            edges.push_back(p);
        }
    }
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());

    std::priority_queue<Panel> queue;
    QuadratureResult result;
    const int panels = std::max(1, opts.initial_panels);
    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
        const double width = (edges[e + 1] - edges[e]) / panels;
        if (width <= 0.0) {
            continue;
        }
        for (int p = 0; p < panels; ++p) {
            const double lo = edges[e] + p * width;
            const double hi = (p + 1 == panels) ? edges[e + 1] : lo + width;
            queue.push(gauss_kronrod(f, lo, hi));
            result.evaluations += 15;
        }
    }

    auto totals = [&queue]() {
        // priority_queue has no iteration; copy is cheap relative to integrand work
        auto copy = queue;
        cplx value{0.0, 0.0};
        double error = 0.0;
        while (!copy.empty()) {
            value += copy.top().value;
            error += copy.top().error;
            copy.pop();
        }
        return std::pair{value, error};
    };

    cplx value{0.0, 0.0};
    double error = 0.0;
    std::tie(value, error) = totals();
    while (error > std::max(opts.abs_tol, opts.rel_tol * std::abs(value))) {
        if (result.evaluations + 30 > opts.max_evaluations) {
            std::ostringstream msg;
            msg << "quad_adaptive: tolerance not met after " << result.evaluations
                << " evaluations (error estimate " << error << ", value " << value << ")";
            throw NumericalError(msg.str());
        }
        const Panel worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const Panel left = gauss_kronrod(f, worst.a, mid);
        const Panel right = gauss_kronrod(f, mid, worst.b);
        result.evaluations += 30;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        if (queue.size() % 256 == 0) {
            std::tie(value, error) = totals(); // limit drift of the running sums
        }
    }
    std::tie(value, error) = totals();
    result.value = value;
    result.abs_error_estimate = error;
    return result;
}

// ---------------------------------------------------------- Linear algebra

std::vector<EigenPair> eig_smallest(const Eigen::MatrixXcd& m, int count, double* spectral_radius) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw std::invalid_argument("eig_smallest: matrix must be square and non-empty");
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, true);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eig_smallest: eigen decomposition did not converge");
    }
    const auto& values = solver.eigenvalues();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(values.size()));
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        order[static_cast<std::size_t>(i)] = i;
    }
    std::stable_sort(order.begin(), order.end(), [&values](Eigen::Index l, Eigen::Index r) {
        return std::abs(values[l]) < std::abs(values[r]);
    });
    if (spectral_radius != nullptr) {
        *spectral_radius = std::abs(values[order.back()]);
    }
    count = std::clamp(count, 1, static_cast<int>(values.size()));
    std::vector<EigenPair> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const Eigen::Index idx = order[static_cast<std::size_t>(i)];
        out.push_back({values[idx], solver.eigenvectors().col(idx).normalized()});
    }
    return out;
}

Eigen::VectorXcd matrix_exp_apply(const Eigen::MatrixXcd& m, const Eigen::VectorXcd& v, double t) {
    if (m.rows() != m.cols() || m.cols() != v.size()) {
        throw std::invalid_argument("matrix_exp_apply: dimension mismatch");
    }
    const double norm = std::abs(t) * m.cwiseAbs().colwise().sum().maxCoeff();
    const int substeps = std::max(1, static_cast<int>(std::ceil(norm)));
    const double h = t / substeps;
    Eigen::VectorXcd w = v;
    for (int s = 0; s < substeps; ++s) {
        Eigen::VectorXcd term = w;
        Eigen::VectorXcd sum = w;
        for (int k = 1; k < 200; ++k) {
            term = (h / k) * (m * term);
            sum += term;
            if (term.norm() <= 1e-17 * sum.norm()) {
                break;
            }
        }
        w = sum;
    }
    return w;
}

} // namespace sqz::num
