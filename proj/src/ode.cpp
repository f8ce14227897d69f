// ode.cpp — integrate_ode on top of odeint's dense-output Dormand-Prince stepper

#include "sqz/numerics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <boost/numeric/odeint.hpp>

#include "sqz/errors.hpp"

namespace sqz::num {

namespace odeint = boost::numeric::odeint;

namespace {

constexpr long kMaxSteps = 10'000'000;

bool finite(const OdeState& y) {
    for (const auto& v : y) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            return false;
        }
    }
    return true;
}

} // namespace

void integrate_ode(const OdeRhs& f, OdeState y0, std::span<const double> t_grid, double rtol,
                   double atol, const OdeObserver& observer) {
    if (t_grid.empty()) {
        return;
    }
    if (!(rtol > 0.0) || !(atol > 0.0)) {
        throw std::invalid_argument("integrate_ode: tolerances must be positive");
    }
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > t_grid[i - 1])) {
            throw std::invalid_argument("integrate_ode: time grid must be strictly increasing");
        }
    }
    observer(y0, t_grid.front());
    if (t_grid.size() == 1) {
        return;
    }

    using stepper_type = odeint::runge_kutta_dopri5<OdeState>;
    using controlled = odeint::controlled_runge_kutta<stepper_type>;
    using dense = odeint::dense_output_runge_kutta<controlled>;
    // odeint accepts a step when |err_i| <= atol' + rtol'|y_i|; halving both keeps that
    // below max(atol, rtol|y_i|)
    dense stepper(controlled(odeint::default_error_checker<double, odeint::range_algebra,
                                                           odeint::default_operations>(
        0.5 * atol, 0.5 * rtol, 1.0, 0.0)));

    const double t0 = t_grid.front();
    const double span = t_grid.back() - t0;
    const double min_step = 1e-13 * std::max(span, std::abs(t_grid.back()));
    const double dt0 = std::min(span / static_cast<double>(t_grid.size()), 1e-2 * span);

    auto rhs = [&f](const OdeState& y, OdeState& dydt, double t) {
        f(y, dydt, t);
        if (!finite(dydt)) {
            std::ostringstream msg;
            msg << "integrate_ode: non-finite derivative at t = " << t;
            throw NumericalError(msg.str());
        }
    };

    OdeState y = y0;
    long steps = 0;
    try {
        stepper.initialize(y0, t0, dt0);
        for (std::size_t i = 1; i < t_grid.size(); ++i) {
            while (stepper.current_time() < t_grid[i]) {
                stepper.do_step(rhs);
                if (++steps > kMaxSteps) {
                    throw NumericalError("integrate_ode: step budget exhausted");
                }
                if (stepper.current_time() < t_grid.back() && stepper.current_time_step() < min_step) {
                    std::ostringstream msg;
                    msg << "integrate_ode: step-size underflow at t = " << stepper.current_time()
                        << " (dt = " << stepper.current_time_step() << ")";
                    throw NumericalError(msg.str());
                }
            }
            stepper.calc_state(t_grid[i], y);
            if (!finite(y)) {
                std::ostringstream msg;
                msg << "integrate_ode: non-finite state at t = " << t_grid[i];
                throw NumericalError(msg.str());
            }
            observer(y, t_grid[i]);
        }
    } catch (const odeint::odeint_error& e) {
        std::ostringstream msg;
        msg << "integrate_ode: step-size control failed (" << e.what() << ")";
        throw NumericalError(msg.str());
    }
}

std::vector<OdeState> integrate_ode(const OdeRhs& f, OdeState y0, std::span<const double> t_grid,
                                    double rtol, double atol) {
    std::vector<OdeState> out;
    out.reserve(t_grid.size());
    integrate_ode(f, std::move(y0), t_grid, rtol, atol,
                  [&out](const OdeState& y, double) { out.push_back(y); });
    return out;
}

} // namespace sqz::num
