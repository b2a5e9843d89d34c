/**
 * @file integrator.hpp
 * @brief Adaptive embedded Runge-Kutta 5(4) (Dormand-Prince) over fixed-size
 *        states, stepping exactly onto every requested output time.
 */
#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "nodal/types.hpp"

namespace nodal {

struct IntegratorOptions {
    double rel_tol = 1e-12;
    double abs_tol = 1e-12;
    double initial_step = 1.0;           ///< s
    std::size_t max_steps_per_output = 1'000'000;
};

namespace detail {

template <std::size_t N>
using OdeState = std::array<double, N>;

/**
 * Integrates dx/dt = rhs(x, dxdt, t) from times.front() through every entry of
 * `times` (strictly increasing) and calls observer(x, t) at each of them,
 * including the first.
 *
 * @throws Error(StepFailure) when the step size controller gives up or the
 *         state becomes non-finite.
 */
template <std::size_t N, class Rhs, class Observer>
void integrate_times(Rhs&& rhs, OdeState<N>& x, std::span<const double> times,
                     const IntegratorOptions& opt, Observer&& observer) {
    namespace odeint = boost::numeric::odeint;
    using Stepper = odeint::runge_kutta_dopri5<OdeState<N>>;
    if (times.empty()) return;
    for (std::size_t k = 1; k < times.size(); ++k) {
        if (!(times[k] > times[k - 1])) {
            throw Error(ErrorCode::InvalidArgument, "output times must be strictly increasing");
        }
    }
    auto checked_observer = [&](const OdeState<N>& s, double t) {
        for (double v : s) {
            if (!std::isfinite(v)) {
                throw Error(ErrorCode::StepFailure, "state became non-finite at t = " + std::to_string(t));
            }
        }
        observer(s, t);
    };
    if (times.size() == 1) {
        checked_observer(x, times.front());
        return;
    }
    double dt = std::min(opt.initial_step, times[1] - times[0]);
    try {
        odeint::integrate_times(odeint::make_controlled<Stepper>(opt.abs_tol, opt.rel_tol), rhs, x,
                                times.begin(), times.end(), dt, checked_observer,
                                odeint::max_step_checker(static_cast<int>(opt.max_steps_per_output)));
    } catch (const odeint::odeint_error& e) {
        throw Error(ErrorCode::StepFailure, e.what());
    }
}

}  // namespace detail
}  // namespace nodal
