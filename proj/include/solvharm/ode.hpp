#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "solvharm/config.hpp"

namespace solvharm {

using OdeState = std::vector<double>;

/**
 * Advance x from t0 to t1 (either direction) with an adaptive
 * Runge-Kutta-Fehlberg 7(8) pair. `dt` is the initial step magnitude on entry
 * and the last accepted step magnitude on exit, so consecutive calls can
 * reuse it.
 *
 * sys has the odeint signature void(const OdeState&, OdeState&, double).
 */
template <typename System>
void integrate_segment(System&& sys, OdeState& x, double t0, double t1, double& dt,
                       const Tolerances& tol = default_tolerances()) {
    namespace odeint = boost::numeric::odeint;
    if (t0 == t1) return;
    auto stepper = odeint::make_controlled<odeint::runge_kutta_fehlberg78<OdeState>>(tol.ode_abs,
                                                                                    tol.ode_rel);
    const double dir = t1 > t0 ? 1.0 : -1.0;
    double t = t0;
    double h = dir * std::min(std::abs(dt) > 0 ? std::abs(dt) : 1e-2, std::abs(t1 - t0));
    std::size_t attempts = 0;
    while (dir * (t1 - t) > 0.0) {
        bool clipped = false;
        double h_try = h;
        if (dir * (t + h_try - t1) > 0.0) {
            h_try = t1 - t;
            clipped = true;
        }
        const auto res = stepper.try_step(sys, x, t, h_try);
        if (++attempts > tol.ode_max_steps)
            throw NumericalError("ode: step cap of " + std::to_string(tol.ode_max_steps) +
                                 " reached at t = " + std::to_string(t));
        if (res == odeint::success) {
            // a clipped final step must not shrink the next call's start step
            h = clipped ? (std::abs(h_try) > std::abs(h) ? h_try : h) : h_try;
            if (clipped && dir * (t1 - t) <= 1e-15 * std::max(1.0, std::abs(t1))) t = t1;
        } else {
            h = h_try;
            if (std::abs(h) < 1e-14 * std::max(1.0, std::abs(t)))
                throw NumericalError("ode: step size underflow at t = " + std::to_string(t));
        }
        for (double v : x)
            if (!std::isfinite(v)) throw NumericalError("ode: solution overflow");
    }
    dt = std::abs(h);
}

}  // namespace solvharm
