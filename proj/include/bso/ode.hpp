// ode.hpp — adaptive embedded Runge-Kutta 5(4) integrator (Dormand-Prince
// pair) over complex state vectors, with fourth-order dense output so that
// trajectories can be sampled on a uniform grid independent of step choice.

#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "bso/errors.hpp"

namespace bso::ode {

using Complex = std::complex<double>;
using State = std::vector<Complex>;

// Writes dy/dt into `dydt` (preallocated to y.size()).
using Rhs = std::function<void(double t, const State& y, State& dydt)>;

// Receives the dense-output solution at each requested sample time.
using Sink = std::function<void(double t, const State& y)>;

struct Options {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = 0.1;
    double init_step = 0.0; // 0: start at max_step and let the controller settle
};

// Integrate y' = f(t, y) from t0 to t1 (t1 > t0). `sample_times` must be
// strictly increasing and contained in [t0, t1]; the sink is invoked once per
// sample, in order. Throws NumericalError on step-size underflow (stiffness).
void integrate(const Rhs& rhs, State y0, double t0, double t1,
               const Options& opts, std::span<const double> sample_times,
               const Sink& sink);

// Endpoint-only convenience.
State solve_to(const Rhs& rhs, State y0, double t0, double t1, const Options& opts);

} // namespace bso::ode
