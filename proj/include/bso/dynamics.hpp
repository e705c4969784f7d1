// dynamics.hpp — exact (non-RWA) resonant two-level propagation in the
// rotating frame. This integrator is the ground truth the perturbative
// solvers in floquet.hpp are measured against.
//
// Rotating-frame Hamiltonian:  H = alpha(t) sigma+ + conj(alpha(t)) sigma-,
// with alpha(t) = -(g0(t)/2) * [exp(-i(2 omega t + 2 phi)) + 1]; the RWA
// drops the oscillating exponential. Off resonance the excited level gains
// the detuning diagonal epsilon - omega.

#pragma once

#include <array>
#include <vector>

#include "bso/field.hpp"
#include "bso/ode.hpp"
#include "bso/state.hpp"

namespace bso::dynamics {

struct IntegratorConfig {
    double rel_tol = 1e-11;
    double abs_tol = 1e-13;
    double max_step = 0.0;  // 0: resolved to (2 pi / omega)/20
    double sample_dt = 0.0; // 0: resolved to (2 pi / omega)/64

    double resolved_max_step(const FieldParams& p) const;
    double resolved_sample_dt(const FieldParams& p) const;

    // Enforces rel_tol, abs_tol in (0, 1e-6], sample_dt > 0 and
    // max_step <= (2 pi / omega)/20, so at least 20 steps resolve one
    // counter-rotating period.
    void validate(const FieldParams& p) const;

    friend bool operator==(const IntegratorConfig&, const IntegratorConfig&) = default;
};

// Rotating-frame coupling alpha(t).
std::complex<double> coupling(const FieldParams& p, const DriveEnvelope& env,
                              bool rwa, double t);

// Full 2x2 rotating-frame Hamiltonian, row major: {H00, H01, H10, H11}.
std::array<std::complex<double>, 4> hamiltonian(const FieldParams& p,
                                                const DriveEnvelope& env,
                                                bool rwa, double t);

// Right-hand side of the rotating-frame Schroedinger equation for
// y = (C0, C1), reusable by tests (e.g. time-reversal checks).
ode::Rhs rotating_rhs(const FieldParams& p, const DriveEnvelope& env, bool rwa);

// Uniformly sampled rotating-frame trajectory.
struct TimeSeries {
    FieldParams params;
    DriveEnvelope envelope;
    bool rwa = false;
    std::vector<double> times;
    std::vector<QubitState> states; // rotating frame
    std::vector<double> p1;
};

// Propagate from the ground state at t = 0 to t_end, sampling every
// sample_dt (plus t_end itself when it is off the grid). Throws
// ValidationError for t_end <= 0 and NumericalError on integrator failure.
TimeSeries integrate(const FieldParams& p, const DriveEnvelope& env,
                     const IntegratorConfig& cfg, double t_end, bool rwa = false);

// State at exactly t (t >= 0); matches the last sample of integrate(t).
QubitState evolve_to(const FieldParams& p, const DriveEnvelope& env,
                     const IntegratorConfig& cfg, double t, bool rwa = false);

} // namespace bso::dynamics
