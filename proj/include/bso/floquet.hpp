// floquet.hpp — harmonic expansion of the rotating-frame state, the
// truncated mode system, adiabatic elimination of the detuned sidebands,
// and the resulting first-order closed-form solution.
//
// Expansion:  (C0, C1)(t) = sum_n (a_n, b_n) exp(n(-i 2 omega t - i 2 phi)),
// with mode equations
//   da_n/dt = i 2 n omega a_n + i g0(t) (b_n + b_{n-1}) / 2
//   db_n/dt = i 2 n omega b_n + i g0(t) (a_n + a_{n+1}) / 2
// truncated to |n| <= N (coefficients beyond the window are zero). The
// sidebands are detuned by 2 omega and, under adiabatic switching, slave to
// the central pair as b_{-1} ~ eta a_0, a_{+1} ~ -eta b_0 at first order
// in eta = g0/(4 omega).

#pragma once

#include <complex>
#include <vector>

#include "bso/dynamics.hpp"
#include "bso/field.hpp"
#include "bso/state.hpp"

namespace bso::floquet {

using Complex = std::complex<double>;

// Harmonic coefficients for n in [-order, order].
struct FloquetState {
    int order = 1;
    std::vector<Complex> a; // size 2*order + 1, index n + order
    std::vector<Complex> b;

    explicit FloquetState(int n_order = 1);

    Complex a_at(int n) const noexcept; // zero outside the window
    Complex b_at(int n) const noexcept;
    Complex& a_ref(int n);
    Complex& b_ref(int n);

    // Sum of |a_n|^2 + |b_n|^2; conserved exactly by the mode equations.
    double coefficient_norm() const noexcept;
};

// Time derivative of every coefficient at time t.
FloquetState mode_rhs(const FloquetState& s, double t, const FieldParams& p,
                      const DriveEnvelope& env);

// Rotating-frame state assembled from the coefficients at time t.
QubitState reconstruct(const FloquetState& s, const FieldParams& p, double t);

struct FloquetSeries {
    int order = 1;
    FieldParams params;
    DriveEnvelope envelope;
    std::vector<double> times;
    std::vector<FloquetState> states;
};

// Integrate the truncated 2(2N+1)-mode linear system from a_0 = 1 on the
// same sampling grid as dynamics::integrate. Requires resonance and N >= 1.
FloquetSeries integrate_modes(const FieldParams& p, const DriveEnvelope& env,
                              const dynamics::IntegratorConfig& cfg,
                              double t_end, int order);

// First-order slaved sideband amplitudes (a_-1, b_-1, a_+1, b_+1) given the
// central pair. Valid for eta(t) < 0.25 under sufficiently slow switching,
// validated as tau_sw >= 10 * max(1/omega, 1/g0_max).
struct SidebandEstimate {
    Complex a_minus1, b_minus1, a_plus1, b_plus1;
};
SidebandEstimate adiabatic_coefficients(Complex a0, Complex b0,
                                        const FieldParams& p,
                                        const DriveEnvelope& env, double t);

// First-order closed-form solution, with G(t) = average_rabi(t) * t:
//   C0(t) = cos(G/2) - i eta e^{-i(2 w t + 2 phi)} sin(G/2)
//   C1(t) = i e^{-i(w t + phi)} [sin(G/2) - i eta e^{+i(2 w t + 2 phi)} cos(G/2)]
// Lab frame; normalized to first order (norm defect <= 4 eta^2).
class ClosedFormSolution {
public:
    ClosedFormSolution(FieldParams p, DriveEnvelope env); // validates preconditions

    Complex c0(double t) const;
    Complex c1(double t) const;
    double p1(double t) const;
    QubitState state(double t) const; // lab frame

    const FieldParams& params() const noexcept { return params_; }
    const DriveEnvelope& envelope() const noexcept { return envelope_; }

private:
    FieldParams params_;
    DriveEnvelope envelope_;
};

// Convenience wrapper around ClosedFormSolution::state.
QubitState closed_form_state(const FieldParams& p, const DriveEnvelope& env, double t);

// Pulse-area target of a pi/2 pulse and the tolerance used when checking it.
inline constexpr double pi_half_area = 1.5707963267948966;
inline constexpr double pulse_area_tol = 1e-6;

// Excited-state population after a pi/2 pulse ending at tau:
//   1/2 * [1 + 2 eta(tau) sin(2 omega tau + 2 phi)].
// Requires |pulse_area(tau) - pi/2| <= pulse_area_tol.
double pi_half_population(const FieldParams& p, const DriveEnvelope& env, double tau);

// Smallest tau > 0 with pulse_area(tau) = pi/2, to relative accuracy 1e-12.
// Requires g0_max > 0.
double solve_pi_half_time(const FieldParams& p, const DriveEnvelope& env);

} // namespace bso::floquet
