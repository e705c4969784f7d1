// field.hpp — drive-field parameters, switching envelopes, and derived
// quantities (instantaneous and time-averaged Rabi frequency, perturbation
// parameter eta). hbar = 1 throughout; every frequency is angular.

#pragma once

#include "bso/errors.hpp"

namespace bso {

// Parameters of the near-resonant drive and of the two-level transition.
struct FieldParams {
    double g0_max = 0.0;  // peak Rabi frequency
    double omega = 1.0;   // drive frequency
    double phi = 0.0;     // absolute field phase at t = 0, radians
    double tau_sw = 1.0;  // adiabatic switching time constant
    double epsilon = 1.0; // transition (Bohr) frequency

    // Perturbation parameter g0_max / (4 omega). The counter-rotating
    // corrections computed by the perturbative solvers are first order
    // in this quantity; they are refused for eta0 >= 0.25.
    double eta0() const noexcept { return g0_max / (4.0 * omega); }

    bool resonant() const noexcept { return epsilon == omega; }

    // Throws ValidationError unless g0_max >= 0, omega > 0, tau_sw > 0,
    // epsilon > 0 and all fields are finite.
    void validate() const;

    friend bool operator==(const FieldParams&, const FieldParams&) = default;
};

enum class EnvelopeKind {
    AdiabaticSwitch, // g0(t) = g0_max * [1 - exp(-t/tau_sw)]
    Constant         // g0(t) = g0_max (the tau_sw -> 0 limit)
};

struct DriveEnvelope {
    EnvelopeKind kind = EnvelopeKind::AdiabaticSwitch;

    friend bool operator==(const DriveEnvelope&, const DriveEnvelope&) = default;
};

// Instantaneous Rabi frequency g0(t). Requires t >= 0.
double rabi_amplitude(const FieldParams& p, const DriveEnvelope& env, double t);

// eta(t) = g0(t) / (4 omega). Requires t >= 0.
double eta(const FieldParams& p, const DriveEnvelope& env, double t);

// Accumulated pulse area: integral of g0 over [0, t]. Requires t >= 0.
double pulse_area(const FieldParams& p, const DriveEnvelope& env, double t);

// Running time average (1/t) * integral of g0 over [0, t], extended by
// continuity at t = 0 (0 for AdiabaticSwitch, g0_max for Constant).
// For the switched envelope the closed form is
//   g0_max * [1 - (tau_sw/t) * (1 - exp(-t/tau_sw))].
// Requires t >= 0.
double average_rabi(const FieldParams& p, const DriveEnvelope& env, double t);

namespace detail {
// Shared precondition helpers; `who` prefixes the error message.
void require_resonant(const FieldParams& p, const char* who);
void require_perturbative(const FieldParams& p, const char* who);
} // namespace detail

} // namespace bso
