#include "bso/field.hpp"

#include <cmath>
#include <cstdio>
#include <string>

namespace bso {

namespace {

std::string fmt_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

void require_nonnegative_time(double t, const char* who) {
    if (!(t >= 0.0)) {
        throw ValidationError(std::string(who) + ": t must be >= 0, got " + fmt_value(t));
    }
}

} // namespace

void FieldParams::validate() const {
    if (!(g0_max >= 0.0) || !std::isfinite(g0_max)) {
        throw ValidationError("FieldParams: g0_max must be finite and >= 0, got " + fmt_value(g0_max));
    }
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw ValidationError("FieldParams: omega must be finite and > 0, got " + fmt_value(omega));
    }
    if (!std::isfinite(phi)) {
        throw ValidationError("FieldParams: phi must be finite");
    }
    if (!(tau_sw > 0.0) || !std::isfinite(tau_sw)) {
        throw ValidationError("FieldParams: tau_sw must be finite and > 0, got " + fmt_value(tau_sw));
    }
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw ValidationError("FieldParams: epsilon must be finite and > 0, got " + fmt_value(epsilon));
    }
}

double rabi_amplitude(const FieldParams& p, const DriveEnvelope& env, double t) {
    require_nonnegative_time(t, "rabi_amplitude");
    if (env.kind == EnvelopeKind::Constant) return p.g0_max;
    return p.g0_max * -std::expm1(-t / p.tau_sw);
}

double eta(const FieldParams& p, const DriveEnvelope& env, double t) {
    return rabi_amplitude(p, env, t) / (4.0 * p.omega);
}

double pulse_area(const FieldParams& p, const DriveEnvelope& env, double t) {
    require_nonnegative_time(t, "pulse_area");
    if (env.kind == EnvelopeKind::Constant) return p.g0_max * t;
    const double x = t / p.tau_sw;
    if (x < 1e-3) {
        // series for t + tau_sw*expm1(-t/tau_sw), which cancels at small x
        const double x2 = x * x;
        return p.g0_max * p.tau_sw * x2 * (0.5 - x / 6.0 + x2 / 24.0 - x2 * x / 120.0);
    }
    return p.g0_max * (t + p.tau_sw * std::expm1(-x));
}

double average_rabi(const FieldParams& p, const DriveEnvelope& env, double t) {
    require_nonnegative_time(t, "average_rabi");
    if (env.kind == EnvelopeKind::Constant) return p.g0_max;
    if (t == 0.0) return 0.0;
    return pulse_area(p, env, t) / t;
}

namespace detail {

void require_resonant(const FieldParams& p, const char* who) {
    if (!p.resonant()) {
        throw ValidationError(std::string(who) + ": requires resonant drive (epsilon == omega), got epsilon = "
                              + fmt_value(p.epsilon) + ", omega = " + fmt_value(p.omega));
    }
}

void require_perturbative(const FieldParams& p, const char* who) {
    if (!(p.eta0() < 0.25)) {
        throw ValidationError(std::string(who) + ": eta0 = g0_max/(4 omega) = " + fmt_value(p.eta0())
                              + " must be < 0.25 for the perturbative treatment");
    }
}

} // namespace detail

} // namespace bso
