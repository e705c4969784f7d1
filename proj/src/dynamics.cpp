#include "bso/dynamics.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

namespace bso::dynamics {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

double IntegratorConfig::resolved_max_step(const FieldParams& p) const {
    return max_step > 0.0 ? max_step : (two_pi / p.omega) / 20.0;
}

double IntegratorConfig::resolved_sample_dt(const FieldParams& p) const {
    return sample_dt > 0.0 ? sample_dt : (two_pi / p.omega) / 64.0;
}

void IntegratorConfig::validate(const FieldParams& p) const {
    if (!(rel_tol > 0.0 && rel_tol <= 1e-6)) {
        throw ValidationError("IntegratorConfig: rel_tol must lie in (0, 1e-6]");
    }
    if (!(abs_tol > 0.0 && abs_tol <= 1e-6)) {
        throw ValidationError("IntegratorConfig: abs_tol must lie in (0, 1e-6]");
    }
    const double cap = (two_pi / p.omega) / 20.0;
    if (!(resolved_max_step(p) <= cap * (1.0 + 1e-12))) {
        char buf[128];
        std::snprintf(buf, sizeof(buf),
                      "IntegratorConfig: max_step = %.6g exceeds (2 pi / omega)/20 = %.6g",
                      max_step, cap);
        throw ValidationError(buf);
    }
    if (!(resolved_sample_dt(p) > 0.0)) {
        throw ValidationError("IntegratorConfig: sample_dt must be > 0");
    }
}

std::complex<double> coupling(const FieldParams& p, const DriveEnvelope& env,
                              bool rwa, double t) {
    const double g = rabi_amplitude(p, env, t);
    std::complex<double> bracket{1.0, 0.0};
    if (!rwa) bracket += std::polar(1.0, -2.0 * (p.omega * t + p.phi));
    return -0.5 * g * bracket;
}

std::array<std::complex<double>, 4> hamiltonian(const FieldParams& p,
                                                const DriveEnvelope& env,
                                                bool rwa, double t) {
    const std::complex<double> a = coupling(p, env, rwa, t);
    return {std::complex<double>{0.0, 0.0}, a,
            std::conj(a), std::complex<double>{p.epsilon - p.omega, 0.0}};
}

ode::Rhs rotating_rhs(const FieldParams& p, const DriveEnvelope& env, bool rwa) {
    const double detuning = p.epsilon - p.omega;
    return [p, env, rwa, detuning](double t, const ode::State& y, ode::State& dydt) {
        const std::complex<double> a = coupling(p, env, rwa, t);
        const std::complex<double> minus_i{0.0, -1.0};
        dydt[0] = minus_i * (a * y[1]);
        dydt[1] = minus_i * (std::conj(a) * y[0] + detuning * y[1]);
    };
}

TimeSeries integrate(const FieldParams& p, const DriveEnvelope& env,
                     const IntegratorConfig& cfg, double t_end, bool rwa) {
    p.validate();
    cfg.validate(p);
    if (!(t_end > 0.0) || !std::isfinite(t_end)) {
        throw ValidationError("dynamics::integrate: t_end must be finite and > 0");
    }

    const double dt = cfg.resolved_sample_dt(p);
    std::vector<double> samples;
    const auto n_grid = static_cast<std::size_t>(std::floor(t_end / dt * (1.0 + 1e-12)));
    samples.reserve(n_grid + 2);
    for (std::size_t k = 0; k <= n_grid; ++k) {
        const double ts = static_cast<double>(k) * dt;
        if (ts > t_end) break;
        samples.push_back(ts);
    }
    if (t_end - samples.back() > 1e-9 * dt) samples.push_back(t_end);

    TimeSeries out;
    out.params = p;
    out.envelope = env;
    out.rwa = rwa;
    out.times.reserve(samples.size());
    out.states.reserve(samples.size());
    out.p1.reserve(samples.size());

    ode::Options opts;
    opts.rel_tol = cfg.rel_tol;
    opts.abs_tol = cfg.abs_tol;
    opts.max_step = cfg.resolved_max_step(p);

    ode::integrate(rotating_rhs(p, env, rwa), {{1.0, 0.0}, {0.0, 0.0}}, 0.0, t_end,
                   opts, samples, [&out](double ts, const ode::State& y) {
                       out.times.push_back(ts);
                       out.states.push_back(QubitState{y[0], y[1], Frame::Rotating, ts});
                       out.p1.push_back(std::norm(y[1]));
                   });

    const double defect = std::abs(out.states.back().norm() - 1.0);
    if (!(defect < 1e-6)) {
        char buf[96];
        std::snprintf(buf, sizeof(buf),
                      "dynamics::integrate: final norm defect %.3g exceeds sanity bound", defect);
        throw NumericalError(buf);
    }
    return out;
}

QubitState evolve_to(const FieldParams& p, const DriveEnvelope& env,
                     const IntegratorConfig& cfg, double t, bool rwa) {
    p.validate();
    cfg.validate(p);
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw ValidationError("dynamics::evolve_to: t must be finite and >= 0");
    }
    if (t == 0.0) return QubitState{{1.0, 0.0}, {0.0, 0.0}, Frame::Rotating, 0.0};

    ode::Options opts;
    opts.rel_tol = cfg.rel_tol;
    opts.abs_tol = cfg.abs_tol;
    opts.max_step = cfg.resolved_max_step(p);

    const ode::State y = ode::solve_to(rotating_rhs(p, env, rwa),
                                       {{1.0, 0.0}, {0.0, 0.0}}, 0.0, t, opts);
    return QubitState{y[0], y[1], Frame::Rotating, t};
}

} // namespace bso::dynamics
