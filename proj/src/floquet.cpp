#include "bso/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <utility>

namespace bso::floquet {

namespace {

void require_order(int order, const char* who) {
    if (order < 1 || order > 8) {
        throw ValidationError(std::string(who) + ": order must lie in [1, 8]");
    }
}

} // namespace

FloquetState::FloquetState(int n_order) : order(n_order) {
    require_order(n_order, "FloquetState");
    a.assign(2 * static_cast<std::size_t>(order) + 1, Complex{});
    b.assign(2 * static_cast<std::size_t>(order) + 1, Complex{});
}

Complex FloquetState::a_at(int n) const noexcept {
    if (n < -order || n > order) return Complex{};
    return a[static_cast<std::size_t>(n + order)];
}

Complex FloquetState::b_at(int n) const noexcept {
    if (n < -order || n > order) return Complex{};
    return b[static_cast<std::size_t>(n + order)];
}

Complex& FloquetState::a_ref(int n) { return a.at(static_cast<std::size_t>(n + order)); }
Complex& FloquetState::b_ref(int n) { return b.at(static_cast<std::size_t>(n + order)); }

double FloquetState::coefficient_norm() const noexcept {
    double s = 0.0;
    for (const auto& v : a) s += std::norm(v);
    for (const auto& v : b) s += std::norm(v);
    return s;
}

FloquetState mode_rhs(const FloquetState& s, double t, const FieldParams& p,
                      const DriveEnvelope& env) {
    const double half_g = 0.5 * rabi_amplitude(p, env, t);
    const Complex i_unit{0.0, 1.0};
    FloquetState d(s.order);
    for (int n = -s.order; n <= s.order; ++n) {
        const double det = 2.0 * n * p.omega;
        d.a_ref(n) = i_unit * (det * s.a_at(n) + half_g * (s.b_at(n) + s.b_at(n - 1)));
        d.b_ref(n) = i_unit * (det * s.b_at(n) + half_g * (s.a_at(n) + s.a_at(n + 1)));
    }
    return d;
}

QubitState reconstruct(const FloquetState& s, const FieldParams& p, double t) {
    const double theta = 2.0 * (p.omega * t + p.phi);
    Complex c0{}, c1{};
    for (int n = -s.order; n <= s.order; ++n) {
        const Complex phase = std::polar(1.0, -n * theta);
        c0 += s.a_at(n) * phase;
        c1 += s.b_at(n) * phase;
    }
    return QubitState{c0, c1, Frame::Rotating, t};
}

FloquetSeries integrate_modes(const FieldParams& p, const DriveEnvelope& env,
                              const dynamics::IntegratorConfig& cfg,
                              double t_end, int order) {
    p.validate();
    cfg.validate(p);
    require_order(order, "integrate_modes");
    detail::require_resonant(p, "integrate_modes");
    if (!(t_end > 0.0) || !std::isfinite(t_end)) {
        throw ValidationError("integrate_modes: t_end must be finite and > 0");
    }

    const int nmodes = 2 * order + 1;
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

    // layout: y[0 .. 2N] = a_{-N..N}, y[2N+1 .. 2(2N+1)-1] = b_{-N..N}
    auto rhs = [p, env, order, nmodes](double t, const ode::State& y, ode::State& dy) {
        const double half_g = 0.5 * rabi_amplitude(p, env, t);
        const Complex i_unit{0.0, 1.0};
        auto a = [&](int n) -> Complex {
            return (n < -order || n > order) ? Complex{} : y[static_cast<std::size_t>(n + order)];
        };
        auto b = [&](int n) -> Complex {
            return (n < -order || n > order) ? Complex{}
                                             : y[static_cast<std::size_t>(nmodes + n + order)];
        };
        for (int n = -order; n <= order; ++n) {
            const double det = 2.0 * n * p.omega;
            dy[static_cast<std::size_t>(n + order)] =
                i_unit * (det * a(n) + half_g * (b(n) + b(n - 1)));
            dy[static_cast<std::size_t>(nmodes + n + order)] =
                i_unit * (det * b(n) + half_g * (a(n) + a(n + 1)));
        }
    };

    ode::State y0(2 * static_cast<std::size_t>(nmodes), Complex{});
    y0[static_cast<std::size_t>(order)] = Complex{1.0, 0.0}; // a_0 = 1

    ode::Options opts;
    opts.rel_tol = cfg.rel_tol;
    opts.abs_tol = cfg.abs_tol;
    opts.max_step = cfg.resolved_max_step(p);

    FloquetSeries out;
    out.order = order;
    out.params = p;
    out.envelope = env;
    out.times.reserve(samples.size());
    out.states.reserve(samples.size());

    ode::integrate(rhs, std::move(y0), 0.0, t_end, opts, samples,
                   [&out, order, nmodes](double ts, const ode::State& y) {
                       FloquetState fs(order);
                       for (int n = -order; n <= order; ++n) {
                           fs.a_ref(n) = y[static_cast<std::size_t>(n + order)];
                           fs.b_ref(n) = y[static_cast<std::size_t>(nmodes + n + order)];
                       }
                       out.times.push_back(ts);
                       out.states.push_back(std::move(fs));
                   });
    return out;
}

SidebandEstimate adiabatic_coefficients(Complex a0, Complex b0,
                                        const FieldParams& p,
                                        const DriveEnvelope& env, double t) {
    p.validate();
    const double et = eta(p, env, t);
    if (!(et < 0.25)) {
        throw ValidationError("adiabatic_coefficients: eta(t) must be < 0.25");
    }
    double t_min = 10.0 / p.omega;
    if (p.g0_max > 0.0) t_min = std::max(t_min, 10.0 / p.g0_max);
    if (p.tau_sw < t_min) {
        char buf[128];
        std::snprintf(buf, sizeof(buf),
                      "adiabatic_coefficients: tau_sw = %.6g below adiabatic threshold "
                      "10 * max(1/omega, 1/g0_max) = %.6g",
                      p.tau_sw, t_min);
        throw ValidationError(buf);
    }
    return SidebandEstimate{Complex{}, et * a0, -et * b0, Complex{}};
}

ClosedFormSolution::ClosedFormSolution(FieldParams p, DriveEnvelope env)
    : params_(p), envelope_(env) {
    params_.validate();
    detail::require_resonant(params_, "ClosedFormSolution");
    detail::require_perturbative(params_, "ClosedFormSolution");
}

Complex ClosedFormSolution::c0(double t) const {
    const double half = 0.5 * pulse_area(params_, envelope_, t);
    const double et = eta(params_, envelope_, t);
    const Complex i_unit{0.0, 1.0};
    const Complex cr = std::polar(1.0, -2.0 * (params_.omega * t + params_.phi));
    return std::cos(half) - i_unit * et * cr * std::sin(half);
}

Complex ClosedFormSolution::c1(double t) const {
    const double half = 0.5 * pulse_area(params_, envelope_, t);
    const double et = eta(params_, envelope_, t);
    const Complex i_unit{0.0, 1.0};
    const Complex co = std::polar(1.0, 2.0 * (params_.omega * t + params_.phi));
    const Complex lab = std::polar(1.0, -(params_.omega * t + params_.phi));
    return i_unit * lab * (std::sin(half) - i_unit * et * co * std::cos(half));
}

double ClosedFormSolution::p1(double t) const { return std::norm(c1(t)); }

QubitState ClosedFormSolution::state(double t) const {
    return QubitState{c0(t), c1(t), Frame::Lab, t};
}

QubitState closed_form_state(const FieldParams& p, const DriveEnvelope& env, double t) {
    return ClosedFormSolution(p, env).state(t);
}

double pi_half_population(const FieldParams& p, const DriveEnvelope& env, double tau) {
    p.validate();
    detail::require_resonant(p, "pi_half_population");
    detail::require_perturbative(p, "pi_half_population");
    const double area = pulse_area(p, env, tau);
    if (std::abs(area - pi_half_area) > pulse_area_tol) {
        char buf[128];
        std::snprintf(buf, sizeof(buf),
                      "pi_half_population: pulse area at tau is %.12g, need pi/2 = %.12g within %.1g",
                      area, pi_half_area, pulse_area_tol);
        throw ValidationError(buf);
    }
    const double et = eta(p, env, tau);
    return 0.5 * (1.0 + 2.0 * et * std::sin(2.0 * (p.omega * tau + p.phi)));
}

double solve_pi_half_time(const FieldParams& p, const DriveEnvelope& env) {
    p.validate();
    if (!(p.g0_max > 0.0)) {
        throw ValidationError("solve_pi_half_time: g0_max must be > 0");
    }
    const double target = pi_half_area;
    // pulse_area is continuous, vanishes at 0 and increases without bound,
    // with derivative g0(t) > 0 for t > 0; bracket then bisect.
    double hi = target / p.g0_max; // exact for the constant envelope
    while (pulse_area(p, env, hi) < target) hi *= 2.0;
    double lo = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (pulse_area(p, env, mid) < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return hi;
}

} // namespace bso::floquet
