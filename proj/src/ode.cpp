#include "bso/ode.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace bso::ode {

namespace {

// Dormand-Prince RK5(4)7M coefficients (FSAL: stage 7 is the derivative at
// the accepted point and seeds the next step).
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;

constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                 a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;

constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;

// Difference between the fifth- and the embedded fourth-order weights.
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

// Weights of the fourth-order continuous extension.
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

constexpr double safety = 0.9;
constexpr double min_factor = 0.2;
constexpr double max_factor = 5.0;

struct Workspace {
    State k[7];
    State ytmp, ynew;
    // dense-output coefficients for the last accepted step
    State dy, bspl, r4, r5;

    explicit Workspace(std::size_t n) {
        for (auto& ki : k) ki.assign(n, Complex{});
        ytmp.assign(n, Complex{});
        ynew.assign(n, Complex{});
        dy.assign(n, Complex{});
        bspl.assign(n, Complex{});
        r4.assign(n, Complex{});
        r5.assign(n, Complex{});
    }
};

void validate(const Options& opts, double t0, double t1,
              std::span<const double> samples) {
    if (!(opts.rel_tol > 0.0) || !(opts.abs_tol > 0.0)) {
        throw ValidationError("ode::integrate: tolerances must be positive");
    }
    if (!(opts.max_step > 0.0)) {
        throw ValidationError("ode::integrate: max_step must be positive");
    }
    if (!(t1 > t0)) {
        throw ValidationError("ode::integrate: t1 must be greater than t0");
    }
    double prev = -std::numeric_limits<double>::infinity();
    for (double ts : samples) {
        if (!(ts >= t0 && ts <= t1) || !(ts > prev)) {
            throw ValidationError("ode::integrate: sample times must be strictly increasing within [t0, t1]");
        }
        prev = ts;
    }
}

} // namespace

void integrate(const Rhs& rhs, State y0, double t0, double t1,
               const Options& opts, std::span<const double> sample_times,
               const Sink& sink) {
    validate(opts, t0, t1, sample_times);

    const std::size_t n = y0.size();
    State y = std::move(y0);
    Workspace w(n);

    double t = t0;
    double h = opts.init_step > 0.0 ? std::min(opts.init_step, opts.max_step) : opts.max_step;
    h = std::min(h, t1 - t0);

    std::size_t si = 0;
    const double sample_eps = 1e-12 * std::max(1.0, std::abs(t1));
    if (si < sample_times.size() && sample_times[si] <= t0 + sample_eps) {
        sink(sample_times[si], y);
        ++si;
    }

    rhs(t, y, w.k[0]);

    while (t < t1) {
        bool last = false;
        if (t + h >= t1) {
            h = t1 - t;
            last = true;
        }
        if (h < 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), 1.0)) {
            char buf[96];
            std::snprintf(buf, sizeof(buf), "ode::integrate: step size underflow at t = %.6g (stiffness failure)", t);
            throw NumericalError(buf);
        }

        for (std::size_t i = 0; i < n; ++i)
            w.ytmp[i] = y[i] + h * (a21 * w.k[0][i]);
        rhs(t + c2 * h, w.ytmp, w.k[1]);

        for (std::size_t i = 0; i < n; ++i)
            w.ytmp[i] = y[i] + h * (a31 * w.k[0][i] + a32 * w.k[1][i]);
        rhs(t + c3 * h, w.ytmp, w.k[2]);

        for (std::size_t i = 0; i < n; ++i)
            w.ytmp[i] = y[i] + h * (a41 * w.k[0][i] + a42 * w.k[1][i] + a43 * w.k[2][i]);
        rhs(t + c4 * h, w.ytmp, w.k[3]);

        for (std::size_t i = 0; i < n; ++i)
            w.ytmp[i] = y[i] + h * (a51 * w.k[0][i] + a52 * w.k[1][i] + a53 * w.k[2][i] + a54 * w.k[3][i]);
        rhs(t + c5 * h, w.ytmp, w.k[4]);

        for (std::size_t i = 0; i < n; ++i)
            w.ytmp[i] = y[i] + h * (a61 * w.k[0][i] + a62 * w.k[1][i] + a63 * w.k[2][i]
                                    + a64 * w.k[3][i] + a65 * w.k[4][i]);
        rhs(t + h, w.ytmp, w.k[5]);

        for (std::size_t i = 0; i < n; ++i)
            w.ynew[i] = y[i] + h * (b1 * w.k[0][i] + b3 * w.k[2][i] + b4 * w.k[3][i]
                                    + b5 * w.k[4][i] + b6 * w.k[5][i]);
        rhs(t + h, w.ynew, w.k[6]);

        double err_sq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const Complex ei = h * (e1 * w.k[0][i] + e3 * w.k[2][i] + e4 * w.k[3][i]
                                    + e5 * w.k[4][i] + e6 * w.k[5][i] + e7 * w.k[6][i]);
            const double sc = opts.abs_tol
                              + opts.rel_tol * std::max(std::abs(y[i]), std::abs(w.ynew[i]));
            const double r = std::abs(ei) / sc;
            err_sq += r * r;
        }
        const double err = std::sqrt(err_sq / static_cast<double>(n));

        if (!(err <= 1.0)) { // rejected (also catches NaN)
            const double fac = std::isfinite(err)
                                   ? std::max(min_factor, safety * std::pow(err, -0.2))
                                   : min_factor;
            h *= fac;
            continue;
        }

        const double t_new = last ? t1 : t + h;

        if (si < sample_times.size() && sample_times[si] <= t_new + sample_eps) {
            for (std::size_t i = 0; i < n; ++i) {
                w.dy[i] = w.ynew[i] - y[i];
                w.bspl[i] = h * w.k[0][i] - w.dy[i];
                w.r4[i] = w.dy[i] - h * w.k[6][i] - w.bspl[i];
                w.r5[i] = h * (d1 * w.k[0][i] + d3 * w.k[2][i] + d4 * w.k[3][i]
                               + d5 * w.k[4][i] + d6 * w.k[5][i] + d7 * w.k[6][i]);
            }
            while (si < sample_times.size() && sample_times[si] <= t_new + sample_eps) {
                const double th = std::clamp((sample_times[si] - t) / h, 0.0, 1.0);
                const double th1 = 1.0 - th;
                for (std::size_t i = 0; i < n; ++i) {
                    w.ytmp[i] = y[i] + th * (w.dy[i] + th1 * (w.bspl[i] + th * (w.r4[i] + th1 * w.r5[i])));
                }
                sink(sample_times[si], w.ytmp);
                ++si;
            }
        }

        t = t_new;
        std::swap(y, w.ynew);
        std::swap(w.k[0], w.k[6]); // FSAL

        const double fac = err > 0.0
                               ? std::clamp(safety * std::pow(err, -0.2), min_factor, max_factor)
                               : max_factor;
        h = std::min(h * fac, opts.max_step);
    }
}

State solve_to(const Rhs& rhs, State y0, double t0, double t1, const Options& opts) {
    if (t1 == t0) return y0;
    State out;
    const double samples[1] = {t1};
    integrate(rhs, std::move(y0), t0, t1, opts, samples,
              [&out](double, const State& y) { out = y; });
    return out;
}

} // namespace bso::ode
