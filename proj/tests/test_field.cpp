#include <cmath>
#include <functional>
#include <random>

#include "doctest.h"

#include "bso/field.hpp"

using namespace bso;

namespace {

// Adaptive Simpson quadrature, independent route for the running average.
double simpson(const std::function<double(double)>& f, double a, double b,
               double fa, double fm, double fb, double whole, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 1e-13 * std::abs(left + right) + 1e-300) {
        return left + right + (left + right - whole) / 15.0;
    }
    return simpson(f, a, m, fa, flm, fm, left, depth - 1)
           + simpson(f, m, b, fm, frm, fb, right, depth - 1);
}

double integrate_oracle(const std::function<double(double)>& f, double a, double b) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson(f, a, b, fa, fm, fb, whole, 48);
}

const DriveEnvelope switch_env{EnvelopeKind::AdiabaticSwitch};
const DriveEnvelope const_env{EnvelopeKind::Constant};

} // namespace

TEST_CASE("eta: zero field gives zero at any time") {
    FieldParams p{0.0, 1.0, 0.0, 20.0, 1.0};
    CHECK(eta(p, switch_env, 0.0) == 0.0);
    CHECK(eta(p, switch_env, 7.3) == 0.0);
    CHECK(eta(p, const_env, 123.0) == 0.0);
}

TEST_CASE("eta: constant envelope is g0/(4 omega)") {
    FieldParams p{0.4, 1.0, 0.0, 20.0, 1.0};
    CHECK(eta(p, const_env, 0.0) == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(eta(p, const_env, 5.0) == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(p.eta0() == doctest::Approx(0.1).epsilon(1e-14));
}

TEST_CASE("eta: switched envelope at one time constant") {
    FieldParams p{0.4, 1.0, 0.0, 20.0, 1.0};
    // 0.1 * (1 - e^-1)
    CHECK(eta(p, switch_env, 20.0) == doctest::Approx(0.06321205588285577).epsilon(1e-12));
    CHECK(eta(p, switch_env, 0.0) == 0.0);
}

TEST_CASE("eta rejects negative time") {
    FieldParams p{0.4, 1.0, 0.0, 20.0, 1.0};
    CHECK_THROWS_AS(eta(p, switch_env, -1.0), ValidationError);
}

TEST_CASE("average_rabi: constant envelope averages to itself") {
    FieldParams p{0.4, 1.0, 0.0, 20.0, 1.0};
    CHECK(average_rabi(p, const_env, 5.0) == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(average_rabi(p, const_env, 0.0) == doctest::Approx(0.4).epsilon(1e-15));
}

TEST_CASE("average_rabi: switched envelope vanishes at t -> 0+") {
    FieldParams p{0.4, 1.0, 0.0, 20.0, 1.0};
    CHECK(average_rabi(p, switch_env, 0.0) == 0.0);
    CHECK(average_rabi(p, switch_env, 1e-9) < 1e-10);
    CHECK_THROWS_AS(average_rabi(p, switch_env, -0.5), ValidationError);
}

TEST_CASE("average_rabi: switched closed form at two time constants") {
    FieldParams p{0.4, 1.0, 0.0, 20.0, 1.0};
    // 0.4 * [1 - 0.5 (1 - e^-2)]
    const double expected = 0.22706705664732254;
    CHECK(average_rabi(p, switch_env, 40.0) == doctest::Approx(expected).epsilon(1e-12));
    // same value through quadrature of the envelope
    const double byq = integrate_oracle(
                           [&](double s) { return rabi_amplitude(p, switch_env, s); }, 0.0, 40.0)
                       / 40.0;
    CHECK(average_rabi(p, switch_env, 40.0) == doctest::Approx(byq).epsilon(1e-11));
}

TEST_CASE("average_rabi matches quadrature at 100 random (t, tau_sw) pairs") {
    std::mt19937 rng(20260810u);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        FieldParams p;
        p.g0_max = 0.05 + u01(rng);
        p.omega = 1.0;
        p.epsilon = 1.0;
        p.tau_sw = std::exp(std::log(0.3) + u01(rng) * (std::log(80.0) - std::log(0.3)));
        const double t = std::exp(std::log(0.01) + u01(rng) * (std::log(200.0) - std::log(0.01)));
        const double byq = integrate_oracle(
                               [&](double s) { return rabi_amplitude(p, switch_env, s); }, 0.0, t)
                           / t;
        const double got = average_rabi(p, switch_env, t);
        CHECK(std::abs(got - byq) <= 1e-10 * std::abs(byq) + 1e-300);
    }
}

TEST_CASE("eta is non-decreasing in t for the switch and flat for constant") {
    std::mt19937 rng(77u);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        FieldParams p{0.01 + u01(rng), 1.0, 0.0, 0.5 + 30.0 * u01(rng), 1.0};
        const double t1 = 50.0 * u01(rng);
        const double t2 = t1 + 50.0 * u01(rng);
        CHECK(eta(p, switch_env, t2) >= eta(p, switch_env, t1));
        CHECK(eta(p, const_env, t2) == eta(p, const_env, t1));
    }
}

TEST_CASE("average_rabi never exceeds g0_max; equality only for constant") {
    std::mt19937 rng(78u);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        FieldParams p{0.01 + u01(rng), 1.0, 0.0, 0.5 + 30.0 * u01(rng), 1.0};
        const double t = 0.01 + 100.0 * u01(rng);
        CHECK(average_rabi(p, switch_env, t) < p.g0_max);
        CHECK(average_rabi(p, const_env, t) == p.g0_max);
    }
}

TEST_CASE("pulse_area is the integral of the envelope") {
    FieldParams p{0.4, 1.0, 0.0, 20.0, 1.0};
    CHECK(pulse_area(p, switch_env, 0.0) == 0.0);
    const double byq = integrate_oracle(
        [&](double s) { return rabi_amplitude(p, switch_env, s); }, 0.0, 13.7);
    CHECK(pulse_area(p, switch_env, 13.7) == doctest::Approx(byq).epsilon(1e-11));
    CHECK(pulse_area(p, const_env, 13.7) == doctest::Approx(0.4 * 13.7).epsilon(1e-14));
}

TEST_CASE("FieldParams::validate rejects out-of-range parameters") {
    CHECK_NOTHROW(FieldParams{0.4, 1.0, 0.0, 20.0, 1.0}.validate());
    CHECK_THROWS_AS((FieldParams{-0.1, 1.0, 0.0, 20.0, 1.0}.validate()), ValidationError);
    CHECK_THROWS_AS((FieldParams{0.4, 0.0, 0.0, 20.0, 1.0}.validate()), ValidationError);
    CHECK_THROWS_AS((FieldParams{0.4, 1.0, 0.0, 0.0, 1.0}.validate()), ValidationError);
    CHECK_THROWS_AS((FieldParams{0.4, 1.0, 0.0, 20.0, -1.0}.validate()), ValidationError);
}
