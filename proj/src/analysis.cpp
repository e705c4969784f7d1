#include "bso/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>

#include "bso/floquet.hpp"

namespace bso::analysis {

namespace {

constexpr double pi = std::numbers::pi;

// In-place radix-2 Cooley-Tukey transform; n must be a power of two.
void fft(std::vector<std::complex<double>>& x) {
    const std::size_t n = x.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * pi / static_cast<double>(len);
        const std::complex<double> wlen{std::cos(ang), std::sin(ang)};
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w{1.0, 0.0};
            for (std::size_t j = 0; j < len / 2; ++j) {
                const auto u = x[i + j];
                const auto v = x[i + j + len / 2] * w;
                x[i + j] = u + v;
                x[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

} // namespace

BsoResidual extract_bso(const dynamics::TimeSeries& series, const FieldParams& p,
                        const DriveEnvelope& env) {
    if (!(series.params == p) || !(series.envelope == env)) {
        throw ValidationError("extract_bso: series was produced with different parameters");
    }
    if (series.times.empty()) {
        throw ValidationError("extract_bso: empty series");
    }
    BsoResidual out;
    out.params = p;
    out.envelope = env;
    out.times = series.times;
    out.residual.reserve(series.times.size());
    out.predicted.reserve(series.times.size());
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        const double t = series.times[i];
        const double area = pulse_area(p, env, t);
        const double ref = std::sin(0.5 * area);
        out.residual.push_back(series.p1[i] - ref * ref);
        out.predicted.push_back(series.rwa ? 0.0
                                           : eta(p, env, t) * std::sin(area)
                                                 * std::sin(2.0 * (p.omega * t + p.phi)));
    }
    return out;
}

SpectralPeak spectral_peak(const BsoResidual& res) {
    const auto& times = res.times;
    if (times.size() < 16) {
        throw ValidationError("spectral_peak: record too short");
    }
    const double dt = times[1] - times[0];
    if (!(dt > 0.0)) throw ValidationError("spectral_peak: non-increasing sample times");

    // uniform prefix (a trailing off-grid endpoint sample is dropped)
    std::size_t len = times.size();
    for (std::size_t i = 2; i < times.size(); ++i) {
        if (std::abs(times[i] - times[0] - static_cast<double>(i) * dt) > 1e-6 * dt) {
            len = i;
            break;
        }
    }

    const double span = times[len - 1] - times[0];
    const double min_span = 16.0 * pi / res.params.omega; // 16 cycles of 2 omega
    if (span < min_span) {
        char buf[128];
        std::snprintf(buf, sizeof(buf),
                      "spectral_peak: record spans %.6g, need at least %.6g "
                      "(16 cycles of 2*omega)",
                      span, min_span);
        throw ValidationError(buf);
    }

    double mean = 0.0;
    for (std::size_t i = 0; i < len; ++i) mean += res.residual[i];
    mean /= static_cast<double>(len);

    const std::size_t nfft = next_pow2(2 * len);
    std::vector<std::complex<double>> x(nfft, {0.0, 0.0});
    for (std::size_t i = 0; i < len; ++i) {
        const double hann =
            0.5 * (1.0 - std::cos(2.0 * pi * static_cast<double>(i) / static_cast<double>(len - 1)));
        x[i] = (res.residual[i] - mean) * hann;
    }
    fft(x);

    std::size_t k_best = 1;
    double m_best = 0.0;
    for (std::size_t k = 1; k + 1 < nfft / 2; ++k) {
        const double m = std::abs(x[k]);
        if (m > m_best) {
            m_best = m;
            k_best = k;
        }
    }

    // quadratic interpolation of the log magnitude around the peak bin
    double delta = 0.0;
    const double ml = std::abs(x[k_best - 1]);
    const double mr = std::abs(x[k_best + 1]);
    if (ml > 0.0 && mr > 0.0 && m_best > 0.0) {
        const double l = std::log(ml), c = std::log(m_best), r = std::log(mr);
        const double denom = l - 2.0 * c + r;
        if (denom < 0.0) delta = std::clamp(0.5 * (l - r) / denom, -0.5, 0.5);
    }

    const double bin = 2.0 * pi / (static_cast<double>(nfft) * dt);
    return SpectralPeak{(static_cast<double>(k_best) + delta) * bin, bin};
}

double dominant_frequency(const BsoResidual& res) { return spectral_peak(res).omega; }

SinusoidFit fit_sinusoid_fixed(const std::vector<double>& x,
                               const std::vector<double>& y, double frequency) {
    if (x.size() != y.size() || x.size() < 3) {
        throw ValidationError("fit_sinusoid_fixed: need at least 3 matching samples");
    }
    const std::size_t n = x.size();
    // normal equations for [1, sin(f x), cos(f x)]
    double m[3][3] = {{0}}, rhs[3] = {0};
    for (std::size_t i = 0; i < n; ++i) {
        const double s = std::sin(frequency * x[i]);
        const double c = std::cos(frequency * x[i]);
        const double reg[3] = {1.0, s, c};
        for (int r = 0; r < 3; ++r) {
            rhs[r] += reg[r] * y[i];
            for (int q = 0; q < 3; ++q) m[r][q] += reg[r] * reg[q];
        }
    }
    // Gaussian elimination with partial pivoting
    int idx[3] = {0, 1, 2};
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r) {
            if (std::abs(m[idx[r]][col]) > std::abs(m[idx[piv]][col])) piv = r;
        }
        std::swap(idx[col], idx[piv]);
        const double d = m[idx[col]][col];
        if (d == 0.0) throw NumericalError("fit_sinusoid_fixed: singular normal equations");
        for (int r = col + 1; r < 3; ++r) {
            const double f = m[idx[r]][col] / d;
            for (int q = col; q < 3; ++q) m[idx[r]][q] -= f * m[idx[col]][q];
            rhs[idx[r]] -= f * rhs[idx[col]];
        }
    }
    double beta[3];
    for (int r = 2; r >= 0; --r) {
        double acc = rhs[idx[r]];
        for (int q = r + 1; q < 3; ++q) acc -= m[idx[r]][q] * beta[q];
        beta[r] = acc / m[idx[r]][r];
    }

    SinusoidFit fit;
    fit.mean = beta[0];
    fit.amplitude = std::hypot(beta[1], beta[2]);
    fit.phase_offset = std::atan2(beta[2], beta[1]);
    fit.frequency = frequency;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double model = beta[0] + beta[1] * std::sin(frequency * x[i])
                             + beta[2] * std::cos(frequency * x[i]);
        ss += (y[i] - model) * (y[i] - model);
    }
    fit.rms_residual = std::sqrt(ss / static_cast<double>(n));
    return fit;
}

double estimate_frequency(const std::vector<double>& x,
                          const std::vector<double>& y, double f_lo, double f_hi) {
    if (!(f_hi > f_lo && f_lo > 0.0)) {
        throw ValidationError("estimate_frequency: need 0 < f_lo < f_hi");
    }
    auto sse = [&](double f) {
        const SinusoidFit fit = fit_sinusoid_fixed(x, y, f);
        return fit.rms_residual;
    };
    const int n_scan = 400;
    double f_best = f_lo;
    double s_best = sse(f_lo);
    for (int i = 1; i <= n_scan; ++i) {
        const double f = f_lo + (f_hi - f_lo) * static_cast<double>(i) / n_scan;
        const double s = sse(f);
        if (s < s_best) {
            s_best = s;
            f_best = f;
        }
    }
    const double step = (f_hi - f_lo) / n_scan;
    double a = std::max(f_lo, f_best - step);
    double b = std::min(f_hi, f_best + step);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = sse(c), fd = sse(d);
    for (int it = 0; it < 60; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = sse(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = sse(d);
        }
    }
    return 0.5 * (a + b);
}

SweepResult phase_sweep(const FieldParams& p, const DriveEnvelope& env,
                        const dynamics::IntegratorConfig& cfg, double tau,
                        int n_points) {
    p.validate();
    detail::require_resonant(p, "phase_sweep");
    if (n_points < 8) {
        throw ValidationError("phase_sweep: n_points must be >= 8");
    }
    const double area = pulse_area(p, env, tau);
    if (std::abs(area - floquet::pi_half_area) > floquet::pulse_area_tol) {
        char buf[128];
        std::snprintf(buf, sizeof(buf),
                      "phase_sweep: tau does not satisfy the pi/2-pulse condition "
                      "(pulse area %.12g, need pi/2)",
                      area);
        throw ValidationError(buf);
    }

    SweepResult out;
    out.parameter = SweepParameter::Phase;
    out.values.reserve(static_cast<std::size_t>(n_points));
    out.observable.reserve(static_cast<std::size_t>(n_points));
    for (int k = 0; k < n_points; ++k) {
        const double phase = pi * static_cast<double>(k) / static_cast<double>(n_points);
        FieldParams pk = p;
        pk.phi = phase;
        out.values.push_back(phase);
        out.observable.push_back(dynamics::evolve_to(pk, env, cfg, tau).p1());
    }

    out.fit = fit_sinusoid_fixed(out.values, out.observable, 2.0);
    out.fit.frequency = estimate_frequency(out.values, out.observable, 1.0, 3.0);
    return out;
}

RotationError rotation_error(const FieldParams& p, const DriveEnvelope& env,
                             const dynamics::IntegratorConfig& cfg, int n_points) {
    p.validate();
    detail::require_resonant(p, "rotation_error");
    if (n_points < 8) {
        throw ValidationError("rotation_error: n_points must be >= 8");
    }
    RotationError out;
    out.tau = floquet::solve_pi_half_time(p, env);
    out.eta_tau = eta(p, env, out.tau);
    double worst = 0.0, ss = 0.0;
    for (int k = 0; k < n_points; ++k) {
        FieldParams pk = p;
        pk.phi = pi * static_cast<double>(k) / static_cast<double>(n_points);
        const double dev = dynamics::evolve_to(pk, env, cfg, out.tau).p1() - 0.5;
        worst = std::max(worst, std::abs(dev));
        ss += dev * dev;
    }
    out.worst_case = worst;
    out.phase_averaged_rms = std::sqrt(ss / static_cast<double>(n_points));
    return out;
}

} // namespace bso::analysis
