// analysis.hpp — extraction of the Bloch-Siegert oscillation from exact
// trajectories, spectral verification of its frequency, phase sweeps of the
// pi/2-pulse population, and the resulting rotation-error figures.

#pragma once

#include <vector>

#include "bso/dynamics.hpp"
#include "bso/field.hpp"

namespace bso::analysis {

// Residual oscillation left after subtracting the averaged Rabi flop
// sin^2(G(t)/2) from p1(t), together with the first-order prediction
// eta(t) * sin(G(t)) * sin(2(omega t + phi)), G = pulse area.
struct BsoResidual {
    FieldParams params;
    DriveEnvelope envelope;
    std::vector<double> times;
    std::vector<double> residual;
    std::vector<double> predicted;
};

// Throws ValidationError if the series was produced with different
// parameters. For an RWA series the prediction is identically zero.
BsoResidual extract_bso(const dynamics::TimeSeries& series, const FieldParams& p,
                        const DriveEnvelope& env);

struct SpectralPeak {
    double omega;     // angular frequency of the dominant peak
    double bin_width; // angular width of one transform bin after padding
};

// Dominant peak of the Hann-windowed discrete spectrum, with quadratic
// interpolation of the log magnitude between bins. Requires a uniformly
// sampled record spanning at least 16 cycles of 2 omega.
SpectralPeak spectral_peak(const BsoResidual& res);
double dominant_frequency(const BsoResidual& res);

struct SinusoidFit {
    double amplitude = 0.0;
    double frequency = 0.0;
    double phase_offset = 0.0; // y ~ mean + amplitude * sin(frequency x + phase_offset)
    double mean = 0.0;
    double rms_residual = 0.0;
};

// Least-squares fit of mean + A sin(f x + delta) at fixed frequency f
// (linear in the [1, sin, cos] regressors).
SinusoidFit fit_sinusoid_fixed(const std::vector<double>& x,
                               const std::vector<double>& y, double frequency);

// Frequency minimizing the fixed-frequency fit residual, scanned over
// [f_lo, f_hi] and refined by golden-section search.
double estimate_frequency(const std::vector<double>& x,
                          const std::vector<double>& y, double f_lo, double f_hi);

enum class SweepParameter { Phase, Time, Eta };

struct SweepResult {
    SweepParameter parameter = SweepParameter::Phase;
    std::vector<double> values;
    std::vector<double> observable;
    // amplitude/mean/phase fitted at the fixed phase frequency 2; the
    // frequency field is estimated independently from the data.
    SinusoidFit fit;
};

// Exact-dynamics excited population at the pi/2 time tau for n_points
// phases uniform in [0, pi). tau must satisfy the pulse-area condition;
// n_points >= 8. Points are independent; evaluated in parameter order.
SweepResult phase_sweep(const FieldParams& p, const DriveEnvelope& env,
                        const dynamics::IntegratorConfig& cfg, double tau,
                        int n_points);

struct RotationError {
    double worst_case = 0.0;         // max over phi of |p1(tau, phi) - 1/2|
    double phase_averaged_rms = 0.0; // rms of the same deviation over phi
    double tau = 0.0;                // solved pi/2-pulse time
    double eta_tau = 0.0;            // eta at tau (first-order worst case)
};

// Phase-dependent pi/2 rotation error from exact integration.
RotationError rotation_error(const FieldParams& p, const DriveEnvelope& env,
                             const dynamics::IntegratorConfig& cfg,
                             int n_points = 32);

} // namespace bso::analysis
