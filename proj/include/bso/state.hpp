// state.hpp — two-level amplitudes and the lab <-> rotating frame transform.
//
// The rotating frame is reached with the diagonal unitary
//   Q = diag(1, exp(+i(omega t + phi))),
// which strips the drive phase off the excited amplitude. Populations are
// frame independent.

#pragma once

#include <complex>

#include "bso/field.hpp"

namespace bso {

enum class Frame { Lab, Rotating };

struct QubitState {
    std::complex<double> c0{1.0, 0.0}; // ground amplitude
    std::complex<double> c1{0.0, 0.0}; // excited amplitude
    Frame frame = Frame::Rotating;
    double time = 0.0;

    double norm() const noexcept { return std::norm(c0) + std::norm(c1); }
    double p1() const noexcept { return std::norm(c1); }
};

// Apply Q: multiplies c1 by exp(+i(omega t + phi)). Rejects non-Lab input.
QubitState to_rotating(const QubitState& s, const FieldParams& p);

// Apply Q^-1: multiplies c1 by exp(-i(omega t + phi)). Rejects non-Rotating input.
QubitState to_lab(const QubitState& s, const FieldParams& p);

} // namespace bso
