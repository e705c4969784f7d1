#include "bso/state.hpp"

namespace bso {

QubitState to_rotating(const QubitState& s, const FieldParams& p) {
    if (s.frame != Frame::Lab) {
        throw ValidationError("to_rotating: state is already in the rotating frame");
    }
    QubitState out = s;
    out.c1 *= std::polar(1.0, p.omega * s.time + p.phi);
    out.frame = Frame::Rotating;
    return out;
}

QubitState to_lab(const QubitState& s, const FieldParams& p) {
    if (s.frame != Frame::Rotating) {
        throw ValidationError("to_lab: state is already in the lab frame");
    }
    QubitState out = s;
    out.c1 *= std::polar(1.0, -(p.omega * s.time + p.phi));
    out.frame = Frame::Lab;
    return out;
}

} // namespace bso
