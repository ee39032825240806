// channel.hpp
// Three-qubit maximal-slice resource channel shared by sender (qubit A),
// receiver (qubit B) and controller (qubit C):
//
//   |Psi>_ABC = (|000> + a|111> + b|110>) / sqrt(2),   a^2 + b^2 = 1.
//
// a parametrizes the entanglement of the slice; b is the controller's
// leverage. a = 1, b = 0 is the GHZ point.

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "qstate.hpp"

namespace crsp {

// Validated (a, b) pair with a in (0, 1], b in [0, 1) and a^2 + b^2 = 1.
// b = 1 (hence a = 0) is rejected: the slice degenerates to a product state
// with no sender-receiver entanglement.
struct ChannelParams {
    double a;
    double b;

    ChannelParams(double a_, double b_) : a(a_), b(b_) {
        if (!(a > 0.0) || a > 1.0 || b < 0.0 || !(b < 1.0))
            throw std::invalid_argument("ChannelParams: need a in (0,1], b in [0,1)");
        if (std::abs(a * a + b * b - 1.0) > norm_tolerance)
            throw std::invalid_argument("ChannelParams: a^2 + b^2 != 1 (off by " +
                                        std::to_string(std::abs(a * a + b * b - 1.0)) + ")");
        if (a < degenerate_floor)
            throw std::invalid_argument("ChannelParams: a too close to 0");
    }

    static ChannelParams from_b(double b) {
        if (b < 0.0 || !(b < 1.0))
            throw std::invalid_argument("ChannelParams: need b in [0,1)");
        return ChannelParams(std::sqrt(1.0 - b * b), b);
    }
};

// |Psi>_ABC as a three-qubit state, ordered A, B, C (qubits 0, 1, 2).
inline Statevector maximal_slice(const ChannelParams& p) {
    const double s = 1.0 / std::sqrt(2.0);
    std::vector<cplx> amps(8, cplx{0.0, 0.0});
    amps[0b000] = cplx{s, 0.0};
    amps[0b111] = cplx{s * p.a, 0.0};
    amps[0b110] = cplx{s * p.b, 0.0};
    return Statevector(3, std::move(amps));
}

// Two independent channels side by side, ordered A1 B1 C1 A2 B2 C2
// (qubits 0..5). Pair j keeps its own (a_j, b_j).
inline Statevector double_channel(const ChannelParams& p1, const ChannelParams& p2) {
    return tensor(maximal_slice(p1), maximal_slice(p2));
}

}  // namespace crsp
