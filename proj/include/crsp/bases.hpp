// bases.hpp
// Target states and the measurement bases the parties use.
//
// Sender-side bases encode the target: one basis row, conjugated, equals the
// target's coefficient vector (see aligned_row), and the other rows are the
// partner states whose mismatch the receiver can or cannot undo with Pauli
// corrections. The controller always measures in the channel-dependent tau
// basis, whose outcome decides the final sign structure at the receiver.
//
// Target classes:
//   arbitrary  full coefficient freedom (moduli and phases),
//   amplitude  real nonnegative coefficients,
//   phase      equal moduli, free phases.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "channel.hpp"
#include "qstate.hpp"

namespace crsp {

enum class TargetClass { arbitrary, amplitude, phase };

inline const char* to_string(TargetClass cls) {
    switch (cls) {
        case TargetClass::arbitrary: return "arbitrary";
        case TargetClass::amplitude: return "amplitude";
        case TargetClass::phase: return "phase";
    }
    throw std::invalid_argument("TargetClass: unknown value");
}

// Raised when a target admits no valid encoding basis (a coefficient block
// the construction divides by is numerically zero).
struct degenerate_target_error : std::domain_error {
    using std::domain_error::domain_error;
};

namespace detail {

inline double wrap_phase(double phi) {
    if (!std::isfinite(phi)) throw std::invalid_argument("phase must be finite");
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double w = std::fmod(phi, two_pi);
    if (w < 0.0) w += two_pi;
    if (w >= two_pi) w = 0.0;
    return w;
}

inline void check_theta(double theta) {
    if (!(theta >= 0.0 && theta <= std::numbers::pi / 2.0))
        throw std::invalid_argument("theta must lie in [0, pi/2]");
}

inline cplx polar1(double phi) { return {std::cos(phi), std::sin(phi)}; }

}  // namespace detail

// One-qubit target  cos(theta)|0> + e^{i phi} sin(theta)|1>,
// theta in [0, pi/2], phi in [0, 2 pi). The class records which parameters
// the sender treats as known to the receiver's protocol:
//   amplitude fixes phi = 0;  phase fixes theta = pi/4.
class SingleTarget {
public:
    static SingleTarget arbitrary(double theta, double phi) {
        detail::check_theta(theta);
        return {TargetClass::arbitrary, theta, detail::wrap_phase(phi)};
    }
    static SingleTarget amplitude(double theta) {
        detail::check_theta(theta);
        return {TargetClass::amplitude, theta, 0.0};
    }
    static SingleTarget phase(double phi) {
        return {TargetClass::phase, std::numbers::pi / 4.0, detail::wrap_phase(phi)};
    }

    TargetClass cls() const { return cls_; }
    double theta() const { return theta_; }
    double phi() const { return phi_; }

private:
    SingleTarget(TargetClass cls, double theta, double phi)
        : cls_(cls), theta_(theta), phi_(phi) {}
    TargetClass cls_;
    double theta_;
    double phi_;
};

// Two-qubit target
//   alpha|00> + beta e^{i phi1}|01> + delta e^{i phi2}|10> + eta e^{i phi3}|11>,
// moduli nonnegative with unit square sum, phases in [0, 2 pi).
//   amplitude fixes all phases = 0;  phase fixes all moduli = 1/2.
class TwoTarget {
public:
    static TwoTarget arbitrary(double alpha, double beta, double delta, double eta,
                               double phi1, double phi2, double phi3) {
        return {TargetClass::arbitrary,
                {alpha, beta, delta, eta},
                {detail::wrap_phase(phi1), detail::wrap_phase(phi2), detail::wrap_phase(phi3)}};
    }
    static TwoTarget amplitude(double alpha, double beta, double delta, double eta) {
        return {TargetClass::amplitude, {alpha, beta, delta, eta}, {0.0, 0.0, 0.0}};
    }
    static TwoTarget phase(double phi1, double phi2, double phi3) {
        return {TargetClass::phase,
                {0.5, 0.5, 0.5, 0.5},
                {detail::wrap_phase(phi1), detail::wrap_phase(phi2), detail::wrap_phase(phi3)}};
    }

    TargetClass cls() const { return cls_; }
    double alpha() const { return mod_[0]; }
    double beta() const { return mod_[1]; }
    double delta() const { return mod_[2]; }
    double eta() const { return mod_[3]; }
    double phi1() const { return ph_[0]; }
    double phi2() const { return ph_[1]; }
    double phi3() const { return ph_[2]; }

    // modulus of coefficient c (00, 01, 10, 11)
    double modulus(int c) const { return mod_.at(static_cast<std::size_t>(c)); }
    // phase of coefficient c; coefficient 00 is the phase reference
    double phase_of(int c) const { return c == 0 ? 0.0 : ph_.at(static_cast<std::size_t>(c) - 1); }
    cplx coefficient(int c) const { return modulus(c) * detail::polar1(phase_of(c)); }

private:
    TwoTarget(TargetClass cls, std::array<double, 4> mod, std::array<double, 3> ph)
        : cls_(cls), mod_(mod), ph_(ph) {
        double n2 = 0.0;
        for (double m : mod_) {
            if (!(m >= 0.0)) throw std::invalid_argument("TwoTarget: moduli must be >= 0");
            n2 += m * m;
        }
        if (std::abs(n2 - 1.0) > input_norm_tolerance)
            throw std::invalid_argument("TwoTarget: squared moduli must sum to 1");
        const double inv = 1.0 / std::sqrt(n2);
        for (double& m : mod_) m *= inv;
    }

    TargetClass cls_;
    std::array<double, 4> mod_;  // alpha, beta, delta, eta
    std::array<double, 3> ph_;   // phi1, phi2, phi3
};

inline Statevector target_state(const SingleTarget& t) {
    return Statevector(1, {cplx{std::cos(t.theta()), 0.0},
                           std::sin(t.theta()) * detail::polar1(t.phi())});
}

inline Statevector target_state(const TwoTarget& t) {
    return Statevector(2, {t.coefficient(0), t.coefficient(1), t.coefficient(2), t.coefficient(3)});
}

// Controller's basis, fixed by the channel:
//   |tau_+> = ((1+b)|0> + a|1>) / sqrt(2(1+b))    outcome 0
//   |tau_-> = ((1-b)|0> - a|1>) / sqrt(2(1-b))    outcome 1
// Projecting the channel's controller qubit onto tau_+/- leaves the
// sender-receiver pair maximally entangled, with probability (1 +/- b)/2.
inline MeasurementBasis tau_basis(const ChannelParams& p) {
    const double np = std::sqrt(2.0 * (1.0 + p.b));
    const double nm = std::sqrt(2.0 * (1.0 - p.b));
    return MeasurementBasis(1, {{cplx{(1.0 + p.b) / np, 0.0}, cplx{p.a / np, 0.0}},
                                {cplx{(1.0 - p.b) / nm, 0.0}, cplx{-p.a / nm, 0.0}}});
}

// Sender's encoding basis for a one-qubit target. Row order matches the
// correction tables in protocol.hpp.
inline MeasurementBasis alice_basis(const SingleTarget& t) {
    const double c = std::cos(t.theta());
    const double s = std::sin(t.theta());
    switch (t.cls()) {
        case TargetClass::arbitrary:
        case TargetClass::amplitude: {
            const cplx ep = detail::polar1(t.phi());   // e^{+i phi}
            const cplx em = std::conj(ep);             // e^{-i phi}
            return MeasurementBasis(1, {{-s * ep, cplx{c, 0.0}},
                                        {cplx{c, 0.0}, s * em}});
        }
        case TargetClass::phase: {
            const double r = 1.0 / std::sqrt(2.0);
            const cplx em = std::conj(detail::polar1(t.phi()));
            return MeasurementBasis(1, {{cplx{r, 0.0}, r * em},
                                        {cplx{r, 0.0}, -r * em}});
        }
    }
    throw std::invalid_argument("alice_basis: unknown target class");
}

// Sender's encoding basis for a two-qubit target; rows are outcomes 0..3.
//
// For the arbitrary class the construction splits the coefficients into the
// {00,01} and {10,11} blocks and balances them with
// m = sqrt((delta^2 + eta^2) / (alpha^2 + beta^2)); it degenerates when
// either block vanishes, which is rejected. The amplitude and phase bases
// exist for every target of their class.
inline MeasurementBasis alice_basis(const TwoTarget& t) {
    const double al = t.alpha(), be = t.beta(), de = t.delta(), et = t.eta();
    switch (t.cls()) {
        case TargetClass::arbitrary: {
            const double low2 = al * al + be * be;   // {00, 01} block
            const double high2 = de * de + et * et;  // {10, 11} block
            if (low2 < degenerate_floor || high2 < degenerate_floor)
                throw degenerate_target_error(
                    "arbitrary two-qubit target has a vanishing coefficient block; "
                    "the balance factor m is undefined");
            const double m = std::sqrt(high2 / low2);
            const cplx e1 = detail::polar1(t.phi1());
            const cplx e2 = detail::polar1(t.phi2());
            const cplx e3 = detail::polar1(t.phi3());
            const cplx c1 = std::conj(e1), c2 = std::conj(e2), c3 = std::conj(e3);
            return MeasurementBasis(
                2, {{cplx{al, 0.0}, c1 * be, c2 * de, c3 * et},
                    {m * al, c1 * (m * be), c2 * (-de / m), c3 * (-et / m)},
                    {e1 * be, cplx{-al, 0.0}, e3 * et, e2 * (-de)},
                    {e1 * (m * be), cplx{-m * al, 0.0}, e3 * (-et / m), e2 * (de / m)}});
        }
        case TargetClass::amplitude:
            return MeasurementBasis(2, {{cplx{al, 0}, cplx{be, 0}, cplx{de, 0}, cplx{et, 0}},
                                        {cplx{be, 0}, cplx{-al, 0}, cplx{et, 0}, cplx{-de, 0}},
                                        {cplx{de, 0}, cplx{-et, 0}, cplx{-al, 0}, cplx{be, 0}},
                                        {cplx{-et, 0}, cplx{-de, 0}, cplx{be, 0}, cplx{al, 0}}});
        case TargetClass::phase: {
            const cplx c1 = std::conj(detail::polar1(t.phi1())) * 0.5;
            const cplx c2 = std::conj(detail::polar1(t.phi2())) * 0.5;
            const cplx c3 = std::conj(detail::polar1(t.phi3())) * 0.5;
            const cplx h{0.5, 0.0};
            return MeasurementBasis(2, {{h, c1, c2, c3},
                                        {h, c1, -c2, -c3},
                                        {h, -c1, c2, -c3},
                                        {h, -c1, -c2, c3}});
        }
    }
    throw std::invalid_argument("alice_basis: unknown target class");
}

// Index of the basis row whose conjugate reproduces the target coefficients.
// That row is the outcome needing no modulus rearrangement at the receiver.
inline int aligned_row(TargetClass cls, int num_target_qubits) {
    if (num_target_qubits == 2) return 0;
    if (num_target_qubits != 1)
        throw std::invalid_argument("aligned_row: targets span 1 or 2 qubits");
    return cls == TargetClass::phase ? 0 : 1;
}

}  // namespace crsp
