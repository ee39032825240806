// helpers.hpp
// Shared test utilities: random states, bases, targets and channels, all
// driven by the library's own seeded RandomSource so each case is reproducible.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <crsp/crsp.hpp>

namespace crsp::testing {

// Standard normal via Box-Muller; uniform() never returns 1, so 1-u > 0.
inline double gaussian(RandomSource& rng) {
    const double u1 = 1.0 - rng.uniform();
    const double u2 = rng.uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

inline cplx random_amplitude(RandomSource& rng) { return {gaussian(rng), gaussian(rng)}; }

// Haar-ish random pure state: gaussian components, normalized.
inline Statevector random_state(int num_qubits, RandomSource& rng) {
    std::vector<cplx> amps(std::size_t{1} << num_qubits);
    double n2 = 0.0;
    do {
        n2 = 0.0;
        for (cplx& a : amps) {
            a = random_amplitude(rng);
            n2 += std::norm(a);
        }
    } while (n2 < 1e-6);
    const double inv = 1.0 / std::sqrt(n2);
    for (cplx& a : amps) a *= inv;
    return Statevector(num_qubits, std::move(amps));
}

// Random orthonormal basis over `arity` qubits: Gram-Schmidt on gaussian
// vectors, redrawing any near-dependent draw.
inline MeasurementBasis random_basis(int arity, RandomSource& rng) {
    const std::size_t n = std::size_t{1} << arity;
    std::vector<std::vector<cplx>> rows;
    while (rows.size() < n) {
        std::vector<cplx> v(n);
        for (cplx& x : v) x = random_amplitude(rng);
        for (const auto& u : rows) {
            cplx ip{0.0, 0.0};
            for (std::size_t k = 0; k < n; ++k) ip += std::conj(u[k]) * v[k];
            for (std::size_t k = 0; k < n; ++k) v[k] -= ip * u[k];
        }
        double n2 = 0.0;
        for (const cplx& x : v) n2 += std::norm(x);
        if (n2 < 1e-6) continue;
        const double inv = 1.0 / std::sqrt(n2);
        for (cplx& x : v) x *= inv;
        rows.push_back(std::move(v));
    }
    return MeasurementBasis(arity, std::move(rows));
}

inline ChannelParams random_channel(RandomSource& rng) {
    return ChannelParams::from_b(0.95 * rng.uniform());
}

inline double random_phase(RandomSource& rng) {
    return 2.0 * std::numbers::pi * rng.uniform();
}

inline SingleTarget random_single_target(TargetClass cls, RandomSource& rng) {
    const double theta = std::numbers::pi / 2.0 * rng.uniform();
    switch (cls) {
        case TargetClass::arbitrary: return SingleTarget::arbitrary(theta, random_phase(rng));
        case TargetClass::amplitude: return SingleTarget::amplitude(theta);
        default: return SingleTarget::phase(random_phase(rng));
    }
}

// Random unit modulus vector; for the arbitrary class both coefficient
// blocks are kept well away from zero so the encoding basis exists.
inline TwoTarget random_two_target(TargetClass cls, RandomSource& rng) {
    if (cls == TargetClass::phase)
        return TwoTarget::phase(random_phase(rng), random_phase(rng), random_phase(rng));
    double mod[4];
    double n2 = 0.0;
    do {
        n2 = 0.0;
        for (double& m : mod) {
            const double g = gaussian(rng);
            m = g * g;
            n2 += m * m;
        }
    } while (n2 < 1e-6 ||
             (cls == TargetClass::arbitrary &&
              (mod[0] * mod[0] + mod[1] * mod[1] < 0.02 * n2 ||
               mod[2] * mod[2] + mod[3] * mod[3] < 0.02 * n2)));
    const double inv = 1.0 / std::sqrt(n2);
    for (double& m : mod) m *= inv;
    if (cls == TargetClass::amplitude) return TwoTarget::amplitude(mod[0], mod[1], mod[2], mod[3]);
    return TwoTarget::arbitrary(mod[0], mod[1], mod[2], mod[3], random_phase(rng),
                                random_phase(rng), random_phase(rng));
}

inline Scenario random_scenario(ProtocolId id, RandomSource& rng, bool cooperate = true,
                                bool sender_compact = false) {
    const ChannelParams ch1 = random_channel(rng);
    if (protocol_qubits(id) == 1)
        return {id, random_single_target(protocol_class(id), rng), ch1, std::nullopt, cooperate,
                sender_compact};
    return {id, random_two_target(protocol_class(id), rng), ch1, random_channel(rng), cooperate,
            sender_compact};
}

}  // namespace crsp::testing
