// qstate.hpp
// Minimal dense statevector engine: tensor products, local unitaries,
// projective measurement in arbitrary orthonormal bases, and fidelity.
//
// Qubit ordering convention (used everywhere in this library): the leftmost
// symbol of a ket is qubit 0 and maps to the most significant bit of the
// amplitude index, so |01> is amplitude index 0b01 with qubit 0 in |0> and
// qubit 1 in |1>.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rng.hpp"

namespace crsp {

using cplx = std::complex<double>;

// Tolerances. Results representable exactly up to rounding must hold to
// norm_tolerance; user-supplied bases and targets get the looser bounds.
inline constexpr double norm_tolerance = 1e-12;
inline constexpr double basis_tolerance = 1e-10;
inline constexpr double input_norm_tolerance = 1e-9;
inline constexpr double degenerate_floor = 1e-8;
inline constexpr double probability_tolerance = 1e-12;
inline constexpr double success_fidelity_floor = 1.0 - 1e-10;

// Branch probabilities below this are treated as zero: the collapsed state
// of such a branch is flagged invalid instead of being renormalized.
inline constexpr double zero_branch_probability = 1e-24;

// Normalized pure state of num_qubits qubits. Immutable after construction;
// all operations return new values.
class Statevector {
public:
    Statevector(int num_qubits, std::vector<cplx> amplitudes)
        : num_qubits_(num_qubits), amps_(std::move(amplitudes)) {
        if (num_qubits < 1 || num_qubits > 30)
            throw std::invalid_argument("Statevector: qubit count out of range");
        if (amps_.size() != std::size_t{1} << num_qubits)
            throw std::invalid_argument("Statevector: amplitude count != 2^num_qubits");
        double n2 = 0.0;
        for (const cplx& a : amps_) n2 += std::norm(a);
        if (std::abs(n2 - 1.0) > input_norm_tolerance)
            throw std::invalid_argument("Statevector: amplitudes not normalized (|norm^2 - 1| = " +
                                        std::to_string(std::abs(n2 - 1.0)) + ")");
        const double inv = 1.0 / std::sqrt(n2);
        for (cplx& a : amps_) a *= inv;
    }

    static Statevector computational(int num_qubits, std::size_t basis_index) {
        std::vector<cplx> amps(std::size_t{1} << num_qubits, cplx{0.0, 0.0});
        if (basis_index >= amps.size())
            throw std::out_of_range("Statevector: basis index out of range");
        amps[basis_index] = cplx{1.0, 0.0};
        return Statevector(num_qubits, std::move(amps));
    }

    int num_qubits() const { return num_qubits_; }
    std::size_t dim() const { return amps_.size(); }
    const std::vector<cplx>& amplitudes() const { return amps_; }
    cplx amplitude(std::size_t i) const { return amps_.at(i); }

    double norm() const {
        double n2 = 0.0;
        for (const cplx& a : amps_) n2 += std::norm(a);
        return std::sqrt(n2);
    }

private:
    int num_qubits_;
    std::vector<cplx> amps_;
};

// 2x2 unitary acting on one qubit. Validated at construction: U U^dag = I
// within norm_tolerance.
class LocalUnitary2 {
public:
    LocalUnitary2(cplx m00, cplx m01, cplx m10, cplx m11) : m_{m00, m01, m10, m11} {
        // rows of a unitary are orthonormal
        const double r0 = std::norm(m00) + std::norm(m01);
        const double r1 = std::norm(m10) + std::norm(m11);
        const cplx cross = m00 * std::conj(m10) + m01 * std::conj(m11);
        if (std::abs(r0 - 1.0) > norm_tolerance || std::abs(r1 - 1.0) > norm_tolerance ||
            std::abs(cross) > norm_tolerance)
            throw std::invalid_argument("LocalUnitary2: matrix is not unitary");
    }

    static LocalUnitary2 identity() { return {{1, 0}, {0, 0}, {0, 0}, {1, 0}}; }
    static LocalUnitary2 sigma_x() { return {{0, 0}, {1, 0}, {1, 0}, {0, 0}}; }
    // Real form |1><0| - |0><1| (equals i times the usual Y); squares to -I.
    static LocalUnitary2 sigma_y() { return {{0, 0}, {-1, 0}, {1, 0}, {0, 0}}; }
    static LocalUnitary2 sigma_z() { return {{1, 0}, {0, 0}, {0, 0}, {-1, 0}}; }

    cplx at(int row, int col) const { return m_[static_cast<std::size_t>(row) * 2 + col]; }

private:
    cplx m_[4];  // row-major
};

// Orthonormal set of 2^arity vectors over `arity` qubits, used as a
// projective measurement. Orthonormality is validated at construction
// within basis_tolerance; a violating set is rejected as degenerate.
class MeasurementBasis {
public:
    MeasurementBasis(int arity, std::vector<std::vector<cplx>> vectors)
        : arity_(arity), vecs_(std::move(vectors)) {
        if (arity != 1 && arity != 2)
            throw std::invalid_argument("MeasurementBasis: arity must be 1 or 2");
        const std::size_t n = std::size_t{1} << arity;
        if (vecs_.size() != n)
            throw std::invalid_argument("MeasurementBasis: expected 2^arity vectors");
        for (const auto& v : vecs_)
            if (v.size() != n)
                throw std::invalid_argument("MeasurementBasis: vector length != 2^arity");
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i; j < n; ++j) {
                cplx ip{0.0, 0.0};
                for (std::size_t k = 0; k < n; ++k) ip += std::conj(vecs_[i][k]) * vecs_[j][k];
                const double want = (i == j) ? 1.0 : 0.0;
                if (std::abs(ip - want) > basis_tolerance)
                    throw std::invalid_argument("MeasurementBasis: degenerate (not orthonormal) basis");
            }
        }
    }

    int arity() const { return arity_; }
    int size() const { return 1 << arity_; }
    const std::vector<cplx>& vector(int k) const { return vecs_.at(static_cast<std::size_t>(k)); }

private:
    int arity_;
    std::vector<std::vector<cplx>> vecs_;
};

namespace detail {

// Bit position (from the LSB) of qubit q in an n-qubit amplitude index.
inline int bit_pos(int num_qubits, int qubit) { return num_qubits - 1 - qubit; }

// Splits amplitude indices into a measured part and a rest part.
// Measured-index bit (m-1-t) corresponds to qubits[t]; rest indices read the
// remaining qubits in their original (increasing) order.
struct SubspaceMap {
    SubspaceMap(int num_qubits, const std::vector<int>& qubits) {
        const int m = static_cast<int>(qubits.size());
        std::vector<bool> taken(static_cast<std::size_t>(num_qubits), false);
        for (int q : qubits) {
            if (q < 0 || q >= num_qubits)
                throw std::out_of_range("qubit index out of range");
            if (taken[static_cast<std::size_t>(q)])
                throw std::invalid_argument("duplicate qubit index");
            taken[static_cast<std::size_t>(q)] = true;
            measured_pos.push_back(bit_pos(num_qubits, q));
        }
        for (int q = 0; q < num_qubits; ++q)
            if (!taken[static_cast<std::size_t>(q)]) rest_pos.push_back(bit_pos(num_qubits, q));
        measured_dim = std::size_t{1} << m;
        rest_dim = std::size_t{1} << (num_qubits - m);
    }

    std::size_t combine(std::size_t measured_index, std::size_t rest_index) const {
        std::size_t idx = 0;
        const int m = static_cast<int>(measured_pos.size());
        for (int t = 0; t < m; ++t)
            if (measured_index >> (m - 1 - t) & 1u) idx |= std::size_t{1} << measured_pos[static_cast<std::size_t>(t)];
        const int k = static_cast<int>(rest_pos.size());
        for (int u = 0; u < k; ++u)
            if (rest_index >> (k - 1 - u) & 1u) idx |= std::size_t{1} << rest_pos[static_cast<std::size_t>(u)];
        return idx;
    }

    std::vector<int> measured_pos;  // listed order
    std::vector<int> rest_pos;      // decreasing, i.e. increasing qubit order
    std::size_t measured_dim = 0;
    std::size_t rest_dim = 0;
};

}  // namespace detail

// Kronecker product; a's qubits become the more significant ones.
inline Statevector tensor(const Statevector& a, const Statevector& b) {
    std::vector<cplx> out(a.dim() * b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < b.dim(); ++j)
            out[i * b.dim() + j] = a.amplitudes()[i] * b.amplitudes()[j];
    return Statevector(a.num_qubits() + b.num_qubits(), std::move(out));
}

// (I x ... x U x ... x I)|state>, with U on the given qubit.
inline Statevector apply_local(const Statevector& state, int qubit, const LocalUnitary2& u) {
    if (qubit < 0 || qubit >= state.num_qubits())
        throw std::out_of_range("apply_local: qubit index out of range");
    const std::size_t stride = std::size_t{1} << detail::bit_pos(state.num_qubits(), qubit);
    std::vector<cplx> out = state.amplitudes();
    for (std::size_t base = 0; base < out.size(); ++base) {
        if (base & stride) continue;
        const cplx a0 = out[base];
        const cplx a1 = out[base | stride];
        out[base] = u.at(0, 0) * a0 + u.at(0, 1) * a1;
        out[base | stride] = u.at(1, 0) * a0 + u.at(1, 1) * a1;
    }
    return Statevector(state.num_qubits(), std::move(out));
}

struct ProjectResult {
    // Collapsed, renormalized state; empty when the branch probability is
    // (numerically) zero and no collapsed state exists.
    std::optional<Statevector> state;
    double prob = 0.0;
    bool valid() const { return state.has_value(); }
};

// Projects onto one basis vector of a projective measurement on `qubits`,
// with the outcome chosen by the caller.
inline ProjectResult project(const Statevector& state, const std::vector<int>& qubits,
                             const MeasurementBasis& basis, int outcome) {
    if (static_cast<int>(qubits.size()) != basis.arity())
        throw std::invalid_argument("project: basis arity != number of measured qubits");
    if (outcome < 0 || outcome >= basis.size())
        throw std::out_of_range("project: outcome index out of range");
    const detail::SubspaceMap map(state.num_qubits(), qubits);
    const std::vector<cplx>& v = basis.vector(outcome);
    std::vector<cplx> overlap(map.rest_dim);  // <v|psi> per rest branch
    double prob = 0.0;
    for (std::size_t r = 0; r < map.rest_dim; ++r) {
        cplx c{0.0, 0.0};
        for (std::size_t j = 0; j < map.measured_dim; ++j)
            c += std::conj(v[j]) * state.amplitudes()[map.combine(j, r)];
        overlap[r] = c;
        prob += std::norm(c);
    }
    if (prob < zero_branch_probability) return {std::nullopt, prob};
    const double inv = 1.0 / std::sqrt(prob);
    std::vector<cplx> out(state.dim(), cplx{0.0, 0.0});
    for (std::size_t r = 0; r < map.rest_dim; ++r)
        for (std::size_t j = 0; j < map.measured_dim; ++j)
            out[map.combine(j, r)] = v[j] * overlap[r] * inv;
    return {Statevector(state.num_qubits(), std::move(out)), prob};
}

struct MeasureResult {
    int outcome = 0;
    Statevector state;
    double prob = 0.0;
};

// Projective measurement of `qubits` in the given basis, with the outcome
// sampled proportionally to the branch probabilities.
inline MeasureResult measure(const Statevector& state, const std::vector<int>& qubits,
                             const MeasurementBasis& basis, RandomSource& rng) {
    if (static_cast<int>(qubits.size()) != basis.arity())
        throw std::invalid_argument("measure: basis arity != number of measured qubits");
    const detail::SubspaceMap map(state.num_qubits(), qubits);
    std::vector<double> probs(static_cast<std::size_t>(basis.size()), 0.0);
    double total = 0.0;
    for (int k = 0; k < basis.size(); ++k) {
        const std::vector<cplx>& v = basis.vector(k);
        for (std::size_t r = 0; r < map.rest_dim; ++r) {
            cplx c{0.0, 0.0};
            for (std::size_t j = 0; j < map.measured_dim; ++j)
                c += std::conj(v[j]) * state.amplitudes()[map.combine(j, r)];
            probs[static_cast<std::size_t>(k)] += std::norm(c);
        }
        total += probs[static_cast<std::size_t>(k)];
    }
    if (std::abs(total - 1.0) > input_norm_tolerance)
        throw std::invalid_argument("measure: degenerate basis (branch probabilities sum to " +
                                    std::to_string(total) + ")");
    const double u = rng.uniform() * total;
    int outcome = basis.size() - 1;
    double cum = 0.0;
    for (int k = 0; k < basis.size(); ++k) {
        cum += probs[static_cast<std::size_t>(k)];
        if (u < cum) {
            outcome = k;
            break;
        }
    }
    // cumulative roundoff can only land here on a vanishing tail branch
    if (probs[static_cast<std::size_t>(outcome)] < zero_branch_probability)
        outcome = static_cast<int>(std::max_element(probs.begin(), probs.end()) - probs.begin());
    ProjectResult pr = project(state, qubits, basis, outcome);
    return {outcome, std::move(*pr.state), pr.prob};
}

// Fidelities live in [0, 1]; rounding excess is clipped.
inline double clamp_fidelity(double f) { return f < 0.0 ? 0.0 : (f > 1.0 ? 1.0 : f); }

// |<a|b>|^2; insensitive to global phase.
inline double fidelity(const Statevector& a, const Statevector& b) {
    if (a.num_qubits() != b.num_qubits())
        throw std::invalid_argument("fidelity: qubit count mismatch");
    cplx ip{0.0, 0.0};
    for (std::size_t i = 0; i < a.dim(); ++i)
        ip += std::conj(a.amplitudes()[i]) * b.amplitudes()[i];
    return clamp_fidelity(std::norm(ip));
}

// Contracts <v| against `qubits`, leaving the remaining qubits in their
// original order. The result is unnormalized; its squared norm is the
// probability of the (v, qubits) projection.
inline std::vector<cplx> partial_inner(const Statevector& state, const std::vector<int>& qubits,
                                       const std::vector<cplx>& v) {
    const detail::SubspaceMap map(state.num_qubits(), qubits);
    if (v.size() != map.measured_dim)
        throw std::invalid_argument("partial_inner: vector length != 2^|qubits|");
    std::vector<cplx> out(map.rest_dim, cplx{0.0, 0.0});
    for (std::size_t r = 0; r < map.rest_dim; ++r)
        for (std::size_t j = 0; j < map.measured_dim; ++j)
            out[r] += std::conj(v[j]) * state.amplitudes()[map.combine(j, r)];
    return out;
}

// Fidelity <target|rho_keep|target> of the reduced state of `keep` (listed in
// increasing qubit order) against a pure target. Equals |<target|sub>|^2
// whenever the kept qubits are in a pure product state with the rest.
inline double subsystem_fidelity(const Statevector& state, const std::vector<int>& keep,
                                 const Statevector& target) {
    if (std::size_t{1} << keep.size() != target.dim())
        throw std::invalid_argument("subsystem_fidelity: target dimension mismatch");
    // measured part = keep, so the rest index enumerates the complement
    const detail::SubspaceMap map(state.num_qubits(), keep);
    double f = 0.0;
    for (std::size_t c = 0; c < map.rest_dim; ++c) {
        cplx ip{0.0, 0.0};
        for (std::size_t j = 0; j < map.measured_dim; ++j)
            ip += std::conj(target.amplitudes()[j]) * state.amplitudes()[map.combine(j, c)];
        f += std::norm(ip);
    }
    return clamp_fidelity(f);
}

// Schmidt coefficients (descending) of a two-qubit pure state across the
// first|second qubit split: singular values of the reshaped 2x2 matrix.
inline std::pair<double, double> schmidt_pair(const Statevector& state) {
    if (state.num_qubits() != 2)
        throw std::invalid_argument("schmidt_pair: expects a two-qubit state");
    const cplx m00 = state.amplitudes()[0], m01 = state.amplitudes()[1];
    const cplx m10 = state.amplitudes()[2], m11 = state.amplitudes()[3];
    const double trace = std::norm(m00) + std::norm(m01) + std::norm(m10) + std::norm(m11);
    const double det2 = std::norm(m00 * m11 - m01 * m10);
    const double disc = std::sqrt(std::max(trace * trace - 4.0 * det2, 0.0));
    const double hi = std::max((trace + disc) / 2.0, 0.0);
    const double lo = std::max((trace - disc) / 2.0, 0.0);
    return {std::sqrt(hi), std::sqrt(lo)};
}

}  // namespace crsp
