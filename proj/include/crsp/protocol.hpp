// protocol.hpp
// The LOCC protocol proper: one trial = sender measurement, controller
// measurement, classical messages, receiver correction. Six protocol
// variants, one per (target class, target width) pair.
//
// Correction tables map (sender outcome, controller outcome) to the Pauli
// pair the receiver applies. Rows absent from a table are unrecoverable
// sender outcomes; those trials end as failure_uncorrectable before the
// controller acts.

#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "bases.hpp"
#include "channel.hpp"
#include "qstate.hpp"
#include "rng.hpp"

namespace crsp {

enum class ProtocolId {
    single_arbitrary,
    single_amplitude,
    single_phase,
    two_arbitrary,
    two_amplitude,
    two_phase,
};

inline constexpr std::array<ProtocolId, 6> all_protocols = {
    ProtocolId::single_arbitrary, ProtocolId::single_amplitude, ProtocolId::single_phase,
    ProtocolId::two_arbitrary,    ProtocolId::two_amplitude,    ProtocolId::two_phase,
};

inline const char* to_string(ProtocolId id) {
    switch (id) {
        case ProtocolId::single_arbitrary: return "single_arbitrary";
        case ProtocolId::single_amplitude: return "single_amplitude";
        case ProtocolId::single_phase: return "single_phase";
        case ProtocolId::two_arbitrary: return "two_arbitrary";
        case ProtocolId::two_amplitude: return "two_amplitude";
        case ProtocolId::two_phase: return "two_phase";
    }
    throw std::invalid_argument("ProtocolId: unknown value");
}

inline ProtocolId parse_protocol(std::string_view name) {
    for (ProtocolId id : all_protocols)
        if (name == to_string(id)) return id;
    throw std::invalid_argument("unknown protocol '" + std::string(name) +
                                "' (expected single_arbitrary, single_amplitude, single_phase, "
                                "two_arbitrary, two_amplitude, two_phase)");
}

// Number of target qubits (1 or 2).
inline int protocol_qubits(ProtocolId id) {
    switch (id) {
        case ProtocolId::single_arbitrary:
        case ProtocolId::single_amplitude:
        case ProtocolId::single_phase: return 1;
        default: return 2;
    }
}

inline TargetClass protocol_class(ProtocolId id) {
    switch (id) {
        case ProtocolId::single_arbitrary:
        case ProtocolId::two_arbitrary: return TargetClass::arbitrary;
        case ProtocolId::single_amplitude:
        case ProtocolId::two_amplitude: return TargetClass::amplitude;
        default: return TargetClass::phase;
    }
}

inline ProtocolId protocol_for(TargetClass cls, int num_target_qubits) {
    for (ProtocolId id : all_protocols)
        if (protocol_class(id) == cls && protocol_qubits(id) == num_target_qubits) return id;
    throw std::invalid_argument("protocol_for: no protocol for this class/width");
}

// Sender outcomes: one per basis row. Controller outcomes: tau indices,
// combined as cm1 * 2 + cm2 for the two-channel protocols (0 = tau_+).
inline int alice_outcome_count(ProtocolId id) { return protocol_qubits(id) == 1 ? 2 : 4; }
inline int charlie_outcome_count(ProtocolId id) { return protocol_qubits(id) == 1 ? 2 : 4; }

enum class Pauli { I, X, Y, Z };

inline const char* to_string(Pauli p) {
    switch (p) {
        case Pauli::I: return "I";
        case Pauli::X: return "X";
        case Pauli::Y: return "Y";
        case Pauli::Z: return "Z";
    }
    throw std::invalid_argument("Pauli: unknown value");
}

inline LocalUnitary2 to_unitary(Pauli p) {
    switch (p) {
        case Pauli::I: return LocalUnitary2::identity();
        case Pauli::X: return LocalUnitary2::sigma_x();
        case Pauli::Y: return LocalUnitary2::sigma_y();
        case Pauli::Z: return LocalUnitary2::sigma_z();
    }
    throw std::invalid_argument("Pauli: unknown value");
}

// Pauli pair. First entry acts on the receiver qubit of channel 1, second
// on channel 2; the second entry is I (and unused) in one-qubit protocols.
using PauliPair = std::array<Pauli, 2>;

// "Z" for one-qubit corrections, "ZX" for two-qubit ones.
inline std::string correction_label(const PauliPair& pp, int num_target_qubits) {
    std::string s = to_string(pp[0]);
    if (num_target_qubits == 2) s += to_string(pp[1]);
    return s;
}

namespace detail {

constexpr Pauli I = Pauli::I, X = Pauli::X, Y = Pauli::Y, Z = Pauli::Z;

// tables[alice_outcome][charlie_outcome]; nullopt marks an unrecoverable row
using Row2 = std::array<std::optional<PauliPair>, 2>;
using Row4 = std::array<std::optional<PauliPair>, 4>;

inline constexpr PauliPair pp(Pauli a, Pauli b = I) { return {a, b}; }

inline constexpr std::array<Row2, 2> table_single_arbitrary = {{
    {std::nullopt, std::nullopt},
    {pp(I), pp(Z)},
}};

inline constexpr std::array<Row2, 2> table_single_amplitude = {{
    {pp(Y), pp(X)},
    {pp(I), pp(Z)},
}};

inline constexpr std::array<Row2, 2> table_single_phase = {{
    {pp(I), pp(Z)},
    {pp(Z), pp(I)},
}};

inline constexpr std::array<Row4, 4> table_two_arbitrary = {{
    {pp(I, I), pp(I, Z), pp(Z, I), pp(Z, Z)},
    {std::nullopt, std::nullopt, std::nullopt, std::nullopt},
    {std::nullopt, std::nullopt, std::nullopt, std::nullopt},
    {std::nullopt, std::nullopt, std::nullopt, std::nullopt},
}};

inline constexpr std::array<Row4, 4> table_two_amplitude = {{
    {pp(I, I), pp(I, Z), pp(Z, I), pp(Z, Z)},
    {pp(I, Y), pp(I, X), pp(Z, Y), pp(Z, X)},
    {pp(Y, Z), pp(Y, I), pp(X, Z), pp(X, I)},
    {pp(Y, X), pp(Y, Y), pp(X, X), pp(X, Y)},
}};

inline constexpr std::array<Row4, 4> table_two_phase = {{
    {pp(I, I), pp(I, Z), pp(Z, I), pp(Z, Z)},
    {pp(Z, I), pp(Z, Z), pp(I, I), pp(I, Z)},
    {pp(I, Z), pp(I, I), pp(Z, Z), pp(Z, I)},
    {pp(Z, Z), pp(Z, I), pp(I, Z), pp(I, I)},
}};

inline std::optional<PauliPair> table_cell(ProtocolId id, int am, int cm) {
    if (am < 0 || am >= alice_outcome_count(id) || cm < 0 || cm >= charlie_outcome_count(id))
        throw std::out_of_range("correction table: outcome index out of range");
    const auto a = static_cast<std::size_t>(am);
    const auto c = static_cast<std::size_t>(cm);
    switch (id) {
        case ProtocolId::single_arbitrary: return table_single_arbitrary[a][c];
        case ProtocolId::single_amplitude: return table_single_amplitude[a][c];
        case ProtocolId::single_phase: return table_single_phase[a][c];
        case ProtocolId::two_arbitrary: return table_two_arbitrary[a][c];
        case ProtocolId::two_amplitude: return table_two_amplitude[a][c];
        case ProtocolId::two_phase: return table_two_phase[a][c];
    }
    throw std::invalid_argument("correction table: unknown protocol");
}

}  // namespace detail

// True when the sender outcome has correction entries (the trial can reach
// success). Arbitrary-class protocols recover exactly one sender outcome.
inline bool correctable_outcome(ProtocolId id, int alice_outcome) {
    return detail::table_cell(id, alice_outcome, 0).has_value();
}

// Table row for a recoverable outcome pair. An unrecoverable or out-of-range
// pair throws: callers must gate on correctable_outcome first, so reaching
// the throw indicates a protocol-logic bug.
inline PauliPair correction_lookup(ProtocolId id, int alice_outcome, int charlie_outcome) {
    std::optional<PauliPair> cell = detail::table_cell(id, alice_outcome, charlie_outcome);
    if (!cell)
        throw std::out_of_range("correction_lookup: no table entry for this outcome pair");
    return *cell;
}

struct CorrectionEntry {
    int alice_outcome;
    int charlie_outcome;
    PauliPair unitaries;
};

// All recoverable rows of the protocol's table, in (alice, charlie) order.
// Sizes: 2, 4, 4 for the one-qubit protocols; 4, 16, 16 for the two-qubit.
inline std::vector<CorrectionEntry> correction_table(ProtocolId id) {
    std::vector<CorrectionEntry> rows;
    for (int am = 0; am < alice_outcome_count(id); ++am)
        for (int cm = 0; cm < charlie_outcome_count(id); ++cm)
            if (auto cell = detail::table_cell(id, am, cm)) rows.push_back({am, cm, *cell});
    return rows;
}

enum class Party { alice, bob, charlie };

inline const char* to_string(Party p) {
    switch (p) {
        case Party::alice: return "alice";
        case Party::bob: return "bob";
        case Party::charlie: return "charlie";
    }
    throw std::invalid_argument("Party: unknown value");
}

// One classical message. payload_bits is ceil(log2 |alphabet|) of the
// content's alphabet: outcome labels cost 1 bit per measured qubit,
// yes/no costs 1 bit.
struct PartyMessage {
    Party from;
    Party to;
    int payload_bits;
    std::string content;
};

enum class TrialStatus { success, failure_uncorrectable, blocked_by_controller };

inline const char* to_string(TrialStatus s) {
    switch (s) {
        case TrialStatus::success: return "success";
        case TrialStatus::failure_uncorrectable: return "failure_uncorrectable";
        case TrialStatus::blocked_by_controller: return "blocked_by_controller";
    }
    throw std::invalid_argument("TrialStatus: unknown value");
}

// Complete account of one protocol trial.
//
// fidelity is always the receiver-side marginal <target|rho_receiver|target>
// of final_state with whatever corrections were actually applied; on success
// it is 1 up to rounding, on failure/blocked it is diagnostic only.
struct TrialRecord {
    TrialRecord(ProtocolId id, std::variant<SingleTarget, TwoTarget> tgt, ChannelParams c1,
                std::optional<ChannelParams> c2)
        : protocol(id), target(std::move(tgt)), channel1(c1), channel2(c2) {}

    ProtocolId protocol;
    std::variant<SingleTarget, TwoTarget> target;
    ChannelParams channel1;
    std::optional<ChannelParams> channel2;  // two-qubit protocols only

    int alice_outcome = 0;
    std::optional<int> charlie_outcome;  // absent on failure (not measured) and blocked (withheld)
    std::optional<PauliPair> correction;
    TrialStatus status = TrialStatus::failure_uncorrectable;
    double fidelity = 0.0;

    std::vector<PartyMessage> messages;
    int sender_bits = 0;
    int controller_bits = 0;

    // Post-protocol joint state, kept for diagnostics; never serialized.
    std::optional<Statevector> final_state;
};

// Recomputes (sender_bits, controller_bits) from the message log.
inline std::pair<int, int> message_audit(const TrialRecord& record) {
    int sender = 0, controller = 0;
    for (const PartyMessage& m : record.messages) {
        if (m.from == Party::alice) sender += m.payload_bits;
        if (m.from == Party::charlie) controller += m.payload_bits;
    }
    return {sender, controller};
}

namespace detail {

inline std::string outcome_label(int outcome, int num_bits) {
    std::string s(static_cast<std::size_t>(num_bits), '0');
    for (int i = 0; i < num_bits; ++i)
        if (outcome >> (num_bits - 1 - i) & 1) s[static_cast<std::size_t>(i)] = '1';
    return s;
}

}  // namespace detail

// One trial over a single channel. Order of play: the sender measures the
// channel's A qubit and broadcasts her outcome; an unrecoverable outcome
// ends the trial before the controller acts. Otherwise the controller
// measures C in the tau basis. A refusing controller (cooperate = false)
// still measures but vetoes the classical round: nothing is broadcast, no
// message is counted, and the receiver cannot correct. Otherwise he sends
// his outcome and the receiver applies the table correction to B.
inline TrialRecord run_single(const SingleTarget& t, const ChannelParams& ch, bool cooperate,
                              RandomSource& rng) {
    const ProtocolId id = protocol_for(t.cls(), 1);
    const Statevector target = target_state(t);
    TrialRecord rec(id, t, ch, std::nullopt);

    MeasureResult am = measure(maximal_slice(ch), {0}, alice_basis(t), rng);
    rec.alice_outcome = am.outcome;

    if (!correctable_outcome(id, am.outcome)) {
        rec.status = TrialStatus::failure_uncorrectable;
        rec.messages.push_back({Party::alice, Party::bob, 1, detail::outcome_label(am.outcome, 1)});
        rec.sender_bits = 1;
        rec.fidelity = subsystem_fidelity(am.state, {1}, target);
        rec.final_state = std::move(am.state);
        return rec;
    }

    MeasureResult cm = measure(am.state, {2}, tau_basis(ch), rng);

    if (!cooperate) {
        rec.status = TrialStatus::blocked_by_controller;
        rec.fidelity = subsystem_fidelity(cm.state, {1}, target);
        rec.final_state = std::move(cm.state);
        return rec;
    }

    rec.charlie_outcome = cm.outcome;
    rec.messages.push_back({Party::alice, Party::bob, 1, detail::outcome_label(am.outcome, 1)});
    rec.messages.push_back({Party::charlie, Party::bob, 1, detail::outcome_label(cm.outcome, 1)});
    rec.sender_bits = 1;
    rec.controller_bits = 1;

    const PauliPair corr = correction_lookup(id, am.outcome, cm.outcome);
    rec.correction = corr;
    Statevector corrected = apply_local(cm.state, 1, to_unitary(corr[0]));
    rec.status = TrialStatus::success;
    rec.fidelity = subsystem_fidelity(corrected, {1}, target);
    rec.final_state = std::move(corrected);
    return rec;
}

// One trial over two channels (qubits A1 B1 C1 A2 B2 C2). The sender
// measures (A1, A2) jointly; the controller measures C1 and C2 in their own
// tau bases and reports both outcomes in one 2-bit message; corrections act
// on B1 and B2. With sender_compact (arbitrary class only) the sender's
// broadcast shrinks to yes/no, which is enough because only one of her
// outcomes is recoverable.
inline TrialRecord run_two(const TwoTarget& t, const ChannelParams& ch1, const ChannelParams& ch2,
                           bool cooperate, bool sender_compact, RandomSource& rng) {
    const ProtocolId id = protocol_for(t.cls(), 2);
    if (sender_compact && id != ProtocolId::two_arbitrary)
        throw std::invalid_argument("sender_compact applies only to the two-qubit arbitrary protocol");
    const Statevector target = target_state(t);
    TrialRecord rec(id, t, ch1, ch2);

    MeasureResult am = measure(double_channel(ch1, ch2), {0, 3}, alice_basis(t), rng);
    rec.alice_outcome = am.outcome;

    const auto alice_message = [&](bool recoverable) -> PartyMessage {
        if (sender_compact) return {Party::alice, Party::bob, 1, recoverable ? "yes" : "no"};
        return {Party::alice, Party::bob, 2, detail::outcome_label(am.outcome, 2)};
    };

    if (!correctable_outcome(id, am.outcome)) {
        rec.status = TrialStatus::failure_uncorrectable;
        rec.messages.push_back(alice_message(false));
        rec.sender_bits = rec.messages.back().payload_bits;
        rec.fidelity = subsystem_fidelity(am.state, {1, 4}, target);
        rec.final_state = std::move(am.state);
        return rec;
    }

    MeasureResult cm1 = measure(am.state, {2}, tau_basis(ch1), rng);
    MeasureResult cm2 = measure(cm1.state, {5}, tau_basis(ch2), rng);
    const int cm = cm1.outcome * 2 + cm2.outcome;

    if (!cooperate) {
        rec.status = TrialStatus::blocked_by_controller;
        rec.fidelity = subsystem_fidelity(cm2.state, {1, 4}, target);
        rec.final_state = std::move(cm2.state);
        return rec;
    }

    rec.charlie_outcome = cm;
    rec.messages.push_back(alice_message(true));
    rec.messages.push_back({Party::charlie, Party::bob, 2, detail::outcome_label(cm, 2)});
    rec.sender_bits = rec.messages.front().payload_bits;
    rec.controller_bits = 2;

    const PauliPair corr = correction_lookup(id, am.outcome, cm);
    rec.correction = corr;
    Statevector corrected = apply_local(cm2.state, 1, to_unitary(corr[0]));
    corrected = apply_local(corrected, 4, to_unitary(corr[1]));
    rec.status = TrialStatus::success;
    rec.fidelity = subsystem_fidelity(corrected, {1, 4}, target);
    rec.final_state = std::move(corrected);
    return rec;
}

}  // namespace crsp
