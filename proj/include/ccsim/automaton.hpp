#pragma once

#include "ccsim/ids.hpp"
#include "ccsim/message.hpp"
#include "ccsim/rational.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace ccsim {

using StateId = std::string;

enum class StateType : std::uint8_t { Input, Output, Termination };

/// Output states carry a strict upper bound on how long the automaton may
/// stay in them; grey states use the reaction constant, the lone black state
/// (the payer's money send) is unbounded.
struct StateKind {
    StateType type = StateType::Input;
    bool infinite_timeout = false;
    Rational timeout;  // meaningful for finite output states only

    static StateKind input() { return {StateType::Input, false, {}}; }
    static StateKind output(Rational to) { return {StateType::Output, false, std::move(to)}; }
    static StateKind output_infinite() { return {StateType::Output, true, {}}; }
    static StateKind termination() { return {StateType::Termination, false, {}}; }
};

/// Guard of a time-out transition: local now >= base + offset, where base is
/// a stored clock variable (absent means zero, i.e. an absolute deadline).
struct TimeGuard {
    std::optional<std::string> var;
    Rational offset;

    std::string str() const {
        if (var)
            return "now >= " + *var + " + " + rat_pretty(offset);
        return "now >= " + rat_pretty(offset);
    }
};

struct ReceiveLabel {
    ParticipantId from;
    MsgType pattern;  // payloads bind, they do not filter
};

struct SendElem {
    ParticipantId to;
    Message msg;
};

struct SendSetLabel {
    std::vector<SendElem> sends;
};

struct TimeoutLabel {
    TimeGuard guard;
};

using TransitionLabel = std::variant<ReceiveLabel, SendSetLabel, TimeoutLabel>;

struct Transition {
    StateId source;
    TransitionLabel label;
    StateId target;
    std::vector<std::string> assignments;  // each records "var := now" at fire time
};

struct TimedAutomaton {
    ParticipantId id;
    std::map<StateId, StateKind> states;
    StateId initial;
    std::vector<Transition> transitions;

    const StateKind& kind_of(const StateId& s) const;
    std::vector<const Transition*> outgoing(const StateId& s) const;
};

/// Violations are data, not faults: an empty report means every structural
/// invariant holds.
struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
    std::string joined() const;
};

ValidationReport validate_automaton(const TimedAutomaton& a);

struct AutomatonConfiguration {
    StateId current;
    std::map<std::string, Rational> vars;
    Rational now;
};

/// Raised when an operation is invoked outside its stated precondition.
struct ContractViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when a transition is applied at a time earlier than local now.
struct MonotonicityFault : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PendingMessage {
    ParticipantId from;
    Message msg;
    std::uint64_t uid = 0;  // engine bookkeeping; ignored by the semantics
};

/// Evaluates a guard against a configuration. A guard over an unassigned
/// variable is a contract violation (protocol builders assign on every path).
bool guard_holds(const TimeGuard& g, const AutomatonConfiguration& cfg, const Rational& at);

/// Local time at which the guard becomes true, if it is not already.
Rational guard_threshold(const TimeGuard& g, const AutomatonConfiguration& cfg);

/// The transitions of an input state enabled at cfg's local now against the
/// given pending messages, in declaration order. Querying a non-input state
/// is a contract violation.
std::vector<const Transition*> enabled_transitions(const TimedAutomaton& a,
                                                   const AutomatonConfiguration& cfg,
                                                   const std::vector<PendingMessage>& pending);

/// Applies one transition at fire_time: advances the state, stores fire_time
/// into each assigned variable, and moves local now forward.
AutomatonConfiguration apply_transition(const AutomatonConfiguration& cfg, const Transition& t,
                                        const Rational& fire_time);

}  // namespace ccsim
