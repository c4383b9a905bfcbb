#pragma once

#include "ccsim/automaton.hpp"
#include "ccsim/ids.hpp"
#include "ccsim/message.hpp"
#include "ccsim/rational.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ccsim {

enum class ActionKind : std::uint8_t { Send, Receive, TimeoutFire };

/// One timestamped action act@p. Sends carry a fresh message uid; the
/// matching receive echoes it, which pins down the send/receive pairing for
/// conservation and causal-order checks.
struct TraceEvent {
    Rational t_global;
    Rational t_local;
    ParticipantId actor;
    ActionKind kind = ActionKind::Send;
    ParticipantId other;  // recipient / sender; for timeouts, the actor itself
    Message msg;          // unused for timeouts
    std::uint64_t msg_uid = 0;
    StateId from_state;
    StateId to_state;  // state reached once the owning transition completes
    std::string guard;  // printable guard for timeout fires

    std::string json() const;
};

enum class RunStatus : std::uint8_t {
    AllTerminated,  // every automaton reached a termination state
    Quiescent,      // no event can ever fire again, but someone is stuck
    Truncated,      // horizon reached with events still pending
};

std::string run_status_str(RunStatus s);

struct FinalParticipantState {
    StateId state;
    int balance = 0;
    bool terminated = false;
    bool crashed = false;
};

struct Trace {
    std::vector<TraceEvent> events;
    RunStatus status = RunStatus::AllTerminated;
    std::map<ParticipantId, FinalParticipantState> finals;
    int total_tokens = 0;
    std::uint64_t seed = 0;

    /// The spec-level truncation flag: anything short of full termination.
    bool truncated() const { return status != RunStatus::AllTerminated; }

    /// Line-oriented JSON, one event per line, finals and summary trailing.
    /// Byte-exact across platforms: rationals are rendered canonically and
    /// field order is fixed.
    std::string to_jsonl() const;
};

}  // namespace ccsim
