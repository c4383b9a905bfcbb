#pragma once

#include "ccsim/automaton.hpp"
#include "ccsim/behavior.hpp"
#include "ccsim/netmodel.hpp"
#include "ccsim/tm.hpp"
#include "ccsim/trace.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace ccsim {

/// When within an output window the send elements fire. Correctness must not
/// depend on the choice; sweeps exercise all three.
enum class EmissionPolicy : std::uint8_t { Immediate, Uniform, Latest };

std::string emission_policy_str(EmissionPolicy p);

struct NetParticipant {
    TimedAutomaton automaton;
    Behavior behavior;
};

struct Network {
    std::vector<NetParticipant> members;
    std::optional<TmSetup> tm;
    std::map<ParticipantId, int> endowments;
};

struct RunConfig {
    NetworkModel model = Synchronous{10, 1};
    std::map<ParticipantId, ParticipantClock> clocks;  // absent entries run at rate 1, offset 0
    Rational horizon = 100000;
    std::uint64_t seed = 0;
    EmissionPolicy policy = EmissionPolicy::Uniform;
    /// Global instants at which infinite-timeout output states release their
    /// sends (per participant). Entries are maxed with the entry instant; a
    /// missing entry fires just after entry.
    std::map<ParticipantId, Rational> infinite_fire_at;
    Rational reaction_bound = 1;  // the protocols' grey-state constant
    std::uint64_t instance = 1;   // payment instance, mixed into signature tags
};

/// Executes the network until every automaton terminates, nothing can ever
/// fire again, or the horizon cuts execution short. Deterministic: identical
/// inputs give byte-identical traces.
Trace run(const Network& net, const RunConfig& rc);

}  // namespace ccsim
