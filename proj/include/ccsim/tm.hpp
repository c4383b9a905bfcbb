#pragma once

#include "ccsim/behavior.hpp"
#include "ccsim/ids.hpp"
#include "ccsim/message.hpp"
#include "ccsim/rational.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

namespace ccsim {

enum class TmKind : std::uint8_t { Centralized, OracleDistributed, BftTm };

/// Transaction-manager configuration. Distributed kinds require f < m/3.
struct TmSetup {
    TmKind kind = TmKind::Centralized;
    int m = 1;
    int f = 0;
    std::map<int, Behavior> validator_behaviors;  // defaults to honest
    int bbc_adversary_choice = 0;                 // decision when honest proposals are mixed
    bool rb_adversary_deliver = true;             // faulty-sender branch: uniform vs none

    void validate() const;
    Behavior validator_behavior(int k) const {
        auto it = validator_behaviors.find(k);
        return it == validator_behaviors.end() ? Behavior::honest() : it->second;
    }
};

/// Definition-style binary consensus oracle: if every honest proposal equals
/// v the decision is v; on mixed proposals the adversary picks.
int bbc_decide(const std::map<int, int>& honest_proposals, int adversary_choice);

/// Bracha-style filtering. `attempted` holds what the sender tried to send
/// each recipient. An honest sender reaches everybody as attempted. A faulty
/// sender either reaches every correct recipient with one adversary-picked
/// value, or reaches nobody; two correct recipients never accept different
/// values.
std::map<ParticipantId, Message> reliable_broadcast(const ParticipantId& sender,
                                                    const std::map<ParticipantId, Message>& attempted,
                                                    bool sender_faulty, bool adversary_deliver,
                                                    std::uint64_t adversary_pick);

/// Centralized transaction manager, modeled as a one-validator universe with
/// f = 0 so its certificates verify through the common path.
struct CentralTmState {
    std::optional<int> decision;
    Certificate cert;
};

/// Processes one proposal; returns the certificate emissions it triggers.
/// First effective proposal (abort from any customer, commit only from the
/// paid customer) decides and broadcasts to every customer; later proposers
/// receive a copy. A commit from anyone else cannot decide.
std::vector<std::pair<ParticipantId, Certificate>> tm_handle_proposal(
    CentralTmState& st, const ParticipantId& from, int value, int n_customers_max_index,
    std::uint64_t instance);

/// State of one validator running the certificate-assembly wrapper around
/// the consensus black box.
struct ValidatorState {
    bool proposed = false;
    std::optional<int> decided;
    std::set<int> vote_signers;  // distinct signers of the decided value seen
    std::optional<Certificate> cert;
    std::vector<ParticipantId> pending_repliers;  // proposers awaiting the cert
};

/// Everything the distributed TM kinds share: proposal registration, the
/// consensus oracle trigger, vote collection and certificate assembly.
/// The engine owns scheduling; this type owns the protocol bookkeeping.
class TmCore {
public:
    TmCore(TmSetup setup, int n_customers_max_index, std::uint64_t instance);

    const TmSetup& setup() const { return setup_; }
    std::uint64_t instance() const { return instance_; }

    bool is_honest(int k) const { return setup_.validator_behavior(k).kind == BehaviorKind::Honest; }

    /// A proposal value reached validator k. Returns true when this makes
    /// the consensus oracle's precondition (every honest validator has
    /// proposed) freshly satisfied — the engine then schedules decide events.
    bool on_proposal_at_validator(int k, const ParticipantId& from, int value);

    bool all_honest_proposed() const;
    int oracle_decision() const;  // valid once all honest proposals are in

    ValidatorState& validator(int k) { return vals_[k]; }
    const ValidatorState& validator(int k) const { return vals_.at(k); }

    /// Records a vote at validator k; returns true when the quorum (> f
    /// distinct signers of the decided value) is freshly reached and the
    /// certificate was assembled.
    bool on_vote_at_validator(int k, const SignedValue& v);

    SignedValue sign(int k, int value) const { return SignedValue{k, value, instance_}; }

private:
    TmSetup setup_;
    int max_customer_;
    std::uint64_t instance_;
    std::map<int, int> honest_proposals_;
    std::vector<ValidatorState> vals_;
    std::map<int, std::vector<SignedValue>> votes_;  // per validator, of its decided value
};

}  // namespace ccsim
