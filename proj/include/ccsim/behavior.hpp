#pragma once

#include "ccsim/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace ccsim {

/// What the targeted-delay wrapper slows down.
enum class DelayMatcher : std::uint8_t {
    AllMessages,
    CertificatesOnly,
    FromFirstCertificateOnward,  // the certificate send and everything after it
};

enum class ByzantineStrategy : std::uint8_t {
    WrongValueSign,  // signs and spreads the opposite of the decided value
    Silent,          // never signs, never answers
    EquivocateSign,  // conflicting signatures, filtered by reliable broadcast
};

enum class BehaviorKind : std::uint8_t {
    Honest,
    Crash,                // nothing fires at or after a local instant
    WithholdCertificate,  // once a certificate is held or mintable, send nothing further
    WithholdMoney,        // never emit a money send
    DelayOutgoing,        // engine-level targeted delay on outgoing messages
    EquivocateProposal,   // different TM proposals to different validators
    ByzantineValidator,
};

/// Per-participant deviation strategy. Exactly one per participant per run;
/// the catalogue covers the behaviors the safety arguments quantify over.
struct Behavior {
    BehaviorKind kind = BehaviorKind::Honest;
    Rational crash_at;                            // Crash
    DelayMatcher matcher = DelayMatcher::AllMessages;  // DelayOutgoing
    Rational extra_delay;                         // DelayOutgoing
    ByzantineStrategy strategy = ByzantineStrategy::WrongValueSign;

    static Behavior honest() { return {}; }
    static Behavior crash(Rational at) {
        Behavior b;
        b.kind = BehaviorKind::Crash;
        b.crash_at = std::move(at);
        return b;
    }
    static Behavior withhold_certificate() {
        Behavior b;
        b.kind = BehaviorKind::WithholdCertificate;
        return b;
    }
    static Behavior withhold_money() {
        Behavior b;
        b.kind = BehaviorKind::WithholdMoney;
        return b;
    }
    static Behavior delay_outgoing(DelayMatcher m, Rational extra) {
        Behavior b;
        b.kind = BehaviorKind::DelayOutgoing;
        b.matcher = m;
        b.extra_delay = std::move(extra);
        return b;
    }
    static Behavior equivocate_proposal() {
        Behavior b;
        b.kind = BehaviorKind::EquivocateProposal;
        return b;
    }
    static Behavior byzantine_validator(ByzantineStrategy s) {
        Behavior b;
        b.kind = BehaviorKind::ByzantineValidator;
        b.strategy = s;
        return b;
    }

    /// Whether the participant counts as following the protocol. Targeted
    /// delay is the network adversary's doing, so it does not break abidance.
    bool abides() const {
        return kind == BehaviorKind::Honest || kind == BehaviorKind::DelayOutgoing;
    }

    std::string kind_str() const;
};

}  // namespace ccsim
