#pragma once

#include "ccsim/ids.hpp"
#include "ccsim/rational.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace ccsim {

/// The payment-protocol message algebra. The time-bounded protocol uses
/// Guarantee(d) / Promise(a) / Money / Receipt / Ready; the eventually
/// terminating protocol uses the bare G/P tags, Money, the two certificate
/// kinds and the TM proposals. Vote is the signed validator value exchanged
/// inside the distributed transaction manager.
enum class MsgType : std::uint8_t {
    Guarantee,      // G(d)
    Promise,        // P(a)
    Money,          // $
    Receipt,        // chi, signed by the paid customer
    Ready,          // "we are ready" set-up signal
    GuaranteeTag,   // G (no payload)
    PromiseTag,     // P (no payload)
    CommitCert,     // chi_c
    AbortCert,      // chi_a
    ProposeCommit,  // commit proposal to the TM
    ProposeAbort,   // abort proposal to the TM
    Vote,           // sigma_k(v)
};

std::string msg_type_str(MsgType t);

/// A binary value signed by one validator. The tag is idealized: the engine
/// mints one only on behalf of the named validator for the named payment
/// instance, so it cannot be forged, only copied.
struct SignedValue {
    int validator = 0;
    int value = 0;  // 0 = abort, 1 = commit
    std::uint64_t instance = 0;

    friend auto operator<=>(const SignedValue&, const SignedValue&) = default;
};

/// Decision value plus supporting signatures. Valid iff more than f distinct
/// validators signed exactly the decision value (see verify_certificate).
struct Certificate {
    int decision = 0;
    std::vector<SignedValue> sigs;  // kept sorted by validator for canonical form

    void normalize() { std::sort(sigs.begin(), sigs.end()); }

    friend auto operator<=>(const Certificate&, const Certificate&) = default;
};

/// True iff the certificate carries at least f+1 signatures from pairwise
/// distinct validators, all of them over (cert.decision, instance).
bool verify_certificate(const Certificate& cert, int f, std::uint64_t instance);

struct Message {
    MsgType type = MsgType::Money;
    Rational amount;           // Guarantee / Promise payload
    ParticipantId issuer;      // Receipt: who signed it
    Certificate cert;          // CommitCert / AbortCert payload
    SignedValue vote;          // Vote payload
    bool forward_held = false; // template marker: resolve payload from the
                               // sender's possession of this message type

    friend bool operator==(const Message&, const Message&) = default;

    static Message guarantee(Rational d) { return {MsgType::Guarantee, std::move(d), {}, {}, {}, false}; }
    static Message promise(Rational a) { return {MsgType::Promise, std::move(a), {}, {}, {}, false}; }
    static Message money() { return {MsgType::Money, {}, {}, {}, {}, false}; }
    static Message receipt(ParticipantId issuer) { return {MsgType::Receipt, {}, issuer, {}, {}, false}; }
    static Message ready() { return {MsgType::Ready, {}, {}, {}, {}, false}; }
    static Message g_tag() { return {MsgType::GuaranteeTag, {}, {}, {}, {}, false}; }
    static Message p_tag() { return {MsgType::PromiseTag, {}, {}, {}, {}, false}; }
    static Message commit_cert(Certificate c) { return {MsgType::CommitCert, {}, {}, std::move(c), {}, false}; }
    static Message abort_cert(Certificate c) { return {MsgType::AbortCert, {}, {}, std::move(c), {}, false}; }
    static Message propose_commit() { return {MsgType::ProposeCommit, {}, {}, {}, {}, false}; }
    static Message propose_abort() { return {MsgType::ProposeAbort, {}, {}, {}, {}, false}; }
    static Message vote_of(SignedValue v) { return {MsgType::Vote, {}, {}, {}, v, false}; }

    /// Template that forwards whatever message of this type the sender holds.
    static Message forward(MsgType t) {
        Message m;
        m.type = t;
        m.forward_held = true;
        return m;
    }

    bool is_certificate() const {
        return type == MsgType::Receipt || type == MsgType::CommitCert || type == MsgType::AbortCert;
    }
    bool is_tm_proposal() const { return type == MsgType::ProposeCommit || type == MsgType::ProposeAbort; }

    /// Canonical single-line JSON rendering (stable field order).
    std::string json() const;
};

std::string certificate_json(const Certificate& c);

}  // namespace ccsim
