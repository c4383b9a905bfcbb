#include "ccsim/message.hpp"

#include <set>

namespace ccsim {

std::string msg_type_str(MsgType t) {
    switch (t) {
        case MsgType::Guarantee: return "G";
        case MsgType::Promise: return "P";
        case MsgType::Money: return "money";
        case MsgType::Receipt: return "receipt";
        case MsgType::Ready: return "ready";
        case MsgType::GuaranteeTag: return "Gt";
        case MsgType::PromiseTag: return "Pt";
        case MsgType::CommitCert: return "commit_cert";
        case MsgType::AbortCert: return "abort_cert";
        case MsgType::ProposeCommit: return "propose_commit";
        case MsgType::ProposeAbort: return "propose_abort";
        case MsgType::Vote: return "vote";
    }
    return "?";
}

bool verify_certificate(const Certificate& cert, int f, std::uint64_t instance) {
    std::set<int> signers;
    for (const auto& s : cert.sigs) {
        if (s.value != cert.decision)
            return false;
        if (s.instance != instance)
            return false;
        signers.insert(s.validator);
    }
    return static_cast<int>(signers.size()) >= f + 1;
}

std::string certificate_json(const Certificate& c) {
    std::string out = "{\"v\":" + std::to_string(c.decision) + ",\"sigs\":[";
    for (size_t i = 0; i < c.sigs.size(); ++i) {
        if (i)
            out += ",";
        out += "[" + std::to_string(c.sigs[i].validator) + "," + std::to_string(c.sigs[i].value) + "]";
    }
    out += "]}";
    return out;
}

std::string Message::json() const {
    std::string out = "{\"t\":\"" + msg_type_str(type) + "\"";
    switch (type) {
        case MsgType::Guarantee:
            out += ",\"d\":\"" + rat_str(amount) + "\"";
            break;
        case MsgType::Promise:
            out += ",\"a\":\"" + rat_str(amount) + "\"";
            break;
        case MsgType::Receipt:
            out += ",\"issuer\":\"" + issuer.str() + "\"";
            break;
        case MsgType::CommitCert:
        case MsgType::AbortCert:
            out += ",\"cert\":" + certificate_json(cert);
            break;
        case MsgType::Vote:
            out += ",\"k\":" + std::to_string(vote.validator) + ",\"v\":" + std::to_string(vote.value);
            break;
        default:
            break;
    }
    out += "}";
    return out;
}

}  // namespace ccsim
