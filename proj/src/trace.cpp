#include "ccsim/trace.hpp"

namespace ccsim {

static const char* action_kind_str(ActionKind k) {
    switch (k) {
        case ActionKind::Send: return "send";
        case ActionKind::Receive: return "recv";
        case ActionKind::TimeoutFire: return "timeout";
    }
    return "?";
}

std::string run_status_str(RunStatus s) {
    switch (s) {
        case RunStatus::AllTerminated: return "all_terminated";
        case RunStatus::Quiescent: return "quiescent";
        case RunStatus::Truncated: return "truncated";
    }
    return "?";
}

std::string TraceEvent::json() const {
    std::string out = "{\"g\":\"" + rat_str(t_global) + "\",\"l\":\"" + rat_str(t_local) +
                      "\",\"p\":\"" + actor.str() + "\",\"k\":\"" + action_kind_str(kind) + "\"";
    if (kind == ActionKind::TimeoutFire) {
        out += ",\"guard\":\"" + guard + "\"";
    } else {
        out += ",\"o\":\"" + other.str() + "\",\"m\":" + msg.json() +
               ",\"uid\":" + std::to_string(msg_uid);
    }
    out += ",\"src\":\"" + from_state + "\",\"dst\":\"" + to_state + "\"}";
    return out;
}

std::string Trace::to_jsonl() const {
    std::string out;
    out.reserve(events.size() * 120 + 1024);
    for (const auto& e : events) {
        out += e.json();
        out += "\n";
    }
    for (const auto& [pid, fin] : finals) {
        out += "{\"k\":\"final\",\"p\":\"" + pid.str() + "\",\"state\":\"" + fin.state +
               "\",\"balance\":" + std::to_string(fin.balance) +
               ",\"terminated\":" + (fin.terminated ? "true" : "false") +
               ",\"crashed\":" + (fin.crashed ? "true" : "false") + "}\n";
    }
    out += "{\"k\":\"summary\",\"status\":\"" + run_status_str(status) +
           "\",\"truncated\":" + (truncated() ? "true" : "false") +
           ",\"tokens\":" + std::to_string(total_tokens) + ",\"seed\":" + std::to_string(seed) +
           "}\n";
    return out;
}

}  // namespace ccsim
