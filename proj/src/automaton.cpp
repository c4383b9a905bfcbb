#include "ccsim/automaton.hpp"

#include <set>

namespace ccsim {

const StateKind& TimedAutomaton::kind_of(const StateId& s) const {
    auto it = states.find(s);
    if (it == states.end())
        throw ContractViolation(id.str() + ": unknown state '" + s + "'");
    return it->second;
}

std::vector<const Transition*> TimedAutomaton::outgoing(const StateId& s) const {
    std::vector<const Transition*> out;
    for (const auto& t : transitions)
        if (t.source == s)
            out.push_back(&t);
    return out;
}

std::string ValidationReport::joined() const {
    std::string s;
    for (const auto& v : violations) {
        if (!s.empty())
            s += "; ";
        s += v;
    }
    return s;
}

ValidationReport validate_automaton(const TimedAutomaton& a) {
    ValidationReport rep;
    auto fail = [&](const std::string& m) { rep.violations.push_back(a.id.str() + ": " + m); };

    if (!a.states.count(a.initial))
        fail("initial state '" + a.initial + "' not declared");

    // Collect all variables assigned anywhere; guards may only read those.
    std::set<std::string> assigned;
    for (const auto& t : a.transitions)
        for (const auto& v : t.assignments)
            assigned.insert(v);

    for (const auto& [sid, kind] : a.states) {
        auto out = a.outgoing(sid);
        switch (kind.type) {
            case StateType::Termination:
                if (!out.empty())
                    fail("termination state '" + sid + "' has outgoing transitions");
                break;
            case StateType::Output:
                if (out.size() != 1)
                    fail("output state '" + sid + "' has " + std::to_string(out.size()) +
                         " outgoing transitions, wants exactly 1");
                else if (!std::holds_alternative<SendSetLabel>(out[0]->label))
                    fail("output state '" + sid + "' transition is not a send");
                if (!kind.infinite_timeout && !(kind.timeout > 0))
                    fail("output state '" + sid + "' timeout must be strictly positive");
                break;
            case StateType::Input:
                for (const Transition* t : out)
                    if (std::holds_alternative<SendSetLabel>(t->label))
                        fail("input state '" + sid + "' has a send transition");
                break;
        }
    }

    for (const auto& t : a.transitions) {
        if (!a.states.count(t.source))
            fail("transition from unknown state '" + t.source + "'");
        if (!a.states.count(t.target))
            fail("transition to unknown state '" + t.target + "'");
        if (const auto* ss = std::get_if<SendSetLabel>(&t.label)) {
            if (ss->sends.empty())
                fail("empty send set on transition '" + t.source + "' -> '" + t.target + "'");
        }
        if (const auto* to = std::get_if<TimeoutLabel>(&t.label)) {
            if (to->guard.var && !assigned.count(*to->guard.var))
                fail("guard on '" + t.source + "' reads variable '" + *to->guard.var +
                     "' that no transition assigns");
        }
    }
    return rep;
}

bool guard_holds(const TimeGuard& g, const AutomatonConfiguration& cfg, const Rational& at) {
    return at >= guard_threshold(g, cfg);
}

Rational guard_threshold(const TimeGuard& g, const AutomatonConfiguration& cfg) {
    if (!g.var)
        return g.offset;
    auto it = cfg.vars.find(*g.var);
    if (it == cfg.vars.end())
        throw ContractViolation("guard reads unassigned variable '" + *g.var + "'");
    return it->second + g.offset;
}

std::vector<const Transition*> enabled_transitions(const TimedAutomaton& a,
                                                   const AutomatonConfiguration& cfg,
                                                   const std::vector<PendingMessage>& pending) {
    const StateKind& kind = a.kind_of(cfg.current);
    if (kind.type != StateType::Input)
        throw ContractViolation(a.id.str() + ": enabled_transitions queried on non-input state '" +
                                cfg.current + "'");

    std::vector<const Transition*> out;
    for (const auto& t : a.transitions) {
        if (t.source != cfg.current)
            continue;
        if (const auto* rx = std::get_if<ReceiveLabel>(&t.label)) {
            for (const auto& p : pending) {
                if (p.from == rx->from && p.msg.type == rx->pattern) {
                    out.push_back(&t);
                    break;
                }
            }
        } else if (const auto* to = std::get_if<TimeoutLabel>(&t.label)) {
            if (guard_holds(to->guard, cfg, cfg.now))
                out.push_back(&t);
        }
    }
    return out;
}

AutomatonConfiguration apply_transition(const AutomatonConfiguration& cfg, const Transition& t,
                                        const Rational& fire_time) {
    if (fire_time < cfg.now)
        throw MonotonicityFault("transition fired at " + rat_pretty(fire_time) +
                                " before local now " + rat_pretty(cfg.now));
    AutomatonConfiguration next = cfg;
    next.current = t.target;
    next.now = fire_time;
    for (const auto& v : t.assignments)
        next.vars[v] = fire_time;
    return next;
}

}  // namespace ccsim
