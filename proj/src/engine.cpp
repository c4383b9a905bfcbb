#include "ccsim/engine.hpp"

#include "ccsim/hashrand.hpp"

#include <algorithm>
#include <queue>
#include <set>

namespace ccsim {

std::string emission_policy_str(EmissionPolicy p) {
    switch (p) {
        case EmissionPolicy::Immediate: return "immediate";
        case EmissionPolicy::Uniform: return "uniform";
        case EmissionPolicy::Latest: return "latest";
    }
    return "?";
}

namespace {

enum class EvKind : std::uint8_t { Delivery, Emission, TimeoutCheck, BbcDecide };

struct Event {
    Rational t;
    std::uint64_t seq = 0;
    EvKind kind = EvKind::Delivery;
    ParticipantId who;   // recipient / emitter / timed-out participant / validator owner
    ParticipantId from;  // physical sender (deliveries)
    Message msg;
    std::uint64_t uid = 0;
    std::size_t transition_idx = 0;  // emissions
    std::size_t elem_idx = 0;
    Rational fire_local;
    bool is_last = false;
    std::uint64_t epoch = 0;
    int validator = 0;  // BbcDecide
};

struct EventAfter {
    bool operator()(const Event& a, const Event& b) const {
        if (a.t != b.t)
            return a.t > b.t;
        return a.seq > b.seq;
    }
};

struct PState {
    const TimedAutomaton* a = nullptr;
    Behavior behavior;
    ParticipantClock clock;
    AutomatonConfiguration cfg;
    bool terminated = false;
    bool frozen = false;        // crash tripped
    bool gagged = false;        // certificate withheld; no further sends
    bool delay_tripped = false; // FromFirstCertificateOnward matcher armed
    std::vector<PendingMessage> buffer;  // arrivals during output states
    std::map<MsgType, Message> held;     // consumed messages, for forwarding
    bool in_output = false;
    std::size_t output_transition = 0;
    std::uint64_t epoch = 0;
};

struct VoteAssembly {
    std::map<int, std::set<int>> signers;          // value -> distinct validators
    std::map<int, std::vector<SignedValue>> sigs;  // value -> collected votes
};

class Engine {
public:
    Engine(const Network& net, const RunConfig& rc) : net_(net), rc_(rc), rand_(rc.seed) {
        validate_model(rc_.model);
        validate_clocks(rc_.model, rc_.clocks);
        for (const auto& np : net_.members) {
            auto rep = validate_automaton(np.automaton);
            if (!rep.ok())
                throw ConfigError("invalid automaton: " + rep.joined());
            PState ps;
            ps.a = &np.automaton;
            ps.behavior = np.behavior;
            ps.clock = clock_for(np.automaton.id);
            ps.cfg.current = np.automaton.initial;
            parts_.emplace(np.automaton.id, std::move(ps));
            if (np.automaton.id.role == Role::Customer)
                customers_.push_back(np.automaton.id);
        }
        std::sort(customers_.begin(), customers_.end());
        for (const auto& [pid, amount] : net_.endowments) {
            balances_[pid] = amount;
            trace_.total_tokens += amount;
        }
        if (net_.tm) {
            int max_cust = customers_.empty() ? 0 : customers_.back().index;
            tm_core_.emplace(*net_.tm, max_cust, rc_.instance);
        }
        trace_.seed = rc_.seed;
    }

    Trace run() {
        // Everyone starts at global time 0; local clocks start at their offsets.
        for (auto& [pid, ps] : parts_) {
            ps.cfg.now = ps.clock.local_at(0);
            enter_state(pid, ps.cfg.now, Rational(0));
        }
        bool cut = false;
        while (!queue_.empty()) {
            Event ev = queue_.top();
            if (ev.t > rc_.horizon) {
                cut = true;
                break;
            }
            queue_.pop();
            dispatch(ev);
        }
        finish(cut);
        return std::move(trace_);
    }

private:
    ParticipantClock clock_for(const ParticipantId& pid) const {
        auto it = rc_.clocks.find(pid);
        return it == rc_.clocks.end() ? ParticipantClock{} : it->second;
    }

    PState& part(const ParticipantId& pid) { return parts_.at(pid); }

    void push(Event ev) {
        ev.seq = seq_++;
        queue_.push(std::move(ev));
    }

    std::uint64_t pair_seq(const ParticipantId& from, const ParticipantId& to) {
        return ++pair_seq_[{from, to}];
    }

    // ---- randomness: every draw is keyed by event identity, never by order

    Rational net_frac(const ParticipantId& from, const ParticipantId& to, std::uint64_t seq) {
        auto k = rand_.key();
        k.mix("net").mix(from.str()).mix(to.str()).mix(seq);
        return HashRand::unit_half_open(k.value());
    }

    Rational emit_frac(const ParticipantId& pid, const StateId& st, const Rational& entry,
                       std::size_t elem) {
        auto k = rand_.key();
        k.mix("emit").mix(pid.str()).mix(st).mix(entry).mix(static_cast<std::uint64_t>(elem));
        switch (rc_.policy) {
            case EmissionPolicy::Immediate:
                return Rational(1, HashRand::kGrain);
            case EmissionPolicy::Latest:
                return Rational(HashRand::kGrain - 1, HashRand::kGrain);
            case EmissionPolicy::Uniform:
                return HashRand::unit_open(k.value());
        }
        return Rational(1, 2);
    }

    std::size_t choice(const ParticipantId& pid, const Rational& at, std::size_t n) {
        if (n <= 1)
            return 0;
        auto k = rand_.key();
        k.mix("choice").mix(pid.str()).mix(at).mix(static_cast<std::uint64_t>(n));
        return static_cast<std::size_t>(HashRand::below(k.value(), n));
    }

    Rational bbc_latency_frac(int validator) {
        auto k = rand_.key();
        k.mix("bbc").mix(static_cast<std::uint64_t>(validator)).mix(rc_.instance);
        return HashRand::unit_half_open(k.value());
    }

    std::uint64_t rb_pick(const ParticipantId& sender, std::uint64_t seq) {
        auto k = rand_.key();
        k.mix("rbpick").mix(sender.str()).mix(seq);
        return k.value();
    }

    // ---- trace helpers

    void record_send(const ParticipantId& from, const ParticipantId& to, const Message& msg,
                     std::uint64_t uid, const Rational& g, const Rational& l, const StateId& src,
                     const StateId& dst) {
        TraceEvent ev;
        ev.t_global = g;
        ev.t_local = l;
        ev.actor = from;
        ev.kind = ActionKind::Send;
        ev.other = to;
        ev.msg = msg;
        ev.msg_uid = uid;
        ev.from_state = src;
        ev.to_state = dst;
        trace_.events.push_back(std::move(ev));
    }

    void record_receive(const ParticipantId& actor, const ParticipantId& from, const Message& msg,
                        std::uint64_t uid, const Rational& g, const Rational& l, const StateId& src,
                        const StateId& dst) {
        TraceEvent ev;
        ev.t_global = g;
        ev.t_local = l;
        ev.actor = actor;
        ev.kind = ActionKind::Receive;
        ev.other = from;
        ev.msg = msg;
        ev.msg_uid = uid;
        ev.from_state = src;
        ev.to_state = dst;
        trace_.events.push_back(std::move(ev));
    }

    void record_timeout(const ParticipantId& actor, const Rational& g, const Rational& l,
                        const StateId& src, const StateId& dst, const std::string& guard) {
        TraceEvent ev;
        ev.t_global = g;
        ev.t_local = l;
        ev.actor = actor;
        ev.kind = ActionKind::TimeoutFire;
        ev.other = actor;
        ev.from_state = src;
        ev.to_state = dst;
        ev.guard = guard;
        trace_.events.push_back(std::move(ev));
    }

    // ---- network

    bool crashed_at(const PState& ps, const Rational& local) const {
        return ps.behavior.kind == BehaviorKind::Crash && local >= ps.behavior.crash_at;
    }

    /// Sends msg over the wire: samples a delivery time (respecting the
    /// model's cap, targeted delays and per-channel FIFO) and enqueues it.
    void wire_send(const ParticipantId& from, const ParticipantId& to, Message msg,
                   const Rational& g_send, const Rational& extra_delay) {
        std::uint64_t seq = pair_seq(from, to);
        auto k = rand_.key();
        k.mix("uid").mix(from.str()).mix(to.str()).mix(seq);
        std::uint64_t uid = k.value() >> 1;  // keep it positive-friendly in JSON consumers

        Rational cap = delivery_cap(rc_.model, g_send);
        Rational delay = cap * net_frac(from, to, seq);
        if (extra_delay > 0)
            delay = rat_min(delay + extra_delay, cap);
        Rational g_arrive = g_send + delay;
        Rational& mark = fifo_mark_[{from, to}];
        if (g_arrive < mark)
            g_arrive = mark;
        mark = g_arrive;

        if (msg.type == MsgType::Money)
            balances_[from] -= 1;

        Event ev;
        ev.t = g_arrive;
        ev.kind = EvKind::Delivery;
        ev.who = to;
        ev.from = from;
        ev.msg = std::move(msg);
        ev.uid = uid;
        last_uid_ = uid;
        push(std::move(ev));
    }

    Rational targeted_extra(PState& ps, const Message& msg) {
        if (ps.behavior.kind != BehaviorKind::DelayOutgoing)
            return 0;
        switch (ps.behavior.matcher) {
            case DelayMatcher::AllMessages:
                return ps.behavior.extra_delay;
            case DelayMatcher::CertificatesOnly:
                return msg.is_certificate() ? ps.behavior.extra_delay : Rational(0);
            case DelayMatcher::FromFirstCertificateOnward:
                if (msg.is_certificate())
                    ps.delay_tripped = true;
                return ps.delay_tripped ? ps.behavior.extra_delay : Rational(0);
        }
        return 0;
    }

    // ---- state machine driving

    void enter_state(const ParticipantId& pid, Rational local_now, Rational global_now) {
        PState& ps = part(pid);
        while (true) {
            ps.epoch++;
            const StateKind& kind = ps.a->kind_of(ps.cfg.current);
            if (kind.type == StateType::Termination) {
                ps.terminated = true;
                ps.buffer.clear();
                return;
            }
            if (kind.type == StateType::Output) {
                schedule_output(pid, kind, local_now, global_now);
                return;
            }
            // Input state: offer buffered messages and guards at this instant.
            ps.cfg.now = local_now;
            auto enabled = enabled_transitions(*ps.a, ps.cfg, ps.buffer);
            if (enabled.empty()) {
                ps.buffer.clear();  // unmatched at the first input instant: lost
                schedule_timeout_check(pid, local_now);
                return;
            }
            const Transition* t = enabled[choice(pid, local_now, enabled.size())];
            fire_transition(pid, *t, local_now, global_now);
            if (ps.terminated || ps.frozen || ps.in_output)
                return;
        }
    }

    /// Fires a receive or timeout transition at its instant and advances the
    /// configuration. Send transitions never come through here.
    void fire_transition(const ParticipantId& pid, const Transition& t, const Rational& local_now,
                         const Rational& global_now) {
        PState& ps = part(pid);
        if (const auto* rx = std::get_if<ReceiveLabel>(&t.label)) {
            // Consume the first buffered message matching the label.
            auto it = std::find_if(ps.buffer.begin(), ps.buffer.end(), [&](const PendingMessage& p) {
                return p.from == rx->from && p.msg.type == rx->pattern;
            });
            if (it == ps.buffer.end())
                throw ContractViolation("receive fired without a matching message");
            Message consumed = it->msg;
            std::uint64_t rec_uid = it->uid;
            ps.buffer.erase(it);
            ps.held[consumed.type] = consumed;
            if (ps.behavior.kind == BehaviorKind::WithholdCertificate && consumed.is_certificate())
                ps.gagged = true;
            record_receive(pid, rx->from, consumed, rec_uid, global_now, local_now, t.source,
                           t.target);
        } else if (std::holds_alternative<TimeoutLabel>(t.label)) {
            const auto& g = std::get<TimeoutLabel>(t.label).guard;
            record_timeout(pid, global_now, local_now, t.source, t.target, g.str());
        }
        ps.cfg = apply_transition(ps.cfg, t, local_now);
    }

    void schedule_output(const ParticipantId& pid, const StateKind& kind, const Rational& local_now,
                         const Rational& global_now) {
        PState& ps = part(pid);
        ps.in_output = true;
        auto out = ps.a->outgoing(ps.cfg.current);
        // Validation guarantees exactly one outgoing send transition.
        const Transition* t = out[0];
        std::size_t tidx = static_cast<std::size_t>(t - ps.a->transitions.data());
        ps.output_transition = tidx;
        const auto& sends = std::get<SendSetLabel>(t->label).sends;

        std::vector<Rational> locals(sends.size());
        if (kind.infinite_timeout) {
            // The unbounded state releases at a configured global instant,
            // or just after entry when none is configured.
            Rational step = rc_.reaction_bound / HashRand::kGrain;
            Rational fire_local = local_now + step;
            auto it = rc_.infinite_fire_at.find(pid);
            if (it != rc_.infinite_fire_at.end())
                fire_local = rat_max(fire_local, ps.clock.local_at(it->second));
            for (auto& l : locals)
                l = fire_local;
        } else {
            for (std::size_t i = 0; i < sends.size(); ++i)
                locals[i] = local_now + kind.timeout * emit_frac(pid, ps.cfg.current, local_now, i);
        }
        std::size_t last = 0;
        for (std::size_t i = 1; i < locals.size(); ++i)
            if (locals[i] >= locals[last])
                last = i;

        for (std::size_t i = 0; i < sends.size(); ++i) {
            Event ev;
            ev.t = ps.clock.global_at(locals[i]);
            ev.kind = EvKind::Emission;
            ev.who = pid;
            ev.transition_idx = tidx;
            ev.elem_idx = i;
            ev.fire_local = locals[i];
            ev.is_last = (i == last);
            ev.epoch = ps.epoch;
            push(std::move(ev));
        }
    }

    void schedule_timeout_check(const ParticipantId& pid, const Rational& local_now) {
        PState& ps = part(pid);
        std::optional<Rational> next_local;
        for (const auto& t : ps.a->transitions) {
            if (t.source != ps.cfg.current)
                continue;
            if (const auto* to = std::get_if<TimeoutLabel>(&t.label)) {
                Rational thr = guard_threshold(to->guard, ps.cfg);
                if (thr > local_now && (!next_local || thr < *next_local))
                    next_local = thr;
            }
        }
        if (!next_local)
            return;
        Event ev;
        ev.t = ps.clock.global_at(*next_local);
        ev.kind = EvKind::TimeoutCheck;
        ev.who = pid;
        ev.fire_local = *next_local;
        ev.epoch = ps.epoch;
        push(std::move(ev));
    }

    // ---- event dispatch

    void dispatch(const Event& ev) {
        switch (ev.kind) {
            case EvKind::Delivery: on_delivery(ev); break;
            case EvKind::Emission: on_emission(ev); break;
            case EvKind::TimeoutCheck: on_timeout_check(ev); break;
            case EvKind::BbcDecide: on_bbc_decide(ev); break;
        }
    }

    void on_delivery(const Event& ev) {
        if (ev.msg.type == MsgType::Money)
            balances_[ev.who] += 1;

        if (ev.who.role == Role::Validator || ev.who.role == Role::TransactionManager) {
            tm_on_delivery(ev);
            return;
        }
        auto pit = parts_.find(ev.who);
        if (pit == parts_.end())
            return;  // addressed to nobody; token (if any) rests with the ghost account
        PState& ps = pit->second;
        Rational local = ps.clock.local_at(ev.t);
        if (ps.terminated || ps.frozen || crashed_at(ps, local))
            return;

        Message msg = ev.msg;
        // Certificates that do not verify are noise; automata only ever react
        // to verifiable ones ("verifiable non-interactively").
        if ((msg.type == MsgType::CommitCert || msg.type == MsgType::AbortCert)) {
            int f = net_.tm ? net_.tm->f : 0;
            if (!verify_certificate(msg.cert, f, rc_.instance))
                return;
        }
        // Validator votes feed the per-customer assembler, not the automaton.
        if (msg.type == MsgType::Vote) {
            on_customer_vote(ev.who, msg, ev.t);
            return;
        }
        // Messages from the transaction manager's validators present as TM.
        ParticipantId from = ev.from;
        if (from.role == Role::Validator)
            from = ParticipantId::tm();

        const StateKind& kind = ps.a->kind_of(ps.cfg.current);
        if (kind.type == StateType::Output) {
            ps.buffer.push_back({from, msg, ev.uid});
            return;
        }
        // Input state: match at this instant or lose the message.
        ps.buffer.push_back({from, msg, ev.uid});
        enter_state(ev.who, local, ev.t);
    }

    void on_emission(const Event& ev) {
        PState& ps = part(ev.who);
        if (ev.epoch != ps.epoch || !ps.in_output)
            return;  // stale
        if (ps.frozen)
            return;
        if (crashed_at(ps, ev.fire_local)) {
            ps.frozen = true;  // nothing fires at or after the crash instant
            return;
        }
        const Transition& t = ps.a->transitions[ev.transition_idx];
        const auto& elem = std::get<SendSetLabel>(t.label).sends[ev.elem_idx];

        Message msg = elem.msg;
        bool suppress = false;
        if (msg.forward_held) {
            auto it = ps.held.find(msg.type);
            if (it == ps.held.end())
                throw ContractViolation(ev.who.str() + " forwards a " + msg_type_str(msg.type) +
                                        " it never received");
            msg = it->second;
        }
        if (msg.type == MsgType::Receipt && !msg.forward_held && msg.issuer != ev.who &&
            !ps.held.count(MsgType::Receipt))
            throw ContractViolation(ev.who.str() + " mints a receipt issued by " + msg.issuer.str());

        switch (ps.behavior.kind) {
            case BehaviorKind::WithholdMoney:
                if (msg.type == MsgType::Money)
                    suppress = true;
                break;
            case BehaviorKind::WithholdCertificate:
                if (msg.is_certificate())
                    ps.gagged = true;  // keeps the certificate, sends nothing further
                if (ps.gagged)
                    suppress = true;
                break;
            default:
                break;
        }
        if (ps.gagged)
            suppress = true;

        if (!suppress) {
            if (elem.to.role == Role::TransactionManager && net_.tm &&
                net_.tm->kind != TmKind::Centralized) {
                send_to_validators(ev.who, msg, ev.t, ev.fire_local, t);
            } else {
                record_send(ev.who, elem.to, msg, peek_uid(ev.who, elem.to), ev.t, ev.fire_local,
                            t.source, t.target);
                wire_send(ev.who, elem.to, msg, ev.t, targeted_extra(ps, msg));
            }
        }
        if (ev.is_last) {
            ps.in_output = false;
            ps.cfg = apply_transition(ps.cfg, t, ev.fire_local);
            enter_state(ev.who, ev.fire_local, ev.t);
        }
    }

    /// uid of the next message on this channel; lets the send event carry the
    /// same uid that the delivery (and receive) will echo.
    std::uint64_t peek_uid(const ParticipantId& from, const ParticipantId& to) {
        std::uint64_t seq = pair_seq_[{from, to}] + 1;
        auto k = rand_.key();
        k.mix("uid").mix(from.str()).mix(to.str()).mix(seq);
        return k.value() >> 1;
    }

    void on_timeout_check(const Event& ev) {
        PState& ps = part(ev.who);
        if (ev.epoch != ps.epoch || ps.terminated || ps.frozen || ps.in_output)
            return;
        if (crashed_at(ps, ev.fire_local)) {
            ps.frozen = true;
            return;
        }
        enter_state(ev.who, ev.fire_local, ev.t);
    }

    // ---- transaction manager machinery

    std::vector<ParticipantId> validator_ids() const {
        std::vector<ParticipantId> out;
        for (int k = 0; k < net_.tm->m; ++k)
            out.push_back(ParticipantId::validator(k));
        return out;
    }

    /// A customer's s(TM, proposal) fans out to every validator through the
    /// reliable-broadcast primitive.
    void send_to_validators(const ParticipantId& from, const Message& msg, const Rational& g,
                            const Rational& l, const Transition& t) {
        PState& ps = part(from);
        bool faulty = ps.behavior.kind == BehaviorKind::EquivocateProposal && msg.is_tm_proposal();
        std::map<ParticipantId, Message> attempted;
        int flip = 0;
        for (const auto& v : validator_ids()) {
            Message m = msg;
            if (faulty) {
                m = (flip++ % 2 == 0) ? Message::propose_abort() : Message::propose_commit();
            }
            attempted[v] = m;
        }
        if (!faulty) {
            record_send(from, ParticipantId::tm(), msg, 0, g, l, t.source, t.target);
        } else {
            for (const auto& [v, m] : attempted)
                record_send(from, v, m, 0, g, l, t.source, t.target);
        }
        auto plan = reliable_broadcast(from, attempted, faulty, net_.tm->rb_adversary_deliver,
                                       rb_pick(from, pair_seq_[{from, ParticipantId::tm()}] + 1));
        pair_seq_[{from, ParticipantId::tm()}]++;
        for (const auto& [v, m] : plan)
            wire_send(from, v, m, g, targeted_extra(ps, m));
    }

    /// Broadcast from one validator, possibly through the reliable-broadcast
    /// filter when the validator is Byzantine.
    void tm_broadcast(int k, const std::vector<ParticipantId>& tos, const Message& msg,
                      const Rational& g, bool faulty_sender) {
        ParticipantId from = ParticipantId::validator(k);
        Rational l = clock_for(from).local_at(g);
        std::map<ParticipantId, Message> attempted;
        for (const auto& to : tos)
            attempted[to] = msg;
        if (faulty_sender) {
            auto plan = reliable_broadcast(from, attempted, true, net_.tm->rb_adversary_deliver,
                                           rb_pick(from, ++rb_seq_));
            for (const auto& [to, m] : plan) {
                record_send(from, to, m, peek_uid(from, to), g, l, "", "");
                wire_send(from, to, m, g, 0);
            }
        } else {
            for (const auto& [to, m] : attempted) {
                record_send(from, to, m, peek_uid(from, to), g, l, "", "");
                wire_send(from, to, m, g, 0);
            }
        }
    }

    void tm_on_delivery(const Event& ev) {
        if (!net_.tm)
            return;
        Rational l = clock_for(ev.who).local_at(ev.t);
        if (net_.tm->kind == TmKind::Centralized) {
            if (!ev.msg.is_tm_proposal())
                return;
            record_receive(ev.who, ev.from, ev.msg, ev.uid, ev.t, l, "", "");
            int value = ev.msg.type == MsgType::ProposeCommit ? 1 : 0;
            int max_cust = customers_.empty() ? 0 : customers_.back().index;
            auto outs = tm_handle_proposal(central_, ev.from, value, max_cust, rc_.instance);
            for (const auto& [to, cert] : outs) {
                Message m = cert.decision == 1 ? Message::commit_cert(cert) : Message::abort_cert(cert);
                record_send(ParticipantId::tm(), to, m, peek_uid(ParticipantId::tm(), to), ev.t, l,
                            "", "");
                wire_send(ParticipantId::tm(), to, m, ev.t, 0);
            }
            return;
        }

        int k = ev.who.index;
        Behavior vb = net_.tm->validator_behavior(k);
        if (vb.kind == BehaviorKind::Crash && l >= vb.crash_at)
            return;
        if (vb.kind == BehaviorKind::ByzantineValidator && vb.strategy == ByzantineStrategy::Silent)
            return;

        if (ev.msg.is_tm_proposal()) {
            record_receive(ev.who, ev.from, ev.msg, ev.uid, ev.t, l, "", "");
            int value = ev.msg.type == MsgType::ProposeCommit ? 1 : 0;
            const ValidatorState& vs = tm_core_->validator(k);
            if (vs.decided && vs.cert) {
                // Already decided: answer with a copy of the certificate.
                Certificate cert = *vs.cert;
                Message m = cert.decision == 1 ? Message::commit_cert(cert) : Message::abort_cert(cert);
                if (net_.tm->kind == TmKind::OracleDistributed)
                    m = Message::vote_of(tm_core_->sign(k, *vs.decided));
                record_send(ev.who, ev.from, m, peek_uid(ev.who, ev.from), ev.t, l, "", "");
                wire_send(ev.who, ev.from, m, ev.t, 0);
                return;
            }
            bool oracle_ready = tm_core_->on_proposal_at_validator(k, ev.from, value);
            if (oracle_ready)
                schedule_decides(ev.t);
            return;
        }
        if (ev.msg.type == MsgType::Vote) {
            record_receive(ev.who, ev.from, ev.msg, ev.uid, ev.t, l, "", "");
            bool quorum = tm_core_->on_vote_at_validator(k, ev.msg.vote);
            if (quorum && net_.tm->kind == TmKind::BftTm) {
                const Certificate& cert = *tm_core_->validator(k).cert;
                Message m =
                    cert.decision == 1 ? Message::commit_cert(cert) : Message::abort_cert(cert);
                tm_broadcast(k, customers_, m, ev.t, false);
            }
            return;
        }
    }

    void schedule_decides(const Rational& now) {
        if (decides_scheduled_)
            return;
        decides_scheduled_ = true;
        for (int k = 0; k < net_.tm->m; ++k) {
            Event ev;
            ev.t = now + delivery_cap(rc_.model, now) * bbc_latency_frac(k);
            ev.kind = EvKind::BbcDecide;
            ev.who = ParticipantId::validator(k);
            ev.validator = k;
            push(std::move(ev));
        }
    }

    void on_bbc_decide(const Event& ev) {
        int k = ev.validator;
        Behavior vb = net_.tm->validator_behavior(k);
        Rational l = clock_for(ev.who).local_at(ev.t);
        int v = tm_core_->oracle_decision();

        if (vb.kind == BehaviorKind::Crash && l >= vb.crash_at)
            return;
        if (vb.kind == BehaviorKind::ByzantineValidator) {
            switch (vb.strategy) {
                case ByzantineStrategy::Silent:
                    return;
                case ByzantineStrategy::WrongValueSign: {
                    // Spreads signatures over the wrong value, and a junk
                    // certificate nobody can verify.
                    SignedValue sv = tm_core_->sign(k, 1 - v);
                    if (net_.tm->kind == TmKind::BftTm) {
                        tm_broadcast(k, validator_ids(), Message::vote_of(sv), ev.t, false);
                        Certificate junk{1 - v, {sv}};
                        Message m = junk.decision == 1 ? Message::commit_cert(junk)
                                                       : Message::abort_cert(junk);
                        tm_broadcast(k, customers_, m, ev.t, false);
                    } else {
                        tm_broadcast(k, customers_, Message::vote_of(sv), ev.t, false);
                    }
                    return;
                }
                case ByzantineStrategy::EquivocateSign: {
                    // Conflicting signatures, squeezed through the reliable
                    // broadcast filter: uniform delivery or none.
                    std::map<ParticipantId, Message> attempted;
                    auto tos = net_.tm->kind == TmKind::BftTm ? validator_ids() : customers_;
                    int flip = 0;
                    for (const auto& to : tos)
                        attempted[to] =
                            Message::vote_of(tm_core_->sign(k, (flip++ % 2 == 0) ? v : 1 - v));
                    auto plan =
                        reliable_broadcast(ParticipantId::validator(k), attempted, true,
                                           net_.tm->rb_adversary_deliver, rb_pick(ev.who, ++rb_seq_));
                    Rational lv = clock_for(ev.who).local_at(ev.t);
                    for (const auto& [to, m] : plan) {
                        record_send(ev.who, to, m, peek_uid(ev.who, to), ev.t, lv, "", "");
                        wire_send(ev.who, to, m, ev.t, 0);
                    }
                    return;
                }
            }
            return;
        }

        // Honest validator: adopt the consensus value, sign it, exchange.
        ValidatorState& vs = tm_core_->validator(k);
        if (vs.decided)
            return;
        vs.decided = v;
        bool quorum = tm_core_->on_vote_at_validator(k, tm_core_->sign(k, v));
        if (net_.tm->kind == TmKind::BftTm) {
            std::vector<ParticipantId> others;
            for (const auto& vid : validator_ids())
                if (vid.index != k)
                    others.push_back(vid);
            if (!others.empty())
                tm_broadcast(k, others, Message::vote_of(tm_core_->sign(k, v)), ev.t, false);
            if (quorum) {
                const Certificate& cert = *tm_core_->validator(k).cert;
                Message m =
                    cert.decision == 1 ? Message::commit_cert(cert) : Message::abort_cert(cert);
                tm_broadcast(k, customers_, m, ev.t, false);
            }
        } else {
            // Oracle-distributed: each validator sends its signed decision to
            // every customer; certificates assemble at the recipients.
            tm_broadcast(k, customers_, Message::vote_of(tm_core_->sign(k, v)), ev.t, false);
        }
    }

    void on_customer_vote(const ParticipantId& cust, const Message& msg, const Rational& g) {
        if (!net_.tm || net_.tm->kind != TmKind::OracleDistributed)
            return;
        if (msg.vote.instance != rc_.instance)
            return;
        VoteAssembly& va = assemblies_[cust];
        if (va.signers[msg.vote.value].insert(msg.vote.validator).second)
            va.sigs[msg.vote.value].push_back(msg.vote);
        if (static_cast<int>(va.signers[msg.vote.value].size()) >= net_.tm->f + 1) {
            Certificate cert;
            cert.decision = msg.vote.value;
            cert.sigs = va.sigs[msg.vote.value];
            cert.normalize();
            Message m = cert.decision == 1 ? Message::commit_cert(cert) : Message::abort_cert(cert);
            Event ev;
            ev.t = g;
            ev.kind = EvKind::Delivery;
            ev.who = cust;
            ev.from = ParticipantId::tm();
            ev.msg = std::move(m);
            ev.uid = 0;
            push(std::move(ev));
        }
    }

    // ---- wrap-up

    void finish(bool cut) {
        bool pending = false;
        if (cut) {
            while (!queue_.empty()) {
                Event ev = queue_.top();
                queue_.pop();
                if (ev.kind == EvKind::TimeoutCheck) {
                    auto it = parts_.find(ev.who);
                    if (it != parts_.end() && ev.epoch == it->second.epoch &&
                        !it->second.terminated && !it->second.frozen)
                        pending = true;
                } else if (ev.kind == EvKind::Emission) {
                    auto it = parts_.find(ev.who);
                    if (it != parts_.end() && ev.epoch == it->second.epoch && !it->second.frozen)
                        pending = true;
                } else {
                    pending = true;
                }
                if (pending)
                    break;
            }
        }
        bool all_term = true;
        for (const auto& [pid, ps] : parts_)
            if (!ps.terminated)
                all_term = false;
        trace_.status = pending           ? RunStatus::Truncated
                        : all_term        ? RunStatus::AllTerminated
                                          : RunStatus::Quiescent;
        for (const auto& [pid, ps] : parts_) {
            FinalParticipantState fin;
            fin.state = ps.cfg.current;
            fin.balance = balances_.count(pid) ? balances_[pid] : 0;
            fin.terminated = ps.terminated;
            fin.crashed = ps.frozen;
            trace_.finals[pid] = fin;
        }
    }

    const Network& net_;
    RunConfig rc_;
    HashRand rand_;
    std::map<ParticipantId, PState> parts_;
    std::vector<ParticipantId> customers_;
    std::map<ParticipantId, int> balances_;
    std::map<std::pair<ParticipantId, ParticipantId>, std::uint64_t> pair_seq_;
    std::map<std::pair<ParticipantId, ParticipantId>, Rational> fifo_mark_;
    std::map<ParticipantId, std::vector<std::uint64_t>> buffer_uids_;
    std::map<const PendingMessage*, std::uint64_t> consumed_uid_;
    std::priority_queue<Event, std::vector<Event>, EventAfter> queue_;
    std::uint64_t seq_ = 0;
    std::uint64_t rb_seq_ = 0;
    std::uint64_t last_uid_ = 0;
    std::optional<TmCore> tm_core_;
    CentralTmState central_;
    std::map<ParticipantId, VoteAssembly> assemblies_;
    bool decides_scheduled_ = false;
    Trace trace_;
};

}  // namespace

Trace run(const Network& net, const RunConfig& rc) {
    Engine eng(net, rc);
    return eng.run();
}

}  // namespace ccsim
