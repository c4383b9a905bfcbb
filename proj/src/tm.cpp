#include "ccsim/tm.hpp"

#include "ccsim/netmodel.hpp"

#include <stdexcept>

namespace ccsim {

void TmSetup::validate() const {
    if (kind == TmKind::Centralized)
        return;
    if (m <= 0 || f < 0)
        throw ConfigError("transaction manager: m must be > 0 and f >= 0");
    if (3 * f >= m)
        throw ConfigError("transaction manager: requires f < m/3, got m=" + std::to_string(m) +
                          " f=" + std::to_string(f));
}

int bbc_decide(const std::map<int, int>& honest_proposals, int adversary_choice) {
    if (honest_proposals.empty())
        throw ConfigError("bbc_decide: every honest validator must have proposed");
    int first = honest_proposals.begin()->second;
    for (const auto& [k, v] : honest_proposals)
        if (v != first)
            return adversary_choice;
    return first;
}

std::map<ParticipantId, Message> reliable_broadcast(const ParticipantId& /*sender*/,
                                                    const std::map<ParticipantId, Message>& attempted,
                                                    bool sender_faulty, bool adversary_deliver,
                                                    std::uint64_t adversary_pick) {
    if (attempted.empty())
        throw ConfigError("reliable_broadcast: recipients must be non-empty");
    if (!sender_faulty)
        return attempted;
    if (!adversary_deliver)
        return {};
    // Uniform delivery: the adversary picks one of the attempted values and
    // every correct recipient accepts exactly that one.
    auto it = attempted.begin();
    std::advance(it, static_cast<long>(adversary_pick % attempted.size()));
    Message chosen = it->second;
    std::map<ParticipantId, Message> out;
    for (const auto& [to, _] : attempted)
        out[to] = chosen;
    return out;
}

std::vector<std::pair<ParticipantId, Certificate>> tm_handle_proposal(
    CentralTmState& st, const ParticipantId& from, int value, int n_customers_max_index,
    std::uint64_t instance) {
    std::vector<std::pair<ParticipantId, Certificate>> out;
    if (st.decision) {
        out.emplace_back(from, st.cert);
        return out;
    }
    bool effective = (value == 0) ||
                     (value == 1 && from == ParticipantId::customer(n_customers_max_index));
    if (!effective)
        return out;  // a commit not coming from the paid customer cannot decide
    st.decision = value;
    st.cert.decision = value;
    st.cert.sigs = {SignedValue{0, value, instance}};
    for (int i = 0; i <= n_customers_max_index; ++i)
        out.emplace_back(ParticipantId::customer(i), st.cert);
    return out;
}

TmCore::TmCore(TmSetup setup, int n_customers_max_index, std::uint64_t instance)
    : setup_(std::move(setup)), max_customer_(n_customers_max_index), instance_(instance) {
    setup_.validate();
    vals_.resize(static_cast<size_t>(setup_.m));
}

bool TmCore::on_proposal_at_validator(int k, const ParticipantId& from, int value) {
    ValidatorState& vs = vals_[static_cast<size_t>(k)];
    if (!is_honest(k))
        return false;
    if (vs.decided) {
        vs.pending_repliers.push_back(from);
        return false;
    }
    if (vs.proposed)
        return false;
    bool effective = (value == 0) || (value == 1 && from == ParticipantId::customer(max_customer_));
    if (!effective)
        return false;
    bool before = all_honest_proposed();
    vs.proposed = true;
    honest_proposals_[k] = value;
    return !before && all_honest_proposed();
}

bool TmCore::all_honest_proposed() const {
    for (int k = 0; k < setup_.m; ++k)
        if (is_honest(k) && !vals_[static_cast<size_t>(k)].proposed)
            return false;
    return true;
}

int TmCore::oracle_decision() const {
    return bbc_decide(honest_proposals_, setup_.bbc_adversary_choice);
}

bool TmCore::on_vote_at_validator(int k, const SignedValue& v) {
    ValidatorState& vs = vals_[static_cast<size_t>(k)];
    if (!vs.decided || vs.cert)
        return false;
    if (v.value != *vs.decided || v.instance != instance_)
        return false;
    if (!vs.vote_signers.insert(v.validator).second)
        return false;
    votes_[k].push_back(v);
    if (static_cast<int>(vs.vote_signers.size()) >= setup_.f + 1) {
        Certificate cert;
        cert.decision = *vs.decided;
        cert.sigs = votes_[k];
        cert.normalize();
        vs.cert = cert;
        return true;
    }
    return false;
}

}  // namespace ccsim
