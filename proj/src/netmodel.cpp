#include "ccsim/netmodel.hpp"

namespace ccsim {

std::string model_kind_str(const NetworkModel& m) {
    if (std::holds_alternative<Synchronous>(m))
        return "synchronous";
    if (std::holds_alternative<PartiallySynchronous>(m))
        return "partially_synchronous";
    return "asynchronous";
}

void validate_model(const NetworkModel& m) {
    if (const auto* s = std::get_if<Synchronous>(&m)) {
        if (!(s->delta > 0))
            throw ConfigError("synchronous model: delta must be > 0");
        if (s->phi < 1)
            throw ConfigError("synchronous model: phi must be >= 1");
    } else if (const auto* p = std::get_if<PartiallySynchronous>(&m)) {
        if (!(p->delta > 0))
            throw ConfigError("partially synchronous model: delta must be > 0");
        if (p->phi < 1)
            throw ConfigError("partially synchronous model: phi must be >= 1");
        if (p->gst < 0)
            throw ConfigError("partially synchronous model: gst must be >= 0");
        if (!(p->pre_gst_max_delay > 0))
            throw ConfigError("partially synchronous model: pre-gst max delay must be > 0");
    } else {
        const auto& a = std::get<Asynchronous>(m);
        if (!(a.max_delay > 0))
            throw ConfigError("asynchronous model: max delay must be > 0");
    }
}

const Rational* model_phi(const NetworkModel& m) {
    if (const auto* s = std::get_if<Synchronous>(&m))
        return &s->phi;
    if (const auto* p = std::get_if<PartiallySynchronous>(&m))
        return &p->phi;
    return nullptr;
}

Rational delivery_cap(const NetworkModel& m, const Rational& send_time) {
    if (const auto* s = std::get_if<Synchronous>(&m))
        return s->delta;
    if (const auto* p = std::get_if<PartiallySynchronous>(&m)) {
        if (send_time < p->gst)
            return rat_max(p->gst, send_time) + p->pre_gst_max_delay - send_time;
        return p->delta;
    }
    return std::get<Asynchronous>(m).max_delay;
}

Rational sample_delivery(const NetworkModel& m, const Rational& send_time, const Rational& frac) {
    if (!(frac > 0) || frac > 1)
        throw ConfigError("delivery fraction must be in (0,1]");
    return send_time + delivery_cap(m, send_time) * frac;
}

void validate_clocks(const NetworkModel& m, const std::map<ParticipantId, ParticipantClock>& clocks) {
    for (const auto& [pid, c] : clocks)
        if (!(c.rate > 0))
            throw ConfigError("clock rate for " + pid.str() + " must be > 0");
    const Rational* phi = model_phi(m);
    if (!phi)
        return;
    Rational lo = Rational(1) / *phi;
    for (const auto& [pid, c] : clocks) {
        if (c.rate > 1 || c.rate < lo)
            throw ConfigError("clock rate for " + pid.str() + " must lie in [1/phi, 1], got " +
                              rat_pretty(c.rate));
    }
}

}  // namespace ccsim
