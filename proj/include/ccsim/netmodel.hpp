#pragma once

#include "ccsim/ids.hpp"
#include "ccsim/rational.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <variant>

namespace ccsim {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Linear local clock: local = rate * global + offset. Under a model that
/// declares a skew bound, rates must lie in [1/phi, 1] — pairwise ratio at
/// most phi and nobody faster than real time, which is what makes the
/// delivery bound valid on every local clock.
struct ParticipantClock {
    Rational rate = 1;
    Rational offset = 0;

    Rational local_at(const Rational& global) const { return rate * global + offset; }
    Rational global_at(const Rational& local) const { return (local - offset) / rate; }
};

struct Synchronous {
    Rational delta;  // delivery bound
    Rational phi;    // clock-rate ratio bound
};

struct PartiallySynchronous {
    Rational gst;  // unknown to the protocol, known to the simulation
    Rational delta;
    Rational phi;
    Rational pre_gst_max_delay;
};

struct Asynchronous {
    Rational max_delay;  // simulation-horizon stand-in for "arbitrary finite"
};

using NetworkModel = std::variant<Synchronous, PartiallySynchronous, Asynchronous>;

std::string model_kind_str(const NetworkModel& m);

/// Throws ConfigError on out-of-domain parameters.
void validate_model(const NetworkModel& m);

/// Skew-bound value when the model declares one.
const Rational* model_phi(const NetworkModel& m);

/// Hard cap on the transit time of a message sent at send_time. Adversarial
/// extra delays are clamped to this; the model's guarantees always win.
Rational delivery_cap(const NetworkModel& m, const Rational& send_time);

/// Delivery instant for a message sent at send_time, with frac drawn
/// uniformly from (0,1]. Always strictly after send_time, never beyond the
/// cap. frac = 1 exercises the boundary.
Rational sample_delivery(const NetworkModel& m, const Rational& send_time, const Rational& frac);

/// Checks the pairwise rate-ratio bound (and the [1/phi, 1] normalization)
/// for every clock when the model declares a skew bound.
void validate_clocks(const NetworkModel& m, const std::map<ParticipantId, ParticipantClock>& clocks);

}  // namespace ccsim
