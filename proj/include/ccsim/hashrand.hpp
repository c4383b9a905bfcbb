#pragma once

#include "ccsim/rational.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace ccsim {

/// Keyed, stateless randomness. Every sampled quantity in a run is a pure
/// function of (seed, key material), not of a stream position, so removing
/// or delaying one message never perturbs the draws for unrelated events.
/// That property is what keeps adversarial run pairs byte-comparable on
/// their common prefix, and it makes traces machine-independent.
class HashRand {
public:
    explicit HashRand(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    class Key {
    public:
        explicit Key(std::uint64_t seed) : h_(seed ^ 0x9e3779b97f4a7c15ull) { mix(0x243f6a8885a308d3ull); }

        Key& mix(std::uint64_t v) {
            h_ ^= v + 0x9e3779b97f4a7c15ull + (h_ << 6) + (h_ >> 2);
            h_ = splitmix(h_);
            return *this;
        }
        Key& mix(std::string_view s) {
            // FNV-1a over the bytes, then avalanche.
            std::uint64_t f = 1469598103934665603ull;
            for (unsigned char c : s) {
                f ^= c;
                f *= 1099511628211ull;
            }
            return mix(f);
        }
        Key& mix(const Rational& r) { return mix(rat_str(r)); }

        std::uint64_t value() const { return splitmix(h_ ^ 0x2545f4914f6cdd1dull); }

    private:
        static std::uint64_t splitmix(std::uint64_t z) {
            z += 0x9e3779b97f4a7c15ull;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
            return z ^ (z >> 31);
        }
        std::uint64_t h_;
    };

    Key key() const { return Key(seed_); }

    /// Uniform in [0, n).
    static std::uint64_t below(std::uint64_t h, std::uint64_t n) { return n == 0 ? 0 : h % n; }

    static constexpr std::uint64_t kGrain = 1u << 16;

    /// Uniform on the grid {1/G, 2/G, ..., 1}; strictly positive, at most 1.
    static Rational unit_half_open(std::uint64_t h) {
        return Rational(BigInt(below(h, kGrain) + 1), BigInt(kGrain));
    }

    /// Uniform on the grid {1/G, ..., (G-1)/G}; strictly inside (0, 1).
    static Rational unit_open(std::uint64_t h) {
        return Rational(BigInt(below(h, kGrain - 1) + 1), BigInt(kGrain));
    }

private:
    std::uint64_t seed_;
};

}  // namespace ccsim
