#pragma once

#include <cstdint>
#include <string_view>

namespace sublev {

/// Address of a deterministic random stream. Keys are values: deriving a
/// child with the same (label, index) always yields the same stream, no
/// matter which thread asks or in what order. All randomness in the library
/// flows from a StreamKey so that parallel work is schedule-independent.
class StreamKey {
public:
    explicit StreamKey(std::uint64_t seed);

    StreamKey derive(std::string_view label, std::uint64_t index) const;

    std::uint64_t state() const { return state_; }

private:
    std::uint64_t state_;
};

/// Draws from a StreamKey. Counter-based core (Weyl increment + 64-bit
/// finalizer), so output depends only on the key and the draw position.
class Rng {
public:
    explicit Rng(StreamKey key) : state_(key.state()) {}

    std::uint64_t next_u64();

    /// Uniform in [0, 1).
    double uniform();

    /// Uniform integer in [0, bound). bound must be >= 1.
    std::uint64_t uniform_below(std::uint64_t bound);

    /// Standard normal via Box-Muller.
    double normal();

    /// Chi-square with integer df >= 1 (sum of squared normals).
    double chisquare(int df);

private:
    std::uint64_t state_;
};

} // namespace sublev
