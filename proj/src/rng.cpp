#include "sublev/rng.hpp"

#include <cmath>
#include <numbers>

#include "sublev/errors.hpp"

namespace sublev {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// SplitMix64 finalizer: full-avalanche 64-bit mix.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

constexpr std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace

StreamKey::StreamKey(std::uint64_t seed) : state_(mix64(seed ^ kGolden)) {}

StreamKey StreamKey::derive(std::string_view label, std::uint64_t index) const {
    StreamKey child(0);
    child.state_ = mix64(mix64(state_ ^ fnv1a(label)) + kGolden * (index + 1));
    return child;
}

std::uint64_t Rng::next_u64() {
    state_ += kGolden;
    return mix64(state_);
}

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::uniform_below(std::uint64_t bound) {
    if (bound == 0) throw InvalidParamError("uniform_below: bound must be >= 1");
    // Multiply-shift map of a 64-bit draw onto [0, bound); bias < bound/2^64.
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
}

double Rng::normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
    return r * std::cos(2.0 * std::numbers::pi * u2);
}

double Rng::chisquare(int df) {
    if (df <= 0) throw InvalidParamError("chisquare: df must be >= 1");
    double sum = 0.0;
    for (int i = 0; i < df; ++i) {
        const double z = normal();
        sum += z * z;
    }
    return sum;
}

} // namespace sublev
