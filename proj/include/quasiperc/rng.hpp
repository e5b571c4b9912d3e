#pragma once

#include <cstdint>

namespace quasiperc {

// Counter-based random streams. Every uniform is a pure function of
// (master seed, trial, index, salt), so sampling is reproducible and
// independent of evaluation order and thread count. The generator is a
// keyed SplitMix64 finaliser cascade; it is fixed per release and
// changing it is a breaking change for recorded experiments.

inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

struct RngStream {
    std::uint64_t master = 0;
    std::uint64_t trial = 0;

    std::uint64_t bits(std::uint64_t index, std::uint64_t salt = 0) const {
        std::uint64_t h = mix64(master);
        h = mix64(h ^ mix64(trial + 0x632be59bd9b4e019ull));
        h = mix64(h ^ mix64(index + 0x9e6c63d0876a9a47ull));
        return mix64(h ^ salt);
    }

    // Uniform in [0, 1).
    double uniform(std::uint64_t index, std::uint64_t salt = 0) const {
        return static_cast<double>(bits(index, salt) >> 11) * 0x1.0p-53;
    }
};

// Salt registry so distinct sampling passes never share draws.
namespace salt {
constexpr std::uint64_t occupation = 0;   // primary per-tile uniforms
constexpr std::uint64_t seed_layer = 1;   // neighbourhood-max seed pass
constexpr std::uint64_t domain = 2;       // random connected-domain growth
constexpr std::uint64_t sweep_base = 100; // uncoupled sweeps, + p index
} // namespace salt

} // namespace quasiperc
