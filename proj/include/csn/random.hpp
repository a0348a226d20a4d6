#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace csn {

/// Named random streams. Each concern draws from its own generator so that
/// changing one model never shifts the draws of another.
enum class Stream : std::uint64_t {
    Topology = 1,
    Activity = 2,
    Jitter = 3,
    Coordination = 4,
    Suppression = 5,
    Election = 6,
};

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1) with 53 random bits; independent of the standard
    /// library's distribution implementations.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);
    bool bernoulli(double p) { return uniform01() < p; }

private:
    std::mt19937_64 engine_;
};

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline Rng make_stream(std::uint64_t seed, Stream s)
{
    return Rng(splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(s)));
}

inline std::uint64_t Rng::below(std::uint64_t n)
{
    // rejection sampling keeps the draw unbiased
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t v;
    do {
        v = engine_();
    } while (v >= limit);
    return v % n;
}

}  // namespace csn
