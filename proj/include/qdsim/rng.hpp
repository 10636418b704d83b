#pragma once

// Deterministic, platform-independent random streams. Every Monte-Carlo shot draws from
// its own substream derived from (master seed, experiment kind, sweep point, shot index),
// so results are independent of thread count and iteration order. std::normal_distribution
// and friends are implementation-defined, hence the hand-rolled uniform and Box-Muller.

#include <cstdint>

namespace qdsim {

inline std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// fixed substream tags; keep values stable or archived results change
enum class StreamKind : std::uint64_t {
    Rabi = 1,
    Ramsey = 2,
    DetunedRamsey = 3,
    Cpmg = 4,
    T1 = 5,
    PhaseSweep = 6,
    Chevron = 7,
    RabiCooling = 8,
    Qsc = 9,
    BathAux = 10,
};

// xoshiro256++ (Blackman & Vigna), seeded via splitmix64
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) {
        std::uint64_t x = seed;
        for (auto& w : s_) w = splitmix64(x);
    }

    // substream for one shot of one sweep point of one experiment
    static Rng stream(std::uint64_t master, std::uint64_t kind,
                      std::uint64_t point, std::uint64_t shot);

    static Rng stream(std::uint64_t master, StreamKind kind,
                      std::uint64_t point, std::uint64_t shot) {
        return stream(master, static_cast<std::uint64_t>(kind), point, shot);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform on [0, 1), 53-bit resolution
    double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // standard normal, Box-Muller with pair caching
    double gauss();

private:
    static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }
    std::uint64_t s_[4];
    double cached_ = 0.0;
    bool has_cached_ = false;
};

} // namespace qdsim
