#include "qdsim/rng.hpp"

#include <cmath>

namespace qdsim {

Rng Rng::stream(std::uint64_t master, std::uint64_t kind,
                std::uint64_t point, std::uint64_t shot) {
    // chain the identifiers through splitmix64 so nearby (point, shot) pairs land far apart
    std::uint64_t x = master;
    std::uint64_t h = splitmix64(x);
    x = h ^ (kind * 0x9e3779b97f4a7c15ULL);
    h = splitmix64(x);
    x = h ^ (point * 0xd1342543de82ef95ULL);
    h = splitmix64(x);
    x = h ^ (shot * 0xaf251af3b0f025b5ULL);
    Rng r;
    for (auto& w : r.s_) w = splitmix64(x);
    return r;
}

double Rng::gauss() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    // u1 strictly positive so the log is finite
    const double u1 = (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = u01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
}

} // namespace qdsim
