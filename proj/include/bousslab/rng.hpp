// rng.hpp
// Splittable PRNG discipline: one root seed, children derived by hashing
// (seed, child id) with splitmix64, so sub-experiments are independently
// reproducible regardless of draw order elsewhere.

#pragma once

#include <cstdint>
#include <cmath>
#include <numbers>

namespace bousslab {

class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next()
    {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // child stream: hash of (state seed, id); advancing the parent afterwards
    // does not change already-derived children
    SplitMix64 split(std::uint64_t child_id) const
    {
        SplitMix64 h(state_ ^ (0x6a09e667f3bcc909ULL + child_id * 0x9e3779b97f4a7c15ULL));
        h.next();
        return h;
    }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // standard normal (Box-Muller)
    double normal()
    {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

  private:
    std::uint64_t state_;
};

} // namespace bousslab
