#pragma once

#include <cstdint>
#include <cmath>

namespace umdlab {

/// Counter-based random generator (Philox-4x32-10).
///
/// A generator is addressed by (seed, stream); streams are statistically
/// independent, so parallel work items can each take their own stream index
/// and the results do not depend on scheduling order.
class Rng {
public:
    Rng() : Rng(0, 0) {}
    Rng(std::uint64_t seed, std::uint64_t stream)
        : key0_(static_cast<std::uint32_t>(seed)),
          key1_(static_cast<std::uint32_t>(seed >> 32)),
          ctr2_(static_cast<std::uint32_t>(stream)),
          ctr3_(static_cast<std::uint32_t>(stream >> 32)) {}

    std::uint32_t next_u32() {
        if (have_ == 0) {
            refill();
            have_ = 4;
        }
        return out_[4 - have_--];
    }

    std::uint64_t next_u64() {
        std::uint64_t hi = next_u32();
        return (hi << 32) | next_u32();
    }

    /// Uniform on (0,1); never returns 0 or 1.
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    /// Standard normal via Box-Muller (exact moments).
    double normal() {
        if (have_normal_) {
            have_normal_ = false;
            return cached_normal_;
        }
        double u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        cached_normal_ = r * std::sin(a);
        have_normal_ = true;
        return r * std::cos(a);
    }

    /// Generates a normal pair in one call (hot loops).
    void normal_pair(double& g0, double& g1) {
        double u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        g0 = r * std::cos(a);
        g1 = r * std::sin(a);
    }

    /// Integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        return next_u64() % n;
    }

private:
    static std::uint32_t mulhi(std::uint32_t a, std::uint32_t b) {
        return static_cast<std::uint32_t>((static_cast<std::uint64_t>(a) * b) >> 32);
    }

    void refill();

    std::uint32_t key0_, key1_;
    std::uint32_t ctr0_ = 0, ctr1_ = 0, ctr2_, ctr3_;
    std::uint32_t out_[4] = {0, 0, 0, 0};
    int have_ = 0;
    bool have_normal_ = false;
    double cached_normal_ = 0.0;
};

/// Derives a child seed; used to hand independent seeds to sub-tasks
/// (restart r of experiment with seed s uses derive_seed(s, r)).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

} // namespace umdlab
