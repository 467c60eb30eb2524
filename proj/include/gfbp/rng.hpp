#pragma once

#include <cstdint>
#include <random>

namespace gfbp {

/// Seedable 64-bit generator (Mersenne Twister). All experiment randomness is
/// drawn from one of these, so a run is a pure function of its seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double normal() { return normal_(engine_); }
    /// Uniform on the open interval (lo, hi).
    double uniform(double lo, double hi) {
        double u = unit_(engine_);
        while (u == 0.0) u = unit_(engine_);
        return lo + (hi - lo) * u;
    }
    /// Uniform integer in [0, n).
    std::size_t index(std::size_t n) {
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
    }
    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

}  // namespace gfbp
