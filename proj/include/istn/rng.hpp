#pragma once

#include <cstdint>
#include <random>

namespace istn {

// Deterministic random source. Only the mt19937_64 engine (whose output is
// pinned by the standard) is used; uniform and Poisson draws are derived by
// hand so that a seed reproduces identical streams on every platform.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Zero-truncated Poisson: zeros are resampled so every draw is >= 1.
    int poisson_positive(double mean);

  private:
    int poisson(double mean);

    std::mt19937_64 gen_;
};

}  // namespace istn
