#include "istn/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace istn {

// Knuth's product method; adequate for the small means used here.
int Rng::poisson(double mean) {
    if (!(mean > 0.0)) throw std::invalid_argument("poisson mean must be > 0");
    const double limit = std::exp(-mean);
    int k = 0;
    double prod = uniform();
    while (prod > limit) {
        ++k;
        prod *= uniform();
    }
    return k;
}

int Rng::poisson_positive(double mean) {
    for (;;) {
        const int k = poisson(mean);
        if (k >= 1) return k;
    }
}

}  // namespace istn
