#pragma once

#include "istn/association.hpp"
#include "istn/instance.hpp"

namespace istn {

// Tolerances for the power/bandwidth subproblem. The defaults are tuned for
// the hostile raw scales of this domain (gains ~1e-17, powers 1e-3..1e4 W,
// bandwidths ~1e8 Hz); all internal math runs on O(1) rescaled variables.
struct SolverOptions {
    double tolerance = 1e-6;         // duality-gap target, scaled units
    double newton_tolerance = 1e-8;  // Newton decrement^2/2 threshold
    int max_newton_iters = 600;      // total budget across barrier stages
    double min_bandwidth_hz = 1.0;   // keeps W log2(1+x/W) off the W=0 edge
    double weight_floor = 1e-9;      // links below this weight are dropped
};

// Achievable rate of SUE k / BS n under the given powers, bandwidths and
// (possibly fractional) association weights:
//   sum_m weight(m,t) * W_t * log2(1 + p(m,t) * gain(m,t) / (noise_m * W_t)).
double rate_sue(const Allocation& alloc, const FractionalAssociation& assoc,
                const ProblemInstance& inst, int k);
double rate_bs(const Allocation& alloc, const FractionalAssociation& assoc,
               const ProblemInstance& inst, int n);

// The unique single-link power achieving exactly `rate_bps` over
// `bandwidth_hz`: noise * W * (2^(R/W) - 1) / gain. Returns +inf when
// R/W > 60 (the required power would overflow anything physical).
double min_power_for_rate(double rate_bps, double bandwidth_hz, double gain,
                          double noise_w_per_hz);

struct AllocationResult {
    Allocation allocation;
    SolveReport report;
};

// Minimum-total-power solve for fixed association weights: finds per-link
// powers and per-terminal bandwidths meeting every rate demand within power
// caps and per-satellite bandwidth budgets. Two-phase log-barrier interior
// point; the rate constraints enter in their exact concave perspective form,
// so no convexification step is needed. A previous Allocation may seed
// Phase I. Throws std::invalid_argument if some terminal with positive
// demand has no association weight above the floor.
AllocationResult solve_allocation(const ProblemInstance& inst,
                                  const FractionalAssociation& assoc,
                                  const SolverOptions& options = {},
                                  const Allocation* warm_start = nullptr);

}  // namespace istn
