#pragma once

#include "istn/association.hpp"
#include "istn/instance.hpp"

namespace istn {

struct AssociationOptions {
    // Relative window for optimality proofs and objective ties.
    double tolerance = 1e-9;
    long node_limit = 1000000;
    // Among (near-)tied optima, return the lexicographically smallest
    // satellite selection in terminal order (SUEs, then BSs); keeps
    // regression outputs unique on symmetric instances.
    bool lexicographic_tiebreak = true;
};

struct AssociationResult {
    BinaryAssociation association;
    SolveReport report;  // objective: selected fixed powers, W; iterations: nodes
};

// Minimum-total-fixed-power integral association for frozen powers and
// bandwidths: every terminal picks one satellite whose frozen-power rate
// meets its demand within its power cap, subject to per-satellite bandwidth
// budgets. Links the allocation priced at zero are backfilled with the
// closed-form power that meets the demand on the terminal's current
// bandwidth, so switching satellites stays expressible. Branch-and-bound on
// the LP relaxation; proven optimal within `tolerance`.
AssociationResult solve_association(const ProblemInstance& inst,
                                    const Allocation& alloc,
                                    const AssociationOptions& options = {});

// Exhaustive reference optimum over all (num_satellites+1)^(K+N) selections
// (the +1 is "unassigned", always demand-infeasible here). Test oracle;
// throws std::invalid_argument when that count exceeds 1e7.
AssociationResult enumerate_association_oracle(const ProblemInstance& inst,
                                               const Allocation& alloc);

}  // namespace istn
