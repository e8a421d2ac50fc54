#pragma once

#include <vector>

#include "istn/assoc_solver.hpp"
#include "istn/association.hpp"
#include "istn/convex_solver.hpp"
#include "istn/instance.hpp"

namespace istn {

struct AlgorithmConfig {
    double rho = 0.7;    // association update rate, in (0,1]
    double eps = 1e-4;   // relative objective change declaring convergence
    int max_iters = 100;
    SolverOptions solver;
    AssociationOptions association;

    void validate() const;  // throws std::invalid_argument
};

enum class AlgorithmStatus { Converged, MaxIter, Infeasible };

const char* to_string(AlgorithmStatus status);

struct SolutionMetrics {
    double total_power_w = 0.0;
    double total_power_dbw = 0.0;
    std::vector<bool> sue_satisfied;
    std::vector<bool> bs_satisfied;
    double satisfaction = 0.0;            // fraction over all terminals
    std::vector<int> connections;         // per satellite, SUEs + BSs
    std::vector<double> bandwidth_used;   // per satellite, Hz
};

struct Solution {
    Allocation allocation;
    BinaryAssociation association;
    std::vector<FractionalAssociation> fractional_trace;  // per iteration
    std::vector<double> objective_trace;                  // W, per iteration
    AlgorithmStatus status = AlgorithmStatus::Infeasible;
    SolveReport final_report;  // integral re-solve report
    double objective_w = 0.0;
    double satisfaction = 0.0;
    std::vector<int> per_leo_connections;
    int iterations = 0;        // alternating iterations run
    // First iteration whose subsolve failed, forcing the run back onto the
    // last feasible iterate; -1 when the loop never fell back.
    int fallback_iteration = -1;
};

// Feasible integral starting point: the capped channel-greedy association,
// falling back to unconstrained best-gain assignment if the caps deadlock.
// Throws std::runtime_error when some terminal's demand is unreachable
// within its power cap even when granted a full satellite bandwidth budget.
BinaryAssociation initialize_association(const ProblemInstance& inst);

// Relaxation step: (1-rho) * previous + rho * integral.
FractionalAssociation update_association(const FractionalAssociation& prev,
                                         const BinaryAssociation& next,
                                         double rho);

// Argmax rounding per terminal (ties to the lower satellite index), then a
// bandwidth repair pass: while a satellite's budget is exceeded, move the
// terminal with the smallest gain penalty to its best satellite with slack.
// Throws std::runtime_error if repair runs out of moves.
BinaryAssociation round_association(const FractionalAssociation& frac,
                                    const ProblemInstance& inst,
                                    const Allocation& alloc);

SolutionMetrics evaluate_solution(const ProblemInstance& inst,
                                  const BinaryAssociation& assoc,
                                  const Allocation& alloc);

// The full alternating scheme: repeat { allocation solve at fixed weights;
// integral association at fixed allocation; relaxed weight update } until
// the objective settles, then round, repair, and re-solve once with the
// integral association for the exact final solution.
Solution run_algorithm1(const ProblemInstance& inst,
                        const AlgorithmConfig& config = {});

}  // namespace istn
