#pragma once

#include <Eigen/Core>
#include <vector>

namespace istn::detail {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterLimit };

// min cost.x subject to rows (relation 'L' <=, 'G' >=, 'E' ==) and x >= 0.
// Callers normalize rows to O(1) magnitudes; the fixed tolerances below
// assume that.
struct LinearProgram {
    int num_vars = 0;
    Eigen::VectorXd cost;
    std::vector<Eigen::VectorXd> rows;
    std::vector<double> rhs;
    std::vector<char> rel;
};

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    double objective = 0.0;
    Eigen::VectorXd x;
};

// Dense two-phase tableau simplex. Dantzig pricing with a Bland-rule
// fallback against cycling; deterministic tie-breaking throughout.
LpResult solve_lp(const LinearProgram& lp, int max_pivots = 50000);

}  // namespace istn::detail
