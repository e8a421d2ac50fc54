#include "istn/detail/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace istn::detail {

namespace {

constexpr double kReducedCostTol = 1e-9;
constexpr double kPivotTol = 1e-10;
constexpr double kFeasTol = 1e-7;

struct Tableau {
    Eigen::MatrixXd a;        // m x total columns
    Eigen::VectorXd rhs;      // m
    Eigen::VectorXd obj;      // total columns (reduced costs)
    double obj_rhs = 0.0;     // negative of current objective value
    std::vector<int> basis;   // basic column per row
    std::vector<bool> barred; // columns excluded from entering
    int pivots = 0;

    void pivot(int row, int col) {
        const double piv = a(row, col);
        a.row(row) /= piv;
        rhs(row) /= piv;
        for (int r = 0; r < a.rows(); ++r) {
            if (r == row) continue;
            const double f = a(r, col);
            if (f != 0.0) {
                a.row(r) -= f * a.row(row);
                rhs(r) -= f * rhs(row);
            }
        }
        const double f = obj(col);
        if (f != 0.0) {
            obj -= f * a.row(row).transpose();
            obj_rhs -= f * rhs(row);
        }
        basis[static_cast<std::size_t>(row)] = col;
        ++pivots;
    }

    // Returns Optimal, Unbounded or IterLimit for the current objective row.
    LpStatus run(int max_pivots) {
        const int cols = static_cast<int>(a.cols());
        const int bland_after = 3 * (cols + static_cast<int>(a.rows())) + 50;
        while (true) {
            if (pivots > max_pivots) return LpStatus::IterLimit;
            const bool bland = pivots > bland_after;
            int enter = -1;
            double best = -kReducedCostTol;
            for (int c = 0; c < cols; ++c) {
                if (barred[static_cast<std::size_t>(c)]) continue;
                const double rc = obj(c);
                if (bland) {
                    if (rc < -kReducedCostTol) {
                        enter = c;
                        break;
                    }
                } else if (rc < best) {
                    best = rc;
                    enter = c;
                }
            }
            if (enter < 0) return LpStatus::Optimal;

            int leave = -1;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (int r = 0; r < a.rows(); ++r) {
                const double d = a(r, enter);
                if (d > kPivotTol) {
                    const double ratio = rhs(r) / d;
                    // Bland-style deterministic tie-break: smallest basic
                    // variable index among equal ratios.
                    if (ratio < best_ratio - 1e-12 ||
                        (ratio < best_ratio + 1e-12 &&
                         (leave < 0 ||
                          basis[static_cast<std::size_t>(r)] <
                              basis[static_cast<std::size_t>(leave)]))) {
                        best_ratio = ratio;
                        leave = r;
                    }
                }
            }
            if (leave < 0) return LpStatus::Unbounded;
            pivot(leave, enter);
        }
    }
};

}  // namespace

LpResult solve_lp(const LinearProgram& lp, int max_pivots) {
    const int n = lp.num_vars;
    const int m = static_cast<int>(lp.rows.size());
    LpResult result;

    if (n == 0 || m == 0) {
        // Degenerate sizes: feasibility is a scalar check.
        for (int r = 0; r < m; ++r) {
            const double lhs = 0.0;
            if ((lp.rel[r] == 'L' && lhs > lp.rhs[r] + kFeasTol) ||
                (lp.rel[r] == 'G' && lhs < lp.rhs[r] - kFeasTol) ||
                (lp.rel[r] == 'E' && std::abs(lp.rhs[r]) > kFeasTol)) {
                result.status = LpStatus::Infeasible;
                return result;
            }
        }
        result.status = LpStatus::Optimal;
        result.objective = 0.0;
        result.x = Eigen::VectorXd::Zero(n);
        return result;
    }

    // Normalize to rhs >= 0, then append one slack/surplus and artificial
    // column block. Artificials double as the initial basis.
    std::vector<Eigen::VectorXd> rows(lp.rows.begin(), lp.rows.end());
    std::vector<double> rhs(lp.rhs.begin(), lp.rhs.end());
    std::vector<char> rel(lp.rel.begin(), lp.rel.end());
    for (int r = 0; r < m; ++r) {
        if (rhs[r] < 0.0) {
            rows[r] = -rows[r];
            rhs[r] = -rhs[r];
            rel[r] = rel[r] == 'L' ? 'G' : (rel[r] == 'G' ? 'L' : 'E');
        }
    }

    int num_slack = 0, num_art = 0;
    for (int r = 0; r < m; ++r) {
        if (rel[r] == 'L' || rel[r] == 'G') ++num_slack;
        if (rel[r] == 'G' || rel[r] == 'E') ++num_art;
    }
    const int total = n + num_slack + num_art;

    Tableau t;
    t.a = Eigen::MatrixXd::Zero(m, total);
    t.rhs = Eigen::VectorXd::Zero(m);
    t.basis.assign(m, -1);
    t.barred.assign(total, false);
    const int slack0 = n;
    const int art0 = n + num_slack;
    int si = 0, ai = 0;
    for (int r = 0; r < m; ++r) {
        t.a.row(r).head(n) = rows[r].transpose();
        t.rhs(r) = rhs[r];
        if (rel[r] == 'L') {
            t.a(r, slack0 + si) = 1.0;
            t.basis[r] = slack0 + si++;
        } else if (rel[r] == 'G') {
            t.a(r, slack0 + si++) = -1.0;
            t.a(r, art0 + ai) = 1.0;
            t.basis[r] = art0 + ai++;
        } else {
            t.a(r, art0 + ai) = 1.0;
            t.basis[r] = art0 + ai++;
        }
    }

    // Phase 1: minimize the artificial sum.
    if (num_art > 0) {
        t.obj = Eigen::VectorXd::Zero(total);
        t.obj.segment(art0, num_art).setOnes();
        t.obj_rhs = 0.0;
        for (int r = 0; r < m; ++r) {
            if (t.basis[r] >= art0) {
                t.obj -= t.a.row(r).transpose();
                t.obj_rhs -= t.rhs(r);
            }
        }
        const LpStatus st = t.run(max_pivots);
        if (st == LpStatus::IterLimit) {
            result.status = st;
            return result;
        }
        const double phase1 = -t.obj_rhs;
        if (phase1 > kFeasTol) {
            result.status = LpStatus::Infeasible;
            return result;
        }
        // Pivot leftover artificials out of the basis where possible.
        for (int r = 0; r < m; ++r) {
            if (t.basis[r] < art0) continue;
            int col = -1;
            for (int c = 0; c < art0; ++c) {
                if (std::abs(t.a(r, c)) > kPivotTol) {
                    col = c;
                    break;
                }
            }
            if (col >= 0) t.pivot(r, col);
            // else: redundant row; its artificial stays basic at level ~0 and
            // is barred below, which keeps it at zero.
        }
        for (int c = art0; c < total; ++c) t.barred[c] = true;
    }

    // Phase 2: reduced costs of the real objective against the basis.
    t.obj = Eigen::VectorXd::Zero(total);
    t.obj.head(n) = lp.cost;
    t.obj_rhs = 0.0;
    for (int r = 0; r < m; ++r) {
        const int b = t.basis[r];
        if (b < n && lp.cost(b) != 0.0) {
            t.obj -= lp.cost(b) * t.a.row(r).transpose();
            t.obj_rhs -= lp.cost(b) * t.rhs(r);
        }
    }
    const LpStatus st = t.run(max_pivots);
    if (st != LpStatus::Optimal) {
        result.status = st;
        return result;
    }

    result.status = LpStatus::Optimal;
    result.x = Eigen::VectorXd::Zero(n);
    for (int r = 0; r < m; ++r) {
        if (t.basis[r] < n) result.x(t.basis[r]) = t.rhs(r);
    }
    result.objective = lp.cost.dot(result.x);
    return result;
}

}  // namespace istn::detail
