#pragma once

#include <Eigen/Core>
#include <vector>

#include "istn/association.hpp"
#include "istn/instance.hpp"

namespace istn::detail {

// The power/bandwidth subproblem in scaled form. Variables are, in order,
// one power per active link (power / terminal cap) and one bandwidth per
// terminal (W / max satellite budget), all O(1) at the optimum. Hard
// constraints (rate demands, power caps, bandwidth budgets) are normalized to
// dimensionless slacks; positivity of powers and the bandwidth lower bound
// are barrier-domain bounds. Shared by both barrier phases.
class ConvexProgram {
  public:
    ConvexProgram(const ProblemInstance& inst,
                  const FractionalAssociation& assoc, double min_bandwidth_hz,
                  double weight_floor);

    int num_vars() const { return num_vars_; }
    int num_hard() const { return num_hard_; }
    int num_barrier_terms() const { return num_hard_ + num_bounds_; }

    double objective_scaled(const Eigen::VectorXd& x) const;
    double objective_watts(const Eigen::VectorXd& x) const;

    // All bound terms strictly inside their domain?
    bool bounds_ok(const Eigen::VectorXd& x) const;
    // Smallest normalized hard-constraint slack (negative = violated).
    double min_hard_slack(const Eigen::VectorXd& x) const;

    // Value/gradient/Hessian of the barrier
    //   phase 2:  t * c.x     - sum log s_i(x)       - sum log b_j(x)
    //   phase 1:  -t * tau    - sum log (s_i(x)-tau) - sum log b_j(x)
    // where in phase 1 x carries one extra trailing variable tau. Returns
    // false (value = +inf) outside the barrier domain. grad/hess may be null.
    bool eval_barrier(const Eigen::VectorXd& x, double t, bool phase1,
                      double* value, Eigen::VectorXd* grad,
                      Eigen::MatrixXd* hess) const;

    // Strictly bound-feasible start: bandwidths split pro rata by demand
    // within 90% of each budget, powers from the closed-form single-link
    // inversion with a 10% rate margin.
    Eigen::VectorXd heuristic_start() const;
    // Map a previous Allocation into scaled variables, clamped into the
    // bound-feasible region.
    Eigen::VectorXd start_from(const Allocation& warm) const;

    // Exact minimum-power re-solve per terminal at the current bandwidths
    // (water-filling across the terminal's links). Never increases the
    // objective and leaves every hard constraint satisfied; skipped for a
    // terminal if its cap would be exceeded. The result may sit on the
    // boundary (zero powers), so run it only after the barrier phases.
    void polish_waterfill(Eigen::VectorXd& x) const;

    // True when every terminal rides exactly one satellite, which decouples
    // the satellites and admits the exact re-solve below.
    bool separable() const;

    // Exact KKT point for the separable case, written into x: per satellite
    // the budget is split so every uncapped terminal sees the same marginal
    // power per hertz (cap-bound terminals pinned at the bandwidth where
    // their cap holds), and each power is the closed-form demand inversion
    // at the final split. Returns the worst relative stationarity mismatch
    // (tiny, >= 0) on success; negative when the program is not separable or
    // the candidate failed its feasibility/improvement audit, in which case
    // x is untouched. Boundary values are produced, so barrier-phase use is
    // off limits.
    double polish_separable(Eigen::VectorXd& x) const;

    // Unscale into an Allocation; eliminated links get exactly zero power.
    Allocation extract(const Eigen::VectorXd& x) const;

  private:
    struct Link {
        int var;           // variable index
        int sat;
        int terminal;      // index into terminals_
        double weight;     // association weight
        double gain;       // linear channel gain
        double coef;       // power_scale * gain / (noise * bandwidth_scale)
        double power_scale;  // W per unit of the scaled variable
    };
    struct Terminal {
        bool is_sue;
        int index;       // k or n
        int bw_var;      // variable index of its bandwidth
        double demand;   // bit/s
        double cap;      // W
        std::vector<int> links;  // indices into links_
    };

    void hard_slacks(const Eigen::VectorXd& x, Eigen::VectorXd& out) const;

    const ProblemInstance& inst_;
    std::vector<Link> links_;
    std::vector<Terminal> terminals_;
    double bandwidth_scale_ = 1.0;   // W_scale, Hz per unit scaled bandwidth
    double min_bandwidth_hz_ = 1.0;
    double min_bw_scaled_ = 0.0;
    double objective_scale_ = 1.0;   // watts per unit of scaled objective
    Eigen::VectorXd c_;              // scaled objective coefficients
    int num_vars_ = 0;
    int num_hard_ = 0;
    int num_bounds_ = 0;
};

}  // namespace istn::detail
