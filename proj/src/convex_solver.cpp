#include "istn/convex_solver.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <limits>

#include "istn/detail/convex_program.hpp"

namespace istn {

namespace {

using detail::ConvexProgram;

// Strict feasibility margin (scaled units) Phase I must reach, and the
// certificate threshold below which the subproblem is declared infeasible.
constexpr double kFeasMargin = 1e-7;

constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 60;

struct NewtonOutcome {
    bool converged = false;
    double grad_inf = std::numeric_limits<double>::infinity();
    double gap = std::numeric_limits<double>::infinity();
};

// Damped Newton descent on the barrier at fixed t. Consumes iterations from
// *budget. early_feasible (Phase I only) stops as soon as the underlying x
// is strictly feasible. stationarity > 0 additionally requires
// ||grad||_inf <= stationarity before declaring convergence.
template <typename EarlyStop>
NewtonOutcome newton_minimize(const ConvexProgram& prog, Eigen::VectorXd& x,
                              double t, bool phase1, double newton_tol,
                              int* budget, double stationarity,
                              EarlyStop early_stop) {
    NewtonOutcome out;
    const int n = static_cast<int>(x.size());
    Eigen::VectorXd grad(n), xt(n);
    Eigen::MatrixXd hess(n, n);
    double value = 0.0;

    while (*budget > 0) {
        if (early_stop(x)) {
            out.converged = true;
            return out;
        }
        if (!prog.eval_barrier(x, t, phase1, &value, &grad, &hess)) {
            return out;  // left the domain: caller treats as failure
        }
        out.grad_inf = grad.cwiseAbs().maxCoeff();

        Eigen::VectorXd step;
        double ridge = 0.0;
        for (int attempt = 0; attempt < 12; ++attempt) {
            Eigen::MatrixXd h = hess;
            if (ridge > 0.0) h.diagonal().array() += ridge;
            Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
            if (ldlt.info() == Eigen::Success) {
                step = ldlt.solve(-grad);
                if (step.allFinite() && grad.dot(step) < 0.0) break;
            }
            step.resize(0);
            ridge = (ridge == 0.0)
                        ? 1e-10 * (1.0 + hess.diagonal().cwiseAbs().maxCoeff())
                        : ridge * 100.0;
        }
        if (step.size() == 0) return out;  // numerically stuck

        const double decrement2 = -grad.dot(step);
        if (decrement2 * 0.5 <= newton_tol &&
            (stationarity <= 0.0 || out.grad_inf <= stationarity)) {
            out.converged = true;
            return out;
        }

        --(*budget);
        double alpha = 1.0;
        bool accepted = false;
        for (int bt = 0; bt < kMaxBacktracks; ++bt) {
            xt = x + alpha * step;
            double trial_value;
            if (prog.eval_barrier(xt, t, phase1, &trial_value, nullptr,
                                  nullptr) &&
                trial_value <= value - kArmijo * alpha * decrement2) {
                x = xt;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            // Step direction exhausted; report whatever stationarity we hold.
            out.converged = decrement2 * 0.5 <= 1e3 * newton_tol;
            return out;
        }
    }
    return out;
}

bool no_early_stop(const Eigen::VectorXd&) { return false; }

}  // namespace

double min_power_for_rate(double rate_bps, double bandwidth_hz, double gain,
                          double noise_w_per_hz) {
    if (rate_bps <= 0.0) return 0.0;
    if (!(bandwidth_hz > 0.0)) {
        return std::numeric_limits<double>::infinity();
    }
    const double spectral = rate_bps / bandwidth_hz;
    // Beyond ~1024 bit/s/Hz expm1 overflows to +inf, which correctly reads
    // as "no finite power reaches this rate".
    return noise_w_per_hz * bandwidth_hz * std::expm1(spectral * M_LN2) /
           gain;
}

namespace {

double terminal_rate(const Eigen::MatrixXd& weights,
                     const Eigen::MatrixXd& powers,
                     const Eigen::MatrixXd& gains,
                     const Eigen::VectorXd& noise, double bandwidth_hz,
                     int col) {
    if (!(bandwidth_hz > 0.0)) return 0.0;
    double rate = 0.0;
    for (int m = 0; m < weights.rows(); ++m) {
        const double a = weights(m, col);
        if (a == 0.0) continue;
        const double snr =
            powers(m, col) * gains(m, col) / (noise(m) * bandwidth_hz);
        rate += a * bandwidth_hz * std::log1p(snr) / M_LN2;
    }
    return rate;
}

}  // namespace

double rate_sue(const Allocation& alloc, const FractionalAssociation& assoc,
                const ProblemInstance& inst, int k) {
    return terminal_rate(assoc.sue, alloc.p_sue, inst.gain_sue,
                         inst.noise_density, alloc.w_sue(k), k);
}

double rate_bs(const Allocation& alloc, const FractionalAssociation& assoc,
               const ProblemInstance& inst, int n) {
    return terminal_rate(assoc.bs, alloc.p_bs, inst.gain_bs,
                         inst.noise_density, alloc.w_bs(n), n);
}

AllocationResult solve_allocation(const ProblemInstance& inst,
                                  const FractionalAssociation& assoc,
                                  const SolverOptions& options,
                                  const Allocation* warm_start) {
    inst.validate();
    assoc.validate();
    ConvexProgram prog(inst, assoc, options.min_bandwidth_hz,
                       options.weight_floor);

    AllocationResult result;
    int budget = options.max_newton_iters;
    auto iterations_used = [&]() { return options.max_newton_iters - budget; };

    Eigen::VectorXd x =
        warm_start ? prog.start_from(*warm_start) : prog.heuristic_start();

    // Phase I: maximize the worst hard slack until strictly feasible.
    if (prog.min_hard_slack(x) < kFeasMargin) {
        const int n = prog.num_vars();
        Eigen::VectorXd xt(n + 1);
        xt.head(n) = x;
        xt(n) = prog.min_hard_slack(x) - 1.0;
        auto feasible_now = [&](const Eigen::VectorXd& y) {
            return prog.min_hard_slack(y.head(n)) >= kFeasMargin;
        };
        bool feasible = false;
        double t = 1.0;
        for (int stage = 0; stage < 40 && budget > 0; ++stage) {
            auto out = newton_minimize(prog, xt, t, /*phase1=*/true,
                                       options.newton_tolerance, &budget,
                                       /*stationarity=*/0.0, feasible_now);
            if (feasible_now(xt)) {
                feasible = true;
                break;
            }
            // tau lower-bounds the max-slack optimum; once Newton holds the
            // stage-t center, every barrier term (the bound logs included,
            // since each carries multiplier 1/t) adds 1/t to the upper bound.
            const double gap = prog.num_barrier_terms() / t;
            if (out.converged && xt(n) + gap < kFeasMargin) break;
            t *= 10.0;
        }
        if (!feasible) {
            result.allocation = prog.extract(prog.heuristic_start());
            result.report.status = budget > 0 ? SolveStatus::Infeasible
                                              : SolveStatus::MaxIter;
            result.report.objective = 0.0;
            result.report.kkt_residual =
                std::numeric_limits<double>::infinity();
            result.report.iterations = iterations_used();
            return result;
        }
        x = xt.head(n);
    }

    // Phase II: barrier path on the true objective.
    const double m_total = prog.num_barrier_terms();
    double t = 1.0;
    double kkt = std::numeric_limits<double>::infinity();
    bool reached_gap = false;
    while (budget > 0) {
        const bool final_stage = m_total / t <= options.tolerance;
        // On the final stage, also polish stationarity so the reported KKT
        // residual reflects true first-order accuracy, not just the gap.
        const double stationarity =
            final_stage ? 0.5 * options.tolerance * t : 0.0;
        auto out = newton_minimize(prog, x, t, /*phase1=*/false,
                                   options.newton_tolerance, &budget,
                                   stationarity, no_early_stop);
        if (final_stage) {
            reached_gap = out.converged;
            const double gap = m_total / t /
                               std::max(1.0, std::abs(prog.objective_scaled(x)));
            kkt = std::max(out.grad_inf / t, gap);
            break;
        }
        t *= 10.0;
    }

    prog.polish_waterfill(x);
    // Binary association columns decouple the satellites; snap to the exact
    // water-level optimum and report its true stationarity residual.
    const double separable_kkt = prog.polish_separable(x);
    if (separable_kkt >= 0.0) {
        kkt = separable_kkt;
        reached_gap = true;
    }
    result.allocation = prog.extract(x);
    result.report.objective = prog.objective_watts(x);
    result.report.kkt_residual = kkt;
    result.report.iterations = iterations_used();
    result.report.status = (reached_gap && kkt <= options.tolerance)
                               ? SolveStatus::Optimal
                               : SolveStatus::MaxIter;
    return result;
}

}  // namespace istn
