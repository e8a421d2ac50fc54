#include "istn/alternating.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "istn/greedy.hpp"
#include "istn/units.hpp"

namespace istn {

namespace {

constexpr double kRelSlack = 1e-9;

}  // namespace

void AlgorithmConfig::validate() const {
    // rho = 1 is admitted deliberately: it reproduces the binary-trap
    // behavior the relaxed update exists to avoid, which tests exercise.
    if (!(rho > 0.0) || rho > 1.0) {
        throw std::invalid_argument("rho must lie in (0, 1]");
    }
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
    if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
}

const char* to_string(AlgorithmStatus status) {
    switch (status) {
        case AlgorithmStatus::Converged: return "Converged";
        case AlgorithmStatus::MaxIter: return "MaxIter";
        case AlgorithmStatus::Infeasible: return "Infeasible";
    }
    return "Unknown";
}

BinaryAssociation initialize_association(const ProblemInstance& inst) {
    inst.validate();
    // Cheap infeasibility certificate: even with an entire budget to itself,
    // the demand must be reachable within the power cap on some satellite.
    auto reachable = [&](double demand, double cap, int m, double gain) {
        const double p = min_power_for_rate(demand, inst.bandwidth_leo(m),
                                            gain, inst.noise_density(m));
        return p <= cap * (1.0 + kRelSlack);
    };
    for (int k = 0; k < inst.num_sues; ++k) {
        bool any = false;
        for (int m = 0; m < inst.num_satellites && !any; ++m) {
            any = reachable(inst.demand_sue(k), inst.p_max_sue(k), m,
                            inst.gain_sue(m, k));
        }
        if (!any) {
            std::ostringstream msg;
            msg << "SUE " << k
                << ": demand unreachable within power cap on every satellite";
            throw std::runtime_error(msg.str());
        }
    }
    for (int n = 0; n < inst.num_bs; ++n) {
        bool any = false;
        for (int m = 0; m < inst.num_satellites && !any; ++m) {
            any = reachable(inst.demand_bs(n), inst.p_max_bs(n), m,
                            inst.gain_bs(m, n));
        }
        if (!any) {
            std::ostringstream msg;
            msg << "BS " << n
                << ": demand unreachable within power cap on every satellite";
            throw std::runtime_error(msg.str());
        }
    }

    try {
        return greedy_associate(inst);
    } catch (const std::runtime_error&) {
        // Caps deadlocked; fall back to plain best-gain assignment.
        BinaryAssociation assoc = make_empty_association(
            inst.num_satellites, inst.num_sues, inst.num_bs);
        for (int k = 0; k < inst.num_sues; ++k) {
            int best = 0;
            for (int m = 1; m < inst.num_satellites; ++m) {
                if (inst.gain_sue(m, k) > inst.gain_sue(best, k)) best = m;
            }
            assoc.sue(best, k) = 1;
        }
        for (int n = 0; n < inst.num_bs; ++n) {
            int best = 0;
            for (int m = 1; m < inst.num_satellites; ++m) {
                if (inst.gain_bs(m, n) > inst.gain_bs(best, n)) best = m;
            }
            assoc.bs(best, n) = 1;
        }
        return assoc;
    }
}

FractionalAssociation update_association(const FractionalAssociation& prev,
                                         const BinaryAssociation& next,
                                         double rho) {
    if (prev.sue.rows() != next.sue.rows() ||
        prev.sue.cols() != next.sue.cols() ||
        prev.bs.rows() != next.bs.rows() ||
        prev.bs.cols() != next.bs.cols()) {
        throw std::invalid_argument("association shapes disagree");
    }
    FractionalAssociation out;
    out.sue = (1.0 - rho) * prev.sue + rho * next.sue.cast<double>();
    out.bs = (1.0 - rho) * prev.bs + rho * next.bs.cast<double>();
    return out;
}

BinaryAssociation round_association(const FractionalAssociation& frac,
                                    const ProblemInstance& inst,
                                    const Allocation& alloc) {
    frac.validate();
    const int sats = inst.num_satellites;
    BinaryAssociation assoc =
        make_empty_association(sats, inst.num_sues, inst.num_bs);
    auto argmax_col = [&](const Eigen::MatrixXd& w, int col) {
        int best = -1;
        double best_w = 0.0;
        for (int m = 0; m < sats; ++m) {
            if (w(m, col) > best_w) {  // strict: ties keep the lower index
                best_w = w(m, col);
                best = m;
            }
        }
        return best;
    };
    for (int k = 0; k < inst.num_sues; ++k) {
        const int m = argmax_col(frac.sue, k);
        if (m >= 0) assoc.sue(m, k) = 1;
    }
    for (int n = 0; n < inst.num_bs; ++n) {
        const int m = argmax_col(frac.bs, n);
        if (m >= 0) assoc.bs(m, n) = 1;
    }

    // Bandwidth repair at the frozen per-terminal bandwidths.
    Eigen::VectorXd usage = Eigen::VectorXd::Zero(sats);
    for (int k = 0; k < inst.num_sues; ++k) {
        const int m = assoc.sue_satellite(k);
        if (m >= 0) usage(m) += alloc.w_sue(k);
    }
    for (int n = 0; n < inst.num_bs; ++n) {
        const int m = assoc.bs_satellite(n);
        if (m >= 0) usage(m) += alloc.w_bs(n);
    }
    auto overloaded = [&](int m) {
        return usage(m) > inst.bandwidth_leo(m) * (1.0 + kRelSlack);
    };

    const int max_moves = (inst.num_sues + inst.num_bs) * sats + 1;
    for (int move = 0; move < max_moves; ++move) {
        int victim_sat = -1;
        for (int m = 0; m < sats; ++m) {
            if (overloaded(m)) {
                victim_sat = m;
                break;
            }
        }
        if (victim_sat < 0) return assoc;  // feasible

        // Candidate moves off any overloaded satellite: smallest gain
        // penalty (current gain over best feasible alternative) wins; ties
        // break on terminal order, SUEs first.
        struct Move {
            bool is_sue;
            int index;
            int from, to;
            double penalty;
        };
        Move best{false, -1, -1, -1, std::numeric_limits<double>::infinity()};
        auto consider = [&](bool is_sue, int idx, int from, double w,
                            const Eigen::MatrixXd& gains) {
            int to = -1;
            for (int m = 0; m < sats; ++m) {
                if (m == from) continue;
                if (usage(m) + w >
                    inst.bandwidth_leo(m) * (1.0 + kRelSlack)) {
                    continue;
                }
                if (to < 0 || gains(m, idx) > gains(to, idx)) to = m;
            }
            if (to < 0) return;
            const double penalty = gains(from, idx) / gains(to, idx);
            if (penalty < best.penalty) {
                best = Move{is_sue, idx, from, to, penalty};
            }
        };
        for (int k = 0; k < inst.num_sues; ++k) {
            const int from = assoc.sue_satellite(k);
            if (from >= 0 && overloaded(from)) {
                consider(true, k, from, alloc.w_sue(k), inst.gain_sue);
            }
        }
        for (int n = 0; n < inst.num_bs; ++n) {
            const int from = assoc.bs_satellite(n);
            if (from >= 0 && overloaded(from)) {
                consider(false, n, from, alloc.w_bs(n), inst.gain_bs);
            }
        }
        if (best.index < 0) {
            throw std::runtime_error(
                "bandwidth repair exhausted: no terminal on an overloaded "
                "satellite fits elsewhere");
        }
        const double w =
            best.is_sue ? alloc.w_sue(best.index) : alloc.w_bs(best.index);
        if (best.is_sue) {
            assoc.sue(best.from, best.index) = 0;
            assoc.sue(best.to, best.index) = 1;
        } else {
            assoc.bs(best.from, best.index) = 0;
            assoc.bs(best.to, best.index) = 1;
        }
        usage(best.from) -= w;
        usage(best.to) += w;
    }
    throw std::runtime_error("bandwidth repair did not terminate");
}

SolutionMetrics evaluate_solution(const ProblemInstance& inst,
                                  const BinaryAssociation& assoc,
                                  const Allocation& alloc) {
    SolutionMetrics metrics;
    const FractionalAssociation frac = to_fractional(assoc);
    metrics.sue_satisfied.resize(inst.num_sues);
    metrics.bs_satisfied.resize(inst.num_bs);
    int satisfied = 0;
    for (int k = 0; k < inst.num_sues; ++k) {
        const bool ok = rate_sue(alloc, frac, inst, k) >=
                        inst.demand_sue(k) * (1.0 - kRelSlack);
        metrics.sue_satisfied[k] = ok;
        satisfied += ok;
    }
    for (int n = 0; n < inst.num_bs; ++n) {
        const bool ok = rate_bs(alloc, frac, inst, n) >=
                        inst.demand_bs(n) * (1.0 - kRelSlack);
        metrics.bs_satisfied[n] = ok;
        satisfied += ok;
    }
    const int total = inst.num_sues + inst.num_bs;
    metrics.satisfaction =
        total > 0 ? static_cast<double>(satisfied) / total : 1.0;
    metrics.total_power_w = alloc.p_sue.sum() + alloc.p_bs.sum();
    metrics.total_power_dbw = watts_to_dbw(metrics.total_power_w);
    metrics.connections.assign(inst.num_satellites, 0);
    metrics.bandwidth_used.assign(inst.num_satellites, 0.0);
    for (int k = 0; k < inst.num_sues; ++k) {
        const int m = assoc.sue_satellite(k);
        if (m >= 0) {
            ++metrics.connections[m];
            metrics.bandwidth_used[m] += alloc.w_sue(k);
        }
    }
    for (int n = 0; n < inst.num_bs; ++n) {
        const int m = assoc.bs_satellite(n);
        if (m >= 0) {
            ++metrics.connections[m];
            metrics.bandwidth_used[m] += alloc.w_bs(n);
        }
    }
    return metrics;
}

Solution run_algorithm1(const ProblemInstance& inst,
                        const AlgorithmConfig& config) {
    inst.validate();
    config.validate();
    Solution sol;

    BinaryAssociation init;
    try {
        init = initialize_association(inst);
    } catch (const std::runtime_error&) {
        sol.status = AlgorithmStatus::Infeasible;
        return sol;
    }

    FractionalAssociation frac = to_fractional(init);
    BinaryAssociation last_integral = init;
    Allocation last_alloc;
    bool have_alloc = false;
    bool converged = false;

    for (int iter = 0; iter < config.max_iters; ++iter) {
        AllocationResult conv =
            solve_allocation(inst, frac, config.solver,
                             have_alloc ? &last_alloc : nullptr);
        if (conv.report.status != SolveStatus::Optimal) {
            if (!have_alloc) {
                sol.status = conv.report.status == SolveStatus::Infeasible
                                 ? AlgorithmStatus::Infeasible
                                 : AlgorithmStatus::MaxIter;
                sol.final_report = conv.report;
                return sol;
            }
            sol.fallback_iteration = iter;
            break;
        }
        sol.objective_trace.push_back(conv.report.objective);
        sol.fractional_trace.push_back(frac);
        last_alloc = conv.allocation;
        have_alloc = true;

        const int i = static_cast<int>(sol.objective_trace.size()) - 1;
        if (i >= 1) {
            const double prev = sol.objective_trace[i - 1];
            const double cur = sol.objective_trace[i];
            if (std::abs(cur - prev) <= config.eps * std::abs(prev)) {
                converged = true;
                break;
            }
        }

        AssociationResult ilp =
            solve_association(inst, conv.allocation, config.association);
        const bool usable =
            ilp.report.status == SolveStatus::Optimal ||
            (ilp.report.status == SolveStatus::MaxIter &&
             std::isfinite(ilp.report.objective));
        if (!usable) {
            if (iter == 0) {
                sol.status = AlgorithmStatus::Infeasible;
                sol.final_report = ilp.report;
                return sol;
            }
            sol.fallback_iteration = iter;
            break;
        }
        last_integral = ilp.association;
        frac = update_association(frac, ilp.association, config.rho);
    }
    sol.iterations = static_cast<int>(sol.objective_trace.size());

    // Phase 2: recover an integral association and re-solve exactly.
    BinaryAssociation final_assoc = last_integral;
    bool rounded = false;
    try {
        final_assoc = round_association(frac, inst, last_alloc);
        rounded = true;
    } catch (const std::runtime_error&) {
        // Repair failed; the last integral subproblem solution stands.
    }
    AllocationResult refine = solve_allocation(
        inst, to_fractional(final_assoc), config.solver, &last_alloc);
    if (refine.report.status != SolveStatus::Optimal && rounded &&
        !(final_assoc == last_integral)) {
        final_assoc = last_integral;
        refine = solve_allocation(inst, to_fractional(final_assoc),
                                  config.solver, &last_alloc);
    }

    sol.association = final_assoc;
    sol.allocation = refine.allocation;
    sol.final_report = refine.report;
    sol.objective_w = refine.report.objective;
    if (refine.report.status == SolveStatus::Optimal) {
        sol.status = converged ? AlgorithmStatus::Converged
                               : AlgorithmStatus::MaxIter;
        const SolutionMetrics metrics =
            evaluate_solution(inst, final_assoc, refine.allocation);
        sol.satisfaction = metrics.satisfaction;
        sol.per_leo_connections = metrics.connections;
    } else {
        sol.status = refine.report.status == SolveStatus::Infeasible
                         ? AlgorithmStatus::Infeasible
                         : AlgorithmStatus::MaxIter;
    }
    return sol;
}

}  // namespace istn
