#include "istn/greedy.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "istn/convex_solver.hpp"

namespace istn {

namespace {

constexpr double kRelSlack = 1e-9;

int literal_cap(int count, int sats) {
    return static_cast<int>(
        std::floor(static_cast<double>(count) / sats + 0.5));
}

// One pass of the capped best-channel sweep over a gain matrix. Unassigned
// terminals (strict-mode deadlock) are reported through `unassigned`.
void assign_by_gain(const Eigen::MatrixXd& gains, int cap,
                    Eigen::MatrixXi& out, std::vector<int>& unassigned) {
    const int sats = static_cast<int>(gains.rows());
    const int terms = static_cast<int>(gains.cols());
    std::vector<int> capacity(sats, cap);
    std::vector<bool> sat_active(sats, true);
    std::vector<bool> term_active(terms, true);
    int remaining = terms;
    // Each step retires a terminal or a satellite, so this terminates.
    while (remaining > 0) {
        int best_m = -1, best_t = -1;
        double best = -1.0;
        for (int m = 0; m < sats; ++m) {
            if (!sat_active[m]) continue;
            for (int t = 0; t < terms; ++t) {
                if (!term_active[t]) continue;
                if (gains(m, t) > best) {
                    best = gains(m, t);
                    best_m = m;
                    best_t = t;
                }
            }
        }
        if (best_m < 0) break;  // every satellite retired: deadlock
        if (capacity[best_m] > 0) {
            out(best_m, best_t) = 1;
            --capacity[best_m];
            term_active[best_t] = false;
            --remaining;
        } else {
            sat_active[best_m] = false;
        }
    }
    for (int t = 0; t < terms; ++t) {
        if (term_active[t]) unassigned.push_back(t);
    }
}

BinaryAssociation associate_core(const ProblemInstance& inst,
                                 const GreedyOptions& options,
                                 std::vector<int>* unassigned_sues,
                                 std::vector<int>* unassigned_bs) {
    BinaryAssociation assoc = make_empty_association(
        inst.num_satellites, inst.num_sues, inst.num_bs);
    const auto [cap_bs, cap_sue] = greedy_caps(inst, options);
    assign_by_gain(inst.gain_bs, cap_bs, assoc.bs, *unassigned_bs);
    assign_by_gain(inst.gain_sue, cap_sue, assoc.sue, *unassigned_sues);
    return assoc;
}

}  // namespace

std::pair<int, int> greedy_caps(const ProblemInstance& inst,
                                const GreedyOptions& options) {
    int cap_bs = literal_cap(inst.num_bs, inst.num_satellites);
    int cap_sue = literal_cap(inst.num_sues, inst.num_satellites);
    if (!options.strict_paper) {
        const auto ceil_div = [](int a, int b) { return (a + b - 1) / b; };
        cap_bs = std::max(cap_bs, ceil_div(inst.num_bs, inst.num_satellites));
        cap_sue =
            std::max(cap_sue, ceil_div(inst.num_sues, inst.num_satellites));
    }
    return {cap_bs, cap_sue};
}

BinaryAssociation greedy_associate(const ProblemInstance& inst,
                                   const GreedyOptions& options) {
    inst.validate();
    std::vector<int> unassigned_sues, unassigned_bs;
    BinaryAssociation assoc =
        associate_core(inst, options, &unassigned_sues, &unassigned_bs);
    if (!unassigned_sues.empty() || !unassigned_bs.empty()) {
        std::ostringstream msg;
        msg << "greedy association deadlocked with " << unassigned_bs.size()
            << " BS(s) and " << unassigned_sues.size()
            << " SUE(s) unassigned under strict per-satellite caps";
        throw std::runtime_error(msg.str());
    }
    return assoc;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> greedy_bandwidth(
    const ProblemInstance& inst, const BinaryAssociation& assoc,
    const GreedyOptions& options) {
    Eigen::VectorXd w_sue = Eigen::VectorXd::Zero(inst.num_sues);
    Eigen::VectorXd w_bs = Eigen::VectorXd::Zero(inst.num_bs);
    for (int m = 0; m < inst.num_satellites; ++m) {
        double shares = 0.0;
        for (int k = 0; k < inst.num_sues; ++k) shares += assoc.sue(m, k);
        for (int n = 0; n < inst.num_bs; ++n) {
            if (assoc.bs(m, n)) {
                shares += options.strict_paper ? options.mean_ues
                                               : inst.ue_counts[n];
            }
        }
        if (shares <= 0.0) continue;
        const double per_share = inst.bandwidth_leo(m) / shares;
        for (int k = 0; k < inst.num_sues; ++k) {
            if (assoc.sue(m, k)) w_sue(k) = per_share;
        }
        for (int n = 0; n < inst.num_bs; ++n) {
            if (assoc.bs(m, n)) {
                w_bs(n) = per_share * (options.strict_paper
                                           ? options.mean_ues
                                           : inst.ue_counts[n]);
            }
        }
    }
    return {w_sue, w_bs};
}

GreedyResult greedy_power(const ProblemInstance& inst,
                          const BinaryAssociation& assoc,
                          const Eigen::VectorXd& w_sue,
                          const Eigen::VectorXd& w_bs) {
    GreedyResult result;
    result.association = assoc;
    result.allocation.p_sue =
        Eigen::MatrixXd::Zero(inst.num_satellites, inst.num_sues);
    result.allocation.p_bs =
        Eigen::MatrixXd::Zero(inst.num_satellites, inst.num_bs);
    result.allocation.w_sue = w_sue;
    result.allocation.w_bs = w_bs;

    int satisfied = 0;
    const int total_terms = inst.num_sues + inst.num_bs;
    for (int k = 0; k < inst.num_sues; ++k) {
        const int m = assoc.sue_satellite(k);
        if (m < 0 || !(w_sue(k) > 0.0)) {
            if (m < 0) result.unassigned_sues.push_back(k);
            continue;
        }
        const double required =
            min_power_for_rate(inst.demand_sue(k), w_sue(k),
                               inst.gain_sue(m, k), inst.noise_density(m));
        const double cap = inst.p_max_sue(k);
        result.allocation.p_sue(m, k) = std::min(required, cap);
        if (required <= cap * (1.0 + kRelSlack)) ++satisfied;
    }
    for (int n = 0; n < inst.num_bs; ++n) {
        const int m = assoc.bs_satellite(n);
        if (m < 0 || !(w_bs(n) > 0.0)) {
            if (m < 0) result.unassigned_bs.push_back(n);
            continue;
        }
        const double required =
            min_power_for_rate(inst.demand_bs(n), w_bs(n), inst.gain_bs(m, n),
                               inst.noise_density(m));
        const double cap = inst.p_max_bs(n);
        result.allocation.p_bs(m, n) = std::min(required, cap);
        if (required <= cap * (1.0 + kRelSlack)) ++satisfied;
    }

    result.total_power_w =
        result.allocation.p_sue.sum() + result.allocation.p_bs.sum();
    result.satisfaction =
        total_terms > 0 ? static_cast<double>(satisfied) / total_terms : 1.0;
    result.feasible = satisfied == total_terms;
    return result;
}

GreedyResult run_greedy(const ProblemInstance& inst,
                        const GreedyOptions& options) {
    inst.validate();
    std::vector<int> unassigned_sues, unassigned_bs;
    const BinaryAssociation assoc =
        associate_core(inst, options, &unassigned_sues, &unassigned_bs);
    const auto [w_sue, w_bs] = greedy_bandwidth(inst, assoc, options);
    GreedyResult result = greedy_power(inst, assoc, w_sue, w_bs);
    result.unassigned_sues = std::move(unassigned_sues);
    result.unassigned_bs = std::move(unassigned_bs);
    result.feasible = result.feasible && result.unassigned_sues.empty() &&
                      result.unassigned_bs.empty();
    return result;
}

}  // namespace istn
