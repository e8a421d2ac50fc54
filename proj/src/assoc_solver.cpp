#include "istn/assoc_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

#include "istn/convex_solver.hpp"
#include "istn/detail/simplex.hpp"

namespace istn {

namespace {

constexpr double kRelSlack = 1e-9;  // float comparisons on frozen values

struct Candidate {
    int terminal;
    int sat;
    double cost;  // frozen power, W
    double rate;  // frozen rate, bit/s
};

struct TerminalInfo {
    bool is_sue;
    int index;
    double demand;
    double cap;
    double bandwidth;  // frozen W̄_t, Hz
    std::vector<int> cands;
};

struct Model {
    std::vector<TerminalInfo> terminals;
    std::vector<Candidate> cands;
    int num_sats = 0;
    double cost_scale = 1.0;
    bool feasible = true;  // false iff some terminal has no candidate
};

Model build_model(const ProblemInstance& inst, const Allocation& alloc) {
    Model model;
    model.num_sats = inst.num_satellites;
    auto add_terminal = [&](bool is_sue, int idx) {
        TerminalInfo t;
        t.is_sue = is_sue;
        t.index = idx;
        t.demand = is_sue ? inst.demand_sue(idx) : inst.demand_bs(idx);
        t.cap = is_sue ? inst.p_max_sue(idx) : inst.p_max_bs(idx);
        t.bandwidth = is_sue ? alloc.w_sue(idx) : alloc.w_bs(idx);
        for (int m = 0; m < inst.num_satellites && t.bandwidth > 0.0; ++m) {
            const double gain =
                is_sue ? inst.gain_sue(m, idx) : inst.gain_bs(m, idx);
            const double noise = inst.noise_density(m);
            const double frozen =
                is_sue ? alloc.p_sue(m, idx) : alloc.p_bs(m, idx);
            double cost, rate;
            if (frozen > 0.0) {
                cost = frozen;
                rate = t.bandwidth *
                       std::log1p(frozen * gain / (noise * t.bandwidth)) /
                       M_LN2;
            } else {
                // Backfill: the allocation prices only links it used; a
                // zero-power link gets the closed-form power that would meet
                // the demand on the terminal's current bandwidth.
                cost = min_power_for_rate(t.demand, t.bandwidth, gain, noise);
                rate = t.demand;
            }
            if (!std::isfinite(cost)) continue;
            if (rate < t.demand * (1.0 - kRelSlack)) continue;
            if (cost > t.cap * (1.0 + kRelSlack)) continue;
            Candidate c;
            c.terminal = static_cast<int>(model.terminals.size());
            c.sat = m;
            c.cost = cost;
            c.rate = rate;
            t.cands.push_back(static_cast<int>(model.cands.size()));
            model.cands.push_back(c);
        }
        if (t.cands.empty()) model.feasible = false;
        model.terminals.push_back(std::move(t));
    };
    for (int k = 0; k < inst.num_sues; ++k) add_terminal(true, k);
    for (int n = 0; n < inst.num_bs; ++n) add_terminal(false, n);

    for (const auto& c : model.cands) {
        model.cost_scale = std::max(model.cost_scale, c.cost);
    }
    return model;
}

// Selection in terminal order; -1 = unassigned. Lexicographic comparison of
// these vectors (with satellites ascending) defines the canonical optimum.
using Selection = std::vector<int>;

bool lex_less(const Selection& a, const Selection& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(),
                                        b.end());
}

// Exact feasibility + objective of an integral selection.
bool evaluate_selection(const Model& model, const ProblemInstance& inst,
                        const Selection& sel, double* objective) {
    Eigen::VectorXd bw_used = Eigen::VectorXd::Zero(model.num_sats);
    double total = 0.0;
    for (std::size_t t = 0; t < model.terminals.size(); ++t) {
        const auto& term = model.terminals[t];
        const int m = sel[t];
        if (m < 0) return false;  // positive demand, no satellite
        const Candidate* found = nullptr;
        for (int ci : term.cands) {
            if (model.cands[ci].sat == m) {
                found = &model.cands[ci];
                break;
            }
        }
        if (!found) return false;
        total += found->cost;
        bw_used(m) += term.bandwidth;
    }
    for (int m = 0; m < model.num_sats; ++m) {
        if (bw_used(m) > inst.bandwidth_leo(m) * (1.0 + kRelSlack)) {
            return false;
        }
    }
    *objective = total;
    return true;
}

BinaryAssociation selection_to_association(const Model& model,
                                           const ProblemInstance& inst,
                                           const Selection& sel) {
    BinaryAssociation assoc = make_empty_association(
        inst.num_satellites, inst.num_sues, inst.num_bs);
    for (std::size_t t = 0; t < model.terminals.size(); ++t) {
        if (sel[t] < 0) continue;
        const auto& term = model.terminals[t];
        if (term.is_sue) {
            assoc.sue(sel[t], term.index) = 1;
        } else {
            assoc.bs(sel[t], term.index) = 1;
        }
    }
    return assoc;
}

enum class VarState : std::int8_t { Free, One, Zero };

struct Node {
    double bound;
    long id;
    std::vector<VarState> state;
};

struct NodeOrder {
    bool operator()(const Node& a, const Node& b) const {
        if (a.bound != b.bound) return a.bound > b.bound;
        return a.id > b.id;  // FIFO among equal bounds
    }
};

// LP relaxation of a node. Returns false if the node is trivially infeasible
// (a terminal ran out of candidates, or fixed choices already overrun a
// budget).
bool build_node_lp(const Model& model, const ProblemInstance& inst,
                   const std::vector<VarState>& state, double* fixed_cost,
                   detail::LinearProgram* lp, std::vector<int>* lp_to_cand) {
    const int num_cands = static_cast<int>(model.cands.size());
    std::vector<int> var_of(num_cands, -1);
    lp_to_cand->clear();
    *fixed_cost = 0.0;

    Eigen::VectorXd bw_fixed = Eigen::VectorXd::Zero(model.num_sats);
    for (int j = 0; j < num_cands; ++j) {
        if (state[j] == VarState::Free) {
            var_of[j] = static_cast<int>(lp_to_cand->size());
            lp_to_cand->push_back(j);
        } else if (state[j] == VarState::One) {
            *fixed_cost += model.cands[j].cost;
            bw_fixed(model.cands[j].sat) +=
                model.terminals[model.cands[j].terminal].bandwidth;
        }
    }
    const int n = static_cast<int>(lp_to_cand->size());
    lp->num_vars = n;
    lp->cost = Eigen::VectorXd::Zero(n);
    for (int v = 0; v < n; ++v) {
        lp->cost(v) = model.cands[(*lp_to_cand)[v]].cost / model.cost_scale;
    }
    lp->rows.clear();
    lp->rhs.clear();
    lp->rel.clear();

    for (std::size_t t = 0; t < model.terminals.size(); ++t) {
        const auto& term = model.terminals[t];
        int ones = 0;
        double fixed_rate = 0.0;
        std::vector<int> free_vars;
        for (int ci : term.cands) {
            if (state[ci] == VarState::One) {
                ++ones;
                fixed_rate += model.cands[ci].rate;
            } else if (state[ci] == VarState::Free) {
                free_vars.push_back(ci);
            }
        }
        if (ones == 0 && free_vars.empty()) return false;
        if (ones > 0) continue;  // demand met; siblings were zeroed
        Eigen::VectorXd rate_row = Eigen::VectorXd::Zero(n);
        Eigen::VectorXd one_row = Eigen::VectorXd::Zero(n);
        for (int ci : free_vars) {
            rate_row(var_of[ci]) = model.cands[ci].rate / term.demand;
            one_row(var_of[ci]) = 1.0;
        }
        // Mirror the kRelSlack tolerance of evaluate_selection so a selection
        // that passes the exact integral check is never pruned by its LP.
        lp->rows.push_back(std::move(rate_row));
        lp->rhs.push_back(1.0 - kRelSlack);
        lp->rel.push_back('G');
        lp->rows.push_back(std::move(one_row));
        lp->rhs.push_back(1.0);
        lp->rel.push_back('L');
    }

    for (int m = 0; m < model.num_sats; ++m) {
        const double budget = inst.bandwidth_leo(m);
        const double rhs = 1.0 - bw_fixed(m) / budget;
        if (rhs < -kRelSlack) return false;
        Eigen::VectorXd row = Eigen::VectorXd::Zero(n);
        bool any = false;
        for (int v = 0; v < n; ++v) {
            const auto& c = model.cands[(*lp_to_cand)[v]];
            if (c.sat == m) {
                row(v) = model.terminals[c.terminal].bandwidth / budget;
                any = true;
            }
        }
        if (!any) continue;
        lp->rows.push_back(std::move(row));
        lp->rhs.push_back(rhs + kRelSlack);
        lp->rel.push_back('L');
    }
    return true;
}

Selection selection_of_state(const Model& model,
                             const std::vector<VarState>& state) {
    Selection sel(model.terminals.size(), -1);
    for (std::size_t j = 0; j < model.cands.size(); ++j) {
        if (state[j] == VarState::One) {
            sel[model.cands[j].terminal] = model.cands[j].sat;
        }
    }
    return sel;
}

}  // namespace

AssociationResult solve_association(const ProblemInstance& inst,
                                    const Allocation& alloc,
                                    const AssociationOptions& options) {
    inst.validate();
    const Model model = build_model(inst, alloc);
    AssociationResult result;
    result.association = make_empty_association(inst.num_satellites,
                                                inst.num_sues, inst.num_bs);
    result.report.objective = std::numeric_limits<double>::infinity();
    if (!model.feasible) {
        result.report.status = SolveStatus::Infeasible;
        return result;
    }

    const auto window = [&](double obj) {
        return options.tolerance * (1.0 + std::abs(obj));
    };

    bool have_incumbent = false;
    double inc_obj = std::numeric_limits<double>::infinity();
    Selection inc_sel;

    std::priority_queue<Node, std::vector<Node>, NodeOrder> heap;
    long next_id = 0;
    long nodes = 0;
    heap.push(Node{0.0, next_id++,
                   std::vector<VarState>(model.cands.size(), VarState::Free)});

    // Returns whether the selection is exactly feasible (regardless of
    // whether it displaced the incumbent).
    auto offer_incumbent = [&](const Selection& sel) {
        double obj;
        if (!evaluate_selection(model, inst, sel, &obj)) return false;
        if (!have_incumbent || obj < inc_obj - window(inc_obj)) {
            inc_obj = obj;
            inc_sel = sel;
            have_incumbent = true;
        } else if (options.lexicographic_tiebreak && have_incumbent &&
                   std::abs(obj - inc_obj) <= window(inc_obj) &&
                   lex_less(sel, inc_sel)) {
            inc_obj = obj;
            inc_sel = sel;
        }
        return true;
    };

    bool hit_limit = false;
    detail::LinearProgram lp;
    std::vector<int> lp_to_cand;
    while (!heap.empty()) {
        if (nodes >= options.node_limit) {
            hit_limit = true;
            break;
        }
        Node node = heap.top();
        heap.pop();
        ++nodes;
        if (have_incumbent) {
            const bool prune =
                options.lexicographic_tiebreak
                    ? node.bound > inc_obj + window(inc_obj)
                    : node.bound >= inc_obj - window(inc_obj);
            if (prune) continue;
        }

        double fixed_cost = 0.0;
        if (!build_node_lp(model, inst, node.state, &fixed_cost, &lp,
                           &lp_to_cand)) {
            continue;
        }
        if (lp.num_vars == 0) {
            offer_incumbent(selection_of_state(model, node.state));
            continue;
        }
        const auto sol = detail::solve_lp(lp);
        if (sol.status == detail::LpStatus::Infeasible) continue;

        double bound = fixed_cost;
        bool have_lp = sol.status == detail::LpStatus::Optimal;
        if (have_lp) bound += sol.objective * model.cost_scale;
        // An LP failure (iteration limit / numerics) keeps the weaker bound
        // fixed_cost, which is still valid since costs are nonnegative.
        if (have_incumbent) {
            const bool prune = options.lexicographic_tiebreak
                                   ? bound > inc_obj + window(inc_obj)
                                   : bound >= inc_obj - window(inc_obj);
            if (prune) continue;
        }

        int branch_cand = -1;
        if (have_lp) {
            double best_frac = 1.0;
            bool integral = true;
            int first_one = -1;
            for (int v = 0; v < lp.num_vars; ++v) {
                const double x = sol.x(v);
                const double dist = std::abs(x - std::round(x));
                if (dist > 1e-7) integral = false;
                if (first_one < 0 && x > 0.5) first_one = lp_to_cand[v];
                const double frac = std::abs(x - 0.5);
                if (dist > 1e-7 && frac < best_frac - 1e-12) {
                    best_frac = frac;
                    branch_cand = lp_to_cand[v];
                }
            }
            if (integral) {
                Selection sel = selection_of_state(model, node.state);
                for (int v = 0; v < lp.num_vars; ++v) {
                    if (sol.x(v) > 0.5) {
                        const auto& c = model.cands[lp_to_cand[v]];
                        sel[c.terminal] = c.sat;
                    }
                }
                if (offer_incumbent(sel) || first_one < 0) continue;
                // LP-feasible but exactly infeasible (tolerance knife edge):
                // split on one of its selections so the children settle it.
                branch_cand = first_one;
            }
        }
        if (branch_cand < 0) branch_cand = lp_to_cand.front();

        Node one = node;
        one.state[branch_cand] = VarState::One;
        for (int ci : model.terminals[model.cands[branch_cand].terminal].cands) {
            if (ci != branch_cand && one.state[ci] == VarState::Free) {
                one.state[ci] = VarState::Zero;
            }
        }
        one.bound = bound;
        one.id = next_id++;
        Node zero = node;
        zero.state[branch_cand] = VarState::Zero;
        zero.bound = bound;
        zero.id = next_id++;
        heap.push(std::move(one));
        heap.push(std::move(zero));
    }

    result.report.iterations = static_cast<int>(nodes);
    if (have_incumbent) {
        result.association = selection_to_association(model, inst, inc_sel);
        result.report.objective = inc_obj;
        result.report.status =
            hit_limit ? SolveStatus::MaxIter : SolveStatus::Optimal;
        result.report.kkt_residual = 0.0;
    } else {
        result.report.status =
            hit_limit ? SolveStatus::MaxIter : SolveStatus::Infeasible;
    }
    return result;
}

AssociationResult enumerate_association_oracle(const ProblemInstance& inst,
                                               const Allocation& alloc) {
    inst.validate();
    const Model model = build_model(inst, alloc);
    const int num_terms = static_cast<int>(model.terminals.size());
    double combos = 1.0;
    for (int t = 0; t < num_terms; ++t) {
        combos *= inst.num_satellites + 1;
        if (combos > 1e7) {
            throw std::invalid_argument(
                "enumeration oracle: selection space exceeds 1e7");
        }
    }

    AssociationResult result;
    result.association = make_empty_association(inst.num_satellites,
                                                inst.num_sues, inst.num_bs);
    result.report.objective = std::numeric_limits<double>::infinity();
    result.report.status = SolveStatus::Infeasible;

    // Mixed-radix odometer, terminal 0 most significant, satellite indices
    // ascending before "unassigned": visits selections in lexicographic
    // order, so keeping strict improvements only retains the lex-smallest
    // among exact ties — mirroring the solver's canonical choice.
    Selection digits(num_terms, 0);
    long visited = 0;
    bool done = num_terms == 0;
    double best = std::numeric_limits<double>::infinity();
    while (!done) {
        ++visited;
        Selection sel(num_terms);
        for (int t = 0; t < num_terms; ++t) {
            sel[t] = digits[t] < inst.num_satellites ? digits[t] : -1;
        }
        double obj;
        if (evaluate_selection(model, inst, sel, &obj) && obj < best) {
            best = obj;
            result.association = selection_to_association(model, inst, sel);
            result.report.objective = obj;
            result.report.status = SolveStatus::Optimal;
        }
        int t = num_terms - 1;
        while (t >= 0) {
            if (++digits[t] <= inst.num_satellites) break;
            digits[t] = 0;
            --t;
        }
        if (t < 0) done = true;
    }
    result.report.iterations = static_cast<int>(visited);
    return result;
}

}  // namespace istn
