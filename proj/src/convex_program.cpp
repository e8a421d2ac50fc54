#include "istn/detail/convex_program.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "istn/convex_solver.hpp"

namespace istn::detail {

namespace {

constexpr double kLn2 = 0.6931471805599453;

// Derivatives of the perspective rate term f(x, y) = y * ln(1 + c*x/y) with
// z = c*x/y. f is jointly concave; its Hessian is the rank-1 matrix
// -(1/(y*(1+z)^2)) * [c, -z]^T [c, -z].
struct RateTerm {
    double value;  // y * log1p(z)
    double fx, fy;
    double fxx, fxy, fyy;
};

RateTerm rate_term(double c, double x, double y) {
    RateTerm r;
    const double z = c * x / y;
    const double omz = 1.0 + z;
    r.value = y * std::log1p(z);
    r.fx = c / omz;
    r.fy = std::log1p(z) - z / omz;
    const double common = 1.0 / (y * omz * omz);
    r.fxx = -c * c * common;
    r.fxy = c * z * common;
    r.fyy = -z * z * common;
    return r;
}

// psi(u) = u ln2 2^u - (2^u - 1): gain/noise times the negative
// bandwidth-derivative of the closed-form power sigma*W*(2^(D/W)-1)/gain at
// spectral efficiency u = D/W. Increasing and zero at zero; the expm1 form
// avoids the cancellation of the direct expression for small u.
double psi(double u) {
    const double e = std::expm1(u * kLn2);
    return e * (u * kLn2 - 1.0) + u * kLn2;
}

// Smallest u >= 0 with psi(u) >= r, by bisection. psi overflows to +inf
// near u ~ 1e3, so the bracket always closes.
double psi_inverse(double r) {
    if (!(r > 0.0)) return 0.0;
    double hi = 1.0;
    bool doubled = false;
    while (psi(hi) < r) {
        hi *= 2.0;
        doubled = true;
        if (hi > 4096.0) return 4096.0;
    }
    double lo = doubled ? 0.5 * hi : 0.0;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (psi(mid) < r ? lo : hi) = mid;
    }
    return hi;
}

}  // namespace

ConvexProgram::ConvexProgram(const ProblemInstance& inst,
                             const FractionalAssociation& assoc,
                             double min_bandwidth_hz, double weight_floor)
    : inst_(inst), min_bandwidth_hz_(min_bandwidth_hz) {
    const int num_terms = inst.num_sues + inst.num_bs;
    bandwidth_scale_ = inst.bandwidth_leo.maxCoeff();
    min_bw_scaled_ = min_bandwidth_hz_ / bandwidth_scale_;

    terminals_.reserve(num_terms);
    int var = 0;
    auto add_terminal = [&](bool is_sue, int idx) {
        Terminal t;
        t.is_sue = is_sue;
        t.index = idx;
        t.demand = is_sue ? inst.demand_sue(idx) : inst.demand_bs(idx);
        t.cap = is_sue ? inst.p_max_sue(idx) : inst.p_max_bs(idx);
        for (int m = 0; m < inst.num_satellites; ++m) {
            const double w = is_sue ? assoc.sue(m, idx) : assoc.bs(m, idx);
            if (w < weight_floor) continue;
            Link link;
            link.var = var++;
            link.sat = m;
            link.terminal = static_cast<int>(terminals_.size());
            link.weight = w;
            link.gain = is_sue ? inst.gain_sue(m, idx) : inst.gain_bs(m, idx);
            // Scale each power by the closed-form demand inversion at an
            // equal bandwidth split (clamped to the cap). Caps can sit
            // decades above the powers actually used, and scaling by them
            // would push the optimum to ~1e-6 of a unit, ruining the Newton
            // conditioning; this keeps optima at O(1).
            const double fair_bw =
                inst.bandwidth_leo(m) / std::max(1, num_terms);
            double p_ref = min_power_for_rate(t.demand, fair_bw, link.gain,
                                              inst.noise_density(m));
            if (!std::isfinite(p_ref) || p_ref <= 0.0) p_ref = t.cap;
            link.power_scale = std::min(p_ref, t.cap);
            link.coef = link.power_scale * link.gain /
                        (inst.noise_density(m) * bandwidth_scale_);
            t.links.push_back(static_cast<int>(links_.size()));
            links_.push_back(link);
        }
        if (t.links.empty() && t.demand > 0.0) {
            std::ostringstream msg;
            msg << (is_sue ? "SUE " : "BS ") << idx
                << " has positive demand but no association weight above "
                << weight_floor;
            throw std::invalid_argument(msg.str());
        }
        terminals_.push_back(std::move(t));
    };
    for (int k = 0; k < inst.num_sues; ++k) add_terminal(true, k);
    for (int n = 0; n < inst.num_bs; ++n) add_terminal(false, n);

    for (auto& t : terminals_) t.bw_var = var++;
    num_vars_ = var;
    num_hard_ = 2 * num_terms + inst.num_satellites;  // rates, caps, budgets
    num_bounds_ = static_cast<int>(links_.size()) + num_terms;

    c_ = Eigen::VectorXd::Zero(num_vars_);
    objective_scale_ = 0.0;
    for (const auto& link : links_) {
        objective_scale_ =
            std::max(objective_scale_, link.weight * link.power_scale);
    }
    if (objective_scale_ <= 0.0) objective_scale_ = 1.0;
    for (const auto& link : links_) {
        c_(link.var) = link.weight * link.power_scale / objective_scale_;
    }
}

double ConvexProgram::objective_scaled(const Eigen::VectorXd& x) const {
    return c_.head(num_vars_).dot(x.head(num_vars_));
}

double ConvexProgram::objective_watts(const Eigen::VectorXd& x) const {
    return objective_scaled(x) * objective_scale_;
}

bool ConvexProgram::bounds_ok(const Eigen::VectorXd& x) const {
    for (const auto& link : links_) {
        if (!(x(link.var) > 0.0)) return false;
    }
    for (const auto& t : terminals_) {
        if (!(x(t.bw_var) > min_bw_scaled_)) return false;
    }
    return true;
}

void ConvexProgram::hard_slacks(const Eigen::VectorXd& x,
                                Eigen::VectorXd& out) const {
    out.resize(num_hard_);
    int row = 0;
    // Rate demands: sum of weighted link rates, normalized by the demand.
    for (const auto& t : terminals_) {
        double rate = 0.0;  // in units of bandwidth_scale_ * ln-rate
        const double y = x(t.bw_var);
        for (int li : t.links) {
            const auto& link = links_[li];
            const double z = link.coef * x(link.var) / y;
            rate += link.weight * y * std::log1p(z);
        }
        out(row++) = rate * bandwidth_scale_ / (kLn2 * t.demand) - 1.0;
    }
    // Power caps: 1 - sum of weighted scaled powers.
    for (const auto& t : terminals_) {
        double used = 0.0;
        for (int li : t.links) {
            const auto& link = links_[li];
            used += link.weight * x(link.var) * link.power_scale;
        }
        out(row++) = 1.0 - used / t.cap;
    }
    // Bandwidth budgets per satellite.
    Eigen::VectorXd used = Eigen::VectorXd::Zero(inst_.num_satellites);
    for (const auto& link : links_) {
        used(link.sat) +=
            link.weight * x(terminals_[link.terminal].bw_var);
    }
    for (int m = 0; m < inst_.num_satellites; ++m) {
        out(row++) =
            1.0 - used(m) * bandwidth_scale_ / inst_.bandwidth_leo(m);
    }
}

double ConvexProgram::min_hard_slack(const Eigen::VectorXd& x) const {
    Eigen::VectorXd s;
    hard_slacks(x, s);
    return s.minCoeff();
}

bool ConvexProgram::eval_barrier(const Eigen::VectorXd& x, double t,
                                 bool phase1, double* value,
                                 Eigen::VectorXd* grad,
                                 Eigen::MatrixXd* hess) const {
    const int n = phase1 ? num_vars_ + 1 : num_vars_;
    const int tau_var = num_vars_;
    const double tau = phase1 ? x(tau_var) : 0.0;
    *value = std::numeric_limits<double>::infinity();
    if (!bounds_ok(x)) return false;

    double val = phase1 ? -t * tau : t * objective_scaled(x);
    if (grad) {
        grad->setZero(n);
        if (phase1) {
            (*grad)(tau_var) = -t;
        } else {
            grad->head(num_vars_) = t * c_;
        }
    }
    if (hess) hess->setZero(n, n);

    // Sparse gradient of one hard constraint: (variable, ds/dvariable).
    std::vector<std::pair<int, double>> sg;
    sg.reserve(inst_.num_sues + inst_.num_bs + 2);

    auto accumulate_log = [&](double slack,
                              const std::vector<std::pair<int, double>>& g) {
        // -log(u) with u = slack (phase 2) or slack - tau (phase 1); in
        // phase 1 the gradient additionally carries du/dtau = -1.
        const double u = slack - tau;
        if (!(u > 0.0)) return false;
        val -= std::log(u);
        if (grad) {
            const double inv = 1.0 / u;
            for (const auto& [j, gj] : g) (*grad)(j) -= inv * gj;
            if (phase1) (*grad)(tau_var) += inv;
        }
        if (hess) {
            const double inv2 = 1.0 / (u * u);
            auto rank1 = [&](int a, double ga, int b, double gb) {
                (*hess)(a, b) += inv2 * ga * gb;
                if (a != b) (*hess)(b, a) += inv2 * ga * gb;
            };
            for (std::size_t i = 0; i < g.size(); ++i) {
                rank1(g[i].first, g[i].second, g[i].first, g[i].second);
                for (std::size_t j = i + 1; j < g.size(); ++j) {
                    rank1(g[i].first, g[i].second, g[j].first, g[j].second);
                }
                if (phase1) {
                    rank1(g[i].first, g[i].second, tau_var, -1.0);
                }
            }
            if (phase1) (*hess)(tau_var, tau_var) += inv2;
        }
        return true;
    };

    // Rate constraints (nonlinear; the only curvature source besides logs).
    for (const auto& t_ref : terminals_) {
        const double y = x(t_ref.bw_var);
        const double q = bandwidth_scale_ / (kLn2 * t_ref.demand);
        double slack = -1.0;
        double dy = 0.0;
        sg.clear();
        std::vector<RateTerm> terms(t_ref.links.size());
        for (std::size_t i = 0; i < t_ref.links.size(); ++i) {
            const auto& link = links_[t_ref.links[i]];
            terms[i] = rate_term(link.coef, x(link.var), y);
            const double aq = link.weight * q;
            slack += aq * terms[i].value;
            sg.emplace_back(link.var, aq * terms[i].fx);
            dy += aq * terms[i].fy;
        }
        sg.emplace_back(t_ref.bw_var, dy);
        const double u = slack - tau;
        if (!(u > 0.0)) return false;
        if (!accumulate_log(slack, sg)) return false;
        if (hess) {
            // -(1/u) * Hessian of the (concave) slack function.
            const double inv = 1.0 / u;
            for (std::size_t i = 0; i < t_ref.links.size(); ++i) {
                const auto& link = links_[t_ref.links[i]];
                const double aq = link.weight * q;
                (*hess)(link.var, link.var) -= inv * aq * terms[i].fxx;
                (*hess)(link.var, t_ref.bw_var) -= inv * aq * terms[i].fxy;
                (*hess)(t_ref.bw_var, link.var) -= inv * aq * terms[i].fxy;
                (*hess)(t_ref.bw_var, t_ref.bw_var) -= inv * aq * terms[i].fyy;
            }
        }
    }

    // Power caps (linear).
    for (const auto& t_ref : terminals_) {
        double slack = 1.0;
        sg.clear();
        for (int li : t_ref.links) {
            const auto& link = links_[li];
            const double coeff = link.weight * link.power_scale / t_ref.cap;
            slack -= coeff * x(link.var);
            sg.emplace_back(link.var, -coeff);
        }
        if (!accumulate_log(slack, sg)) return false;
    }

    // Bandwidth budgets (linear in the bandwidth variables).
    {
        std::vector<std::vector<std::pair<int, double>>> per_sat(
            inst_.num_satellites);
        for (const auto& link : links_) {
            per_sat[link.sat].emplace_back(
                terminals_[link.terminal].bw_var,
                link.weight * bandwidth_scale_ /
                    inst_.bandwidth_leo(link.sat));
        }
        for (int m = 0; m < inst_.num_satellites; ++m) {
            double slack = 1.0;
            sg.clear();
            for (const auto& [var, coeff] : per_sat[m]) {
                slack -= coeff * x(var);
                sg.emplace_back(var, -coeff);
            }
            if (!accumulate_log(slack, sg)) return false;
        }
    }

    // Bounds: power positivity and the bandwidth floor (no tau term).
    for (const auto& link : links_) {
        const double b = x(link.var);
        val -= std::log(b);
        if (grad) (*grad)(link.var) -= 1.0 / b;
        if (hess) (*hess)(link.var, link.var) += 1.0 / (b * b);
    }
    for (const auto& t_ref : terminals_) {
        const double b = x(t_ref.bw_var) - min_bw_scaled_;
        val -= std::log(b);
        if (grad) (*grad)(t_ref.bw_var) -= 1.0 / b;
        if (hess) (*hess)(t_ref.bw_var, t_ref.bw_var) += 1.0 / (b * b);
    }

    *value = val;
    return true;
}

Eigen::VectorXd ConvexProgram::heuristic_start() const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(num_vars_);

    // Bandwidth pro rata by demand: W_t = theta * demand_t with theta chosen
    // so every satellite budget holds with 10% headroom.
    Eigen::VectorXd load = Eigen::VectorXd::Zero(inst_.num_satellites);
    for (const auto& link : links_) {
        load(link.sat) += link.weight * terminals_[link.terminal].demand;
    }
    double theta = std::numeric_limits<double>::infinity();
    for (int m = 0; m < inst_.num_satellites; ++m) {
        if (load(m) > 0.0) {
            theta = std::min(theta, inst_.bandwidth_leo(m) / load(m));
        }
    }
    if (!std::isfinite(theta)) theta = 1.0;
    theta *= 0.9;

    for (const auto& t : terminals_) {
        const double w = std::max(theta * t.demand, 2.0 * min_bandwidth_hz_);
        x(t.bw_var) = w / bandwidth_scale_;
        // Per-link rate shares with a 10% margin; if the closed form
        // overflows, fall back to the cap and let Phase I sort it out.
        double total_weight = 0.0;
        for (int li : t.links) total_weight += links_[li].weight;
        if (total_weight <= 0.0) continue;
        const double share = 1.1 * t.demand / total_weight;
        for (int li : t.links) {
            const auto& link = links_[li];
            double p = min_power_for_rate(
                share, w, link.gain,
                inst_.noise_density(link.sat));
            if (!std::isfinite(p) || p > 1e6 * t.cap) p = t.cap;
            x(link.var) = std::max(p / link.power_scale, 1e-12);
        }
    }
    return x;
}

Eigen::VectorXd ConvexProgram::start_from(const Allocation& warm) const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(num_vars_);
    for (const auto& link : links_) {
        const auto& t = terminals_[link.terminal];
        const double p = t.is_sue ? warm.p_sue(link.sat, t.index)
                                  : warm.p_bs(link.sat, t.index);
        // Polished allocations may carry exact zeros on dropped links; keep
        // the start far enough inside the domain for usable Newton steps.
        x(link.var) = std::max(p / link.power_scale, 1e-6);
    }
    for (const auto& t : terminals_) {
        const double w = t.is_sue ? warm.w_sue(t.index) : warm.w_bs(t.index);
        x(t.bw_var) =
            std::max(w / bandwidth_scale_, min_bw_scaled_ * (1.0 + 1e-6));
    }
    return x;
}

void ConvexProgram::polish_waterfill(Eigen::VectorXd& x) const {
    for (const auto& t : terminals_) {
        if (t.links.empty()) continue;
        const double w = x(t.bw_var) * bandwidth_scale_;
        // Water-filling across the terminal's links: equalize marginal power
        // per rate. p_j(nu) = W * max(0, nu - 1/gamma_j) with rate
        // sum_j a_j W log2(max(1, nu*gamma_j)) increasing in nu.
        std::vector<double> gamma(t.links.size());
        double gamma_max = 0.0;
        for (std::size_t i = 0; i < t.links.size(); ++i) {
            const auto& link = links_[t.links[i]];
            gamma[i] = link.gain / inst_.noise_density(link.sat);
            gamma_max = std::max(gamma_max, gamma[i]);
        }
        auto rate_at = [&](double nu) {
            double r = 0.0;
            for (std::size_t i = 0; i < t.links.size(); ++i) {
                const double zg = nu * gamma[i];
                if (zg > 1.0) {
                    r += links_[t.links[i]].weight * w * std::log2(zg);
                }
            }
            return r;
        };
        double lo = 1.0 / gamma_max;
        double hi = lo;
        bool bracketed = false;
        for (int it = 0; it < 400; ++it) {
            hi *= 2.0;
            if (rate_at(hi) >= t.demand) {
                bracketed = true;
                break;
            }
        }
        if (!bracketed) continue;  // demand unreachable here; keep barrier x
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (rate_at(mid) >= t.demand) {
                hi = mid;
            } else {
                lo = mid;
            }
            if ((hi - lo) <= 1e-15 * hi) break;
        }
        // hi satisfies the demand by construction.
        double total = 0.0;
        std::vector<double> p(t.links.size());
        for (std::size_t i = 0; i < t.links.size(); ++i) {
            p[i] = w * std::max(0.0, hi - 1.0 / gamma[i]);
            total += links_[t.links[i]].weight * p[i];
        }
        if (total > t.cap * (1.0 + 1e-12)) continue;
        double barrier_total = 0.0;
        for (std::size_t i = 0; i < t.links.size(); ++i) {
            const auto& link = links_[t.links[i]];
            barrier_total += link.weight * x(link.var) * link.power_scale;
        }
        if (total >= barrier_total) continue;  // only ever improve
        for (std::size_t i = 0; i < t.links.size(); ++i) {
            const auto& link = links_[t.links[i]];
            x(link.var) = p[i] / link.power_scale;
        }
    }
}

bool ConvexProgram::separable() const {
    for (const auto& t : terminals_) {
        if (t.links.size() != 1) return false;
    }
    return true;
}

double ConvexProgram::polish_separable(Eigen::VectorXd& x) const {
    if (!separable()) return -1.0;

    // Work on consumed quantities: v = weight * W eats the budget, and
    // q = weight * p is the capped/objective power; the rate constraint
    // v * log2(1 + q*gain/(noise*v)) >= demand keeps the single-link shape
    // in (q, v), so each satellite is an independent water-level problem.
    Eigen::VectorXd xc = x;
    double worst_stat = 0.0;

    std::vector<std::vector<int>> by_sat(inst_.num_satellites);
    for (std::size_t ti = 0; ti < terminals_.size(); ++ti) {
        const int sat = links_[terminals_[ti].links.front()].sat;
        by_sat[sat].push_back(static_cast<int>(ti));
    }

    for (int m = 0; m < inst_.num_satellites; ++m) {
        if (by_sat[m].empty()) continue;
        const double sigma = inst_.noise_density(m);
        const double budget = inst_.bandwidth_leo(m);

        struct Item {
            int terminal;
            double gain = 0.0;
            double demand = 0.0;
            double cap = 0.0;
            double vfloor = 0.0;  // cap- and bound-imposed minimum v
            double v = 0.0;
            bool pinned = false;  // held at vfloor, outside the water level
        };
        std::vector<Item> items;
        items.reserve(by_sat[m].size());
        double floor_sum = 0.0;
        for (int ti : by_sat[m]) {
            const auto& t = terminals_[static_cast<std::size_t>(ti)];
            const auto& link = links_[t.links.front()];
            Item it;
            it.terminal = ti;
            it.gain = link.gain;
            it.demand = t.demand;
            it.cap = t.cap;
            // Smallest v at which the power cap holds; below the asymptote
            // sigma*D*ln2/gain no bandwidth suffices (Phase I's verdict
            // stands in that case).
            if (it.cap < sigma * it.demand * kLn2 / it.gain * (1.0 + 1e-12)) {
                return -1.0;
            }
            double hi = it.demand;
            bool doubled = false;
            while (min_power_for_rate(it.demand, hi, it.gain, sigma) >
                   it.cap) {
                hi *= 2.0;
                doubled = true;
                if (hi > 1e40) return -1.0;
            }
            double lo = doubled ? 0.5 * hi : 0.0;
            for (int k = 0; k < 100; ++k) {
                const double mid = 0.5 * (lo + hi);
                (min_power_for_rate(it.demand, mid, it.gain, sigma) > it.cap
                     ? lo
                     : hi) = mid;
            }
            it.vfloor = std::max(hi, link.weight * min_bandwidth_hz_);
            floor_sum += it.vfloor;
            items.push_back(it);
        }
        if (floor_sum > budget) return -1.0;

        // v(lambda) per item: the bandwidth whose marginal power equals the
        // water level lambda, floored at vfloor. Nonincreasing in lambda, so
        // bisect lambda until the budget row closes.
        auto fill = [&](double lambda) {
            double used = 0.0;
            for (auto& it : items) {
                const double u = psi_inverse(lambda * it.gain / sigma);
                const double v_unc =
                    u > 0.0 ? it.demand / u
                            : std::numeric_limits<double>::infinity();
                it.pinned = !(v_unc > it.vfloor);
                it.v = it.pinned ? it.vfloor : v_unc;
                used += it.v;
            }
            return used;
        };
        double lam_hi = 1.0;
        while (fill(lam_hi) > budget) {
            lam_hi *= 4.0;
            if (lam_hi > 1e300) return -1.0;
        }
        double lam_lo = lam_hi;
        while (fill(lam_lo) < budget && lam_lo > 1e-300) lam_lo *= 0.25;
        if (fill(lam_lo) < budget) return -1.0;
        for (int k = 0; k < 140; ++k) {
            const double mid = 0.5 * (lam_lo + lam_hi);
            (fill(mid) < budget ? lam_hi : lam_lo) = mid;
        }
        const double lambda = lam_hi;
        const double used = fill(lambda);  // the feasible side: used <= budget

        // Hand the leftover sliver to the widest item (preferring unpinned
        // ones) so the budget row closes exactly; widening only ever lowers
        // a power.
        auto widest_of = [&](bool unpinned_only) {
            int best = -1;
            for (std::size_t i = 0; i < items.size(); ++i) {
                if (unpinned_only && items[i].pinned) continue;
                if (best < 0 ||
                    items[i].v > items[static_cast<std::size_t>(best)].v) {
                    best = static_cast<int>(i);
                }
            }
            return best;
        };
        int widest = widest_of(true);
        if (widest < 0) widest = widest_of(false);
        items[static_cast<std::size_t>(widest)].v += budget - used;

        for (const auto& it : items) {
            const double q =
                min_power_for_rate(it.demand, it.v, it.gain, sigma);
            if (!std::isfinite(q) || q > it.cap * (1.0 + 1e-9)) return -1.0;
            const auto& t = terminals_[static_cast<std::size_t>(it.terminal)];
            const auto& link = links_[t.links.front()];
            xc(t.bw_var) = it.v / link.weight / bandwidth_scale_;
            xc(link.var) = q / link.weight / link.power_scale;
            if (!it.pinned && lambda > 0.0) {
                const double marg = sigma / it.gain * psi(it.demand / it.v);
                worst_stat = std::max(worst_stat,
                                      std::abs(marg - lambda) / lambda);
            }
        }
    }

    // Audit before committing: exact feasibility (up to float roundtrips)
    // and no objective regression against the barrier point.
    if (min_hard_slack(xc) < -1e-9) return -1.0;
    if (objective_watts(xc) > objective_watts(x) * (1.0 + 1e-9)) return -1.0;
    x = std::move(xc);
    return worst_stat;
}

Allocation ConvexProgram::extract(const Eigen::VectorXd& x) const {
    Allocation alloc;
    alloc.p_sue = Eigen::MatrixXd::Zero(inst_.num_satellites, inst_.num_sues);
    alloc.p_bs = Eigen::MatrixXd::Zero(inst_.num_satellites, inst_.num_bs);
    alloc.w_sue = Eigen::VectorXd::Zero(inst_.num_sues);
    alloc.w_bs = Eigen::VectorXd::Zero(inst_.num_bs);
    for (const auto& t : terminals_) {
        const double w = x(t.bw_var) * bandwidth_scale_;
        if (t.is_sue) {
            alloc.w_sue(t.index) = w;
        } else {
            alloc.w_bs(t.index) = w;
        }
    }
    for (const auto& link : links_) {
        const auto& t = terminals_[link.terminal];
        const double p = x(link.var) * link.power_scale;
        if (t.is_sue) {
            alloc.p_sue(link.sat, t.index) = p;
        } else {
            alloc.p_bs(link.sat, t.index) = p;
        }
    }
    return alloc;
}

}  // namespace istn::detail
