#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "core.hpp"

namespace fairdec {

struct SolveConfig {
    int grid_points = 201;                 // target grid resolution, >= 3
    double eps_parity = 0.005;             // max pairwise gap on the constrained quantity
    std::optional<std::size_t> capacity;   // exactly this many positive decisions
    std::uint64_t seed = 0;                // randomized boundary draws
    bool stochastic_boundary = false;      // coin rule for deviating groups
    std::size_t exact_small_limit = 20;    // enumerate all vectors up to this size

    void validate() const {
        if (grid_points < 3) throw std::invalid_argument("grid_points must be >= 3");
        if (!(eps_parity > 0.0 && eps_parity < 1.0))
            throw std::invalid_argument("eps_parity must be in (0,1)");
        if (exact_small_limit > 25)
            throw std::invalid_argument("exact_small_limit too large to enumerate");
    }
};

struct GroupSolution {
    Interval interval{1.0, 0.0};           // lo > hi means empty
    bool threshold_form = false;
    bool lower_bound_rule = true;          // p >= tau form rather than p <= tau
    std::size_t n = 0;
    std::size_t n_selected = 0;
    std::optional<double> rate;            // basis selection rate (sp/tpr/fpr)
    std::optional<double> selected_mean;   // achieved ppv
    std::optional<double> rejected_mean;   // achieved for
    bool within_group_fair = true;
};

struct SolveResult {
    bool feasible = false;
    double utility = 0.0;
    double residual = 0.0;                 // realized max pairwise gap
    std::optional<double> target;          // ppv_t / for_t / shared rate
    std::optional<double> for_target;      // second target under sufficiency
    DecisionRule rule = ExplicitVector{};
    DecisionVector decisions;
    std::vector<GroupSolution> groups;
};

namespace opt_detail {

constexpr double kSlack = 1e-12;

// Scores of one group sorted descending (ties by ascending id), with prefix
// sums so means over top/bottom slices cost O(1).
struct GroupData {
    std::vector<std::size_t> order;   // population indices, p desc
    std::vector<double> pre;          // pre[k] = sum of the k largest scores
    double total = 0.0;
    std::size_t n = 0;

    void build(const ScoredPopulation& pop, const std::vector<std::size_t>& members) {
        order = members;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (pop.individuals[a].p != pop.individuals[b].p)
                return pop.individuals[a].p > pop.individuals[b].p;
            return pop.individuals[a].id < pop.individuals[b].id;
        });
        n = order.size();
        pre.assign(n + 1, 0.0);
        for (std::size_t k = 0; k < n; ++k)
            pre[k + 1] = pre[k] + pop.individuals[order[k]].p;
        total = pre[n];
    }

    double score(std::size_t rank) const { return pre[rank + 1] - pre[rank]; }
    double base_rate() const { return n ? total / double(n) : 0.0; }

    // largest k >= 1 with mean of the k largest >= t; 0 if none
    std::size_t max_n_lower(double t) const {
        if (n == 0 || pre[1] < t - kSlack) return 0;
        std::size_t lo = 1, hi = n;
        while (lo < hi) {
            std::size_t mid = (lo + hi + 1) / 2;
            if (pre[mid] >= t * double(mid) - kSlack) lo = mid; else hi = mid - 1;
        }
        return lo;
    }
    // largest k >= 1 with mean of the k smallest <= t; 0 if none
    std::size_t max_n_upper(double t) const {
        if (n == 0 || total - pre[n - 1] > t + kSlack) return 0;
        std::size_t lo = 1, hi = n;
        while (lo < hi) {
            std::size_t mid = (lo + hi + 1) / 2;
            if (total - pre[n - mid] <= t * double(mid) + kSlack) lo = mid; else hi = mid - 1;
        }
        return lo;
    }
    // largest k with a size-k subset of mean ~ t: g1(k) <= t <= g2(k)
    std::size_t max_n_mean(double t) const {
        if (n == 0) return 0;
        double br = base_rate();
        if (t > br + kSlack) return max_n_lower(t);
        if (t < br - kSlack) return max_n_upper(t);
        return n;
    }
    // count of members with score >= s
    std::size_t count_ge(double s) const {
        std::size_t lo = 0, hi = n;
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (score(mid) >= s) lo = mid + 1; else hi = mid;
        }
        return lo;
    }
};

// Size-k selection of the form top(a-1) + walker + bottom(k-a), the endpoint
// of a chain of boundary swaps that moves the subset sum toward target*k.
// Pure top-k and bottom-k selections are the family's extremes.
struct WalkPick {
    std::size_t k = 0;
    std::size_t a = 0;        // top block size, walker included
    std::size_t walker = 0;   // rank of the walker
    double sum = 0.0;
    bool is_top_block = false;
    bool is_bottom_block = false;
};

inline WalkPick walk_mean_target(const GroupData& gd, std::size_t k, double target) {
    WalkPick out;
    out.k = k;
    if (k == 0 || k > gd.n) return out;
    if (k == gd.n) {
        out = {k, k, k - 1, gd.total, true, true};
        return out;
    }
    const double want = target * double(k);
    // pure split S(a) = sum of top(a) + bottom(k-a), strictly ordered in a
    auto S = [&](std::size_t a) {
        return gd.pre[a] + (gd.total - gd.pre[gd.n - (k - a)]);
    };
    if (S(k) <= want + kSlack) {
        out = {k, k, k - 1, S(k), true, false};
        return out;
    }
    if (S(0) >= want - kSlack) {
        out = {k, 1, gd.n - k, S(0), false, true};
        return out;
    }
    std::size_t lo = 0, hi = k - 1;
    while (lo < hi) {                       // largest a with S(a) <= want
        std::size_t mid = (lo + hi + 1) / 2;
        if (S(mid) <= want) lo = mid; else hi = mid - 1;
    }
    const std::size_t a = lo + 1;
    const double base = gd.pre[a - 1] + (gd.total - gd.pre[gd.n - (k - a)]);
    const double want_w = want - base;
    // walker ranks span [a-1, n-(k-a)-1], scores descending over that range
    const std::size_t wfirst = a - 1, wlast = gd.n - (k - a) - 1;
    std::size_t wl = wfirst, wh = wlast;
    while (wl < wh) {                       // last rank with score >= want_w
        std::size_t mid = (wl + wh + 1) / 2;
        if (gd.score(mid) >= want_w) wl = mid; else wh = mid - 1;
    }
    std::size_t cand1 = gd.score(wfirst) < want_w ? wfirst : wl;
    std::size_t cand2 = std::min(cand1 + 1, wlast);
    double e1 = std::abs(base + gd.score(cand1) - want);
    double e2 = std::abs(base + gd.score(cand2) - want);
    std::size_t w = e1 <= e2 ? cand1 : cand2;
    out.a = a;
    out.walker = w;
    out.sum = base + gd.score(w);
    out.is_top_block = (a == k && w == k - 1);
    out.is_bottom_block = (a == 1 && w == gd.n - k);
    return out;
}

inline void mark_pick(const GroupData& gd, const WalkPick& p, DecisionVector& d) {
    if (p.k == 0) return;
    for (std::size_t r = 0; r + 1 < p.a; ++r) d[gd.order[r]] = 1;
    if (p.a >= 1) d[gd.order[p.walker]] = 1;
    for (std::size_t r = gd.n - (p.k - p.a); r < gd.n; ++r) d[gd.order[r]] = 1;
}

inline double max_pairwise_gap(const std::vector<std::optional<double>>& v) {
    double g = 0.0;
    for (std::size_t a = 0; a < v.size(); ++a)
        for (std::size_t b = a + 1; b < v.size(); ++b)
            if (v[a] && v[b]) g = std::max(g, std::abs(*v[a] - *v[b]));
    return g;
}

} // namespace opt_detail

// Realized max pairwise gap of the constrained quantity; nullopt when the
// quantity is defined for some groups and undefined for others (one group
// selecting while another selects nobody is not parity).
inline std::optional<double> constraint_residual(const ScoredPopulation& pop,
                                                 const DecisionVector& d, ConstraintKind kind) {
    const int G = pop.n_groups;
    auto rates_over = [&](auto in_basis) -> std::vector<std::optional<double>> {
        std::vector<std::size_t> sel(G, 0), tot(G, 0);
        for (std::size_t i = 0; i < pop.size(); ++i) {
            if (!in_basis(pop.individuals[i])) continue;
            ++tot[pop.individuals[i].group];
            if (d[i]) ++sel[pop.individuals[i].group];
        }
        std::vector<std::optional<double>> out(G);
        for (int g = 0; g < G; ++g)
            if (tot[g]) out[g] = double(sel[g]) / double(tot[g]);
        return out;
    };
    auto means_over = [&](bool rejected) -> std::optional<std::vector<std::optional<double>>> {
        std::vector<double> sum(G, 0.0);
        std::vector<std::size_t> cnt(G, 0), tot(G, 0);
        for (std::size_t i = 0; i < pop.size(); ++i) {
            int g = pop.individuals[i].group;
            ++tot[g];
            bool in = rejected ? !d[i] : bool(d[i]);
            if (in) { sum[g] += pop.individuals[i].p; ++cnt[g]; }
        }
        bool any = false, all = true;
        for (int g = 0; g < G; ++g) {
            if (!tot[g]) continue;
            if (cnt[g]) any = true; else all = false;
        }
        if (!any) return std::vector<std::optional<double>>(G);   // vacuous
        if (!all) return std::nullopt;
        std::vector<std::optional<double>> out(G);
        for (int g = 0; g < G; ++g)
            if (cnt[g]) out[g] = sum[g] / double(cnt[g]);
        return out;
    };
    switch (kind) {
        case ConstraintKind::none:
            return 0.0;
        case ConstraintKind::statistical_parity:
            return opt_detail::max_pairwise_gap(rates_over([](const Individual&) { return true; }));
        case ConstraintKind::tpr_parity:
            return opt_detail::max_pairwise_gap(
                rates_over([](const Individual& i) { return i.y && *i.y == 1; }));
        case ConstraintKind::fpr_parity:
            return opt_detail::max_pairwise_gap(
                rates_over([](const Individual& i) { return i.y && *i.y == 0; }));
        case ConstraintKind::ppv_parity: {
            auto m = means_over(false);
            if (!m) return std::nullopt;
            return opt_detail::max_pairwise_gap(*m);
        }
        case ConstraintKind::for_parity: {
            auto m = means_over(true);
            if (!m) return std::nullopt;
            return opt_detail::max_pairwise_gap(*m);
        }
        case ConstraintKind::sufficiency: {
            auto mp = means_over(false), mf = means_over(true);
            if (!mp || !mf) return std::nullopt;
            return std::max(opt_detail::max_pairwise_gap(*mp), opt_detail::max_pairwise_gap(*mf));
        }
    }
    return std::nullopt;
}

// Attainable-mean band for size-n subsets of one group's scores: the mean of
// the n smallest and the mean of the n largest. Every mean in between is
// reachable within one score-step granularity.
inline std::pair<double, double> extremal_mean(const std::vector<double>& scores,
                                               std::size_t n) {
    if (n == 0 || n > scores.size())
        throw std::invalid_argument("subset size out of range");
    std::vector<double> s = scores;
    std::sort(s.begin(), s.end());
    double lo = 0.0, hi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        lo += s[i];
        hi += s[s.size() - 1 - i];
    }
    return {lo / double(n), hi / double(n)};
}

namespace opt_detail {

struct Workspace {
    const ScoredPopulation* pop = nullptr;
    std::vector<UtilityParams> u;
    std::vector<GroupData> full;     // per group, all members
    std::vector<double> gain;        // per individual
    int G = 0;

    double gain_sum_top(int g, std::size_t k) const {
        const auto& gd = full[g];
        return (u[g].alpha - u[g].beta) * gd.pre[k] + u[g].beta * double(k);
    }
    double gain_of_sum(int g, double score_sum, std::size_t k) const {
        return (u[g].alpha - u[g].beta) * score_sum + u[g].beta * double(k);
    }
};

inline Workspace make_workspace(const ScoredPopulation& pop,
                                const std::vector<UtilityParams>& by_group) {
    if (int(by_group.size()) != pop.n_groups)
        throw std::invalid_argument("utility group count mismatch");
    for (const auto& u : by_group) u.validate();
    Workspace ws;
    ws.pop = &pop;
    ws.u = by_group;
    ws.G = pop.n_groups;
    ws.full.resize(ws.G);
    auto idx = pop.group_indices();
    for (int g = 0; g < ws.G; ++g) ws.full[g].build(pop, idx[g]);
    ws.gain.resize(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i)
        ws.gain[i] = by_group[pop.individuals[i].group].gain(pop.individuals[i].p);
    return ws;
}

// Fill per-group stats, residual and rule from a finished decision vector.
inline SolveResult describe(const Workspace& ws, DecisionVector d, ConstraintKind kind,
                            double eps) {
    const auto& pop = *ws.pop;
    SolveResult res;
    res.decisions = std::move(d);
    res.utility = 0.0;
    for (std::size_t i = 0; i < pop.size(); ++i)
        if (res.decisions[i]) res.utility += ws.gain[i];
    auto residual = constraint_residual(pop, res.decisions, kind);
    res.residual = residual ? *residual : std::numeric_limits<double>::infinity();
    res.feasible = residual && *residual <= eps + kSlack;

    auto wgf = within_group_fairness(pop, res.decisions);
    res.groups.assign(ws.G, {});
    bool all_threshold = true;
    for (int g = 0; g < ws.G; ++g) {
        const auto& gd = ws.full[g];
        auto& gs = res.groups[g];
        gs.n = gd.n;
        gs.within_group_fair = wgf[g].fair;
        double sel_sum = 0.0;
        std::size_t k = 0;
        for (std::size_t r = 0; r < gd.n; ++r)
            if (res.decisions[gd.order[r]]) { sel_sum += gd.score(r); ++k; }
        gs.n_selected = k;
        if (k) gs.selected_mean = sel_sum / double(k);
        if (k < gd.n) gs.rejected_mean = (gd.total - sel_sum) / double(gd.n - k);
        if (gd.n) gs.rate = double(k) / double(gd.n);
        // threshold-form detection: prefix, suffix, whole or empty in rank order
        bool prefix = true, suffix = true;
        for (std::size_t r = 0; r < gd.n; ++r) {
            bool sel = res.decisions[gd.order[r]];
            if (sel != (r < k)) prefix = false;
            if (sel != (r >= gd.n - k)) suffix = false;
        }
        if (k == 0) {
            gs.interval = {1.0, 0.0};
            gs.threshold_form = true;
            gs.lower_bound_rule = true;
        } else if (k == gd.n) {
            gs.interval = {0.0, 1.0};
            gs.threshold_form = true;
            gs.lower_bound_rule = true;
        } else if (prefix && gd.count_ge(gd.score(k - 1)) == k) {
            gs.interval = {gd.score(k - 1), 1.0};
            gs.threshold_form = true;
            gs.lower_bound_rule = true;
        } else if (suffix &&
                   gd.n - gd.count_ge(std::nextafter(
                              gd.score(gd.n - k), std::numeric_limits<double>::infinity())) == k) {
            gs.interval = {0.0, gd.score(gd.n - k)};
            gs.threshold_form = true;
            gs.lower_bound_rule = false;
        } else {
            gs.threshold_form = false;
            gs.lower_bound_rule = gs.selected_mean && gs.rejected_mean
                                      ? *gs.selected_mean >= *gs.rejected_mean
                                      : true;
            all_threshold = false;
        }
    }
    if (all_threshold) {
        GroupIntervals gi;
        for (auto& gs : res.groups) gi.by_group.push_back(gs.interval);
        res.rule = gi;
    } else {
        res.rule = ExplicitVector{res.decisions};
    }
    return res;
}

// Exhaustive branch for small instances: every decision vector, feasibility
// from constraint_residual, ties broken toward the first maximizer.
inline SolveResult solve_exact_small(const Workspace& ws, ConstraintKind kind,
                                     const SolveConfig& cfg) {
    const auto& pop = *ws.pop;
    const std::size_t n = pop.size();
    double best_u = -std::numeric_limits<double>::infinity();
    std::uint64_t best_mask = 0;
    bool found = false;
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
        double u = 0.0;
        std::size_t sel = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1ULL << i)) { u += ws.gain[i]; ++sel; }
        if (cfg.capacity && sel != *cfg.capacity) continue;
        if (found && u <= best_u) continue;
        DecisionVector d(n, 0);
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1ULL << i)) d[i] = 1;
        auto r = constraint_residual(pop, d, kind);
        if (!r || *r > cfg.eps_parity + kSlack) continue;
        best_u = u;
        best_mask = mask;
        found = true;
    }
    if (!found) {
        SolveResult res = describe(ws, DecisionVector(n, 0), kind, cfg.eps_parity);
        res.feasible = false;
        return res;
    }
    DecisionVector d(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        if (best_mask & (1ULL << i)) d[i] = 1;
    return describe(ws, std::move(d), kind, cfg.eps_parity);
}

} // namespace opt_detail

inline double unconstrained_threshold(const UtilityParams& u) {
    u.validate();
    return u.threshold();
}

// Selects every individual whose expected gain is non-negative; with a
// capacity, exactly `capacity` individuals with the largest gains.
inline SolveResult solve_unconstrained(const ScoredPopulation& pop,
                                       const std::vector<UtilityParams>& by_group,
                                       const SolveConfig& cfg = {}) {
    cfg.validate();
    auto ws = opt_detail::make_workspace(pop, by_group);
    DecisionVector d(pop.size(), 0);
    if (!cfg.capacity) {
        for (std::size_t i = 0; i < pop.size(); ++i) d[i] = ws.gain[i] >= 0.0 ? 1 : 0;
        auto res = opt_detail::describe(ws, std::move(d), ConstraintKind::none, cfg.eps_parity);
        GroupIntervals gi;
        for (int g = 0; g < ws.G; ++g) {
            double tau = by_group[g].threshold();
            if (tau > 1.0) gi.by_group.push_back({1.0, 0.0});
            else gi.by_group.push_back({std::max(0.0, tau), 1.0});
        }
        res.rule = gi;
        for (int g = 0; g < ws.G; ++g) res.groups[g].interval = gi.by_group[g];
        return res;
    }
    if (*cfg.capacity > pop.size())
        throw std::invalid_argument("capacity exceeds population size");
    std::vector<std::size_t> order(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (ws.gain[a] != ws.gain[b]) return ws.gain[a] > ws.gain[b];
        return pop.individuals[a].id < pop.individuals[b].id;
    });
    for (std::size_t r = 0; r < *cfg.capacity; ++r) d[order[r]] = 1;
    return opt_detail::describe(ws, std::move(d), ConstraintKind::none, cfg.eps_parity);
}

// Equal selection rates over a basis: the whole group (statistical parity),
// its Y=1 members (TPR parity) or its Y=0 members (FPR parity). Non-basis
// members are unconstrained. Exact: every realized rate combination is
// reachable from some anchor, with or without a capacity.
inline SolveResult solve_rate_parity(const ScoredPopulation& pop,
                                     const std::vector<UtilityParams>& by_group,
                                     ConstraintKind kind, const SolveConfig& cfg = {}) {
    using namespace opt_detail;
    cfg.validate();
    if (kind != ConstraintKind::statistical_parity && kind != ConstraintKind::tpr_parity &&
        kind != ConstraintKind::fpr_parity)
        throw std::invalid_argument("solve_rate_parity expects a rate constraint");
    if (kind != ConstraintKind::statistical_parity && !pop.has_labels())
        throw std::invalid_argument("tpr/fpr parity requires realized labels");
    auto ws = make_workspace(pop, by_group);
    if (pop.size() <= cfg.exact_small_limit) return solve_exact_small(ws, kind, cfg);
    if (cfg.capacity && *cfg.capacity > pop.size())
        throw std::invalid_argument("capacity exceeds population size");

    // basis per group, sorted by score desc = gain desc
    std::vector<GroupData> basis(ws.G);
    std::vector<std::vector<std::size_t>> basis_members(ws.G);
    std::vector<std::size_t> free_members;
    for (std::size_t i = 0; i < pop.size(); ++i) {
        const auto& ind = pop.individuals[i];
        bool in_basis = kind == ConstraintKind::statistical_parity ||
                        (kind == ConstraintKind::tpr_parity && *ind.y == 1) ||
                        (kind == ConstraintKind::fpr_parity && *ind.y == 0);
        if (in_basis) basis_members[ind.group].push_back(i);
        else free_members.push_back(i);
    }
    for (int g = 0; g < ws.G; ++g) basis[g].build(pop, basis_members[g]);

    // free members: sorted by gain desc for capacitated prefix sums
    std::sort(free_members.begin(), free_members.end(), [&](std::size_t a, std::size_t b) {
        if (ws.gain[a] != ws.gain[b]) return ws.gain[a] > ws.gain[b];
        return pop.individuals[a].id < pop.individuals[b].id;
    });
    std::vector<double> free_pre(free_members.size() + 1, 0.0);
    for (std::size_t i = 0; i < free_members.size(); ++i)
        free_pre[i + 1] = free_pre[i] + ws.gain[free_members[i]];
    std::size_t free_unc = 0;
    while (free_unc < free_members.size() && ws.gain[free_members[free_unc]] >= 0.0) ++free_unc;

    std::vector<int> active;               // groups with a non-empty basis
    for (int g = 0; g < ws.G; ++g)
        if (basis[g].n) active.push_back(g);
    if (active.empty()) return solve_unconstrained(pop, by_group, cfg);

    auto basis_gain_top = [&](int g, std::size_t k) {
        return (ws.u[g].alpha - ws.u[g].beta) * basis[g].pre[k] + ws.u[g].beta * double(k);
    };
    std::vector<std::size_t> k_unc(ws.G, 0);
    for (int g : active) {
        double tau = ws.u[g].threshold();
        k_unc[g] = basis[g].count_ge(tau);  // gains >= 0 within the basis
    }

    double best_u = -std::numeric_limits<double>::infinity();
    std::vector<std::size_t> best_k(ws.G, 0);
    std::size_t best_f = 0;
    bool found = false;

    // anchor at every realized basis rate: the optimal combination's lowest
    // rate is one of these, so the sweep is complete with or without capacity
    std::vector<double> anchors;
    for (int g : active)
        for (std::size_t k = 0; k <= basis[g].n; ++k)
            anchors.push_back(double(k) / double(basis[g].n));
    std::sort(anchors.begin(), anchors.end());
    anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());

    for (double r : anchors) {
        std::vector<std::size_t> klo(ws.G, 0), khi(ws.G, 0);
        bool ok = true;
        for (int g : active) {
            double B = double(basis[g].n);
            double lo = std::ceil(r * B - 1e-9);
            double hi = std::floor((r + cfg.eps_parity) * B + 1e-9);
            if (lo > hi || lo > B) { ok = false; break; }
            klo[g] = std::size_t(std::max(0.0, lo));
            khi[g] = std::size_t(std::min(B, hi));
        }
        if (!ok) continue;
        auto realized_ok = [&](const std::vector<std::size_t>& ks) {
            std::vector<std::optional<double>> rates(ws.G);
            for (int g : active) rates[g] = double(ks[g]) / double(basis[g].n);
            return max_pairwise_gap(rates) <= cfg.eps_parity + kSlack;
        };
        if (!cfg.capacity) {
            double u = free_pre[free_unc];
            std::vector<std::size_t> ks(ws.G, 0);
            for (int g : active) {
                ks[g] = std::clamp(k_unc[g], klo[g], khi[g]);
                u += basis_gain_top(g, ks[g]);
            }
            if (!realized_ok(ks)) continue;
            if (!found || u > best_u + kSlack) {
                best_u = u;
                best_k = ks;
                best_f = free_unc;
                found = true;
            }
        } else {
            // greedy marginal allocation: exact for concave prefix utilities
            std::size_t C = *cfg.capacity;
            std::size_t base_cnt = 0;
            for (int g : active) base_cnt += klo[g];
            if (base_cnt > C) continue;
            std::size_t cap_left = C - base_cnt;
            std::size_t room = free_members.size();
            for (int g : active) room += khi[g] - klo[g];
            if (cap_left > room) continue;
            double u = 0.0;
            std::vector<std::size_t> ks(ws.G, 0);
            for (int g : active) { ks[g] = klo[g]; u += basis_gain_top(g, klo[g]); }
            std::size_t f = 0;
            using Item = std::pair<double, int>;   // marginal gain, source (-1 free)
            std::priority_queue<Item> heap;
            auto push_g = [&](int g) {
                if (ks[g] < khi[g])
                    heap.push({(ws.u[g].alpha - ws.u[g].beta) * basis[g].score(ks[g]) +
                                   ws.u[g].beta,
                               g});
            };
            for (int g : active) push_g(g);
            if (f < free_members.size()) heap.push({ws.gain[free_members[f]], -1});
            while (cap_left > 0 && !heap.empty()) {
                auto [mg, src] = heap.top();
                heap.pop();
                if (src < 0) {
                    ++f;
                    u += mg;
                    if (f < free_members.size()) heap.push({ws.gain[free_members[f]], -1});
                } else {
                    ++ks[src];
                    u += mg;
                    push_g(src);
                }
                --cap_left;
            }
            if (cap_left > 0) continue;
            if (!realized_ok(ks)) continue;
            if (!found || u > best_u + kSlack) {
                best_u = u;
                best_k = ks;
                best_f = f;
                found = true;
            }
        }
    }
    if (!found) {
        auto res = describe(ws, DecisionVector(pop.size(), 0), kind, cfg.eps_parity);
        res.feasible = false;
        return res;
    }
    DecisionVector d(pop.size(), 0);
    for (int g : active)
        for (std::size_t rk = 0; rk < best_k[g]; ++rk) d[basis[g].order[rk]] = 1;
    if (!cfg.capacity) {
        for (std::size_t i = 0; i < free_unc; ++i) d[free_members[i]] = 1;
    } else {
        for (std::size_t i = 0; i < best_f; ++i) d[free_members[i]] = 1;
    }
    auto res = describe(ws, std::move(d), kind, cfg.eps_parity);
    // report basis rates rather than whole-group rates for tpr/fpr
    if (kind != ConstraintKind::statistical_parity) {
        for (int g = 0; g < ws.G; ++g) {
            if (basis[g].n)
                res.groups[g].rate = double(best_k[g]) / double(basis[g].n);
            else
                res.groups[g].rate.reset();
        }
        res.rule = ExplicitVector{res.decisions};
    }
    double min_rate = std::numeric_limits<double>::infinity();
    for (int g : active) min_rate = std::min(min_rate, double(best_k[g]) / double(basis[g].n));
    if (!active.empty()) res.target = min_rate;
    return res;
}

namespace opt_detail {

// Candidate mean targets: a uniform grid augmented with each group's base
// rate and each group's break-even score.
inline std::vector<double> mean_target_grid(const Workspace& ws, const SolveConfig& cfg) {
    std::vector<double> t;
    for (int i = 0; i < cfg.grid_points; ++i)
        t.push_back(double(i) / double(cfg.grid_points - 1));
    for (int g = 0; g < ws.G; ++g) {
        if (ws.full[g].n) t.push_back(ws.full[g].base_rate());
        double tau = ws.u[g].threshold();
        if (tau >= 0.0 && tau <= 1.0) t.push_back(tau);
    }
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    return t;
}

struct MeanParityBest {
    bool found = false;
    double utility = 0.0;
    std::size_t total = 0;
    double target = 0.0;
    std::vector<WalkPick> picks;
};

inline void consider_mean_candidate(MeanParityBest& best, double utility, std::size_t total,
                                    double target, std::vector<WalkPick> picks) {
    if (!best.found || utility > best.utility + kSlack ||
        (utility > best.utility - kSlack &&
         (total > best.total || (total == best.total && target < best.target)))) {
        best.found = true;
        best.utility = utility;
        best.total = total;
        best.target = target;
        best.picks = std::move(picks);
    }
}

// Proportional split of `want` across groups within [1, cap_g]; deterministic
// adjustment in group order. Empty result when no split fits.
inline std::vector<std::size_t> split_counts(const std::vector<std::size_t>& ns,
                                             const std::vector<std::size_t>& cap,
                                             std::size_t want) {
    const std::size_t G = ns.size();
    std::size_t total_n = 0, cap_sum = 0;
    for (std::size_t g = 0; g < G; ++g) { total_n += ns[g]; cap_sum += cap[g]; }
    if (want < G || want > cap_sum) return {};
    std::vector<std::size_t> m(G);
    std::size_t acc = 0;
    for (std::size_t g = 0; g < G; ++g) {
        double share = total_n ? double(want) * double(ns[g]) / double(total_n) : 0.0;
        m[g] = std::clamp<std::size_t>(std::size_t(std::llround(share)), 1, cap[g]);
        acc += m[g];
    }
    std::size_t guard = 0;
    while (acc != want && guard++ < 4 * (total_n + G)) {
        bool moved = false;
        for (std::size_t g = 0; g < G && acc != want; ++g) {
            if (acc < want && m[g] < cap[g]) { ++m[g]; ++acc; moved = true; }
            else if (acc > want && m[g] > 1) { --m[g]; --acc; moved = true; }
        }
        if (!moved) return {};
    }
    return acc == want ? m : std::vector<std::size_t>{};
}

} // namespace opt_detail

// Utility-maximizing selection with (near-)equal mean score of the selected
// across groups: grid over the shared target, per group the largest
// mean-matching selection when the target is profitable for that group and a
// single member otherwise, then a boundary walk onto the target.
inline SolveResult solve_ppv_parity(const ScoredPopulation& pop,
                                    const std::vector<UtilityParams>& by_group,
                                    const SolveConfig& cfg = {}) {
    using namespace opt_detail;
    cfg.validate();
    auto ws = make_workspace(pop, by_group);
    if (pop.size() <= cfg.exact_small_limit)
        return solve_exact_small(ws, ConstraintKind::ppv_parity, cfg);
    std::vector<int> active;
    for (int g = 0; g < ws.G; ++g)
        if (ws.full[g].n) active.push_back(g);
    if (active.size() <= 1) {
        auto res = solve_unconstrained(pop, by_group, cfg);
        return res;
    }
    if (cfg.capacity && *cfg.capacity > pop.size())
        throw std::invalid_argument("capacity exceeds population size");

    MeanParityBest best;
    // empty selection is vacuously feasible without a capacity
    if (!cfg.capacity || *cfg.capacity == 0)
        consider_mean_candidate(best, 0.0, 0, 0.0, std::vector<WalkPick>(ws.G));

    for (double t : mean_target_grid(ws, cfg)) {
        std::vector<std::size_t> cap(ws.G, 0), ns(ws.G, 0);
        bool ok = true;
        for (int g : active) {
            cap[g] = ws.full[g].max_n_mean(t);
            ns[g] = ws.full[g].n;
            if (cap[g] == 0) { ok = false; break; }
        }
        if (!ok) continue;
        std::vector<std::size_t> counts(ws.G, 0);
        if (!cfg.capacity) {
            for (int g : active)
                counts[g] = ws.u[g].gain(t) >= 0.0 ? cap[g] : 1;
        } else {
            std::vector<std::size_t> a_ns, a_cap;
            for (int g : active) { a_ns.push_back(ns[g]); a_cap.push_back(cap[g]); }
            auto m = split_counts(a_ns, a_cap, *cfg.capacity);
            if (m.empty()) continue;
            for (std::size_t j = 0; j < active.size(); ++j) counts[active[j]] = m[j];
        }
        std::vector<WalkPick> picks(ws.G);
        std::vector<std::optional<double>> means(ws.G);
        double utility = 0.0;
        std::size_t total = 0;
        for (int g : active) {
            // start from the pure block on the side the target dictates and
            // exchange only as far as the tolerance band forces; a group at
            // its count cap then keeps a plain threshold rule
            const auto& gd = ws.full[g];
            double block_mean =
                t >= gd.base_rate()
                    ? gd.pre[counts[g]] / double(counts[g])
                    : (gd.total - gd.pre[gd.n - counts[g]]) / double(counts[g]);
            double aim = std::clamp(block_mean, t - cfg.eps_parity, t + cfg.eps_parity);
            picks[g] = walk_mean_target(gd, counts[g], aim);
            means[g] = picks[g].sum / double(counts[g]);
            utility += ws.gain_of_sum(g, picks[g].sum, counts[g]);
            total += counts[g];
        }
        if (max_pairwise_gap(means) > cfg.eps_parity + kSlack) continue;
        consider_mean_candidate(best, utility, total, t, std::move(picks));
    }
    // whole-population candidate: feasible when base rates already match
    if (!cfg.capacity || *cfg.capacity == pop.size()) {
        std::vector<std::optional<double>> brs(ws.G);
        for (int g : active) brs[g] = ws.full[g].base_rate();
        if (max_pairwise_gap(brs) <= cfg.eps_parity + kSlack) {
            double u = 0.0;
            std::vector<WalkPick> picks(ws.G);
            for (int g : active) {
                picks[g] = walk_mean_target(ws.full[g], ws.full[g].n, ws.full[g].base_rate());
                u += ws.gain_of_sum(g, ws.full[g].total, ws.full[g].n);
            }
            consider_mean_candidate(best, u, pop.size(), 0.0, std::move(picks));
        }
    }
    // the per-group unconstrained rule: when it already meets parity the
    // constraint costs nothing
    if (!cfg.capacity) {
        std::vector<WalkPick> picks(ws.G);
        std::vector<std::optional<double>> means(ws.G);
        double u = 0.0;
        std::size_t total = 0;
        bool ok = true;
        for (int g : active) {
            const auto& gd = ws.full[g];
            std::size_t k = gd.count_ge(ws.u[g].threshold());
            if (k == 0) { ok = false; break; }
            picks[g] = walk_mean_target(gd, k, gd.pre[k] / double(k));
            means[g] = picks[g].sum / double(k);
            u += ws.gain_of_sum(g, picks[g].sum, k);
            total += k;
        }
        if (ok && max_pairwise_gap(means) <= cfg.eps_parity + kSlack)
            consider_mean_candidate(best, u, total, *means[active.front()], std::move(picks));
    }
    if (!best.found) {
        auto res = describe(ws, DecisionVector(pop.size(), 0), ConstraintKind::ppv_parity,
                            cfg.eps_parity);
        res.feasible = false;
        return res;
    }
    DecisionVector d(pop.size(), 0);
    for (int g : active) mark_pick(ws.full[g], best.picks[g], d);
    auto res = describe(ws, std::move(d), ConstraintKind::ppv_parity, cfg.eps_parity);
    res.target = best.target;
    return res;
}

// Mirror of solve_ppv_parity on the mean score of the rejected: per group the
// largest mean-matching rejected set when rejecting at the target is
// profitable, a single rejected member otherwise.
inline SolveResult solve_for_parity(const ScoredPopulation& pop,
                                    const std::vector<UtilityParams>& by_group,
                                    const SolveConfig& cfg = {}) {
    using namespace opt_detail;
    cfg.validate();
    auto ws = make_workspace(pop, by_group);
    if (pop.size() <= cfg.exact_small_limit)
        return solve_exact_small(ws, ConstraintKind::for_parity, cfg);
    std::vector<int> active;
    for (int g = 0; g < ws.G; ++g)
        if (ws.full[g].n) active.push_back(g);
    if (active.size() <= 1) return solve_unconstrained(pop, by_group, cfg);
    if (cfg.capacity && *cfg.capacity > pop.size())
        throw std::invalid_argument("capacity exceeds population size");

    double total_gain = 0.0;
    for (int g : active) total_gain += ws.gain_of_sum(g, ws.full[g].total, ws.full[g].n);

    MeanParityBest best;   // picks mark the REJECTED sets here
    if (!cfg.capacity || *cfg.capacity == pop.size())
        consider_mean_candidate(best, total_gain, pop.size(), 0.0, std::vector<WalkPick>(ws.G));
    // rejecting everyone leaves per-group rejected means at the base rates
    if (!cfg.capacity || *cfg.capacity == 0) {
        std::vector<std::optional<double>> brs(ws.G);
        for (int g : active) brs[g] = ws.full[g].base_rate();
        if (max_pairwise_gap(brs) <= cfg.eps_parity + kSlack) {
            std::vector<WalkPick> picks(ws.G);
            for (int g : active)
                picks[g] = walk_mean_target(ws.full[g], ws.full[g].n, ws.full[g].base_rate());
            consider_mean_candidate(best, 0.0, 0, 0.0, std::move(picks));
        }
    }
    // the per-group unconstrained rule: when its rejected means already meet
    // parity the constraint costs nothing
    if (!cfg.capacity) {
        std::vector<WalkPick> picks(ws.G);
        std::vector<std::optional<double>> means(ws.G);
        double u = total_gain;
        std::size_t total_sel = pop.size();
        bool ok = true;
        for (int g : active) {
            const auto& gd = ws.full[g];
            std::size_t r = gd.n - gd.count_ge(ws.u[g].threshold());
            if (r == 0) { ok = false; break; }
            picks[g] = walk_mean_target(gd, r, (gd.total - gd.pre[gd.n - r]) / double(r));
            means[g] = picks[g].sum / double(r);
            u -= ws.gain_of_sum(g, picks[g].sum, r);
            total_sel -= r;
        }
        if (ok && max_pairwise_gap(means) <= cfg.eps_parity + kSlack)
            consider_mean_candidate(best, u, total_sel, *means[active.front()], std::move(picks));
    }

    for (double t : mean_target_grid(ws, cfg)) {
        std::vector<std::size_t> cap(ws.G, 0), ns(ws.G, 0);
        bool ok = true;
        for (int g : active) {
            cap[g] = ws.full[g].max_n_mean(t);
            ns[g] = ws.full[g].n;
            if (cap[g] == 0) { ok = false; break; }
        }
        if (!ok) continue;
        std::vector<std::size_t> rej(ws.G, 0);
        if (!cfg.capacity) {
            for (int g : active)
                rej[g] = -ws.u[g].gain(t) >= 0.0 ? cap[g] : 1;
        } else {
            std::size_t want_rej = pop.size() - *cfg.capacity;
            std::vector<std::size_t> a_ns, a_cap;
            for (int g : active) { a_ns.push_back(ns[g]); a_cap.push_back(cap[g]); }
            auto m = split_counts(a_ns, a_cap, want_rej);
            if (m.empty()) continue;
            for (std::size_t j = 0; j < active.size(); ++j) rej[active[j]] = m[j];
        }
        std::vector<WalkPick> picks(ws.G);
        std::vector<std::optional<double>> means(ws.G);
        double utility = total_gain;
        std::size_t total_sel = pop.size();
        for (int g : active) {
            // the rejected set starts from the pure block on the side the
            // target dictates and exchanges only as far as the band forces,
            // so a group at its count cap keeps a plain threshold rule
            const auto& gd = ws.full[g];
            double block_mean =
                t >= gd.base_rate()
                    ? gd.pre[rej[g]] / double(rej[g])
                    : (gd.total - gd.pre[gd.n - rej[g]]) / double(rej[g]);
            double aim = std::clamp(block_mean, t - cfg.eps_parity, t + cfg.eps_parity);
            picks[g] = walk_mean_target(gd, rej[g], aim);
            means[g] = picks[g].sum / double(rej[g]);
            utility -= ws.gain_of_sum(g, picks[g].sum, rej[g]);
            total_sel -= rej[g];
        }
        if (max_pairwise_gap(means) > cfg.eps_parity + kSlack) continue;
        consider_mean_candidate(best, utility, total_sel, t, std::move(picks));
    }
    if (!best.found) {
        auto res = describe(ws, DecisionVector(pop.size(), 0), ConstraintKind::for_parity,
                            cfg.eps_parity);
        res.feasible = false;
        return res;
    }
    DecisionVector rejected(pop.size(), 0);
    for (int g : active) mark_pick(ws.full[g], best.picks[g], rejected);
    DecisionVector d(pop.size(), 0);
    for (std::size_t i = 0; i < pop.size(); ++i) d[i] = rejected[i] ? 0 : 1;
    auto res = describe(ws, std::move(d), ConstraintKind::for_parity, cfg.eps_parity);
    res.target = best.target;
    return res;
}

// Joint parity of selected and rejected mean scores. Outer grid over the
// selected-mean target; the rejected mean of a group is then a monotone
// function of its count, so the inner grid runs over the intersection of the
// per-group rejected-mean ranges and counts follow from the two targets.
inline SolveResult solve_sufficiency(const ScoredPopulation& pop,
                                     const std::vector<UtilityParams>& by_group,
                                     const SolveConfig& cfg = {}) {
    using namespace opt_detail;
    cfg.validate();
    auto ws = make_workspace(pop, by_group);
    if (pop.size() <= cfg.exact_small_limit)
        return solve_exact_small(ws, ConstraintKind::sufficiency, cfg);
    std::vector<int> active;
    for (int g = 0; g < ws.G; ++g)
        if (ws.full[g].n) active.push_back(g);
    if (active.size() <= 1) return solve_unconstrained(pop, by_group, cfg);
    if (active.size() > 10)
        throw std::invalid_argument("sufficiency solver supports at most 10 non-empty groups");
    if (cfg.capacity && *cfg.capacity > pop.size())
        throw std::invalid_argument("capacity exceeds population size");

    std::vector<std::optional<double>> brs(ws.G);
    for (int g : active) brs[g] = ws.full[g].base_rate();
    const bool br_match = max_pairwise_gap(brs) <= cfg.eps_parity + kSlack;

    MeanParityBest best;
    double best_for_target = 0.0;
    auto consider = [&](double utility, std::size_t total, double t, double ft,
                        std::vector<WalkPick> picks) {
        bool was = best.found;
        double old_u = best.utility;
        std::size_t old_total = best.total;
        double old_t = best.target;
        consider_mean_candidate(best, utility, total, t, std::move(picks));
        if (!was || best.utility != old_u || best.total != old_total || best.target != old_t)
            best_for_target = ft;
    };

    // degenerate candidates: select nobody / everybody (one side vacuous)
    if (br_match) {
        if (!cfg.capacity || *cfg.capacity == 0)
            consider(0.0, 0, 0.0, 0.0, std::vector<WalkPick>(ws.G));
        if (!cfg.capacity || *cfg.capacity == pop.size()) {
            double u = 0.0;
            std::vector<WalkPick> picks(ws.G);
            for (int g : active) {
                picks[g] = walk_mean_target(ws.full[g], ws.full[g].n, ws.full[g].base_rate());
                u += ws.gain_of_sum(g, ws.full[g].total, ws.full[g].n);
            }
            consider(u, pop.size(), 0.0, 0.0, std::move(picks));
        }
    }
    // the per-group unconstrained rule: when it already meets both parities
    // the constraint costs nothing
    if (!cfg.capacity) {
        std::vector<WalkPick> picks(ws.G);
        std::vector<std::optional<double>> mp(ws.G), mf(ws.G);
        double u = 0.0;
        std::size_t total = 0;
        bool ok = true;
        for (int g : active) {
            const auto& gd = ws.full[g];
            std::size_t k = gd.count_ge(ws.u[g].threshold());
            if (k == 0 || k == gd.n) { ok = false; break; }
            picks[g] = walk_mean_target(gd, k, gd.pre[k] / double(k));
            mp[g] = picks[g].sum / double(k);
            mf[g] = (gd.total - picks[g].sum) / double(gd.n - k);
            u += ws.gain_of_sum(g, picks[g].sum, k);
            total += k;
        }
        if (ok && max_pairwise_gap(mp) <= cfg.eps_parity + kSlack &&
            max_pairwise_gap(mf) <= cfg.eps_parity + kSlack)
            consider(u, total, *mp[active.front()], *mf[active.front()], std::move(picks));
    }

    const int inner = std::min(cfg.grid_points, 201);
    for (double t : mean_target_grid(ws, cfg)) {
        // per group: max count with selected mean ~ t, keeping >= 1 rejected
        std::vector<std::size_t> hi(ws.G, 0);
        double flo = -std::numeric_limits<double>::infinity();
        double fhi = std::numeric_limits<double>::infinity();
        bool ok = true;
        auto for_of = [&](int g, std::size_t k) {
            return (ws.full[g].total - t * double(k)) / double(ws.full[g].n - k);
        };
        for (int g : active) {
            std::size_t m = std::min(ws.full[g].max_n_mean(t), ws.full[g].n - 1);
            if (m == 0) { ok = false; break; }
            hi[g] = m;
            double e1 = for_of(g, 1), e2 = for_of(g, m);
            flo = std::max(flo, std::min(e1, e2));
            fhi = std::min(fhi, std::max(e1, e2));
        }
        if (!ok || flo > fhi + kSlack) continue;
        for (int j = 0; j < inner; ++j) {
            double ft = inner == 1 ? flo : flo + (fhi - flo) * double(j) / double(inner - 1);
            if (std::abs(t - ft) < 1e-9) continue;
            // count from N*(BR - ft) / (t - ft), floor/ceil per group
            std::vector<std::array<std::size_t, 2>> opts(ws.G);
            for (int g : active) {
                double ideal = double(ws.full[g].n) * (ws.full[g].base_rate() - ft) / (t - ft);
                std::size_t f = std::size_t(std::clamp(std::floor(ideal), 1.0, double(hi[g])));
                std::size_t c = std::size_t(std::clamp(std::ceil(ideal), 1.0, double(hi[g])));
                opts[g] = {f, c};
            }
            const std::size_t combos = std::size_t(1) << active.size();
            for (std::size_t cmb = 0; cmb < combos; ++cmb) {
                std::vector<std::size_t> counts(ws.G, 0);
                std::size_t total = 0;
                for (std::size_t j2 = 0; j2 < active.size(); ++j2) {
                    counts[active[j2]] = opts[active[j2]][(cmb >> j2) & 1];
                    total += counts[active[j2]];
                }
                if (cfg.capacity) {
                    // force the last group to absorb the capacity residue
                    int gl = active.back();
                    std::size_t others = total - counts[gl];
                    if (*cfg.capacity <= others) continue;
                    std::size_t need = *cfg.capacity - others;
                    if (need < 1 || need > hi[gl]) continue;
                    counts[gl] = need;
                    total = *cfg.capacity;
                }
                // variant 0 walks each group onto the target itself; variant
                // 1 keeps the pure block for groups pinned at their maximal
                // feasible count (the block mean sits within a grid step of
                // the target there), preserving their threshold form
                for (int variant = 0; variant < 2; ++variant) {
                    std::vector<WalkPick> picks(ws.G);
                    std::vector<std::optional<double>> mp(ws.G), mf(ws.G);
                    double utility = 0.0;
                    for (int g : active) {
                        const auto& gd = ws.full[g];
                        // aim the selected sum so the rejected mean lands on
                        // the inner target exactly; the selected mean then
                        // sits within count rounding of the outer target
                        double aim = (gd.total - double(gd.n - counts[g]) * ft) /
                                     double(counts[g]);
                        if (variant == 1 && counts[g] == hi[g]) {
                            double block_mean =
                                t >= gd.base_rate()
                                    ? gd.pre[counts[g]] / double(counts[g])
                                    : (gd.total - gd.pre[gd.n - counts[g]]) / double(counts[g]);
                            aim = std::clamp(block_mean, t - cfg.eps_parity, t + cfg.eps_parity);
                        }
                        picks[g] = walk_mean_target(gd, counts[g], aim);
                        mp[g] = picks[g].sum / double(counts[g]);
                        mf[g] = (gd.total - picks[g].sum) / double(gd.n - counts[g]);
                        utility += ws.gain_of_sum(g, picks[g].sum, counts[g]);
                    }
                    if (max_pairwise_gap(mp) > cfg.eps_parity + kSlack) continue;
                    if (max_pairwise_gap(mf) > cfg.eps_parity + kSlack) continue;
                    consider(utility, total, t, ft, std::move(picks));
                }
            }
        }
    }
    if (!best.found) {
        auto res = describe(ws, DecisionVector(pop.size(), 0), ConstraintKind::sufficiency,
                            cfg.eps_parity);
        res.feasible = false;
        return res;
    }
    DecisionVector d(pop.size(), 0);
    for (int g : active) mark_pick(ws.full[g], best.picks[g], d);
    auto res = describe(ws, std::move(d), ConstraintKind::sufficiency, cfg.eps_parity);
    res.target = best.target;
    res.for_target = best_for_target;

    if (cfg.stochastic_boundary) {
        // deviating groups instead flip a coin on everyone above the widest
        // feasible threshold: same expected count and selected mean
        RandomizedRule rr;
        rr.by_group.assign(ws.G, Interval{1.0, 0.0});
        rr.q.assign(ws.G, 1.0);
        rr.coin_scores.assign(ws.G, {});
        bool any_coin = false;
        for (int g : active) {
            const auto& gs = res.groups[g];
            const auto& gd = ws.full[g];
            if (gs.threshold_form) {
                rr.by_group[g] = gs.interval;
                continue;
            }
            std::size_t m = std::min(gd.max_n_mean(*res.target), gd.n - 1);
            std::size_t k = gs.n_selected;
            if (m == 0 || k == 0 || k > m) {
                rr.by_group[g] = gs.interval;
                continue;
            }
            bool lower = gd.base_rate() < *res.target;
            rr.q[g] = double(k) / double(m);
            rr.coin_scores[g].clear();
            if (lower) {
                rr.by_group[g] = {gd.score(m - 1), 1.0};
                for (std::size_t rk = 0; rk < m; ++rk) rr.coin_scores[g].push_back(gd.score(rk));
            } else {
                rr.by_group[g] = {0.0, gd.score(gd.n - m)};
                for (std::size_t rk = gd.n - m; rk < gd.n; ++rk)
                    rr.coin_scores[g].push_back(gd.score(rk));
            }
            any_coin = true;
        }
        if (any_coin) {
            auto eng = make_engine(cfg.seed);
            auto drawn = apply_rule(pop, DecisionRule{rr}, eng);
            res = describe(ws, std::move(drawn), ConstraintKind::sufficiency, cfg.eps_parity);
            res.rule = rr;
            res.target = best.target;
            res.for_target = best_for_target;
        }
    }
    return res;
}

inline SolveResult solve(const ScoredPopulation& pop, const std::vector<UtilityParams>& by_group,
                         ConstraintKind kind, const SolveConfig& cfg = {}) {
    switch (kind) {
        case ConstraintKind::none: return solve_unconstrained(pop, by_group, cfg);
        case ConstraintKind::statistical_parity:
        case ConstraintKind::tpr_parity:
        case ConstraintKind::fpr_parity: return solve_rate_parity(pop, by_group, kind, cfg);
        case ConstraintKind::ppv_parity: return solve_ppv_parity(pop, by_group, cfg);
        case ConstraintKind::for_parity: return solve_for_parity(pop, by_group, cfg);
        case ConstraintKind::sufficiency: return solve_sufficiency(pop, by_group, cfg);
    }
    throw std::invalid_argument("unknown constraint kind");
}

inline SolveResult solve(const ScoredPopulation& pop, const UtilityParams& u, ConstraintKind kind,
                         const SolveConfig& cfg = {}) {
    return solve(pop, std::vector<UtilityParams>(pop.n_groups, u), kind, cfg);
}

} // namespace fairdec
