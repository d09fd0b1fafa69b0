#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "core.hpp"
#include "rng.hpp"

namespace fairdec {

// Who has a claim to the good: everyone, or only those matching a label,
// decision, or feature value.
struct ClaimNone {};
struct ClaimOnLabel {
    std::vector<int> relevant{1};
};
struct ClaimOnDecision {
    std::vector<int> relevant{1};
};
struct ClaimOnFeature {
    std::vector<int> column;     // one value per individual
    std::vector<int> relevant;
};
using ClaimDifferentiator = std::variant<ClaimNone, ClaimOnLabel, ClaimOnDecision, ClaimOnFeature>;

struct Egalitarian {
    double eps = 1e-9;           // score at or below this counts as satisfied
};
struct Maximin {};
struct Prioritarian {
    double k = 2.0;              // extra weight on the worst-off group, > 1
};
struct Sufficientarian {
    double t = 0.0;              // every group must reach this utility
};
using PatternOfJustice = std::variant<Egalitarian, Maximin, Prioritarian, Sufficientarian>;

namespace justice_detail {

inline bool contains(const std::vector<int>& v, int x) {
    return std::find(v.begin(), v.end(), x) != v.end();
}

inline void check_claim(const ClaimDifferentiator& J, std::size_t n) {
    if (const auto* c = std::get_if<ClaimOnLabel>(&J)) {
        if (c->relevant.empty()) throw std::invalid_argument("relevant value set empty");
    } else if (const auto* c = std::get_if<ClaimOnDecision>(&J)) {
        if (c->relevant.empty()) throw std::invalid_argument("relevant value set empty");
    } else if (const auto* c = std::get_if<ClaimOnFeature>(&J)) {
        if (c->relevant.empty()) throw std::invalid_argument("relevant value set empty");
        if (c->column.size() != n)
            throw std::invalid_argument("feature column size mismatch");
    }
}

inline bool has_claim(const ClaimDifferentiator& J, std::size_t i, int d, int y) {
    if (std::holds_alternative<ClaimNone>(J)) return true;
    if (const auto* c = std::get_if<ClaimOnLabel>(&J)) return contains(c->relevant, y);
    if (const auto* c = std::get_if<ClaimOnDecision>(&J)) return contains(c->relevant, d);
    const auto& c = std::get<ClaimOnFeature>(J);
    return contains(c.relevant, c.column[i]);
}

} // namespace justice_detail

// Expected decision-subject utility per group, averaged over the members the
// claim differentiator admits. nullopt where the restricted subgroup is empty.
inline std::vector<std::optional<double>> ds_utility(const DecisionVector& d,
                                                     const std::vector<int>& labels,
                                                     const std::vector<int>& groups, int n_groups,
                                                     const UtilityMatrix& W,
                                                     const ClaimDifferentiator& J) {
    const std::size_t n = d.size();
    if (labels.size() != n || groups.size() != n)
        throw std::invalid_argument("ds_utility input size mismatch");
    if (n_groups < 1) throw std::invalid_argument("n_groups must be >= 1");
    justice_detail::check_claim(J, n);
    std::vector<double> sum(n_groups, 0.0);
    std::vector<std::size_t> cnt(n_groups, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (groups[i] < 0 || groups[i] >= n_groups)
            throw std::invalid_argument("group id out of range");
        int y = labels[i];
        if (y != 0 && y != 1) throw std::invalid_argument("label must be 0 or 1");
        int dec = d[i] ? 1 : 0;
        if (!justice_detail::has_claim(J, i, dec, y)) continue;
        double u = dec ? (y ? W.w11 : W.w10) : (y ? W.w01 : W.w00);
        sum[groups[i]] += u;
        ++cnt[groups[i]];
    }
    std::vector<std::optional<double>> out(n_groups);
    for (int g = 0; g < n_groups; ++g)
        if (cnt[g]) out[g] = sum[g] / double(cnt[g]);
    return out;
}

inline std::vector<std::optional<double>> ds_utility(const ScoredPopulation& pop,
                                                     const DecisionVector& d,
                                                     const UtilityMatrix& W,
                                                     const ClaimDifferentiator& J) {
    const bool w_uses_y = W.w11 != W.w10 || W.w01 != W.w00;
    const bool j_uses_y = std::holds_alternative<ClaimOnLabel>(J);
    std::vector<int> labels(pop.size(), 0);
    if (w_uses_y || j_uses_y) {
        if (!pop.has_labels())
            throw std::invalid_argument("labels required by the weights or the claim");
        for (std::size_t i = 0; i < pop.size(); ++i) labels[i] = *pop.individuals[i].y;
    }
    std::vector<int> groups(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) groups[i] = pop.individuals[i].group;
    return ds_utility(d, labels, groups, pop.n_groups, W, J);
}

// Largest absolute pairwise gap between group utilities; nullopt propagates.
inline std::optional<double> egalitarian_score(const std::vector<std::optional<double>>& u) {
    if (u.size() < 2) throw std::invalid_argument("need at least two groups");
    for (const auto& x : u)
        if (!x) return std::nullopt;
    double gap = 0.0;
    for (std::size_t a = 0; a < u.size(); ++a)
        for (std::size_t b = a + 1; b < u.size(); ++b)
            gap = std::max(gap, std::abs(*u[a] - *u[b]));
    return gap;
}

inline double egalitarian_score(const std::vector<double>& u) {
    std::vector<std::optional<double>> v(u.begin(), u.end());
    return *egalitarian_score(v);
}

namespace justice_detail {

// Pattern score over defined group utilities; higher is better except for
// Egalitarian, whose score is the gap itself.
inline double pattern_score(const PatternOfJustice& pattern, const std::vector<double>& u) {
    if (std::holds_alternative<Egalitarian>(pattern)) return egalitarian_score(u);
    double worst = *std::min_element(u.begin(), u.end());
    if (std::holds_alternative<Maximin>(pattern)) return worst;
    if (const auto* p = std::get_if<Prioritarian>(&pattern)) {
        if (!(p->k > 1.0)) throw std::invalid_argument("prioritarian k must be > 1");
        double s = p->k * worst;
        bool counted = false;   // one worst-off group gets the extra weight, ties once
        for (double x : u) {
            if (!counted && x == worst) { counted = true; continue; }
            s += x;
        }
        return s;
    }
    return worst;   // sufficientarian compares the minimum against t
}

// Orientation for the Pareto fairness axis: higher = fairer.
inline double oriented_score(const PatternOfJustice& pattern, double score) {
    return std::holds_alternative<Egalitarian>(pattern) ? -score : score;
}

} // namespace justice_detail

struct RuleAssessment {
    std::optional<double> score;
    bool satisfied = false;
    bool defined = false;
    std::vector<std::optional<double>> group_utilities;
};

// Comparative patterns (maximin, prioritarian) are satisfied by the best rule
// in the supplied space; threshold patterns (egalitarian, sufficientarian)
// stand on their own. Rules with an undefined group utility are excluded.
inline std::vector<RuleAssessment> pattern_satisfied(const PatternOfJustice& pattern,
                                                     const std::vector<DecisionRule>& rule_space,
                                                     const ScoredPopulation& pop,
                                                     const UtilityMatrix& W,
                                                     const ClaimDifferentiator& J) {
    if (rule_space.empty()) throw std::invalid_argument("rule_space empty");
    std::vector<RuleAssessment> out(rule_space.size());
    std::optional<double> best;
    for (std::size_t r = 0; r < rule_space.size(); ++r) {
        auto d = apply_rule(pop, rule_space[r], std::uint64_t(0));
        auto gu = ds_utility(pop, d, W, J);
        out[r].group_utilities = gu;
        bool all = true;
        std::vector<double> vals;
        for (const auto& x : gu) {
            if (!x) { all = false; break; }
            vals.push_back(*x);
        }
        if (!all) continue;
        out[r].defined = true;
        out[r].score = justice_detail::pattern_score(pattern, vals);
        if (!best || *out[r].score > *best) best = *out[r].score;
    }
    for (auto& a : out) {
        if (!a.defined) continue;
        if (const auto* e = std::get_if<Egalitarian>(&pattern))
            a.satisfied = *a.score <= e->eps;
        else if (const auto* s = std::get_if<Sufficientarian>(&pattern))
            a.satisfied = *a.score >= s->t;
        else
            a.satisfied = best && *a.score >= *best - 1e-12;
    }
    return out;
}

struct ParetoPoint {
    DecisionRule rule;
    double dm_utility = 0.0;
    double fairness_score = 0.0;   // higher = fairer
    std::vector<double> group_utilities;
};

// One-sided threshold rules for one group on a uniform grid: every lower
// bound [i/bins, 1] then every upper bound [0, i/bins], 2*(bins+1) in all.
inline std::vector<Interval> pareto_rule_grid(int bins) {
    if (bins < 2) throw std::invalid_argument("bins must be >= 2");
    std::vector<Interval> rules;
    rules.reserve(2 * std::size_t(bins + 1));
    for (int i = 0; i <= bins; ++i) rules.push_back({double(i) / bins, 1.0});
    for (int i = 0; i <= bins; ++i) rules.push_back({0.0, double(i) / bins});
    return rules;
}

// Sweep all per-group one-sided threshold rules on a uniform grid, score each
// pair on (decision-maker utility, pattern fairness), keep the non-dominated
// set. Two groups only.
inline std::vector<ParetoPoint> pareto_front(const ScoredPopulation& pop,
                                             const UtilityParams& u_dm, const UtilityMatrix& W,
                                             const ClaimDifferentiator& J,
                                             const PatternOfJustice& pattern, int bins) {
    if (pop.n_groups != 2) throw std::invalid_argument("pareto_front expects two groups");
    u_dm.validate();
    const std::vector<Interval> rules = pareto_rule_grid(bins);

    struct Cand {
        std::size_t r0, r1;
        double util, fair;
        std::vector<double> gu;
    };
    std::vector<Cand> cands;
    cands.reserve(rules.size() * rules.size());
    for (std::size_t a = 0; a < rules.size(); ++a)
        for (std::size_t b = 0; b < rules.size(); ++b) {
            GroupIntervals gi{{rules[a], rules[b]}};
            auto d = apply_rule(pop, DecisionRule{gi}, std::uint64_t(0));
            auto gu = ds_utility(pop, d, W, J);
            if (!gu[0] || !gu[1]) continue;
            std::vector<double> vals{*gu[0], *gu[1]};
            double score = justice_detail::pattern_score(pattern, vals);
            cands.push_back({a, b, expected_utility(pop, d, u_dm),
                             justice_detail::oriented_score(pattern, score), std::move(vals)});
        }

    // staircase filter: sort by utility desc then fairness desc; a candidate
    // survives iff its fairness strictly beats everything with more utility
    std::vector<std::size_t> idx(cands.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
        if (cands[x].util != cands[y].util) return cands[x].util > cands[y].util;
        return cands[x].fair > cands[y].fair;
    });
    std::vector<ParetoPoint> front;
    double best_fair = -std::numeric_limits<double>::infinity();
    double last_util = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i : idx) {
        const auto& c = cands[i];
        if (c.util == last_util) continue;           // same utility, weaker or equal fairness
        if (c.fair <= best_fair) continue;           // dominated by a higher-utility point
        ParetoPoint p;
        p.rule = GroupIntervals{{rules[c.r0], rules[c.r1]}};
        p.dm_utility = c.util;
        p.fairness_score = c.fair;
        p.group_utilities = c.gu;
        front.push_back(std::move(p));
        best_fair = c.fair;
        last_util = c.util;
    }
    std::sort(front.begin(), front.end(), [](const ParetoPoint& a, const ParetoPoint& b) {
        return a.fairness_score < b.fairness_score;
    });
    return front;
}

} // namespace fairdec
