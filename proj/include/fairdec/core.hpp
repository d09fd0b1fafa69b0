#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "rng.hpp"

namespace fairdec {

struct Individual {
    std::int64_t id = 0;
    double p = 0.0;          // score in [0, 1], interpreted as P(Y=1)
    int group = 0;
    std::optional<int> y;    // realized label, when known
};

// Scores plus group labels; groups are 0..n_groups-1, all non-empty checks
// are left to the operations that need them.
struct ScoredPopulation {
    std::vector<Individual> individuals;
    int n_groups = 2;

    void validate() const {
        if (n_groups < 1) throw std::invalid_argument("n_groups must be >= 1");
        std::vector<std::int64_t> ids;
        ids.reserve(individuals.size());
        for (const auto& ind : individuals) {
            if (!(ind.p >= 0.0 && ind.p <= 1.0))
                throw std::invalid_argument("score out of [0,1]");
            if (ind.group < 0 || ind.group >= n_groups)
                throw std::invalid_argument("group id out of range");
            if (ind.y && *ind.y != 0 && *ind.y != 1)
                throw std::invalid_argument("label must be 0 or 1");
            ids.push_back(ind.id);
        }
        std::sort(ids.begin(), ids.end());
        if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
            throw std::invalid_argument("duplicate individual id");
    }

    std::size_t size() const { return individuals.size(); }

    std::vector<std::vector<std::size_t>> group_indices() const {
        std::vector<std::vector<std::size_t>> out(n_groups);
        for (std::size_t i = 0; i < individuals.size(); ++i)
            out[individuals[i].group].push_back(i);
        return out;
    }

    // Mean score per group: the base rate under calibrated scores.
    std::vector<double> base_rates() const {
        std::vector<double> sum(n_groups, 0.0);
        std::vector<std::size_t> cnt(n_groups, 0);
        for (const auto& ind : individuals) {
            sum[ind.group] += ind.p;
            ++cnt[ind.group];
        }
        std::vector<double> out(n_groups, 0.0);
        for (int g = 0; g < n_groups; ++g)
            out[g] = cnt[g] ? sum[g] / double(cnt[g]) : 0.0;
        return out;
    }

    bool has_labels() const {
        for (const auto& ind : individuals)
            if (!ind.y) return false;
        return !individuals.empty();
    }
};

// Difference-form utility of a positive decision on score p:
// gain(p) = alpha*p + beta*(1-p), alpha = u_tp - u_fn, beta = u_fp - u_tn.
struct UtilityParams {
    double alpha = 1.0;
    double beta = -1.0;

    void validate() const {
        if (!(alpha > beta))
            throw std::invalid_argument("utility requires alpha > beta");
    }
    double gain(double p) const { return alpha * p + beta * (1.0 - p); }
    // gain(tau) = 0; selecting iff p >= tau maximizes utility.
    double threshold() const { return -beta / (alpha - beta); }
};

// Full decision-outcome weights (w[d][y]); difference form drops constants.
struct UtilityMatrix {
    double w11 = 1.0, w10 = -1.0, w01 = -1.0, w00 = 1.0;
    UtilityParams to_params() const { return {w11 - w01, w10 - w00}; }
};

struct Interval {
    double lo = 0.0, hi = 1.0;   // inclusive on both ends
    bool contains(double p) const { return p >= lo && p <= hi; }
};

struct UniformThreshold { Interval iv; };

struct GroupIntervals { std::vector<Interval> by_group; };

// Per-group interval where scores listed in coin_scores get D=1 with
// probability q instead of deterministically; scores compared exactly.
struct RandomizedRule {
    std::vector<Interval> by_group;
    std::vector<double> q;
    std::vector<std::vector<double>> coin_scores;
};

struct ExplicitVector { std::vector<std::uint8_t> d; };

using DecisionRule = std::variant<UniformThreshold, GroupIntervals, RandomizedRule, ExplicitVector>;

using DecisionVector = std::vector<std::uint8_t>;

inline DecisionVector apply_rule(const ScoredPopulation& pop, const DecisionRule& rule,
                                 std::mt19937_64& eng) {
    DecisionVector d(pop.size(), 0);
    if (const auto* u = std::get_if<UniformThreshold>(&rule)) {
        for (std::size_t i = 0; i < pop.size(); ++i)
            d[i] = u->iv.contains(pop.individuals[i].p) ? 1 : 0;
    } else if (const auto* g = std::get_if<GroupIntervals>(&rule)) {
        if (int(g->by_group.size()) != pop.n_groups)
            throw std::invalid_argument("rule group count mismatch");
        for (std::size_t i = 0; i < pop.size(); ++i)
            d[i] = g->by_group[pop.individuals[i].group].contains(pop.individuals[i].p) ? 1 : 0;
    } else if (const auto* r = std::get_if<RandomizedRule>(&rule)) {
        if (int(r->by_group.size()) != pop.n_groups || r->q.size() != r->by_group.size() ||
            r->coin_scores.size() != r->by_group.size())
            throw std::invalid_argument("rule group count mismatch");
        for (std::size_t i = 0; i < pop.size(); ++i) {
            int g2 = pop.individuals[i].group;
            double p = pop.individuals[i].p;
            if (!r->by_group[g2].contains(p)) { d[i] = 0; continue; }
            const auto& coins = r->coin_scores[g2];
            bool coin = std::find(coins.begin(), coins.end(), p) != coins.end();
            d[i] = coin ? (uniform01(eng) < r->q[g2] ? 1 : 0) : 1;
        }
    } else {
        const auto& e = std::get<ExplicitVector>(rule);
        if (e.d.size() != pop.size())
            throw std::invalid_argument("explicit decision vector size mismatch");
        d = e.d;
    }
    return d;
}

inline DecisionVector apply_rule(const ScoredPopulation& pop, const DecisionRule& rule,
                                 std::uint64_t seed = 0) {
    auto eng = make_engine(seed);
    return apply_rule(pop, rule, eng);
}

inline double expected_utility(const ScoredPopulation& pop, const DecisionVector& d,
                               const UtilityParams& u) {
    if (d.size() != pop.size()) throw std::invalid_argument("decision vector size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < pop.size(); ++i)
        if (d[i]) s += u.gain(pop.individuals[i].p);
    return s;
}

// Per-group utility parameters, e.g. group-dependent cost of a positive decision.
inline double expected_utility(const ScoredPopulation& pop, const DecisionVector& d,
                               const std::vector<UtilityParams>& by_group) {
    if (d.size() != pop.size()) throw std::invalid_argument("decision vector size mismatch");
    if (int(by_group.size()) != pop.n_groups)
        throw std::invalid_argument("utility group count mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < pop.size(); ++i)
        if (d[i]) s += by_group[pop.individuals[i].group].gain(pop.individuals[i].p);
    return s;
}

enum class ConstraintKind {
    none,
    statistical_parity,   // equal selection rates
    tpr_parity,           // equal selection rates among Y=1
    fpr_parity,           // equal selection rates among Y=0
    ppv_parity,           // equal mean score of the selected
    for_parity,           // equal mean score of the rejected
    sufficiency           // ppv_parity and for_parity jointly
};

inline const char* to_string(ConstraintKind k) {
    switch (k) {
        case ConstraintKind::none: return "none";
        case ConstraintKind::statistical_parity: return "sp";
        case ConstraintKind::tpr_parity: return "tpr";
        case ConstraintKind::fpr_parity: return "fpr";
        case ConstraintKind::ppv_parity: return "ppv";
        case ConstraintKind::for_parity: return "for";
        case ConstraintKind::sufficiency: return "sufficiency";
    }
    return "?";
}

inline std::optional<ConstraintKind> constraint_from_string(std::string_view s) {
    if (s == "none") return ConstraintKind::none;
    if (s == "sp") return ConstraintKind::statistical_parity;
    if (s == "tpr") return ConstraintKind::tpr_parity;
    if (s == "fpr") return ConstraintKind::fpr_parity;
    if (s == "ppv") return ConstraintKind::ppv_parity;
    if (s == "for") return ConstraintKind::for_parity;
    if (s == "sufficiency") return ConstraintKind::sufficiency;
    return std::nullopt;
}

struct WithinGroupFairness {
    bool fair = true;
    std::uint64_t violations = 0;   // pairs (i rejected, j selected) with p_i > p_j
};

// Fair iff no rejected member strictly outscores a selected member of the
// same group; equal scores with different decisions do not count.
inline std::vector<WithinGroupFairness> within_group_fairness(const ScoredPopulation& pop,
                                                              const DecisionVector& d) {
    if (d.size() != pop.size()) throw std::invalid_argument("decision vector size mismatch");
    std::vector<WithinGroupFairness> out(pop.n_groups);
    auto idx = pop.group_indices();
    for (int g = 0; g < pop.n_groups; ++g) {
        auto& members = idx[g];
        std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
            return pop.individuals[a].p > pop.individuals[b].p;
        });
        std::uint64_t rejected_above = 0, viol = 0;
        std::size_t i = 0;
        while (i < members.size()) {
            std::size_t j = i;
            std::uint64_t rej_block = 0, sel_block = 0;
            while (j < members.size() &&
                   pop.individuals[members[j]].p == pop.individuals[members[i]].p) {
                if (d[members[j]]) ++sel_block; else ++rej_block;
                ++j;
            }
            viol += sel_block * rejected_above;
            rejected_above += rej_block;
            i = j;
        }
        out[g] = {viol == 0, viol};
    }
    return out;
}

inline std::vector<std::size_t> selection_counts(const ScoredPopulation& pop,
                                                 const DecisionVector& d) {
    std::vector<std::size_t> out(pop.n_groups, 0);
    for (std::size_t i = 0; i < pop.size(); ++i)
        if (d[i]) ++out[pop.individuals[i].group];
    return out;
}

} // namespace fairdec
