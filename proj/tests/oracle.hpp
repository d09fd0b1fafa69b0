#pragma once

// Exhaustive reference for the constrained optimizer: enumerates every
// decision vector, checks feasibility from first principles, and keeps the
// best utility. Written independently of the solver; only usable for small n.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include <fairdec/core.hpp>

namespace fairdec::test {

struct OracleResult {
    bool feasible = false;
    double utility = -std::numeric_limits<double>::infinity();
    DecisionVector best;
};

namespace detail {

inline bool gaps_within(const std::vector<std::optional<double>>& vals, double eps) {
    // 1e-12 absorbs float rounding: a gap of exactly eps must stay feasible
    for (std::size_t a = 0; a < vals.size(); ++a)
        for (std::size_t b = a + 1; b < vals.size(); ++b)
            if (vals[a] && vals[b] && std::abs(*vals[a] - *vals[b]) > eps + 1e-12) return false;
    return true;
}

// Mean score of the selected per group; nullopt if the constraint cannot be
// evaluated (some groups select, others do not: parity is undefined there).
inline std::optional<std::vector<std::optional<double>>> selected_means(
    const ScoredPopulation& pop, const DecisionVector& d, bool of_rejected) {
    std::vector<double> sum(pop.n_groups, 0.0);
    std::vector<std::size_t> cnt(pop.n_groups, 0), tot(pop.n_groups, 0);
    for (std::size_t i = 0; i < pop.size(); ++i) {
        int g = pop.individuals[i].group;
        ++tot[g];
        bool in = of_rejected ? !d[i] : bool(d[i]);
        if (in) { sum[g] += pop.individuals[i].p; ++cnt[g]; }
    }
    bool any = false, all = true;
    for (int g = 0; g < pop.n_groups; ++g) {
        if (tot[g] == 0) continue;
        if (cnt[g] > 0) any = true; else all = false;
    }
    if (!any) return std::vector<std::optional<double>>(pop.n_groups);  // vacuous
    if (!all) return std::nullopt;                                      // undefined mix
    std::vector<std::optional<double>> out(pop.n_groups);
    for (int g = 0; g < pop.n_groups; ++g)
        if (cnt[g] > 0) out[g] = sum[g] / double(cnt[g]);
    return out;
}

} // namespace detail

inline bool oracle_feasible(const ScoredPopulation& pop, const DecisionVector& d,
                            ConstraintKind kind, double eps) {
    using detail::gaps_within;
    using detail::selected_means;
    switch (kind) {
        case ConstraintKind::none:
            return true;
        case ConstraintKind::statistical_parity: {
            std::vector<std::optional<double>> rates(pop.n_groups);
            std::vector<std::size_t> cnt(pop.n_groups, 0), tot(pop.n_groups, 0);
            for (std::size_t i = 0; i < pop.size(); ++i) {
                int g = pop.individuals[i].group;
                ++tot[g];
                if (d[i]) ++cnt[g];
            }
            for (int g = 0; g < pop.n_groups; ++g)
                if (tot[g]) rates[g] = double(cnt[g]) / double(tot[g]);
            return gaps_within(rates, eps);
        }
        case ConstraintKind::tpr_parity:
        case ConstraintKind::fpr_parity: {
            int want = kind == ConstraintKind::tpr_parity ? 1 : 0;
            std::vector<std::optional<double>> rates(pop.n_groups);
            std::vector<std::size_t> cnt(pop.n_groups, 0), tot(pop.n_groups, 0);
            for (std::size_t i = 0; i < pop.size(); ++i) {
                if (!pop.individuals[i].y || *pop.individuals[i].y != want) continue;
                int g = pop.individuals[i].group;
                ++tot[g];
                if (d[i]) ++cnt[g];
            }
            for (int g = 0; g < pop.n_groups; ++g)
                if (tot[g]) rates[g] = double(cnt[g]) / double(tot[g]);
            return gaps_within(rates, eps);
        }
        case ConstraintKind::ppv_parity: {
            auto m = selected_means(pop, d, false);
            return m && gaps_within(*m, eps);
        }
        case ConstraintKind::for_parity: {
            auto m = selected_means(pop, d, true);
            return m && gaps_within(*m, eps);
        }
        case ConstraintKind::sufficiency: {
            auto mp = selected_means(pop, d, false);
            auto mf = selected_means(pop, d, true);
            return mp && mf && gaps_within(*mp, eps) && gaps_within(*mf, eps);
        }
    }
    return false;
}

inline OracleResult oracle_best(const ScoredPopulation& pop,
                                const std::vector<UtilityParams>& by_group,
                                ConstraintKind kind, double eps,
                                std::optional<std::size_t> capacity = std::nullopt) {
    const std::size_t n = pop.size();
    std::vector<double> gain(n);
    for (std::size_t i = 0; i < n; ++i)
        gain[i] = by_group[pop.individuals[i].group].gain(pop.individuals[i].p);
    OracleResult res;
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
        DecisionVector d(n, 0);
        double u = 0.0;
        std::size_t sel = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1ULL << i)) { d[i] = 1; u += gain[i]; ++sel; }
        if (capacity && sel != *capacity) continue;
        if (u <= res.utility && res.feasible) continue;  // cannot improve
        if (!oracle_feasible(pop, d, kind, eps)) continue;
        res.feasible = true;
        res.utility = u;
        res.best = d;
    }
    return res;
}

inline OracleResult oracle_best(const ScoredPopulation& pop, const UtilityParams& u,
                                ConstraintKind kind, double eps,
                                std::optional<std::size_t> capacity = std::nullopt) {
    return oracle_best(pop, std::vector<UtilityParams>(pop.n_groups, u), kind, eps, capacity);
}

} // namespace fairdec::test
