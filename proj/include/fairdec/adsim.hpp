#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "core.hpp"
#include "metrics.hpp"
#include "optimizer.hpp"
#include "rng.hpp"
#include "stats.hpp"

namespace fairdec {

// Two-group ad-delivery world: click probabilities are power-law with shape
// k_a, showing the high-stakes ad earns alpha per click, not showing earns
// the group's opportunity value beta_a from a low-stakes ad instead.
struct AdScenarioConfig {
    double alpha = 0.2;
    double k_m = 0.05, k_w = 0.05;         // group 0 = men, group 1 = women
    double beta_m = 0.03, beta_w = 0.03;
    std::size_t n_per_group = 1000;
    int repeats = 30;
    std::vector<ConstraintKind> constraints{
        ConstraintKind::statistical_parity, ConstraintKind::tpr_parity,
        ConstraintKind::fpr_parity, ConstraintKind::ppv_parity, ConstraintKind::for_parity};
    bool impression_fixed = false;         // constrained runs keep the total shown count
    std::uint64_t seed = 0;
    double eps_parity = 0.005;
    int grid_points = 201;

    enum class Sweep { none, alpha, beta_w, k_w };
    Sweep sweep_param = Sweep::none;
    std::vector<double> sweep_values;      // empty: single run at the base values

    void validate() const {
        if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
        if (!(beta_m > 0.0 && beta_w > 0.0))
            throw std::invalid_argument("beta must be > 0");
        if (!(k_m > 0.0 && k_w > 0.0)) throw std::invalid_argument("k must be > 0");
        if (n_per_group < 1) throw std::invalid_argument("n_per_group must be >= 1");
        if (repeats < 1) throw std::invalid_argument("repeats must be >= 1");
        for (double v : sweep_values)
            if (!(v > 0.0)) throw std::invalid_argument("sweep values must be > 0");
    }
};

// Grid rows of the four standard scenarios; ten evenly spaced sweep points.
inline AdScenarioConfig scenario_preset(char which, std::uint64_t seed = 0) {
    AdScenarioConfig cfg;
    cfg.seed = seed;
    auto linspace = [](double lo, double hi, int m) {
        std::vector<double> v(m);
        for (int i = 0; i < m; ++i) v[i] = lo + (hi - lo) * double(i) / double(m - 1);
        return v;
    };
    switch (which) {
        case 'A':
            cfg.sweep_param = AdScenarioConfig::Sweep::alpha;
            cfg.sweep_values = linspace(0.03, 1.0, 10);
            break;
        case 'B':
            cfg.alpha = 0.2;
            cfg.sweep_param = AdScenarioConfig::Sweep::beta_w;
            cfg.sweep_values = linspace(0.03, 1.0, 10);
            break;
        case 'C':
            cfg.alpha = 1.0;
            cfg.sweep_param = AdScenarioConfig::Sweep::k_w;
            cfg.sweep_values = linspace(0.05, 0.005, 10);
            break;
        case 'D':
            cfg.alpha = 0.2;
            cfg.k_w = 0.01;
            cfg.sweep_param = AdScenarioConfig::Sweep::beta_w;
            cfg.sweep_values = linspace(0.03, 1.0, 10);
            break;
        default:
            throw std::invalid_argument("unknown scenario preset");
    }
    return cfg;
}

inline std::vector<double> sample_clicks(double k, std::size_t n, std::uint64_t seed) {
    if (!(k > 0.0)) throw std::invalid_argument("power-law shape must be > 0");
    auto eng = make_engine(seed);
    std::vector<double> p(n);
    for (auto& v : p) v = sample_powerlaw(k, eng);
    return p;
}

// Show the ad exactly when the expected click value beats the opportunity
// value: p > beta_a / alpha, strict.
inline DecisionVector optimal_ad_rule(const ScoredPopulation& pop, double alpha,
                                      const std::vector<double>& beta) {
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
    if (int(beta.size()) != pop.n_groups)
        throw std::invalid_argument("beta group count mismatch");
    for (double b : beta)
        if (!(b > 0.0)) throw std::invalid_argument("beta must be > 0");
    DecisionVector d(pop.size(), 0);
    for (std::size_t i = 0; i < pop.size(); ++i)
        d[i] = pop.individuals[i].p > beta[pop.individuals[i].group] / alpha ? 1 : 0;
    return d;
}

// Platform utility in absolute form: alpha*p per shown user, beta_a per
// withheld user.
inline double platform_utility(const ScoredPopulation& pop, const DecisionVector& d,
                               double alpha, const std::vector<double>& beta) {
    double u = 0.0;
    for (std::size_t i = 0; i < pop.size(); ++i)
        u += d[i] ? alpha * pop.individuals[i].p : beta[pop.individuals[i].group];
    return u;
}

struct LevelingDown {
    std::vector<double> delta_v;   // constrained minus unconstrained shown count
    bool flagged = false;          // nobody gains and someone loses
};

inline LevelingDown leveling_down_report(const std::vector<std::size_t>& shown_unconstrained,
                                         const std::vector<std::size_t>& shown_constrained) {
    if (shown_unconstrained.size() != shown_constrained.size())
        throw std::invalid_argument("group count mismatch");
    LevelingDown out;
    bool any_neg = false, all_le = true;
    for (std::size_t g = 0; g < shown_unconstrained.size(); ++g) {
        double dv = double(shown_constrained[g]) - double(shown_unconstrained[g]);
        out.delta_v.push_back(dv);
        if (dv < 0.0) any_neg = true;
        if (dv > 0.0) all_le = false;
    }
    out.flagged = all_le && any_neg;
    return out;
}

struct MetricSummary {
    double mean = std::numeric_limits<double>::quiet_NaN();
    double ci_lo = std::numeric_limits<double>::quiet_NaN();
    double ci_hi = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> per_repeat;        // only the repeats where defined
};

struct ConstraintOutcome {
    ConstraintKind kind = ConstraintKind::none;
    MetricSummary utility;
    MetricSummary pct_of_unconstrained;    // 100 for the unconstrained row
    std::vector<MetricSummary> shown;      // per group
    std::vector<MetricSummary> delta_v;    // per group, vs unconstrained
    MetricSummary sp_gap, tpr_gap, fpr_gap, ppv_gap, for_gap;
    int leveling_down_count = 0;           // repeats with the flag set
};

struct SweepPointResult {
    double sweep_value = 0.0;
    double alpha = 0.0, k_m = 0.0, k_w = 0.0, beta_m = 0.0, beta_w = 0.0;
    std::vector<ConstraintOutcome> outcomes;   // unconstrained first
};

struct ScenarioResult {
    std::vector<SweepPointResult> points;
};

namespace adsim_detail {

inline MetricSummary summarize(const std::vector<std::optional<double>>& vals,
                               std::uint64_t seed) {
    MetricSummary s;
    for (const auto& v : vals)
        if (v) s.per_repeat.push_back(*v);
    if (s.per_repeat.empty()) return s;
    auto ci = bootstrap_mean_ci(s.per_repeat, 0.95, seed, 1000);
    s.mean = ci.estimate;
    s.ci_lo = ci.lo;
    s.ci_hi = ci.hi;
    return s;
}

struct RepeatRecord {
    std::optional<double> utility, pct;
    std::vector<std::optional<double>> shown, delta_v;
    std::optional<double> sp, tpr, fpr, ppv, forr;
    bool leveling = false;
};

} // namespace adsim_detail

// One grid point: `repeats` independent populations, the threshold rule and
// every requested constrained rule on each, bootstrap summaries over repeats.
inline SweepPointResult run_sweep_point(const AdScenarioConfig& cfg, double sweep_value,
                                        std::size_t point_index) {
    double alpha = cfg.alpha, k_w = cfg.k_w, beta_w = cfg.beta_w;
    switch (cfg.sweep_param) {
        case AdScenarioConfig::Sweep::alpha: alpha = sweep_value; break;
        case AdScenarioConfig::Sweep::beta_w: beta_w = sweep_value; break;
        case AdScenarioConfig::Sweep::k_w: k_w = sweep_value; break;
        case AdScenarioConfig::Sweep::none: break;
    }
    const std::vector<double> beta{cfg.beta_m, beta_w};
    const std::vector<UtilityParams> by_group{{alpha - cfg.beta_m, -cfg.beta_m},
                                              {alpha - beta_w, -beta_w}};
    const std::size_t n = cfg.n_per_group;
    const int n_kinds = int(cfg.constraints.size());

    std::vector<std::vector<adsim_detail::RepeatRecord>> records(
        std::size_t(n_kinds) + 1, std::vector<adsim_detail::RepeatRecord>(cfg.repeats));

    for (int rep = 0; rep < cfg.repeats; ++rep) {
        auto eng = make_engine(derive_seed(cfg.seed, "adsim-pop",
                                           point_index * 1000003ULL + std::uint64_t(rep)));
        ScoredPopulation pop;
        pop.n_groups = 2;
        pop.individuals.reserve(2 * n);
        for (int g = 0; g < 2; ++g) {
            double k = g == 0 ? cfg.k_m : k_w;
            for (std::size_t i = 0; i < n; ++i) {
                Individual ind;
                ind.id = std::int64_t(g * n + i);
                ind.p = sample_powerlaw(k, eng);
                ind.group = g;
                pop.individuals.push_back(ind);
            }
        }
        // labels realized once per repeat; error-rate constraints and metrics
        // both see the same draw
        std::vector<int> y(pop.size());
        for (std::size_t i = 0; i < pop.size(); ++i) {
            y[i] = uniform01(eng) < pop.individuals[i].p ? 1 : 0;
            pop.individuals[i].y = y[i];
        }
        std::vector<int> group(pop.size());
        for (std::size_t i = 0; i < pop.size(); ++i) group[i] = pop.individuals[i].group;

        auto record = [&](adsim_detail::RepeatRecord& r, const DecisionVector& d,
                          const std::vector<std::size_t>& shown_unc, double u_unc) {
            double u = platform_utility(pop, d, alpha, beta);
            r.utility = u;
            if (u_unc != 0.0) r.pct = 100.0 * (u / u_unc);   // equal inputs give exactly 100
            auto counts = selection_counts(pop, d);
            r.shown.assign(2, std::nullopt);
            r.delta_v.assign(2, std::nullopt);
            for (int g = 0; g < 2; ++g) {
                r.shown[g] = double(counts[g]);
                r.delta_v[g] = double(counts[g]) - double(shown_unc[g]);
            }
            auto rep_metrics = fairness_report(d, y, group, 2);
            r.sp = rep_metrics.gap(&GroupRates::acceptance_rate);
            r.tpr = rep_metrics.gap(&GroupRates::tpr);
            r.fpr = rep_metrics.gap(&GroupRates::fpr);
            r.ppv = rep_metrics.gap(&GroupRates::ppv);
            r.forr = rep_metrics.gap(&GroupRates::for_rate);
            r.leveling = leveling_down_report(shown_unc, counts).flagged;
        };

        auto d_unc = optimal_ad_rule(pop, alpha, beta);
        auto shown_unc = selection_counts(pop, d_unc);
        double u_unc = platform_utility(pop, d_unc, alpha, beta);
        record(records[0][rep], d_unc, shown_unc, u_unc);

        std::size_t total_unc = shown_unc[0] + shown_unc[1];
        for (int c = 0; c < n_kinds; ++c) {
            SolveConfig scfg;
            scfg.eps_parity = cfg.eps_parity;
            scfg.grid_points = cfg.grid_points;
            scfg.seed = derive_seed(cfg.seed, "adsim-solve",
                                    point_index * 1000003ULL + std::uint64_t(rep));
            if (cfg.impression_fixed) scfg.capacity = total_unc;
            auto sol = solve(pop, by_group, cfg.constraints[std::size_t(c)], scfg);
            record(records[std::size_t(c) + 1][rep], sol.decisions, shown_unc, u_unc);
        }
    }

    SweepPointResult out;
    out.sweep_value = sweep_value;
    out.alpha = alpha;
    out.k_m = cfg.k_m;
    out.k_w = k_w;
    out.beta_m = cfg.beta_m;
    out.beta_w = beta_w;
    std::uint64_t boot_slot = 0;
    for (int c = 0; c <= n_kinds; ++c) {
        const auto& recs = records[std::size_t(c)];
        ConstraintOutcome oc;
        oc.kind = c == 0 ? ConstraintKind::none : cfg.constraints[std::size_t(c) - 1];
        auto pull = [&](auto member) {
            std::vector<std::optional<double>> v;
            for (const auto& r : recs) v.push_back(r.*member);
            return adsim_detail::summarize(
                v, derive_seed(cfg.seed, "adsim-boot", point_index * 1000003ULL + boot_slot++));
        };
        oc.utility = pull(&adsim_detail::RepeatRecord::utility);
        oc.pct_of_unconstrained = pull(&adsim_detail::RepeatRecord::pct);
        oc.sp_gap = pull(&adsim_detail::RepeatRecord::sp);
        oc.tpr_gap = pull(&adsim_detail::RepeatRecord::tpr);
        oc.fpr_gap = pull(&adsim_detail::RepeatRecord::fpr);
        oc.ppv_gap = pull(&adsim_detail::RepeatRecord::ppv);
        oc.for_gap = pull(&adsim_detail::RepeatRecord::forr);
        for (int g = 0; g < 2; ++g) {
            std::vector<std::optional<double>> sv, dv;
            for (const auto& r : recs) {
                sv.push_back(r.shown[std::size_t(g)]);
                dv.push_back(r.delta_v[std::size_t(g)]);
            }
            oc.shown.push_back(adsim_detail::summarize(
                sv, derive_seed(cfg.seed, "adsim-boot", point_index * 1000003ULL + boot_slot++)));
            oc.delta_v.push_back(adsim_detail::summarize(
                dv, derive_seed(cfg.seed, "adsim-boot", point_index * 1000003ULL + boot_slot++)));
        }
        for (const auto& r : recs)
            if (r.leveling) ++oc.leveling_down_count;
        out.outcomes.push_back(std::move(oc));
    }
    return out;
}

inline ScenarioResult run_scenario(const AdScenarioConfig& cfg) {
    cfg.validate();
    ScenarioResult res;
    if (cfg.sweep_values.empty()) {
        res.points.push_back(run_sweep_point(cfg, 0.0, 0));
        res.points.back().sweep_value =
            cfg.sweep_param == AdScenarioConfig::Sweep::alpha ? cfg.alpha
            : cfg.sweep_param == AdScenarioConfig::Sweep::k_w ? cfg.k_w
                                                              : cfg.beta_w;
        return res;
    }
    for (std::size_t i = 0; i < cfg.sweep_values.size(); ++i)
        res.points.push_back(run_sweep_point(cfg, cfg.sweep_values[i], i));
    return res;
}

} // namespace fairdec
