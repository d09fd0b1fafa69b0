#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "core.hpp"
#include "stats.hpp"

namespace fairdec {

struct GroupRates {
    std::size_t n = 0;
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
    std::optional<double> acceptance_rate;
    std::optional<double> tpr, fpr, ppv, for_rate, npv, fdr;
    std::optional<double> accuracy;
    std::optional<double> base_rate;
};

struct FairnessReport {
    std::vector<GroupRates> groups;

    // Largest absolute pairwise gap; empty if fewer than two groups define it.
    static std::optional<double> max_abs_gap(const std::vector<std::optional<double>>& v) {
        std::optional<double> out;
        for (std::size_t a = 0; a < v.size(); ++a)
            for (std::size_t b = a + 1; b < v.size(); ++b)
                if (v[a] && v[b]) {
                    double g = std::abs(*v[a] - *v[b]);
                    if (!out || g > *out) out = g;
                }
        return out;
    }

    std::vector<std::optional<double>> collect(std::optional<double> GroupRates::*m) const {
        std::vector<std::optional<double>> v;
        for (const auto& g : groups) v.push_back(g.*m);
        return v;
    }

    std::optional<double> gap(std::optional<double> GroupRates::*m) const {
        return max_abs_gap(collect(m));
    }
};

inline FairnessReport fairness_report(const DecisionVector& d, const std::vector<int>& y,
                                      const std::vector<int>& group, int n_groups) {
    if (d.size() != y.size() || d.size() != group.size())
        throw std::invalid_argument("fairness_report input size mismatch");
    FairnessReport rep;
    rep.groups.assign(n_groups, {});
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (group[i] < 0 || group[i] >= n_groups)
            throw std::invalid_argument("group id out of range");
        if (y[i] != 0 && y[i] != 1) throw std::invalid_argument("label must be 0 or 1");
        auto& g = rep.groups[group[i]];
        ++g.n;
        if (d[i] && y[i]) ++g.tp;
        else if (d[i] && !y[i]) ++g.fp;
        else if (!d[i] && y[i]) ++g.fn;
        else ++g.tn;
    }
    for (auto& g : rep.groups) {
        auto frac = [](std::size_t num, std::size_t den) -> std::optional<double> {
            if (den == 0) return std::nullopt;
            return double(num) / double(den);
        };
        g.acceptance_rate = frac(g.tp + g.fp, g.n);
        g.base_rate = frac(g.tp + g.fn, g.n);
        g.tpr = frac(g.tp, g.tp + g.fn);
        g.fpr = frac(g.fp, g.fp + g.tn);
        g.ppv = frac(g.tp, g.tp + g.fp);
        g.fdr = frac(g.fp, g.tp + g.fp);
        g.for_rate = frac(g.fn, g.fn + g.tn);
        g.npv = frac(g.tn, g.fn + g.tn);
        g.accuracy = frac(g.tp + g.tn, g.n);
        // complements partition the same denominators
        if (g.ppv && std::abs(*g.ppv + *g.fdr - 1.0) > 1e-12)
            throw std::logic_error("ppv + fdr != 1");
        if (g.for_rate && std::abs(*g.for_rate + *g.npv - 1.0) > 1e-12)
            throw std::logic_error("for + npv != 1");
    }
    return rep;
}

struct StratumRates {
    int stratum = 0;
    std::vector<std::optional<double>> rate_by_group;
    std::optional<double> max_gap;
};

struct ConditionalSP {
    std::vector<StratumRates> strata;
    std::optional<double> max_gap;
};

// Selection-rate parity within each stratum of a legitimate attribute.
inline ConditionalSP conditional_statistical_parity(const DecisionVector& d,
                                                    const std::vector<int>& group, int n_groups,
                                                    const std::vector<int>& stratum,
                                                    int n_strata) {
    if (d.size() != group.size() || d.size() != stratum.size())
        throw std::invalid_argument("conditional sp input size mismatch");
    ConditionalSP out;
    for (int s = 0; s < n_strata; ++s) {
        std::vector<std::size_t> sel(n_groups, 0), tot(n_groups, 0);
        for (std::size_t i = 0; i < d.size(); ++i) {
            if (stratum[i] != s) continue;
            if (group[i] < 0 || group[i] >= n_groups)
                throw std::invalid_argument("group id out of range");
            ++tot[group[i]];
            if (d[i]) ++sel[group[i]];
        }
        StratumRates row;
        row.stratum = s;
        row.rate_by_group.assign(n_groups, std::nullopt);
        for (int g = 0; g < n_groups; ++g)
            if (tot[g]) row.rate_by_group[g] = double(sel[g]) / double(tot[g]);
        row.max_gap = FairnessReport::max_abs_gap(row.rate_by_group);
        if (row.max_gap && (!out.max_gap || *row.max_gap > *out.max_gap))
            out.max_gap = row.max_gap;
        out.strata.push_back(std::move(row));
    }
    return out;
}

struct SufficiencyBin {
    std::size_t n0 = 0, n1 = 0;
    std::optional<double> mean0, mean1;
    std::optional<double> p_value;   // only when both groups have >= 2 members
};

struct SufficiencyTestResult {
    bool reject = false;
    std::vector<SufficiencyBin> bins;
    int n_valid_bins = 0;
    double corrected_alpha = 0.0;
};

// Tests E(Y | bin, A=0) = E(Y | bin, A=1) on equal-count bins of the decision
// values, Welch per bin, Bonferroni across valid bins. Ties on a bin boundary
// all fall to the lower bin, so bins can be uneven or empty.
inline SufficiencyTestResult sufficiency_test(const std::vector<double>& value,
                                              const std::vector<double>& outcome,
                                              const std::vector<int>& group, int n_bins = 10,
                                              double alpha = 0.05) {
    const std::size_t n = value.size();
    if (outcome.size() != n || group.size() != n)
        throw std::invalid_argument("sufficiency_test input size mismatch");
    if (n_bins < 1) throw std::invalid_argument("n_bins must be >= 1");
    for (int g : group)
        if (g != 0 && g != 1) throw std::invalid_argument("sufficiency_test expects groups 0/1");

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return value[a] < value[b]; });

    SufficiencyTestResult res;
    res.bins.resize(n_bins);
    std::size_t start = 0;
    std::vector<std::array<std::vector<double>, 2>> samples(n_bins);
    for (int b = 0; b < n_bins; ++b) {
        std::size_t end = (b == n_bins - 1) ? n : (n * std::size_t(b + 1)) / n_bins;
        if (end < start) end = start;
        // pull boundary ties into this (lower) bin
        while (end > start && end < n && value[order[end]] == value[order[end - 1]]) ++end;
        for (std::size_t k = start; k < end; ++k) {
            std::size_t i = order[k];
            samples[b][group[i]].push_back(outcome[i]);
        }
        start = end;
    }
    for (int b = 0; b < n_bins; ++b) {
        auto& bin = res.bins[b];
        bin.n0 = samples[b][0].size();
        bin.n1 = samples[b][1].size();
        if (bin.n0) bin.mean0 = mean(samples[b][0]);
        if (bin.n1) bin.mean1 = mean(samples[b][1]);
        if (bin.n0 >= 2 && bin.n1 >= 2) ++res.n_valid_bins;
    }
    if (res.n_valid_bins == 0) return res;
    res.corrected_alpha = alpha / double(res.n_valid_bins);
    for (int b = 0; b < n_bins; ++b) {
        auto& bin = res.bins[b];
        if (bin.n0 >= 2 && bin.n1 >= 2) {
            bin.p_value = welch_t_test(samples[b][0], samples[b][1]).p_value;
            if (*bin.p_value < res.corrected_alpha) res.reject = true;
        }
    }
    return res;
}

} // namespace fairdec
