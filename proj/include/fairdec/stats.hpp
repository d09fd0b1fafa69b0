#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "rng.hpp"

namespace fairdec {

inline double mean(const std::vector<double>& x) {
    if (x.empty()) throw std::invalid_argument("mean of empty sample");
    double s = 0.0;
    for (double v : x) s += v;
    return s / double(x.size());
}

// Unbiased sample variance.
inline double variance(const std::vector<double>& x) {
    if (x.size() < 2) throw std::invalid_argument("variance needs n >= 2");
    double m = mean(x), s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / double(x.size() - 1);
}

struct WelchResult {
    double statistic = 0.0;
    double df = 0.0;
    double p_value = 1.0;
};

// Two-sided Welch t-test with Welch-Satterthwaite degrees of freedom.
inline WelchResult welch_t_test(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() < 2 || b.size() < 2)
        throw std::invalid_argument("welch test needs n >= 2 per sample");
    double ma = mean(a), mb = mean(b);
    double va = variance(a) / double(a.size());
    double vb = variance(b) / double(b.size());
    double se2 = va + vb;
    WelchResult r;
    if (se2 == 0.0) {
        // identical constant samples: no evidence against equality
        r.statistic = ma == mb ? 0.0 : std::numeric_limits<double>::infinity();
        r.df = double(a.size() + b.size() - 2);
        r.p_value = ma == mb ? 1.0 : 0.0;
        return r;
    }
    r.statistic = (ma - mb) / std::sqrt(se2);
    r.df = se2 * se2 /
           (va * va / double(a.size() - 1) + vb * vb / double(b.size() - 1));
    boost::math::students_t dist(r.df);
    r.p_value = 2.0 * boost::math::cdf(dist, -std::abs(r.statistic));
    return r;
}

struct BootstrapCI {
    double estimate = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

// Percentile bootstrap for the mean.
inline BootstrapCI bootstrap_mean_ci(const std::vector<double>& x, double level,
                                     std::uint64_t seed, int n_boot = 2000) {
    if (x.empty()) throw std::invalid_argument("bootstrap of empty sample");
    if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("level in (0,1)");
    BootstrapCI ci;
    ci.estimate = mean(x);
    auto eng = make_engine(seed);
    std::uniform_int_distribution<std::size_t> pick(0, x.size() - 1);
    std::vector<double> stats(n_boot);
    for (int b = 0; b < n_boot; ++b) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += x[pick(eng)];
        stats[b] = s / double(x.size());
    }
    std::sort(stats.begin(), stats.end());
    double a = (1.0 - level) / 2.0;
    auto at = [&](double q) {
        double idx = q * double(n_boot - 1);
        std::size_t lo = std::size_t(std::floor(idx));
        std::size_t hi = std::min(lo + 1, std::size_t(n_boot - 1));
        double w = idx - double(lo);
        return stats[lo] * (1.0 - w) + stats[hi] * w;
    };
    ci.lo = at(a);
    ci.hi = at(1.0 - a);
    return ci;
}

} // namespace fairdec
