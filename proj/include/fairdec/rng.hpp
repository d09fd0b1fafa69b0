#pragma once

#include <cstdint>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fairdec {

// splitmix64 finalizer; full-period mixing of a 64-bit state.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Stable sub-stream seed: distinct (label, index) pairs map to distinct
// seeds with overwhelming probability, independent of call order.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view label,
                                 std::uint64_t index) {
    std::uint64_t h = splitmix64(master ^ fnv1a64(label));
    return splitmix64(h ^ splitmix64(index));
}

inline std::mt19937_64 make_engine(std::uint64_t seed) {
    return std::mt19937_64(seed);
}

inline double uniform01(std::mt19937_64& eng) {
    // [0, 1); draws never hit 1 exactly.
    return std::uniform_real_distribution<double>(0.0, 1.0)(eng);
}

// Gamma with integer shape as a sum of k exponentials of scale theta.
inline double sample_gamma_int(int k, double theta, std::mt19937_64& eng) {
    if (k < 1) throw std::invalid_argument("gamma shape must be a positive integer");
    if (theta <= 0.0) throw std::invalid_argument("gamma scale must be positive");
    double s = 0.0;
    for (int i = 0; i < k; ++i) s += -theta * std::log1p(-uniform01(eng));
    return s;
}

// Power-law on [0, 1] with pdf k*x^(k-1); inverse CDF is U^(1/k).
inline double sample_powerlaw(double k, std::mt19937_64& eng) {
    if (k <= 0.0) throw std::invalid_argument("power-law exponent must be positive");
    return std::pow(uniform01(eng), 1.0 / k);
}

inline double sample_beta(double a, double b, std::mt19937_64& eng) {
    if (a <= 0.0 || b <= 0.0) throw std::invalid_argument("beta parameters must be positive");
    std::gamma_distribution<double> ga(a, 1.0), gb(b, 1.0);
    double x = ga(eng), y = gb(eng);
    return x / (x + y);
}

inline double sample_normal(double mu, double sigma, std::mt19937_64& eng) {
    if (sigma == 0.0) return mu;
    return std::normal_distribution<double>(mu, sigma)(eng);
}

} // namespace fairdec
