#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace fairdec {

inline double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    double e = std::exp(z);
    return e / (1.0 + e);
}

struct LogisticModel {
    std::vector<double> w;
    double b = 0.0;
    bool constant_model = false;   // single-class buffer, see fit_logistic
    double constant_rate = 0.5;
    int iterations = 0;

    double predict_row(const double* x) const {
        if (constant_model) return constant_rate;
        double z = b;
        for (std::size_t j = 0; j < w.size(); ++j) z += w[j] * x[j];
        return sigmoid(z);
    }
    double predict1(double x) const { return predict_row(&x); }
    // decision-boundary feature value of a one-feature model
    double crossing() const {
        if (constant_model || w.size() != 1 || w[0] == 0.0)
            throw std::logic_error("no crossing point");
        return -b / w[0];
    }
};

struct LogisticOptions {
    double tol = 1e-8;       // max absolute gradient component at the optimum
    int max_iter = 50000;
    const LogisticModel* warm = nullptr;
};

// Mean cross-entropy loss of raw (unstandardized) parameters; softplus form
// keeps it finite for large |z|.
inline double logistic_loss(const std::vector<double>& X, std::size_t d,
                            const std::vector<int>& y, const std::vector<double>& w, double b) {
    const std::size_t n = y.size();
    if (w.size() != d || X.size() != n * d) throw std::invalid_argument("shape mismatch");
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double z = b;
        for (std::size_t j = 0; j < d; ++j) z += w[j] * X[i * d + j];
        double softplus = z > 30.0 ? z : std::log1p(std::exp(z));
        loss += softplus - double(y[i]) * z;
    }
    return loss / double(n);
}

inline void logistic_grad(const std::vector<double>& X, std::size_t d, const std::vector<int>& y,
                          const std::vector<double>& w, double b, std::vector<double>& gw,
                          double& gb) {
    const std::size_t n = y.size();
    if (w.size() != d || X.size() != n * d) throw std::invalid_argument("shape mismatch");
    gw.assign(d, 0.0);
    gb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double z = b;
        for (std::size_t j = 0; j < d; ++j) z += w[j] * X[i * d + j];
        double r = sigmoid(z) - double(y[i]);
        for (std::size_t j = 0; j < d; ++j) gw[j] += r * X[i * d + j];
        gb += r;
    }
    for (auto& g : gw) g /= double(n);
    gb /= double(n);
}

// Full-batch gradient descent on internally standardized features; the
// returned coefficients are unfolded back to the raw feature scale, so
// predictions take raw rows. Deterministic given the buffer order. A buffer
// with a single label value yields a flagged constant-rate model.
inline LogisticModel fit_logistic(const std::vector<double>& X, std::size_t d,
                                  const std::vector<int>& y, LogisticOptions opt = {}) {
    const std::size_t n = y.size();
    if (d < 1) throw std::invalid_argument("need at least one feature");
    if (X.size() != n * d) throw std::invalid_argument("shape mismatch");
    if (n < 1) throw std::invalid_argument("empty buffer");
    std::size_t pos = 0;
    for (int v : y) {
        if (v != 0 && v != 1) throw std::invalid_argument("labels must be 0 or 1");
        pos += std::size_t(v);
    }
    LogisticModel m;
    m.w.assign(d, 0.0);
    if (pos == 0 || pos == n) {
        m.constant_model = true;
        m.constant_rate = double(pos) / double(n);
        return m;
    }

    std::vector<double> mu(d, 0.0), sd(d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) mu[j] += X[i * d + j];
    for (auto& v : mu) v /= double(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            double c = X[i * d + j] - mu[j];
            sd[j] += c * c;
        }
    for (auto& v : sd) {
        v = std::sqrt(v / double(n));
        if (v == 0.0) v = 1.0;   // constant column keeps weight 0
    }

    // standardized-space parameters, warm-started when provided
    std::vector<double> ws(d, 0.0);
    double bs = 0.0;
    if (opt.warm && !opt.warm->constant_model && opt.warm->w.size() == d) {
        bs = opt.warm->b;
        for (std::size_t j = 0; j < d; ++j) {
            ws[j] = opt.warm->w[j] * sd[j];
            bs += opt.warm->w[j] * mu[j];
        }
    }

    std::vector<double> Xs(n * d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) Xs[i * d + j] = (X[i * d + j] - mu[j]) / sd[j];

    // gradient Lipschitz constant is at most (sum of feature second moments
    // + 1)/4 = (d+1)/4 after standardization
    const double lr = 3.8 / double(d + 1);
    std::vector<double> gw(d);
    int it = 0;
    for (; it < opt.max_iter; ++it) {
        gw.assign(d, 0.0);
        double gb = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double zi = bs;
            for (std::size_t j = 0; j < d; ++j) zi += ws[j] * Xs[i * d + j];
            double r = sigmoid(zi) - double(y[i]);
            for (std::size_t j = 0; j < d; ++j) gw[j] += r * Xs[i * d + j];
            gb += r;
        }
        double gmax = std::abs(gb);
        for (std::size_t j = 0; j < d; ++j) gmax = std::max(gmax, std::abs(gw[j]));
        if (gmax / double(n) < opt.tol) break;
        for (std::size_t j = 0; j < d; ++j) ws[j] -= lr * gw[j] / double(n);
        bs -= lr * gb / double(n);
    }
    m.iterations = it;
    m.b = bs;
    for (std::size_t j = 0; j < d; ++j) {
        m.w[j] = ws[j] / sd[j];
        m.b -= ws[j] * mu[j] / sd[j];
    }
    return m;
}

inline LogisticModel fit_logistic1(const std::vector<double>& x, const std::vector<int>& y,
                                   LogisticOptions opt = {}) {
    return fit_logistic(x, 1, y, opt);
}

} // namespace fairdec
