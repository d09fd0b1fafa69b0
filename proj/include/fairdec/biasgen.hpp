#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "core.hpp"
#include "logistic.hpp"
#include "metrics.hpp"
#include "rng.hpp"

namespace fairdec {

// Structural-model generator: a protected attribute A feeds a resource R, a
// questionnaire score Q and a latent suitability S; historical bias shifts
// the world itself, measurement bias only what is recorded of it.
struct BiasConfig {
    std::size_t n = 100000;
    std::uint64_t seed = 0;
    double p_A = 0.5;
    double k_R = 2.0;        // Gamma shape, whole-numbered
    double theta_R = 3.0;    // Gamma scale
    int K = 3;               // questionnaire trials
    double alpha_RQ = 0.0;
    double alpha_R = 1.0;
    double alpha_Q = 2.0;
    double sigma_S = 2.0;
    double sigma_PS = 2.0;
    double sigma_PR = 2.0;
    double beta_h_R = 0.0;   // historical bias on R, Q, Y
    double beta_h_Q = 0.0;
    double beta_h_Y = 0.0;
    double beta_m_R = 0.0;   // measurement bias on recorded R, Y
    double beta_m_Y = 0.0;
    bool measurement_R_active = false;
    bool measurement_Y_active = false;
    bool nonlinear_m_Y = false;
    double p_u = 1.0;        // undersampling ratio for A=1
    bool undersample_conditioned_on_R = false;
    bool omit_R = false;

    void validate() const {
        if (n < 2) throw std::invalid_argument("n must be >= 2");
        if (!(p_A > 0.0 && p_A < 1.0)) throw std::invalid_argument("p_A must be in (0,1)");
        if (!(k_R >= 1.0) || k_R != std::floor(k_R))
            throw std::invalid_argument("gamma shape must be a whole number >= 1");
        if (!(theta_R > 0.0)) throw std::invalid_argument("gamma scale must be > 0");
        if (K < 1) throw std::invalid_argument("K must be >= 1");
        if (sigma_S < 0.0 || sigma_PS < 0.0 || sigma_PR < 0.0)
            throw std::invalid_argument("noise scales must be >= 0");
        if (beta_h_R < 0.0 || beta_h_Q < 0.0 || beta_h_Y < 0.0 || beta_m_R < 0.0 ||
            beta_m_Y < 0.0)
            throw std::invalid_argument("bias strengths must be >= 0");
        if (!(p_u > 0.0 && p_u <= 1.0)) throw std::invalid_argument("p_u must be in (0,1]");
    }
};

struct DataRow {
    std::int64_t id = 0;
    int A = 0;
    double R = 0.0;      // true resource value
    int Q = 0;
    int label = 0;       // observed label: P_Y under measurement bias, else Y
    double S = 0.0;      // hidden
    double P_S = 0.0;    // hidden
    double P_R = 0.0;    // hidden unless measurement_R_active
    int Y_true = 0;      // hidden
};

struct Dataset {
    std::vector<DataRow> rows;
    bool omit_R = false;
    bool r_is_measured = false;   // feature view carries P_R instead of R

    std::size_t size() const { return rows.size(); }

    // row-major feature matrix: [R or P_R,] Q [, A]
    std::vector<double> features(bool blind_A, std::size_t& d_out) const {
        d_out = (omit_R ? 0 : 1) + 1 + (blind_A ? 0 : 1);
        std::vector<double> X;
        X.reserve(rows.size() * d_out);
        for (const auto& r : rows) {
            if (!omit_R) X.push_back(r_is_measured ? r.P_R : r.R);
            X.push_back(double(r.Q));
            if (!blind_A) X.push_back(double(r.A));
        }
        return X;
    }
    std::vector<int> observed_labels() const {
        std::vector<int> y;
        y.reserve(rows.size());
        for (const auto& r : rows) y.push_back(r.label);
        return y;
    }
};

// Representation bias: keep every A=0 row and ceil(p_u * count) of the A=1
// rows, either uniformly at random or the lowest true R values.
inline Dataset undersample(const Dataset& data, double p_u, bool conditioned_on_R,
                           std::uint64_t seed) {
    if (!(p_u > 0.0 && p_u <= 1.0)) throw std::invalid_argument("p_u must be in (0,1]");
    std::vector<std::size_t> ones;
    for (std::size_t i = 0; i < data.rows.size(); ++i)
        if (data.rows[i].A == 1) ones.push_back(i);
    if (ones.empty()) throw std::runtime_error("undersampling with no A=1 rows");
    std::size_t keep = std::size_t(std::ceil(p_u * double(ones.size())));
    std::vector<std::size_t> kept;
    if (conditioned_on_R) {
        std::sort(ones.begin(), ones.end(), [&](std::size_t a, std::size_t b) {
            if (data.rows[a].R != data.rows[b].R) return data.rows[a].R < data.rows[b].R;
            return a < b;
        });
        kept.assign(ones.begin(), ones.begin() + keep);
    } else {
        auto eng = make_engine(seed);
        std::shuffle(ones.begin(), ones.end(), eng);
        kept.assign(ones.begin(), ones.begin() + keep);
    }
    std::sort(kept.begin(), kept.end());
    Dataset out;
    out.omit_R = data.omit_R;
    out.r_is_measured = data.r_is_measured;
    std::size_t ki = 0;
    for (std::size_t i = 0; i < data.rows.size(); ++i) {
        if (data.rows[i].A == 1) {
            if (ki < kept.size() && kept[ki] == i) {
                out.rows.push_back(data.rows[i]);
                ++ki;
            }
        } else {
            out.rows.push_back(data.rows[i]);
        }
    }
    return out;
}

inline Dataset generate(const BiasConfig& cfg) {
    cfg.validate();
    auto eng = make_engine(cfg.seed);
    const double bmR = cfg.measurement_R_active ? cfg.beta_m_R : 0.0;
    const double bmY = cfg.measurement_Y_active ? cfg.beta_m_Y : 0.0;

    Dataset data;
    data.omit_R = cfg.omit_R;
    data.r_is_measured = cfg.measurement_R_active;
    data.rows.resize(cfg.n);
    // raw noise draws happen in a fixed per-row order so the stream is
    // identical across bias settings
    std::vector<double> eps_PS(cfg.n);
    for (std::size_t i = 0; i < cfg.n; ++i) {
        auto& row = data.rows[i];
        row.id = std::int64_t(i);
        row.A = uniform01(eng) < cfg.p_A ? 1 : 0;
        double g = sample_gamma_int(int(cfg.k_R), cfg.theta_R, eng);
        row.R = -cfg.beta_h_R * row.A + g;
        double pq = sigmoid(-(cfg.alpha_RQ * row.R - cfg.beta_h_Q * row.A));
        int q = 0;
        for (int t = 0; t < cfg.K; ++t)
            if (uniform01(eng) < pq) ++q;
        row.Q = q;
        row.S = cfg.alpha_R * row.R - cfg.alpha_Q * row.Q - cfg.beta_h_Y * row.A +
                sample_normal(0.0, cfg.sigma_S, eng);
        eps_PS[i] = sample_normal(0.0, cfg.sigma_PS, eng);
        row.P_R = row.R - bmR * row.A + sample_normal(0.0, cfg.sigma_PR, eng);
    }

    double r_median = 0.0;
    if (cfg.nonlinear_m_Y) {
        std::vector<double> rs(cfg.n);
        for (std::size_t i = 0; i < cfg.n; ++i) rs[i] = data.rows[i].R;
        std::sort(rs.begin(), rs.end());
        r_median = cfg.n % 2 ? rs[cfg.n / 2] : 0.5 * (rs[cfg.n / 2 - 1] + rs[cfg.n / 2]);
    }
    for (std::size_t i = 0; i < cfg.n; ++i) {
        auto& row = data.rows[i];
        double shift = bmY * row.A;
        if (cfg.nonlinear_m_Y)
            shift = bmY * row.A * (row.R < r_median ? 1.0 : -1.0);
        row.P_S = row.S - shift + eps_PS[i];
    }

    // labels cut at the empirical mean of what is observable
    double thresh = 0.0;
    for (const auto& row : data.rows)
        thresh += cfg.measurement_Y_active ? row.P_S : row.S;
    thresh /= double(cfg.n);
    for (auto& row : data.rows) {
        row.Y_true = row.S > thresh ? 1 : 0;
        int p_y = row.P_S > thresh ? 1 : 0;
        row.label = cfg.measurement_Y_active ? p_y : row.Y_true;
    }

    if (cfg.p_u < 1.0)
        return undersample(data, cfg.p_u, cfg.undersample_conditioned_on_R,
                           derive_seed(cfg.seed, "undersample", 0));
    return data;
}

inline Dataset omit_feature(Dataset data) {
    data.omit_R = true;
    return data;
}

// Train/test audit of a logistic classifier on the feature view: decisions at
// probability 0.5, metrics against both the observed and the true labels.
struct SplitEval {
    LogisticModel model;
    std::vector<double> p_hat;   // test-split scores
    std::vector<int> A;
    std::vector<int> y_obs;
    std::vector<int> y_true;
    DecisionVector d;
    double accuracy = 0.0;       // vs observed labels

    FairnessReport report(bool vs_true_labels) const {
        return fairness_report(d, vs_true_labels ? y_true : y_obs, A, 2);
    }
};

inline SplitEval train_and_audit(const Dataset& data, bool blind_A = false,
                                 double train_frac = 2.0 / 3.0) {
    if (!(train_frac > 0.0 && train_frac < 1.0))
        throw std::invalid_argument("train_frac must be in (0,1)");
    std::size_t d = 0;
    auto X = data.features(blind_A, d);
    auto y = data.observed_labels();
    const std::size_t n = data.size();
    const std::size_t n_train = std::size_t(double(n) * train_frac);
    if (n_train < 2 || n_train >= n) throw std::invalid_argument("degenerate split");

    std::vector<double> Xtr(X.begin(), X.begin() + n_train * d);
    std::vector<int> ytr(y.begin(), y.begin() + n_train);
    LogisticOptions opt;
    opt.tol = 1e-7;
    SplitEval ev;
    ev.model = fit_logistic(Xtr, d, ytr, opt);

    std::size_t correct = 0;
    for (std::size_t i = n_train; i < n; ++i) {
        double p = ev.model.predict_row(&X[i * d]);
        ev.p_hat.push_back(p);
        ev.A.push_back(data.rows[i].A);
        ev.y_obs.push_back(data.rows[i].label);
        ev.y_true.push_back(data.rows[i].Y_true);
        int dec = p > 0.5 ? 1 : 0;
        ev.d.push_back(std::uint8_t(dec));
        if (dec == data.rows[i].label) ++correct;
    }
    ev.accuracy = double(correct) / double(n - n_train);
    return ev;
}

} // namespace fairdec
