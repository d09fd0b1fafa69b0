#pragma once
// Single-item recommender pipeline with five pluggable decision-feedback
// edges: population resampling, opinion mixing, click-ratio features, gated
// training data, and shifted outcome realization. States are value types;
// runs with equal configs are bitwise reproducible.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "logistic.hpp"
#include "rng.hpp"

namespace fairdec {

enum class LoopType { sampling, individual, feature, ml_model, outcome };

inline const char* loop_name(LoopType t) {
    switch (t) {
        case LoopType::sampling: return "sampling";
        case LoopType::individual: return "individual";
        case LoopType::feature: return "feature";
        case LoopType::ml_model: return "mlmodel";
        case LoopType::outcome: return "outcome";
    }
    throw std::invalid_argument("unknown loop type");
}

inline LoopType loop_from_name(const std::string& s) {
    if (s == "sampling") return LoopType::sampling;
    if (s == "individual") return LoopType::individual;
    if (s == "feature") return LoopType::feature;
    if (s == "mlmodel") return LoopType::ml_model;
    if (s == "outcome") return LoopType::outcome;
    throw std::invalid_argument("unknown loop type: " + s);
}

struct LoopConfig {
    LoopType loop_type = LoopType::sampling;
    double mu_theta_g1 = 0.7;    // latent interest means
    double mu_theta_g2 = 0.3;
    double sigma_theta_g1 = 0.15;
    double sigma_theta_g2 = 0.15;
    double mu_r_g1 = 0.0;        // feature measurement offset and noise
    double mu_r_g2 = 0.0;
    double sigma_r_g1 = 0.0;
    double sigma_r_g2 = 0.0;
    double sigma_t_g1 = 0.1;     // outcome noise during the simulation
    double sigma_t_g2 = 0.1;
    double mu_t_train = 0.0;     // initial training-label channel
    double sigma_t_train = 0.0;
    std::size_t n = 1000;
    std::size_t n_train_per_group = 500;
    std::size_t retrain_every = 50;  // warm-started refit cadence
    double mix_lambda = 0.01;        // opinion mixing weight (individual loop)
    double outcome_shift = 0.2;      // click-probability shift of a shown item
    double fit_tol = 1e-6;
    int fit_max_iter = 50000;
    std::uint64_t seed = 0;

    void validate() const {
        if (n < 2) throw std::invalid_argument("need at least two users");
        if (n_train_per_group < 1) throw std::invalid_argument("empty training group");
        if (retrain_every < 1) throw std::invalid_argument("retrain_every must be >= 1");
        for (double m : {mu_theta_g1, mu_theta_g2})
            if (!(m >= 0.0 && m <= 1.0)) throw std::invalid_argument("theta mean outside [0,1]");
        for (double s : {sigma_theta_g1, sigma_theta_g2, sigma_r_g1, sigma_r_g2, sigma_t_g1,
                         sigma_t_g2, sigma_t_train})
            if (!(s >= 0.0)) throw std::invalid_argument("negative noise scale");
        for (double m : {mu_r_g1, mu_r_g2, mu_t_train})
            if (!(m >= -1.0 && m <= 1.0)) throw std::invalid_argument("offset outside [-1,1]");
        if (!(mix_lambda >= 0.0 && mix_lambda <= 1.0))
            throw std::invalid_argument("mixing weight outside [0,1]");
        if (!(outcome_shift >= 0.0 && outcome_shift <= 1.0))
            throw std::invalid_argument("outcome shift outside [0,1]");
        if (!(fit_tol > 0.0) || fit_max_iter < 1)
            throw std::invalid_argument("bad fit settings");
    }
};

// Reference initial conditions per loop type. The ml_model preset trains the
// initial model on uninformative labels; the feature preset starts with a
// noisy, group-2-underestimating feature measurement.
inline LoopConfig loop_preset(LoopType t) {
    LoopConfig cfg;
    cfg.loop_type = t;
    if (t == LoopType::ml_model) cfg.sigma_t_train = 1.0;
    if (t == LoopType::feature) {
        cfg.mu_theta_g1 = 0.5;
        cfg.mu_theta_g2 = 0.5;
        cfg.sigma_r_g1 = 0.1;
        cfg.sigma_r_g2 = 0.1;
        cfg.mu_r_g2 = -0.2;
    }
    return cfg;
}

struct LoopUser {
    double theta = 0.0;          // latent interest in the item
    double x = 0.0;              // observed feature fed to the model
    int group = 0;               // 0 = group 1, 1 = group 2
    // click history behind the feature loop's running ratio; the initial
    // measurement enters as one pseudo-observation so a single no-click
    // cannot absorb the ratio at 0 and end the user's recommendations
    double click_mass = 0.0;
    double obs_mass = 1.0;
};

struct LoopRecord {
    std::size_t step = 0;
    std::string metric;
    int group = -1;              // -1 marks a population-level metric
    double value = 0.0;
};

struct PipelineState {
    LoopConfig cfg;
    std::vector<LoopUser> users;
    std::vector<double> buf_x;   // training buffer, grows by appends only
    std::vector<int> buf_y;
    LogisticModel model;
    std::size_t step_count = 0;
    std::vector<LoopRecord> series;
    std::mt19937_64 eng;
};

namespace loop_detail {

inline double clip01(double v) { return std::min(1.0, std::max(0.0, v)); }

inline double mu_theta(const LoopConfig& c, int g) { return g == 0 ? c.mu_theta_g1 : c.mu_theta_g2; }
inline double sigma_theta(const LoopConfig& c, int g) { return g == 0 ? c.sigma_theta_g1 : c.sigma_theta_g2; }
inline double mu_r(const LoopConfig& c, int g) { return g == 0 ? c.mu_r_g1 : c.mu_r_g2; }
inline double sigma_r(const LoopConfig& c, int g) { return g == 0 ? c.sigma_r_g1 : c.sigma_r_g2; }
inline double sigma_t(const LoopConfig& c, int g) { return g == 0 ? c.sigma_t_g1 : c.sigma_t_g2; }

inline LoopUser draw_user(const LoopConfig& cfg, int group, std::mt19937_64& eng) {
    LoopUser u;
    u.group = group;
    u.theta = clip01(sample_normal(mu_theta(cfg, group), sigma_theta(cfg, group), eng));
    u.x = clip01(u.theta + sample_normal(mu_r(cfg, group), sigma_r(cfg, group), eng));
    u.click_mass = u.x;
    u.obs_mass = 1.0;
    return u;
}

// Initial training label. sigma_t_train fades the interest margin out of the
// label: at 0 the label is the noise-free interest indicator 1{theta > 0.5},
// at 1 the draw decides alone and the label carries no user signal, so the
// initial model stays flat near 0.5.
inline int train_label(const LoopConfig& cfg, double theta, std::mt19937_64& eng) {
    double keep = std::max(0.0, 1.0 - cfg.sigma_t_train);
    double v = 0.5 + (theta - 0.5) * keep +
               sample_normal(cfg.mu_t_train, cfg.sigma_t_train, eng);
    return clip01(v) > 0.5 ? 1 : 0;
}

inline LogisticModel fit_buffer(const PipelineState& st, const LogisticModel* warm) {
    LogisticOptions opt;
    opt.tol = st.cfg.fit_tol;
    opt.max_iter = st.cfg.fit_max_iter;
    opt.warm = warm;
    return fit_logistic1(st.buf_x, st.buf_y, opt);
}

} // namespace loop_detail

inline PipelineState loop_init(const LoopConfig& cfg) {
    cfg.validate();
    PipelineState st;
    st.cfg = cfg;
    st.eng = make_engine(cfg.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    st.users.reserve(cfg.n);
    for (std::size_t i = 0; i < cfg.n; ++i) {
        int g = unif(st.eng) < 0.5 ? 0 : 1;
        st.users.push_back(loop_detail::draw_user(cfg, g, st.eng));
    }
    st.buf_x.reserve(cfg.n_train_per_group * 2);
    st.buf_y.reserve(cfg.n_train_per_group * 2);
    for (int g = 0; g < 2; ++g)
        for (std::size_t i = 0; i < cfg.n_train_per_group; ++i) {
            double theta = loop_detail::clip01(
                sample_normal(loop_detail::mu_theta(cfg, g), loop_detail::sigma_theta(cfg, g), st.eng));
            double x = loop_detail::clip01(
                theta + sample_normal(loop_detail::mu_r(cfg, g), loop_detail::sigma_r(cfg, g), st.eng));
            st.buf_x.push_back(x);
            st.buf_y.push_back(loop_detail::train_label(cfg, theta, st.eng));
        }
    st.model = loop_detail::fit_buffer(st, nullptr);
    return st;
}

inline void loop_step(PipelineState& st) {
    const LoopConfig& cfg = st.cfg;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick(0, st.users.size() - 1);
    LoopUser& u = st.users[pick(st.eng)];

    double yhat = st.model.predict1(u.x);
    bool d = yhat > 0.5;
    double shift = cfg.loop_type == LoopType::outcome
                       ? cfg.outcome_shift * (d ? 1.0 : -1.0)
                       : 0.0;
    double p_click = loop_detail::clip01(
        u.theta + sample_normal(0.0, loop_detail::sigma_t(cfg, u.group), st.eng) + shift);
    int y = unif(st.eng) < p_click ? 1 : 0;
    double x_pre = u.x;

    switch (cfg.loop_type) {
        case LoopType::sampling:
            if (!d) {
                // the passed-over user leaves; homophily: the replacement joins
                // group 1 with probability equal to its current share
                std::size_t n_g1 = 0;
                for (const auto& v : st.users) n_g1 += v.group == 0 ? 1 : 0;
                int g = unif(st.eng) < double(n_g1) / double(st.users.size()) ? 0 : 1;
                u = loop_detail::draw_user(cfg, g, st.eng);
            }
            break;
        case LoopType::individual:
            // convex opinion mix toward the received decision; stays in [0,1]
            u.theta = (1.0 - cfg.mix_lambda) * u.theta + cfg.mix_lambda * (d ? 1.0 : 0.0);
            break;
        case LoopType::feature:
            // feature becomes the user's running click ratio; every round
            // reveals a click outcome, so the history grows per interaction
            u.click_mass += double(y);
            u.obs_mass += 1.0;
            u.x = u.click_mass / u.obs_mass;
            break;
        case LoopType::ml_model:
        case LoopType::outcome:
            break;
    }

    // outcome observable only for shown items under the ml_model loop
    if (cfg.loop_type != LoopType::ml_model || d) {
        st.buf_x.push_back(x_pre);
        st.buf_y.push_back(y);
    }

    ++st.step_count;
    if (st.step_count % cfg.retrain_every == 0)
        st.model = loop_detail::fit_buffer(st, &st.model);
}

// Snapshot of per-group composition, opinion, feature bias, and prediction
// error, plus the buffer size. Appended to the state's series.
inline void loop_record(PipelineState& st) {
    const std::size_t n = st.users.size();
    for (int g = 0; g < 2; ++g) {
        std::size_t cnt = 0;
        double sum_theta = 0.0, sum_x = 0.0, sum_diff = 0.0, sum_abs = 0.0, sum_err = 0.0;
        for (const auto& u : st.users) {
            if (u.group != g) continue;
            ++cnt;
            sum_theta += u.theta;
            sum_x += u.x;
            sum_diff += u.x - u.theta;
            sum_abs += std::abs(u.x - u.theta);
            sum_err += st.model.predict1(u.x) - u.theta;
        }
        const std::size_t s = st.step_count;
        st.series.push_back({s, "group_count", g, double(cnt)});
        st.series.push_back({s, "group_share", g, double(cnt) / double(n)});
        if (cnt > 0) {
            st.series.push_back({s, "mean_theta", g, sum_theta / double(cnt)});
            st.series.push_back({s, "mean_x", g, sum_x / double(cnt)});
            st.series.push_back({s, "mean_x_minus_theta", g, sum_diff / double(cnt)});
            st.series.push_back({s, "mean_abs_x_minus_theta", g, sum_abs / double(cnt)});
            st.series.push_back({s, "mean_pred_error", g, sum_err / double(cnt)});
        }
    }
    st.series.push_back({st.step_count, "buffer_size", -1, double(st.buf_y.size())});
}

// Runs `steps` steps from a fresh init, recording after initialization, every
// record_every steps, and at the final step.
inline PipelineState run_loop(const LoopConfig& cfg, std::size_t steps,
                              std::size_t record_every = 100) {
    if (record_every < 1) throw std::invalid_argument("record_every must be >= 1");
    PipelineState st = loop_init(cfg);
    loop_record(st);
    for (std::size_t i = 0; i < steps; ++i) {
        loop_step(st);
        if (st.step_count % record_every == 0 || i + 1 == steps) {
            if (!st.series.empty() && st.series.back().step == st.step_count) continue;
            loop_record(st);
        }
    }
    return st;
}

// Last recorded value of a metric for a group; throws if absent.
inline double last_metric(const PipelineState& st, const std::string& metric, int group) {
    for (auto it = st.series.rbegin(); it != st.series.rend(); ++it)
        if (it->metric == metric && it->group == group) return it->value;
    throw std::invalid_argument("metric not recorded: " + metric);
}

} // namespace fairdec
