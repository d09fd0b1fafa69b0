#pragma once
// JSON configuration files and result summaries. Config files are flat
// objects whose keys match the struct fields one-to-one; unknown keys are
// rejected so a typo cannot silently fall back to a default. Uses the
// vendored single-header nlohmann/json.

#include <cstdint>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "adsim.hpp"
#include "biasgen.hpp"
#include "core.hpp"
#include "loopsim.hpp"
#include "metrics.hpp"
#include "optimizer.hpp"

namespace fairdec {

// insertion-ordered so serialized configs and manifests are byte-stable
using json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

namespace config_detail {

inline json parse_object(const std::string& text, const char* what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded())
        throw std::invalid_argument(std::string(what) + ": malformed JSON");
    if (!j.is_object())
        throw std::invalid_argument(std::string(what) + ": expected a JSON object");
    return j;
}

// Tracks which keys a reader consumed; anything left over is an error.
class Fields {
  public:
    Fields(const json& j, const char* what) : j_(j), what_(what) {}

    template <class T>
    void get(const char* key, T& out) {
        seen_.push_back(key);
        auto it = j_.find(key);
        if (it == j_.end()) return;
        try {
            out = it->get<T>();
        } catch (const nlohmann::json::exception&) {
            throw std::invalid_argument(std::string(what_) + ": bad value for '" + key + "'");
        }
    }

    template <class T>
    void get_optional(const char* key, std::optional<T>& out) {
        seen_.push_back(key);
        auto it = j_.find(key);
        if (it == j_.end() || it->is_null()) return;
        try {
            out = it->get<T>();
        } catch (const nlohmann::json::exception&) {
            throw std::invalid_argument(std::string(what_) + ": bad value for '" + key + "'");
        }
    }

    void get_name(const char* key, std::string& out) { get<std::string>(key, out); }

    void done() const {
        for (const auto& item : j_.items()) {
            bool known = false;
            for (const auto& k : seen_)
                known = known || k == item.key();
            if (!known)
                throw std::invalid_argument(std::string(what_) + ": unknown key '" +
                                            item.key() + "'");
        }
    }

  private:
    const json& j_;
    const char* what_;
    std::vector<std::string> seen_;
};

} // namespace config_detail

inline json bias_config_to_json(const BiasConfig& c) {
    json j;
    j["n"] = c.n;
    j["seed"] = c.seed;
    j["p_A"] = c.p_A;
    j["k_R"] = c.k_R;
    j["theta_R"] = c.theta_R;
    j["K"] = c.K;
    j["alpha_RQ"] = c.alpha_RQ;
    j["alpha_R"] = c.alpha_R;
    j["alpha_Q"] = c.alpha_Q;
    j["sigma_S"] = c.sigma_S;
    j["sigma_PS"] = c.sigma_PS;
    j["sigma_PR"] = c.sigma_PR;
    j["beta_h_R"] = c.beta_h_R;
    j["beta_h_Q"] = c.beta_h_Q;
    j["beta_h_Y"] = c.beta_h_Y;
    j["beta_m_R"] = c.beta_m_R;
    j["beta_m_Y"] = c.beta_m_Y;
    j["measurement_R_active"] = c.measurement_R_active;
    j["measurement_Y_active"] = c.measurement_Y_active;
    j["nonlinear_m_Y"] = c.nonlinear_m_Y;
    j["p_u"] = c.p_u;
    j["undersample_conditioned_on_R"] = c.undersample_conditioned_on_R;
    j["omit_R"] = c.omit_R;
    return j;
}

inline BiasConfig bias_config_from_json(const json& j) {
    config_detail::Fields f(j, "bias config");
    BiasConfig c;
    f.get("n", c.n);
    f.get("seed", c.seed);
    f.get("p_A", c.p_A);
    f.get("k_R", c.k_R);
    f.get("theta_R", c.theta_R);
    f.get("K", c.K);
    f.get("alpha_RQ", c.alpha_RQ);
    f.get("alpha_R", c.alpha_R);
    f.get("alpha_Q", c.alpha_Q);
    f.get("sigma_S", c.sigma_S);
    f.get("sigma_PS", c.sigma_PS);
    f.get("sigma_PR", c.sigma_PR);
    f.get("beta_h_R", c.beta_h_R);
    f.get("beta_h_Q", c.beta_h_Q);
    f.get("beta_h_Y", c.beta_h_Y);
    f.get("beta_m_R", c.beta_m_R);
    f.get("beta_m_Y", c.beta_m_Y);
    f.get("measurement_R_active", c.measurement_R_active);
    f.get("measurement_Y_active", c.measurement_Y_active);
    f.get("nonlinear_m_Y", c.nonlinear_m_Y);
    f.get("p_u", c.p_u);
    f.get("undersample_conditioned_on_R", c.undersample_conditioned_on_R);
    f.get("omit_R", c.omit_R);
    f.done();
    c.validate();
    return c;
}

inline json solve_config_to_json(const SolveConfig& c) {
    json j;
    j["grid_points"] = c.grid_points;
    j["eps_parity"] = c.eps_parity;
    if (c.capacity)
        j["capacity"] = *c.capacity;
    else
        j["capacity"] = nullptr;
    j["seed"] = c.seed;
    j["stochastic_boundary"] = c.stochastic_boundary;
    j["exact_small_limit"] = c.exact_small_limit;
    return j;
}

inline SolveConfig solve_config_from_json(const json& j) {
    config_detail::Fields f(j, "solve config");
    SolveConfig c;
    f.get("grid_points", c.grid_points);
    f.get("eps_parity", c.eps_parity);
    f.get_optional("capacity", c.capacity);
    f.get("seed", c.seed);
    f.get("stochastic_boundary", c.stochastic_boundary);
    f.get("exact_small_limit", c.exact_small_limit);
    f.done();
    c.validate();
    return c;
}

namespace config_detail {

inline const char* sweep_name(AdScenarioConfig::Sweep s) {
    switch (s) {
        case AdScenarioConfig::Sweep::none: return "none";
        case AdScenarioConfig::Sweep::alpha: return "alpha";
        case AdScenarioConfig::Sweep::beta_w: return "beta_w";
        case AdScenarioConfig::Sweep::k_w: return "k_w";
    }
    throw std::invalid_argument("unknown sweep parameter");
}

inline AdScenarioConfig::Sweep sweep_from_name(const std::string& s) {
    if (s == "none") return AdScenarioConfig::Sweep::none;
    if (s == "alpha") return AdScenarioConfig::Sweep::alpha;
    if (s == "beta_w") return AdScenarioConfig::Sweep::beta_w;
    if (s == "k_w") return AdScenarioConfig::Sweep::k_w;
    throw std::invalid_argument("unknown sweep parameter: " + s);
}

} // namespace config_detail

inline json ad_config_to_json(const AdScenarioConfig& c) {
    json j;
    j["alpha"] = c.alpha;
    j["k_m"] = c.k_m;
    j["k_w"] = c.k_w;
    j["beta_m"] = c.beta_m;
    j["beta_w"] = c.beta_w;
    j["n_per_group"] = c.n_per_group;
    j["repeats"] = c.repeats;
    json names = json::array();
    for (ConstraintKind k : c.constraints) names.push_back(to_string(k));
    j["constraints"] = names;
    j["impression_fixed"] = c.impression_fixed;
    j["seed"] = c.seed;
    j["eps_parity"] = c.eps_parity;
    j["grid_points"] = c.grid_points;
    j["sweep_param"] = config_detail::sweep_name(c.sweep_param);
    j["sweep_values"] = c.sweep_values;
    return j;
}

inline AdScenarioConfig ad_config_from_json(const json& j) {
    config_detail::Fields f(j, "ad scenario config");
    AdScenarioConfig c;
    f.get("alpha", c.alpha);
    f.get("k_m", c.k_m);
    f.get("k_w", c.k_w);
    f.get("beta_m", c.beta_m);
    f.get("beta_w", c.beta_w);
    f.get("n_per_group", c.n_per_group);
    f.get("repeats", c.repeats);
    std::vector<std::string> names;
    bool had_constraints = j.contains("constraints");
    f.get("constraints", names);
    if (had_constraints) {
        c.constraints.clear();
        for (const auto& s : names) {
            auto k = constraint_from_string(s);
            if (!k || *k == ConstraintKind::none)
                throw std::invalid_argument("ad scenario config: unknown constraint '" + s +
                                            "'");
            c.constraints.push_back(*k);
        }
    }
    f.get("impression_fixed", c.impression_fixed);
    f.get("seed", c.seed);
    f.get("eps_parity", c.eps_parity);
    f.get("grid_points", c.grid_points);
    std::string sweep = config_detail::sweep_name(c.sweep_param);
    f.get_name("sweep_param", sweep);
    c.sweep_param = config_detail::sweep_from_name(sweep);
    f.get("sweep_values", c.sweep_values);
    f.done();
    c.validate();
    return c;
}

inline json loop_config_to_json(const LoopConfig& c) {
    json j;
    j["loop_type"] = loop_name(c.loop_type);
    j["mu_theta_g1"] = c.mu_theta_g1;
    j["mu_theta_g2"] = c.mu_theta_g2;
    j["sigma_theta_g1"] = c.sigma_theta_g1;
    j["sigma_theta_g2"] = c.sigma_theta_g2;
    j["mu_r_g1"] = c.mu_r_g1;
    j["mu_r_g2"] = c.mu_r_g2;
    j["sigma_r_g1"] = c.sigma_r_g1;
    j["sigma_r_g2"] = c.sigma_r_g2;
    j["sigma_t_g1"] = c.sigma_t_g1;
    j["sigma_t_g2"] = c.sigma_t_g2;
    j["mu_t_train"] = c.mu_t_train;
    j["sigma_t_train"] = c.sigma_t_train;
    j["n"] = c.n;
    j["n_train_per_group"] = c.n_train_per_group;
    j["retrain_every"] = c.retrain_every;
    j["mix_lambda"] = c.mix_lambda;
    j["outcome_shift"] = c.outcome_shift;
    j["fit_tol"] = c.fit_tol;
    j["fit_max_iter"] = c.fit_max_iter;
    j["seed"] = c.seed;
    return j;
}

inline LoopConfig loop_config_from_json(const json& j) {
    config_detail::Fields f(j, "loop config");
    LoopConfig c;
    std::string type = loop_name(c.loop_type);
    f.get_name("loop_type", type);
    c.loop_type = loop_from_name(type);
    f.get("mu_theta_g1", c.mu_theta_g1);
    f.get("mu_theta_g2", c.mu_theta_g2);
    f.get("sigma_theta_g1", c.sigma_theta_g1);
    f.get("sigma_theta_g2", c.sigma_theta_g2);
    f.get("mu_r_g1", c.mu_r_g1);
    f.get("mu_r_g2", c.mu_r_g2);
    f.get("sigma_r_g1", c.sigma_r_g1);
    f.get("sigma_r_g2", c.sigma_r_g2);
    f.get("sigma_t_g1", c.sigma_t_g1);
    f.get("sigma_t_g2", c.sigma_t_g2);
    f.get("mu_t_train", c.mu_t_train);
    f.get("sigma_t_train", c.sigma_t_train);
    f.get("n", c.n);
    f.get("n_train_per_group", c.n_train_per_group);
    f.get("retrain_every", c.retrain_every);
    f.get("mix_lambda", c.mix_lambda);
    f.get("outcome_shift", c.outcome_shift);
    f.get("fit_tol", c.fit_tol);
    f.get("fit_max_iter", c.fit_max_iter);
    f.get("seed", c.seed);
    f.done();
    c.validate();
    return c;
}

inline BiasConfig parse_bias_config(const std::string& text) {
    return bias_config_from_json(config_detail::parse_object(text, "bias config"));
}
inline SolveConfig parse_solve_config(const std::string& text) {
    return solve_config_from_json(config_detail::parse_object(text, "solve config"));
}
inline AdScenarioConfig parse_ad_config(const std::string& text) {
    return ad_config_from_json(config_detail::parse_object(text, "ad scenario config"));
}
inline LoopConfig parse_loop_config(const std::string& text) {
    return loop_config_from_json(config_detail::parse_object(text, "loop config"));
}

namespace config_detail {

inline json opt(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

inline json signed_diff(const FairnessReport& rep, std::optional<double> GroupRates::*m) {
    if (rep.groups.size() < 2) return nullptr;
    const auto& a = rep.groups[0].*m;
    const auto& b = rep.groups[1].*m;
    if (!a || !b) return nullptr;
    return *a - *b;
}

} // namespace config_detail

// Per-group rates plus signed group0 - group1 differences; undefined rates
// surface as null. For more than two groups the largest absolute pairwise
// gap is reported alongside.
inline json fairness_report_to_json(const FairnessReport& rep) {
    using config_detail::opt;
    json groups = json::array();
    for (const auto& g : rep.groups) {
        json row;
        row["n"] = g.n;
        row["tp"] = g.tp;
        row["fp"] = g.fp;
        row["fn"] = g.fn;
        row["tn"] = g.tn;
        row["base_rate"] = opt(g.base_rate);
        row["acceptance_rate"] = opt(g.acceptance_rate);
        row["tpr"] = opt(g.tpr);
        row["fpr"] = opt(g.fpr);
        row["ppv"] = opt(g.ppv);
        row["for"] = opt(g.for_rate);
        row["npv"] = opt(g.npv);
        row["fdr"] = opt(g.fdr);
        row["accuracy"] = opt(g.accuracy);
        groups.push_back(std::move(row));
    }

    json diff;
    json gap;
    const std::pair<const char*, std::optional<double> GroupRates::*> metrics[] = {
        {"base_rate", &GroupRates::base_rate},
        {"acceptance_rate", &GroupRates::acceptance_rate},
        {"tpr", &GroupRates::tpr},
        {"fpr", &GroupRates::fpr},
        {"ppv", &GroupRates::ppv},
        {"for", &GroupRates::for_rate},
        {"accuracy", &GroupRates::accuracy},
    };
    for (const auto& [name, member] : metrics) {
        diff[name] = config_detail::signed_diff(rep, member);
        gap[name] = opt(rep.gap(member));
    }

    json out;
    out["groups"] = std::move(groups);
    out["difference_g0_minus_g1"] = std::move(diff);
    if (rep.groups.size() > 2) out["max_abs_difference"] = std::move(gap);
    return out;
}

inline json rule_to_json(const DecisionRule& rule) {
    json j;
    if (const auto* u = std::get_if<UniformThreshold>(&rule)) {
        j["kind"] = "uniform_threshold";
        j["lo"] = u->iv.lo;
        j["hi"] = u->iv.hi;
    } else if (const auto* g = std::get_if<GroupIntervals>(&rule)) {
        j["kind"] = "group_intervals";
        json iv = json::array();
        for (const auto& i : g->by_group) iv.push_back({{"lo", i.lo}, {"hi", i.hi}});
        j["intervals"] = std::move(iv);
    } else if (const auto* r = std::get_if<RandomizedRule>(&rule)) {
        j["kind"] = "randomized";
        json iv = json::array();
        for (const auto& i : r->by_group) iv.push_back({{"lo", i.lo}, {"hi", i.hi}});
        j["intervals"] = std::move(iv);
        j["q"] = r->q;
        j["coin_scores"] = r->coin_scores;
    } else if (const auto* e = std::get_if<ExplicitVector>(&rule)) {
        j["kind"] = "explicit";
        j["n"] = e->d.size();
        std::size_t ones = 0;
        for (auto v : e->d) ones += v;
        j["selected"] = ones;
    }
    return j;
}

inline json solve_result_to_json(const SolveResult& res) {
    using config_detail::opt;
    json j;
    j["feasible"] = res.feasible;
    j["utility"] = res.utility;
    j["residual"] = res.residual;
    j["target"] = opt(res.target);
    j["for_target"] = opt(res.for_target);
    j["rule"] = rule_to_json(res.rule);
    json groups = json::array();
    for (const auto& g : res.groups) {
        json row;
        row["n"] = g.n;
        row["n_selected"] = g.n_selected;
        row["interval"] = {{"lo", g.interval.lo}, {"hi", g.interval.hi}};
        row["threshold_form"] = g.threshold_form;
        row["lower_bound_rule"] = g.lower_bound_rule;
        row["rate"] = opt(g.rate);
        row["selected_mean"] = opt(g.selected_mean);
        row["rejected_mean"] = opt(g.rejected_mean);
        row["within_group_fair"] = g.within_group_fair;
        groups.push_back(std::move(row));
    }
    j["groups"] = std::move(groups);
    return j;
}

inline json sufficiency_test_to_json(const SufficiencyTestResult& res) {
    using config_detail::opt;
    json bins = json::array();
    for (const auto& b : res.bins) {
        json row;
        row["n0"] = b.n0;
        row["n1"] = b.n1;
        row["mean0"] = opt(b.mean0);
        row["mean1"] = opt(b.mean1);
        row["diff"] = (b.mean0 && b.mean1) ? json(*b.mean0 - *b.mean1) : json(nullptr);
        row["p_value"] = opt(b.p_value);
        bins.push_back(std::move(row));
    }
    json j;
    j["reject"] = res.reject;
    j["n_valid_bins"] = res.n_valid_bins;
    j["corrected_alpha"] = res.corrected_alpha;
    j["bins"] = std::move(bins);
    return j;
}

// file digests reuse the 64-bit FNV-1a hash behind seed derivation
inline std::string fnv1a64_hex(std::string_view bytes) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

// Everything needed to reproduce a run: the resolved config, the master
// seed, and digests of what was read and written.
struct ExperimentManifest {
    std::string subcommand;
    json config;
    std::uint64_t master_seed = 0;
    std::string tool_version = kToolVersion;
    std::vector<std::pair<std::string, std::string>> inputs;    // path, digest
    std::vector<std::pair<std::string, std::string>> outputs;
};

inline json manifest_to_json(const ExperimentManifest& m) {
    auto files = [](const std::vector<std::pair<std::string, std::string>>& v) {
        json arr = json::array();
        for (const auto& [path, digest] : v)
            arr.push_back({{"path", path}, {"fnv1a64", digest}});
        return arr;
    };
    json j;
    j["subcommand"] = m.subcommand;
    j["tool_version"] = m.tool_version;
    j["master_seed"] = m.master_seed;
    j["config"] = m.config;
    j["inputs"] = files(m.inputs);
    j["outputs"] = files(m.outputs);
    return j;
}

} // namespace fairdec
