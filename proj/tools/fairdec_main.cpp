// Command-line experiment runner. Every subcommand that writes files also
// writes a manifest (resolved config, master seed, file digests) next to
// them, so a run can be reproduced from its outputs alone. Exit codes:
// 0 success, 1 module or IO error, 2 usage error.

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <fairdec/config.hpp>
#include <fairdec/csv.hpp>

namespace fs = std::filesystem;
using namespace fairdec;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed for " + path);
}

// Collects output files as strings first, then flushes them together with
// the manifest so digests always describe exactly what was written.
struct RunWriter {
    ExperimentManifest manifest;
    std::vector<std::pair<std::string, std::string>> files;   // path, content

    void add_input(const std::string& path, const std::string& content) {
        manifest.inputs.emplace_back(path, fnv1a64_hex(content));
    }
    void add_output(const std::string& path, const std::string& content) {
        files.emplace_back(path, content);
        manifest.outputs.emplace_back(path, fnv1a64_hex(content));
    }
    void flush(const std::string& manifest_path) {
        for (const auto& [path, content] : files) write_file(path, content);
        write_file(manifest_path, manifest_to_json(manifest).dump(2) + "\n");
    }
};

std::string sibling_path(const std::string& path, const std::string& suffix) {
    fs::path p(path);
    fs::path out = p.parent_path() / (p.stem().string() + suffix);
    return out.string();
}

ConstraintKind constraint_arg(const std::string& name) {
    if (name == "suff") return ConstraintKind::sufficiency;
    auto k = constraint_from_string(name);
    if (!k) throw std::runtime_error("unknown constraint: " + name);
    return *k;
}

// Populations come either as score files or as generated datasets; a dataset
// is turned into scores by the train/test audit split.
ScoredPopulation load_population(const std::string& path) {
    std::string text = slurp(path);
    std::string head = text.substr(0, text.find('\n'));
    if (!head.empty() && head.back() == '\r') head.pop_back();
    if (head == "id,group,p" || head == "id,group,p,y") {
        std::istringstream in(text);
        return read_population_csv(in);
    }
    if (head == "id,A,R,Q,label") {
        std::istringstream in(text);
        Dataset data = read_dataset_csv(in);
        SplitEval ev = train_and_audit(data);
        ScoredPopulation pop;
        pop.n_groups = 2;
        for (std::size_t i = 0; i < ev.p_hat.size(); ++i) {
            Individual ind;
            ind.id = std::int64_t(i);
            ind.p = ev.p_hat[i];
            ind.group = ev.A[i];
            ind.y = ev.y_obs[i];
            pop.individuals.push_back(ind);
        }
        pop.validate();
        return pop;
    }
    throw std::runtime_error(path + ": unrecognized CSV header '" + head + "'");
}

int cmd_generate(const std::string& config_path, const std::string& out_path,
                 std::optional<std::uint64_t> seed) {
    std::string text = slurp(config_path);
    BiasConfig cfg = parse_bias_config(text);
    if (seed) cfg.seed = *seed;
    Dataset data = fairdec::generate(cfg);

    std::ostringstream feat, hid;
    write_dataset_csv(feat, data);
    write_dataset_hidden_csv(hid, data);

    RunWriter w;
    w.manifest.subcommand = "generate";
    w.manifest.config = bias_config_to_json(cfg);
    w.manifest.master_seed = cfg.seed;
    w.add_input(config_path, text);
    w.add_output(out_path, feat.str());
    w.add_output(sibling_path(out_path, "_hidden.csv"), hid.str());
    w.flush(sibling_path(out_path, "_manifest.json"));
    return 0;
}

int cmd_audit(const std::string& data_path, const std::string& hidden_path, bool blind_A,
              bool true_labels, const std::string& out_path) {
    if (true_labels && hidden_path.empty())
        throw std::runtime_error("--true-labels needs --hidden with the ground truth");

    std::string text = slurp(data_path);
    std::istringstream in(text);
    Dataset data;
    std::string hidden_text;
    if (!hidden_path.empty()) {
        hidden_text = slurp(hidden_path);
        std::istringstream hin(hidden_text);
        data = read_dataset_csv(in, &hin);
    } else {
        data = read_dataset_csv(in);
    }

    SplitEval ev = train_and_audit(data, blind_A);
    FairnessReport rep = ev.report(true_labels);
    json j = fairness_report_to_json(rep);
    j["test_accuracy_vs_observed"] = ev.accuracy;
    j["labels"] = true_labels ? "true" : "observed";
    std::cout << j.dump(2) << '\n';

    if (!out_path.empty()) {
        std::ostringstream csv;
        write_report_csv(csv, rep);
        RunWriter w;
        w.manifest.subcommand = "audit";
        w.manifest.config = {{"blind_A", blind_A}, {"true_labels", true_labels}};
        w.add_input(data_path, text);
        if (!hidden_path.empty()) w.add_input(hidden_path, hidden_text);
        w.add_output(out_path, csv.str());
        w.flush(sibling_path(out_path, "_manifest.json"));
    }
    return 0;
}

int cmd_optimize(const std::string& data_path, const std::string& constraint, double alpha,
                 double beta, SolveConfig scfg, std::optional<std::uint64_t> capacity,
                 const std::string& out_path) {
    if (capacity) scfg.capacity = std::size_t(*capacity);
    ConstraintKind kind = constraint_arg(constraint);
    ScoredPopulation pop = load_population(data_path);
    UtilityParams u{alpha, beta};
    u.validate();

    SolveResult res = solve(pop, u, kind, scfg);
    json j = solve_result_to_json(res);
    j["constraint"] = to_string(kind);
    std::cout << j.dump(2) << '\n';

    if (!out_path.empty()) {
        RunWriter w;
        w.manifest.subcommand = "optimize";
        w.manifest.config = solve_config_to_json(scfg);
        w.manifest.config["constraint"] = to_string(kind);
        w.manifest.config["alpha"] = alpha;
        w.manifest.config["beta"] = beta;
        w.manifest.master_seed = scfg.seed;
        w.add_input(data_path, slurp(data_path));
        w.add_output(out_path, j.dump(2) + "\n");
        w.flush(sibling_path(out_path, "_manifest.json"));
    }
    return 0;
}

int cmd_pareto(const std::string& data_path, double alpha, double beta, double w11, double w10,
               double w01, double w00, const std::string& claim, const std::string& pattern,
               double prio_k, double suff_t, int bins, const std::string& out_path) {
    ScoredPopulation pop = load_population(data_path);
    UtilityParams u_dm{alpha, beta};
    u_dm.validate();
    UtilityMatrix W{w11, w10, w01, w00};

    ClaimDifferentiator J;
    if (claim == "none")
        J = ClaimNone{};
    else if (claim == "label")
        J = ClaimOnLabel{};
    else if (claim == "decision")
        J = ClaimOnDecision{};
    else
        throw std::runtime_error("unknown claim differentiator: " + claim);

    PatternOfJustice P;
    if (pattern == "egalitarian")
        P = Egalitarian{};
    else if (pattern == "maximin")
        P = Maximin{};
    else if (pattern == "prioritarian")
        P = Prioritarian{prio_k};
    else if (pattern == "sufficientarian")
        P = Sufficientarian{suff_t};
    else
        throw std::runtime_error("unknown pattern of justice: " + pattern);

    std::vector<ParetoPoint> front = pareto_front(pop, u_dm, W, J, P, bins);
    std::ostringstream csv;
    write_pareto_csv(csv, front);

    RunWriter w;
    w.manifest.subcommand = "pareto";
    w.manifest.config = {{"alpha", alpha},   {"beta", beta}, {"w11", w11},
                         {"w10", w10},       {"w01", w01},   {"w00", w00},
                         {"claim", claim},   {"pattern", pattern}, {"bins", bins}};
    w.add_input(data_path, slurp(data_path));
    w.add_output(out_path, csv.str());
    w.flush(sibling_path(out_path, "_manifest.json"));
    std::cout << "pareto front: " << front.size() << " points\n";
    return 0;
}

int cmd_adsim(const std::string& scenario, const std::string& config_path,
              std::optional<std::uint64_t> seed, std::optional<int> repeats,
              const std::string& out_dir) {
    AdScenarioConfig cfg;
    std::string config_text;
    if (scenario == "custom") {
        if (config_path.empty())
            throw std::runtime_error("--scenario custom needs --config");
        config_text = slurp(config_path);
        cfg = parse_ad_config(config_text);
    } else {
        if (scenario.size() != 1 || scenario[0] < 'A' || scenario[0] > 'D')
            throw std::runtime_error("scenario must be A, B, C, D, or custom");
        cfg = scenario_preset(scenario[0], 0);
    }
    if (seed) cfg.seed = *seed;
    if (repeats) cfg.repeats = *repeats;
    cfg.validate();

    ScenarioResult res = run_scenario(cfg);

    fs::create_directories(out_dir);
    RunWriter w;
    w.manifest.subcommand = "adsim";
    w.manifest.config = ad_config_to_json(cfg);
    w.manifest.config["scenario"] = scenario;
    w.manifest.master_seed = cfg.seed;
    if (!config_text.empty()) w.add_input(config_path, config_text);

    using Select = std::function<const MetricSummary*(const ConstraintOutcome&)>;
    auto family = [&](const std::string& name, const Select& sel) {
        std::ostringstream csv;
        write_sweep_metric_csv(csv, res, sel);
        w.add_output((fs::path(out_dir) / (name + ".csv")).string(), csv.str());
    };
    family("utility", [](const ConstraintOutcome& oc) { return &oc.utility; });
    family("pct_of_unconstrained",
           [](const ConstraintOutcome& oc) { return &oc.pct_of_unconstrained; });
    family("sp_gap", [](const ConstraintOutcome& oc) { return &oc.sp_gap; });
    family("tpr_gap", [](const ConstraintOutcome& oc) { return &oc.tpr_gap; });
    family("fpr_gap", [](const ConstraintOutcome& oc) { return &oc.fpr_gap; });
    family("ppv_gap", [](const ConstraintOutcome& oc) { return &oc.ppv_gap; });
    family("for_gap", [](const ConstraintOutcome& oc) { return &oc.for_gap; });
    for (int g = 0; g < 2; ++g) {
        family("shown_g" + std::to_string(g), [g](const ConstraintOutcome& oc) {
            return g < int(oc.shown.size()) ? &oc.shown[g] : nullptr;
        });
        family("delta_v_g" + std::to_string(g), [g](const ConstraintOutcome& oc) {
            return g < int(oc.delta_v.size()) ? &oc.delta_v[g] : nullptr;
        });
    }

    std::ostringstream lev;
    lev << "sweep_value,constraint,count\n";
    for (const auto& pt : res.points)
        for (const auto& oc : pt.outcomes)
            lev << format_g6(pt.sweep_value) << ',' << to_string(oc.kind) << ','
                << oc.leveling_down_count << '\n';
    w.add_output((fs::path(out_dir) / "leveling_down.csv").string(), lev.str());

    w.flush((fs::path(out_dir) / "manifest.json").string());
    return 0;
}

int cmd_loopsim(const std::string& loop, const std::string& config_path, std::size_t steps,
                std::optional<std::uint64_t> seed, std::size_t record_every,
                const std::string& out_dir) {
    LoopConfig cfg;
    std::string config_text;
    if (!config_path.empty()) {
        config_text = slurp(config_path);
        cfg = parse_loop_config(config_text);
        if (!loop.empty()) cfg.loop_type = loop_from_name(loop);
    } else {
        if (loop.empty()) throw std::runtime_error("need --loop or --config");
        cfg = loop_preset(loop_from_name(loop));
    }
    if (seed) cfg.seed = *seed;
    cfg.validate();

    PipelineState st = run_loop(cfg, steps, record_every);
    std::ostringstream csv;
    write_series_csv(csv, st.series);

    fs::create_directories(out_dir);
    RunWriter w;
    w.manifest.subcommand = "loopsim";
    w.manifest.config = loop_config_to_json(cfg);
    w.manifest.config["steps"] = steps;
    w.manifest.config["record_every"] = record_every;
    w.manifest.master_seed = cfg.seed;
    if (!config_text.empty()) w.add_input(config_path, config_text);
    w.add_output((fs::path(out_dir) / "series.csv").string(), csv.str());
    w.flush((fs::path(out_dir) / "manifest.json").string());
    return 0;
}

int cmd_sufftest(const std::string& data_path, int bins, double alpha_level,
                 const std::string& out_path) {
    std::string text = slurp(data_path);
    std::istringstream in(text);
    ScoredPopulation pop = read_population_csv(in);

    std::vector<double> value, outcome;
    std::vector<int> group;
    for (const auto& ind : pop.individuals) {
        if (!ind.y) throw std::runtime_error("sufficiency test needs labeled data (y column)");
        value.push_back(ind.p);
        outcome.push_back(double(*ind.y));
        group.push_back(ind.group);
    }
    SufficiencyTestResult res = sufficiency_test(value, outcome, group, bins, alpha_level);
    json j = sufficiency_test_to_json(res);
    std::cout << j.dump(2) << '\n';

    if (!out_path.empty()) {
        RunWriter w;
        w.manifest.subcommand = "sufftest";
        w.manifest.config = {{"bins", bins}, {"alpha_level", alpha_level}};
        w.add_input(data_path, text);
        w.add_output(out_path, j.dump(2) + "\n");
        w.flush(sibling_path(out_path, "_manifest.json"));
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fairdec: fairness-constrained decision optimization toolkit"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("generate", "draw a synthetic dataset with injected bias");
    std::string gen_config, gen_out;
    std::optional<std::uint64_t> gen_seed;
    gen->add_option("--config", gen_config, "bias config JSON")->required();
    gen->add_option("--out", gen_out, "output CSV path")->required();
    gen->add_option("--seed", gen_seed, "override the config seed");

    auto* aud = app.add_subcommand("audit", "train a classifier and report group fairness");
    std::string aud_data, aud_hidden, aud_out;
    bool aud_blind = false, aud_true = false;
    aud->add_option("--data", aud_data, "dataset CSV")->required();
    aud->add_option("--hidden", aud_hidden, "hidden sidecar CSV with ground truth");
    aud->add_flag("--blind-A", aud_blind, "exclude the group column from the features");
    aud->add_flag("--true-labels", aud_true, "evaluate against true labels (needs --hidden)");
    aud->add_option("--out", aud_out, "also write the report as CSV");

    auto* opt = app.add_subcommand("optimize", "utility-max decisions under a parity constraint");
    std::string opt_data, opt_constraint, opt_out;
    double opt_alpha = 0.0, opt_beta = 0.0;
    SolveConfig opt_cfg;
    std::optional<std::uint64_t> opt_capacity;
    bool opt_stochastic = false;
    opt->add_option("--data", opt_data, "population or dataset CSV")->required();
    opt->add_option("--constraint", opt_constraint, "none|sp|tpr|fpr|ppv|for|suff")->required();
    opt->add_option("--alpha", opt_alpha, "utility per selected positive")->required();
    opt->add_option("--beta", opt_beta, "utility per selected negative")->required();
    opt->add_option("--grid", opt_cfg.grid_points, "target grid resolution");
    opt->add_option("--eps", opt_cfg.eps_parity, "parity tolerance");
    opt->add_option("--capacity", opt_capacity, "exact number of positive decisions");
    opt->add_option("--seed", opt_cfg.seed, "seed for randomized boundary draws");
    opt->add_flag("--stochastic", opt_stochastic, "allow randomized boundary rules");
    opt->add_option("--out", opt_out, "also write the result JSON to a file");

    auto* par = app.add_subcommand("pareto", "utility/fairness front over threshold pairs");
    std::string par_data, par_claim = "none", par_pattern = "egalitarian", par_out;
    double par_alpha = 0.0, par_beta = 0.0;
    double par_w11 = 1.0, par_w10 = -1.0, par_w01 = -1.0, par_w00 = 1.0;
    double par_k = 2.0, par_t = 0.0;
    int par_bins = 20;
    par->add_option("--data", par_data, "population or dataset CSV")->required();
    par->add_option("--alpha", par_alpha, "decision-maker utility per positive")->required();
    par->add_option("--beta", par_beta, "decision-maker utility per negative")->required();
    par->add_option("--w11", par_w11, "subject weight for d=1,y=1");
    par->add_option("--w10", par_w10, "subject weight for d=1,y=0");
    par->add_option("--w01", par_w01, "subject weight for d=0,y=1");
    par->add_option("--w00", par_w00, "subject weight for d=0,y=0");
    par->add_option("--claim", par_claim, "none|label|decision");
    par->add_option("--pattern", par_pattern,
                    "egalitarian|maximin|prioritarian|sufficientarian");
    par->add_option("--priority-weight", par_k, "prioritarian weight on the worst-off group");
    par->add_option("--sufficiency-level", par_t, "sufficientarian utility floor");
    par->add_option("--bins", par_bins, "threshold grid bins per group");
    par->add_option("--out", par_out, "front CSV path")->required();

    auto* ads = app.add_subcommand("adsim", "ad-delivery constraint cost sweeps");
    std::string ads_scenario, ads_config, ads_out;
    std::optional<std::uint64_t> ads_seed;
    std::optional<int> ads_repeats;
    ads->add_option("--scenario", ads_scenario, "A|B|C|D|custom")->required();
    ads->add_option("--config", ads_config, "scenario config JSON (for custom)");
    ads->add_option("--seed", ads_seed, "master seed");
    ads->add_option("--repeats", ads_repeats, "repeats per sweep point");
    ads->add_option("--out", ads_out, "output directory")->required();

    auto* loop = app.add_subcommand("loopsim", "decision-feedback loop simulation");
    std::string loop_kind, loop_config, loop_out;
    std::size_t loop_steps = 0, loop_record = 100;
    std::optional<std::uint64_t> loop_seed;
    loop->add_option("--loop", loop_kind, "sampling|individual|feature|mlmodel|outcome");
    loop->add_option("--config", loop_config, "loop config JSON");
    loop->add_option("--steps", loop_steps, "simulation steps")->required();
    loop->add_option("--seed", loop_seed, "master seed");
    loop->add_option("--record-every", loop_record, "series sampling cadence");
    loop->add_option("--out", loop_out, "output directory")->required();

    auto* suf = app.add_subcommand("sufftest", "binned sufficiency hypothesis test");
    std::string suf_data, suf_out;
    int suf_bins = 10;
    double suf_alpha = 0.05;
    suf->add_option("--data", suf_data, "labeled population CSV")->required();
    suf->add_option("--bins", suf_bins, "equal-count bins");
    suf->add_option("--alpha-level", suf_alpha, "family-wise test level");
    suf->add_option("--out", suf_out, "also write the result JSON to a file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*gen) return cmd_generate(gen_config, gen_out, gen_seed);
        if (*aud) return cmd_audit(aud_data, aud_hidden, aud_blind, aud_true, aud_out);
        if (*opt) {
            opt_cfg.stochastic_boundary = opt_stochastic;
            return cmd_optimize(opt_data, opt_constraint, opt_alpha, opt_beta, opt_cfg,
                                opt_capacity, opt_out);
        }
        if (*par)
            return cmd_pareto(par_data, par_alpha, par_beta, par_w11, par_w10, par_w01,
                              par_w00, par_claim, par_pattern, par_k, par_t, par_bins,
                              par_out);
        if (*ads) return cmd_adsim(ads_scenario, ads_config, ads_seed, ads_repeats, ads_out);
        if (*loop)
            return cmd_loopsim(loop_kind, loop_config, loop_steps, loop_seed, loop_record,
                               loop_out);
        if (*suf) return cmd_sufftest(suf_data, suf_bins, suf_alpha, suf_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
