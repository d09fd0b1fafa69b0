#pragma once
// CSV artifacts shared by the command-line tool and the test suite. Floats
// are serialized with 6 significant digits; parsing a file we wrote and
// re-serializing it reproduces the bytes.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "adsim.hpp"
#include "biasgen.hpp"
#include "core.hpp"
#include "justice.hpp"
#include "loopsim.hpp"
#include "metrics.hpp"

namespace fairdec {

inline std::string format_g6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

namespace csv_detail {

inline double parse_double(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty numeric field");
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) throw std::invalid_argument("bad numeric field: " + s);
    return v;
}

inline long long parse_int(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty integer field");
    char* end = nullptr;
    long long v = std::strtoll(s.c_str(), &end, 10);
    if (end != s.c_str() + s.size()) throw std::invalid_argument("bad integer field: " + s);
    return v;
}

// values never contain commas or quotes, so a plain split suffices
inline std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

inline bool read_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

inline std::string join(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += fields[i];
    }
    return out;
}

} // namespace csv_detail

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

// Reads header plus data rows; every row must match the header arity.
inline CsvTable read_csv(std::istream& in) {
    CsvTable t;
    std::string line;
    if (!csv_detail::read_line(in, line)) throw std::invalid_argument("missing CSV header");
    t.header = csv_detail::split(line);
    while (csv_detail::read_line(in, line)) {
        if (line.empty()) continue;
        auto fields = csv_detail::split(line);
        if (fields.size() != t.header.size())
            throw std::invalid_argument("CSV row arity mismatch: " + line);
        t.rows.push_back(std::move(fields));
    }
    return t;
}

// header id,group,p with the label column present iff every row has one
inline void write_population_csv(std::ostream& out, const ScoredPopulation& pop) {
    std::size_t labeled = 0;
    for (const auto& ind : pop.individuals) labeled += ind.y.has_value() ? 1 : 0;
    if (labeled != 0 && labeled != pop.individuals.size())
        throw std::invalid_argument("population has partial labels");
    const bool with_y = labeled == pop.individuals.size() && labeled > 0;
    out << (with_y ? "id,group,p,y\n" : "id,group,p\n");
    for (const auto& ind : pop.individuals) {
        out << ind.id << ',' << ind.group << ',' << format_g6(ind.p);
        if (with_y) out << ',' << *ind.y;
        out << '\n';
    }
}

inline ScoredPopulation read_population_csv(std::istream& in) {
    CsvTable t = read_csv(in);
    bool with_y;
    if (t.header == std::vector<std::string>{"id", "group", "p"})
        with_y = false;
    else if (t.header == std::vector<std::string>{"id", "group", "p", "y"})
        with_y = true;
    else
        throw std::invalid_argument("population CSV header must be id,group,p[,y]");

    ScoredPopulation pop;
    int max_group = 0;
    for (const auto& row : t.rows) {
        Individual ind;
        ind.id = csv_detail::parse_int(row[0]);
        ind.group = int(csv_detail::parse_int(row[1]));
        ind.p = csv_detail::parse_double(row[2]);
        if (with_y) {
            long long y = csv_detail::parse_int(row[3]);
            if (y != 0 && y != 1) throw std::invalid_argument("label must be 0 or 1");
            ind.y = int(y);
        }
        max_group = std::max(max_group, ind.group);
        pop.individuals.push_back(ind);
    }
    pop.n_groups = max_group + 1;
    pop.validate();
    return pop;
}

// feature view: the R column carries the measured value when one is recorded
inline void write_dataset_csv(std::ostream& out, const Dataset& data) {
    out << "id,A,R,Q,label\n";
    for (const auto& r : data.rows)
        out << r.id << ',' << r.A << ',' << format_g6(data.r_is_measured ? r.P_R : r.R) << ','
            << r.Q << ',' << r.label << '\n';
}

inline void write_dataset_hidden_csv(std::ostream& out, const Dataset& data) {
    out << "id,S,P_S,P_R,Y_true\n";
    for (const auto& r : data.rows)
        out << r.id << ',' << format_g6(r.S) << ',' << format_g6(r.P_S) << ','
            << format_g6(r.P_R) << ',' << r.Y_true << '\n';
}

// reads the feature view, optionally joined with the hidden sidecar by id
inline Dataset read_dataset_csv(std::istream& features, std::istream* hidden = nullptr) {
    CsvTable t = read_csv(features);
    if (t.header != std::vector<std::string>{"id", "A", "R", "Q", "label"})
        throw std::invalid_argument("dataset CSV header must be id,A,R,Q,label");
    Dataset data;
    for (const auto& row : t.rows) {
        DataRow r;
        r.id = csv_detail::parse_int(row[0]);
        r.A = int(csv_detail::parse_int(row[1]));
        r.R = csv_detail::parse_double(row[2]);
        r.Q = int(csv_detail::parse_int(row[3]));
        r.label = int(csv_detail::parse_int(row[4]));
        if (r.A != 0 && r.A != 1) throw std::invalid_argument("A must be 0 or 1");
        if (r.label != 0 && r.label != 1) throw std::invalid_argument("label must be 0 or 1");
        data.rows.push_back(r);
    }
    if (hidden) {
        CsvTable h = read_csv(*hidden);
        if (h.header != std::vector<std::string>{"id", "S", "P_S", "P_R", "Y_true"})
            throw std::invalid_argument("hidden CSV header must be id,S,P_S,P_R,Y_true");
        if (h.rows.size() != data.rows.size())
            throw std::invalid_argument("hidden CSV row count mismatch");
        for (std::size_t i = 0; i < h.rows.size(); ++i) {
            auto& r = data.rows[i];
            if (csv_detail::parse_int(h.rows[i][0]) != r.id)
                throw std::invalid_argument("hidden CSV id mismatch");
            r.S = csv_detail::parse_double(h.rows[i][1]);
            r.P_S = csv_detail::parse_double(h.rows[i][2]);
            r.P_R = csv_detail::parse_double(h.rows[i][3]);
            int yt = int(csv_detail::parse_int(h.rows[i][4]));
            if (yt != 0 && yt != 1) throw std::invalid_argument("Y_true must be 0 or 1");
            r.Y_true = yt;
        }
    }
    return data;
}

// one row per group and metric; undefined rates keep their row with an empty
// value so a missing denominator is visible, never a silent zero
inline void write_report_csv(std::ostream& out, const FairnessReport& rep) {
    auto opt = [](const std::optional<double>& v) {
        return v ? format_g6(*v) : std::string();
    };
    out << "group,metric,value\n";
    for (std::size_t g = 0; g < rep.groups.size(); ++g) {
        const GroupRates& r = rep.groups[g];
        out << g << ",n," << r.n << '\n';
        out << g << ",tp," << r.tp << '\n';
        out << g << ",fp," << r.fp << '\n';
        out << g << ",fn," << r.fn << '\n';
        out << g << ",tn," << r.tn << '\n';
        out << g << ",base_rate," << opt(r.base_rate) << '\n';
        out << g << ",acceptance_rate," << opt(r.acceptance_rate) << '\n';
        out << g << ",tpr," << opt(r.tpr) << '\n';
        out << g << ",fpr," << opt(r.fpr) << '\n';
        out << g << ",ppv," << opt(r.ppv) << '\n';
        out << g << ",for," << opt(r.for_rate) << '\n';
        out << g << ",npv," << opt(r.npv) << '\n';
        out << g << ",fdr," << opt(r.fdr) << '\n';
        out << g << ",accuracy," << opt(r.accuracy) << '\n';
    }
}

// plotting columns for a two-group front of one-sided threshold pairs
inline void write_pareto_csv(std::ostream& out, const std::vector<ParetoPoint>& front) {
    out << "tau_lo_g0,tau_hi_g0,tau_lo_g1,tau_hi_g1,dm_utility,fairness_score,u_g0,u_g1\n";
    for (const auto& pt : front) {
        const auto* gi = std::get_if<GroupIntervals>(&pt.rule);
        if (!gi || gi->by_group.size() != 2 || pt.group_utilities.size() != 2)
            throw std::invalid_argument("pareto point is not a two-group interval rule");
        out << format_g6(gi->by_group[0].lo) << ',' << format_g6(gi->by_group[0].hi) << ','
            << format_g6(gi->by_group[1].lo) << ',' << format_g6(gi->by_group[1].hi) << ','
            << format_g6(pt.dm_utility) << ',' << format_g6(pt.fairness_score) << ','
            << format_g6(pt.group_utilities[0]) << ',' << format_g6(pt.group_utilities[1])
            << '\n';
    }
}

inline void write_series_csv(std::ostream& out, const std::vector<LoopRecord>& series) {
    out << "step,metric,group,value\n";
    for (const auto& r : series)
        out << r.step << ',' << r.metric << ',' << r.group << ',' << format_g6(r.value)
            << '\n';
}

// one metric family across the sweep; the selector picks the summary out of
// each constraint outcome and may return null to skip a row
inline void write_sweep_metric_csv(
    std::ostream& out, const ScenarioResult& result,
    const std::function<const MetricSummary*(const ConstraintOutcome&)>& select) {
    out << "sweep_value,constraint,mean,ci_lo,ci_hi\n";
    for (const auto& pt : result.points)
        for (const auto& oc : pt.outcomes) {
            const MetricSummary* s = select(oc);
            if (!s || s->per_repeat.empty()) continue;
            out << format_g6(pt.sweep_value) << ',' << to_string(oc.kind) << ','
                << format_g6(s->mean) << ',' << format_g6(s->ci_lo) << ','
                << format_g6(s->ci_hi) << '\n';
        }
}

} // namespace fairdec
