#include "treesmooth/report_io.hpp"

#include "treesmooth/errors.hpp"
#include "treesmooth/model_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace treesmooth {

using nlohmann::ordered_json;

namespace {

ordered_json grid_to_json(const GridSpec& grid) {
    ordered_json j;
    j["method"] = to_string(grid.method);
    if (grid.method == RegKind::hs) j["lambdas"] = grid.lambdas;
    if (grid.method == RegKind::beta) {
        ordered_json priors = ordered_json::array();
        for (const auto& p : grid.priors) priors.push_back({{"alpha", p.alpha}, {"beta", p.beta}});
        j["priors"] = priors;
    }
    return j;
}

ordered_json summary_to_json(const MetricSummary& s) {
    ordered_json j;
    j["mean"] = s.mean;
    j["std"] = s.stddev;
    j["min"] = s.min;
    j["max"] = s.max;
    return j;
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

ordered_json report_to_json(const ExperimentReport& report) {
    const ExperimentConfig& cfg = report.config;
    ordered_json j;
    j["schema_version"] = kReportSchemaVersion;
    j["kind"] = "treesmooth.report";
    j["protocol"] = report.protocol;

    ordered_json c;
    c["dataset"] = cfg.dataset_name;
    c["method"] = to_string(cfg.method);
    if (cfg.method != RegKind::none) c["grid"] = grid_to_json(cfg.grid);
    c["folds"] = cfg.folds;
    c["repetitions"] = cfg.repetitions;
    c["tuning_metric"] = to_string(cfg.tuning_metric);
    c["master_seed"] = cfg.master_seed;
    if (report.protocol == "holdout") c["test_fraction"] = cfg.test_fraction;
    ordered_json f;
    f["n_trees"] = cfg.forest.n_trees;
    f["max_depth"] = cfg.forest.tree.max_depth;
    f["min_samples_leaf"] = cfg.forest.tree.min_samples_leaf;
    f["max_features"] = cfg.forest.tree.max_features;
    f["bootstrap"] = cfg.forest.bootstrap;
    c["forest"] = f;
    c["jobs"] = cfg.jobs;
    j["config"] = c;

    j["notes"] = report.notes;

    ordered_json rows = ordered_json::array();
    for (const auto& row : report.rows) {
        ordered_json r;
        r["rep"] = row.rep;
        r["chosen"] = regularizer_to_json(row.chosen);
        r["balanced_accuracy"] = row.balanced_accuracy;
        r["roc_auc"] = row.roc_auc;
        rows.push_back(std::move(r));
    }
    j["rows"] = rows;

    ordered_json summary;
    summary["balanced_accuracy"] = summary_to_json(report.balanced_accuracy_summary);
    summary["roc_auc"] = summary_to_json(report.roc_auc_summary);
    j["summary"] = summary;
    return j;
}

std::string report_to_csv(const ExperimentReport& report) {
    std::ostringstream out;
    out << "rep,protocol,dataset,method,chosen_lambda,chosen_alpha,chosen_beta,"
           "balanced_accuracy,roc_auc\n";
    for (const auto& row : report.rows) {
        out << row.rep << ',' << report.protocol << ',' << report.config.dataset_name << ','
            << to_string(report.config.method) << ',';
        if (row.chosen.kind == RegKind::hs) out << format_double(row.chosen.lambda);
        out << ',';
        if (row.chosen.kind == RegKind::beta) out << format_double(row.chosen.prior.alpha);
        out << ',';
        if (row.chosen.kind == RegKind::beta) out << format_double(row.chosen.prior.beta);
        out << ',' << format_double(row.balanced_accuracy) << ',' << format_double(row.roc_auc)
            << '\n';
    }
    return out.str();
}

void save_report_json(const ExperimentReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open file for writing: " + path);
    out << report_to_json(report).dump(1) << '\n';
}

void save_report_csv(const ExperimentReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open file for writing: " + path);
    out << report_to_csv(report);
}

} // namespace treesmooth
