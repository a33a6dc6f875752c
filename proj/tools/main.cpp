#include <CLI11.hpp>

#include "treesmooth/betafun.hpp"
#include "treesmooth/dataset.hpp"
#include "treesmooth/errors.hpp"
#include "treesmooth/harness.hpp"
#include "treesmooth/model_io.hpp"
#include "treesmooth/regularize.hpp"
#include "treesmooth/report_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace treesmooth;

#ifndef TREESMOOTH_SOURCE_DATA_DIR
#define TREESMOOTH_SOURCE_DATA_DIR "data"
#endif

std::string resolve_data_dir(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("TREESMOOTH_DATA_DIR"); env && *env) return env;
    if (std::filesystem::is_directory("data")) return "data";
    return TREESMOOTH_SOURCE_DATA_DIR;
}

std::string registry_listing() {
    std::string s = "known datasets:";
    for (const auto& e : dataset_registry())
        s += "\n  " + e.name + " (" + std::to_string(e.expected_samples) + " samples, " +
             std::to_string(e.expected_features) + " features)";
    return s;
}

Dataset resolve_dataset(const std::string& name_or_path, const std::string& data_dir_flag) {
    if (std::filesystem::is_regular_file(name_or_path)) return load_csv(name_or_path);
    if (find_registry_entry(name_or_path)) {
        const std::string path = resolve_data_dir(data_dir_flag) + "/" + name_or_path + ".csv";
        Dataset ds = load_csv(path);
        ds.name = name_or_path;
        return ds;
    }
    throw UnsupportedDatasetError("unknown dataset '" + name_or_path + "' (not a file, not in the registry)\n" +
                                  registry_listing());
}

struct ForestFlags {
    int trees = 100;
    int max_depth = -1;
    int min_samples_leaf = 1;
    int max_features = kMaxFeaturesSqrt;
    bool no_bootstrap = false;

    void add_to(CLI::App& cmd) {
        cmd.add_option("--trees", trees, "Number of trees")->capture_default_str();
        cmd.add_option("--max-depth", max_depth, "Maximum tree depth (-1: unlimited)")
            ->capture_default_str();
        cmd.add_option("--min-samples-leaf", min_samples_leaf, "Minimum samples per leaf")
            ->capture_default_str();
        cmd.add_option("--max-features", max_features,
                       "Split candidates per node (-1: ceil(sqrt(d)), 0: all)")
            ->capture_default_str();
        cmd.add_flag("--no-bootstrap", no_bootstrap, "Train every tree on the full sample");
    }

    ForestConfig config(std::uint64_t seed) const {
        ForestConfig fc;
        fc.n_trees = trees;
        fc.tree.max_depth = max_depth;
        fc.tree.min_samples_leaf = min_samples_leaf;
        fc.tree.max_features = max_features;
        fc.bootstrap = !no_bootstrap;
        fc.seed = seed;
        return fc;
    }
};

struct MethodFlags {
    std::string method = "none";
    double lambda = 1.0;
    double alpha = 1.0;
    double beta = 1.0;

    void add_to(CLI::App& cmd) {
        cmd.add_option("--method", method, "Calibration method: none | hs | beta")
            ->check(CLI::IsMember({"none", "hs", "beta"}))
            ->capture_default_str();
        cmd.add_option("--lambda", lambda, "Shrinkage strength (hs)")->capture_default_str();
        cmd.add_option("--alpha", alpha, "Prior alpha, class-0 pseudo-counts (beta)")
            ->capture_default_str();
        cmd.add_option("--beta", beta, "Prior beta, class-1 pseudo-counts (beta)")
            ->capture_default_str();
    }

    RegularizerSpec spec() const {
        const RegKind kind = reg_kind_from_string(method);
        if (kind == RegKind::hs) return RegularizerSpec::hs(lambda);
        if (kind == RegKind::beta) return RegularizerSpec::beta({alpha, beta});
        return RegularizerSpec::none_spec();
    }
};

int cmd_validate_data(const std::string& name, const std::string& csv, const std::string& data_dir) {
    const DatasetRegistryEntry* entry = find_registry_entry(name);
    if (!entry) {
        std::cerr << "error: '" << name << "' is not a registry dataset\n"
                  << registry_listing() << '\n';
        return 1;
    }
    const std::string path =
        csv.empty() ? resolve_data_dir(data_dir) + "/" + name + ".csv" : csv;
    const Dataset ds = load_csv(path);
    const auto counts = ds.class_counts();
    std::cout << ds.n_samples() << " samples, " << ds.n_features << " features, classes "
              << counts[0] << "/" << counts[1] << '\n';
    const ValidationResult res = validate_against_registry(ds, *entry);
    if (res.ok) {
        std::cout << "matches registry entry '" << entry->name << "'\n";
        return 0;
    }
    for (const auto& m : res.mismatches) std::cout << "mismatch: " << m << '\n';
    return 1;
}

GridSpec make_grid(RegKind method, const std::vector<double>& lambda_grid,
                   const std::vector<double>& alpha_grid, const std::vector<double>& beta_grid,
                   bool tied_prior) {
    GridSpec g = GridSpec::defaults(method, tied_prior);
    if (method == RegKind::hs && !lambda_grid.empty()) g.lambdas = lambda_grid;
    if (method == RegKind::beta && (!alpha_grid.empty() || !beta_grid.empty() || tied_prior)) {
        const auto& as = alpha_grid.empty() ? GridSpec::default_prior_values() : alpha_grid;
        const auto& bs = beta_grid.empty() ? GridSpec::default_prior_values() : beta_grid;
        g.priors.clear();
        if (tied_prior) {
            for (double v : as) g.priors.push_back({v, v});
        } else {
            for (double a : as)
                for (double b : bs) g.priors.push_back({a, b});
        }
    }
    return g;
}

void print_summary(const ExperimentReport& report) {
    const auto& b = report.balanced_accuracy_summary;
    const auto& a = report.roc_auc_summary;
    std::printf("protocol=%s dataset=%s reps=%d folds=%d seed=%llu\n", report.protocol.c_str(),
                report.config.dataset_name.c_str(), report.config.repetitions,
                report.config.folds,
                static_cast<unsigned long long>(report.config.master_seed));
    std::printf("%-8s %-22s %-22s\n", "method", "balanced_accuracy", "roc_auc");
    char bacc[32], auc[32];
    std::snprintf(bacc, sizeof bacc, "%.4f +/- %.4f", b.mean, b.stddev);
    std::snprintf(auc, sizeof auc, "%.4f +/- %.4f", a.mean, a.stddev);
    std::printf("%-8s %-22s %-22s\n", to_string(report.config.method).c_str(), bacc, auc);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"random-forest binary classifier with post-hoc leaf calibration"};
    app.require_subcommand(1);

    // bench
    auto* bench = app.add_subcommand("bench", "Run a benchmark protocol and write a report");
    std::string b_dataset, b_protocol = "cv", b_tuning = "balanced_accuracy";
    std::string b_out, b_format = "json", b_data_dir;
    int b_reps = 20, b_folds = 5, b_jobs = 1;
    std::uint64_t b_seed = 0;
    double b_test_fraction = 0.3;
    bool b_tied = false;
    std::vector<double> b_lambda_grid, b_alpha_grid, b_beta_grid;
    std::string b_method = "none";
    ForestFlags b_forest;
    bench->add_option("--dataset", b_dataset, "Registry name or CSV path")->required();
    bench->add_option("--method", b_method, "Calibration method: none | hs | beta")
        ->check(CLI::IsMember({"none", "hs", "beta"}))
        ->capture_default_str();
    bench->add_option("--protocol", b_protocol, "cv | holdout")
        ->check(CLI::IsMember({"cv", "holdout"}))
        ->capture_default_str();
    bench->add_option("--reps", b_reps, "Repetitions")->capture_default_str();
    bench->add_option("--folds", b_folds, "Cross-validation folds")->capture_default_str();
    bench->add_option("--seed", b_seed, "Master seed")->capture_default_str();
    bench->add_option("--test-fraction", b_test_fraction, "Held-out fraction (holdout protocol)")
        ->capture_default_str();
    bench->add_option("--tuning-metric", b_tuning, "balanced_accuracy | roc_auc")
        ->check(CLI::IsMember({"balanced_accuracy", "roc_auc"}))
        ->capture_default_str();
    bench->add_option("--lambda-grid", b_lambda_grid, "Comma-separated lambda grid (hs)")
        ->delimiter(',');
    bench->add_option("--alpha-grid", b_alpha_grid, "Comma-separated alpha grid (beta)")
        ->delimiter(',');
    bench->add_option("--beta-grid", b_beta_grid, "Comma-separated beta grid (beta)")
        ->delimiter(',');
    bench->add_flag("--tied-prior", b_tied, "Search only alpha == beta pairs");
    b_forest.add_to(*bench);
    bench->add_option("--jobs", b_jobs, "Worker threads across repetitions")->capture_default_str();
    bench->add_option("--out", b_out, "Report output path");
    bench->add_option("--format", b_format, "Report format: json | csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    bench->add_option("--data-dir", b_data_dir, "Directory with the bundled datasets");

    // validate-data
    auto* validate = app.add_subcommand("validate-data", "Check a bundled dataset against the registry");
    std::string v_name, v_csv, v_data_dir;
    validate->add_option("name", v_name, "Registry dataset name")->required();
    validate->add_option("--csv", v_csv, "Explicit CSV path (default <data-dir>/<name>.csv)");
    validate->add_option("--data-dir", v_data_dir, "Directory with the bundled datasets");

    // dump-model
    auto* dump = app.add_subcommand("dump-model", "Fit a forest, optionally calibrate, write JSON");
    std::string d_dataset, d_out, d_data_dir;
    std::uint64_t d_seed = 0;
    MethodFlags d_method;
    ForestFlags d_forest;
    dump->add_option("--dataset", d_dataset, "Registry name or CSV path")->required();
    d_method.add_to(*dump);
    d_forest.add_to(*dump);
    dump->add_option("--seed", d_seed, "Forest seed")->capture_default_str();
    dump->add_option("--out", d_out, "Model output path")->required();
    dump->add_option("--data-dir", d_data_dir, "Directory with the bundled datasets");

    // predict
    auto* predict = app.add_subcommand("predict", "Emit class-1 probabilities for a CSV");
    std::string p_model, p_data, p_out;
    MethodFlags p_method;
    predict->add_option("--model", p_model, "Model JSON path")->required();
    predict->add_option("--data", p_data, "Input CSV (same schema as training data)")->required();
    p_method.add_to(*predict);
    predict->add_option("--out", p_out, "Output CSV path (default stdout)");

    // betafun-eval (debugging aid, hidden from help)
    auto* betafun = app.add_subcommand("betafun-eval", "Evaluate the beta kernel");
    betafun->group("");
    std::string bf_op = "cdf";
    double bf_x = 0.5, bf_q = 0.5, bf_alpha = 1.0, bf_beta = 1.0;
    betafun->add_option("--op", bf_op, "cdf | ppf | pdf")
        ->check(CLI::IsMember({"cdf", "ppf", "pdf"}));
    betafun->add_option("--x", bf_x, "Point for cdf/pdf");
    betafun->add_option("--q", bf_q, "Quantile level for ppf");
    betafun->add_option("--alpha", bf_alpha, "alpha")->required();
    betafun->add_option("--beta", bf_beta, "beta")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (validate->parsed()) return cmd_validate_data(v_name, v_csv, v_data_dir);

        if (bench->parsed()) {
            ExperimentConfig cfg;
            const Dataset ds = resolve_dataset(b_dataset, b_data_dir);
            cfg.dataset_name = ds.name;
            cfg.method = reg_kind_from_string(b_method);
            cfg.grid = make_grid(cfg.method, b_lambda_grid, b_alpha_grid, b_beta_grid, b_tied);
            cfg.folds = b_folds;
            cfg.repetitions = b_reps;
            cfg.tuning_metric = tuning_metric_from_string(b_tuning);
            cfg.master_seed = b_seed;
            cfg.test_fraction = b_test_fraction;
            cfg.forest = b_forest.config(0);
            cfg.jobs = b_jobs;
            const ExperimentReport report =
                b_protocol == "cv" ? experiment_cv(ds, cfg) : experiment_holdout(ds, cfg);
            if (!b_out.empty()) {
                if (b_format == "json") save_report_json(report, b_out);
                else save_report_csv(report, b_out);
            }
            print_summary(report);
            return 0;
        }

        if (dump->parsed()) {
            const Dataset ds = resolve_dataset(d_dataset, d_data_dir);
            const FittedForest forest = fit_forest(ds, d_forest.config(d_seed));
            save_forest(apply(forest, d_method.spec()), d_out);
            std::cout << "wrote " << d_out << " (" << forest.trees.size() << " trees, "
                      << forest.n_features << " features)\n";
            return 0;
        }

        if (predict->parsed()) {
            FittedForest forest = load_forest(p_model);
            const RegularizerSpec spec = p_method.spec();
            if (spec.kind != RegKind::none) forest = apply(forest, spec);
            const Dataset ds = load_csv(p_data);
            const std::vector<double> probs = predict_proba_batch(forest, ds);
            std::ofstream file;
            std::ostream* out = &std::cout;
            if (!p_out.empty()) {
                file.open(p_out);
                if (!file) throw ParseError("cannot open file for writing: " + p_out);
                out = &file;
            }
            *out << "row,class1_probability\n";
            for (std::size_t i = 0; i < probs.size(); ++i)
                *out << i << ',' << format_double(probs[i]) << '\n';
            return 0;
        }

        if (betafun->parsed()) {
            const BetaParams p{bf_alpha, bf_beta};
            double value = 0.0;
            if (bf_op == "cdf") value = beta_cdf(bf_x, p);
            else if (bf_op == "pdf") value = beta_pdf(bf_x, p);
            else value = beta_ppf(bf_q, p);
            std::cout << format_double(value) << '\n';
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
