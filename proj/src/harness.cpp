#include "treesmooth/harness.hpp"

#include "treesmooth/errors.hpp"
#include "treesmooth/metrics.hpp"
#include "treesmooth/regularize.hpp"
#include "treesmooth/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace treesmooth {

std::string to_string(TuningMetric m) {
    return m == TuningMetric::balanced_accuracy ? "balanced_accuracy" : "roc_auc";
}

TuningMetric tuning_metric_from_string(const std::string& s) {
    if (s == "balanced_accuracy") return TuningMetric::balanced_accuracy;
    if (s == "roc_auc") return TuningMetric::roc_auc;
    throw std::invalid_argument("unknown tuning metric: " + s);
}

std::size_t GridSpec::size() const {
    switch (method) {
        case RegKind::none: return 1;
        case RegKind::hs: return lambdas.size();
        case RegKind::beta: return priors.size();
    }
    return 0;
}

RegularizerSpec GridSpec::spec_at(std::size_t i) const {
    switch (method) {
        case RegKind::none: return RegularizerSpec::none_spec();
        case RegKind::hs: return RegularizerSpec::hs(lambdas.at(i));
        case RegKind::beta: return RegularizerSpec::beta(priors.at(i));
    }
    return RegularizerSpec::none_spec();
}

const std::vector<double>& GridSpec::default_lambdas() {
    static const std::vector<double> v = {0.001, 0.01, 0.1, 1, 10, 25, 50, 100, 200};
    return v;
}

const std::vector<double>& GridSpec::default_prior_values() {
    static const std::vector<double> v = {1500, 1000, 800, 500, 100, 50, 30, 10, 1};
    return v;
}

GridSpec GridSpec::defaults(RegKind method, bool tied_prior) {
    GridSpec g;
    g.method = method;
    if (method == RegKind::hs) g.lambdas = default_lambdas();
    if (method == RegKind::beta) {
        const auto& vals = default_prior_values();
        if (tied_prior) {
            for (double v : vals) g.priors.push_back({v, v});
        } else {
            for (double a : vals)
                for (double b : vals) g.priors.push_back({a, b});
        }
    }
    return g;
}

namespace {

double score_predictions(TuningMetric metric, const std::vector<double>& scores,
                         const std::vector<int>& labels) {
    if (metric == TuningMetric::roc_auc) return roc_auc_pairs({scores, labels});
    return balanced_accuracy(confusion_matrix(labels, labels_from_scores(scores)));
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> fold_split(
    const FoldAssignment& fa, int fold) {
    std::vector<std::size_t> rest, held;
    for (std::size_t i = 0; i < fa.fold_of.size(); ++i)
        (fa.fold_of[i] == fold ? held : rest).push_back(i);
    return {rest, held};
}

void validate_config(const ExperimentConfig& cfg) {
    if (cfg.folds < 2) throw std::invalid_argument("experiment: folds must be >= 2");
    if (cfg.repetitions < 1) throw std::invalid_argument("experiment: repetitions must be >= 1");
    if (cfg.method != RegKind::none) {
        if (cfg.grid.method != cfg.method)
            throw std::invalid_argument("experiment: grid method does not match config method");
        if (cfg.grid.size() == 0) throw std::invalid_argument("experiment: empty grid");
    }
    if (cfg.jobs < 1) throw std::invalid_argument("experiment: jobs must be >= 1");
}

// Runs reps 0..n-1 through one worker function, in parallel when asked, and
// assembles rows in repetition order no matter which thread finished first.
template <class RunRep>
std::vector<RepetitionResult> run_all(int repetitions, int jobs, RunRep&& run_rep) {
    std::vector<RepetitionResult> rows(repetitions);
    if (jobs <= 1) {
        for (int r = 0; r < repetitions; ++r) rows[r] = run_rep(r);
        return rows;
    }
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        while (true) {
            const int r = next.fetch_add(1);
            if (r >= repetitions) return;
            try {
                rows[r] = run_rep(r);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const int n_workers = std::min(jobs, repetitions);
    pool.reserve(n_workers);
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return rows;
}

struct FoldMetrics {
    double balanced_accuracy = 0.0;
    double roc_auc = 0.0;
};

// Fits one forest per fold (seeded from `seed` as documented in the
// header), calibrates with `spec`, and averages both metrics over the
// held-out folds.
FoldMetrics cross_validate(const Dataset& ds, const ExperimentConfig& cfg,
                           const RegularizerSpec& spec, std::uint64_t seed, int rep,
                           TrainingTrace* trace) {
    const FoldAssignment fa = stratified_kfold(ds, cfg.folds, mix_seed(seed, 0));
    FoldMetrics sums;
    for (int j = 0; j < cfg.folds; ++j) {
        const auto [train_rows, held_rows] = fold_split(fa, j);
        const Dataset train = subset(ds, train_rows);
        const Dataset held = subset(ds, held_rows);
        if (trace) trace->on_fit(rep, train);
        ForestConfig fc = cfg.forest;
        fc.seed = mix_seed(seed, 1 + static_cast<std::uint64_t>(j));
        const FittedForest forest = fit_forest(train, fc);
        const FittedForest calibrated = apply(forest, spec);
        const std::vector<double> scores = predict_proba_batch(calibrated, held);
        sums.balanced_accuracy +=
            balanced_accuracy(confusion_matrix(held.labels, labels_from_scores(scores)));
        sums.roc_auc += roc_auc_pairs({scores, held.labels});
    }
    sums.balanced_accuracy /= cfg.folds;
    sums.roc_auc /= cfg.folds;
    return sums;
}

ExperimentReport assemble_report(std::string protocol, const ExperimentConfig& cfg,
                                 std::vector<RepetitionResult> rows,
                                 std::vector<std::string> notes) {
    ExperimentReport report;
    report.protocol = std::move(protocol);
    report.config = cfg;
    report.notes = std::move(notes);
    report.rows = std::move(rows);
    std::vector<double> bacc, auc;
    for (const auto& row : report.rows) {
        bacc.push_back(row.balanced_accuracy);
        auc.push_back(row.roc_auc);
    }
    report.balanced_accuracy_summary = summarize(bacc);
    report.roc_auc_summary = summarize(auc);
    return report;
}

} // namespace

MetricSummary summarize(const std::vector<double>& values) {
    MetricSummary s;
    if (values.empty()) return s;
    s.min = *std::min_element(values.begin(), values.end());
    s.max = *std::max_element(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double sq = 0.0;
        for (double v : values) sq += (v - s.mean) * (v - s.mean);
        s.stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
    }
    return s;
}

std::size_t grid_search_cv(const Dataset& train, const GridSpec& grid, int folds,
                           TuningMetric metric, const ForestConfig& forest_cfg,
                           std::uint64_t seed, int rep, TrainingTrace* trace) {
    if (grid.size() == 0) throw std::invalid_argument("grid_search_cv: empty grid");
    if (grid.size() == 1) return 0;

    const FoldAssignment fa = stratified_kfold(train, folds, mix_seed(seed, 0));
    std::vector<double> mean_scores(grid.size(), 0.0);
    for (int j = 0; j < folds; ++j) {
        const auto [train_rows, held_rows] = fold_split(fa, j);
        const Dataset fold_train = subset(train, train_rows);
        const Dataset held = subset(train, held_rows);
        if (trace) trace->on_fit(rep, fold_train);
        ForestConfig fc = forest_cfg;
        fc.seed = mix_seed(seed, 1 + static_cast<std::uint64_t>(j));
        // One fit per fold; every grid point is evaluated on a calibrated
        // copy. Identical to refitting per point because fitting is a pure
        // function of (data, config) and apply() never mutates its input.
        const FittedForest forest = fit_forest(fold_train, fc);
        for (std::size_t g = 0; g < grid.size(); ++g) {
            const FittedForest calibrated = apply(forest, grid.spec_at(g));
            const std::vector<double> scores = predict_proba_batch(calibrated, held);
            mean_scores[g] += score_predictions(metric, scores, held.labels);
        }
    }
    std::size_t best = 0;
    for (std::size_t g = 1; g < grid.size(); ++g)
        if (mean_scores[g] > mean_scores[best]) best = g; // strict: ties keep the earliest
    return best;
}

RepetitionResult run_cv_repetition(const Dataset& ds, const ExperimentConfig& cfg, int rep,
                                   TrainingTrace* trace) {
    const std::uint64_t rep_seed = mix_seed(cfg.master_seed, static_cast<std::uint64_t>(rep));
    RepetitionResult row;
    row.rep = rep;
    row.chosen = RegularizerSpec::none_spec();
    if (cfg.method != RegKind::none) {
        const std::size_t best = grid_search_cv(ds, cfg.grid, cfg.folds, cfg.tuning_metric,
                                                cfg.forest, mix_seed(rep_seed, 1), rep, trace);
        row.chosen = cfg.grid.spec_at(best);
    }
    const FoldMetrics m = cross_validate(ds, cfg, row.chosen, mix_seed(rep_seed, 2), rep, trace);
    row.balanced_accuracy = m.balanced_accuracy;
    row.roc_auc = m.roc_auc;
    return row;
}

RepetitionResult run_holdout_repetition(const Dataset& ds, const ExperimentConfig& cfg, int rep,
                                        TrainingTrace* trace) {
    const std::uint64_t rep_seed = mix_seed(cfg.master_seed, static_cast<std::uint64_t>(rep));
    auto [train, test] = train_test_split(ds, cfg.test_fraction, mix_seed(rep_seed, 3));
    if (trace) trace->on_held_out(rep, test.origin);

    RepetitionResult row;
    row.rep = rep;
    row.chosen = RegularizerSpec::none_spec();
    if (cfg.method != RegKind::none) {
        const std::size_t best = grid_search_cv(train, cfg.grid, cfg.folds, cfg.tuning_metric,
                                                cfg.forest, mix_seed(rep_seed, 1), rep, trace);
        row.chosen = cfg.grid.spec_at(best);
    }
    if (trace) trace->on_fit(rep, train);
    ForestConfig fc = cfg.forest;
    fc.seed = mix_seed(rep_seed, 4);
    const FittedForest forest = fit_forest(train, fc);
    const FittedForest calibrated = apply(forest, row.chosen);
    const std::vector<double> scores = predict_proba_batch(calibrated, test);
    row.balanced_accuracy =
        balanced_accuracy(confusion_matrix(test.labels, labels_from_scores(scores)));
    row.roc_auc = roc_auc_pairs({scores, test.labels});
    return row;
}

ExperimentReport experiment_cv(const Dataset& ds, const ExperimentConfig& cfg,
                               TrainingTrace* trace) {
    validate_config(cfg);
    auto rows = run_all(cfg.repetitions, cfg.jobs,
                        [&](int r) { return run_cv_repetition(ds, cfg, r, trace); });
    return assemble_report(
        "cv", cfg, std::move(rows),
        {"folds are stratified",
         "hyperparameters are tuned on the full dataset before the evaluation folds are drawn; "
         "reported scores therefore include tuning optimism"});
}

ExperimentReport experiment_holdout(const Dataset& ds, const ExperimentConfig& cfg,
                                    TrainingTrace* trace) {
    validate_config(cfg);
    if (!(cfg.test_fraction > 0.0 && cfg.test_fraction < 1.0))
        throw std::invalid_argument("experiment: test_fraction must be in (0,1)");
    auto rows = run_all(cfg.repetitions, cfg.jobs,
                        [&](int r) { return run_holdout_repetition(ds, cfg, r, trace); });
    return assemble_report("holdout", cfg, std::move(rows),
                           {"folds and the train/test split are stratified",
                            "tuning and the final fit see only the training part"});
}

} // namespace treesmooth
