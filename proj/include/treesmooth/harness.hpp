#pragma once

#include "treesmooth/dataset.hpp"
#include "treesmooth/forest.hpp"
#include "treesmooth/regularizer_spec.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace treesmooth {

enum class TuningMetric { balanced_accuracy, roc_auc };

std::string to_string(TuningMetric m);
TuningMetric tuning_metric_from_string(const std::string& s);

// Hyperparameter grid for one calibration method. Grid order is the search
// order; ties in the tuning metric resolve to the earliest point.
struct GridSpec {
    RegKind method = RegKind::none;
    std::vector<double> lambdas;    // hs
    std::vector<BetaParams> priors; // beta

    std::size_t size() const;
    RegularizerSpec spec_at(std::size_t i) const;

    // The published search grids: lambda in {0.001 ... 200}; (alpha, beta)
    // over the Cartesian product of {1500 ... 1} (81 pairs), or its 9
    // diagonal pairs when tied is set.
    static GridSpec defaults(RegKind method, bool tied_prior = false);
    static const std::vector<double>& default_lambdas();
    static const std::vector<double>& default_prior_values();
};

struct ExperimentConfig {
    std::string dataset_name;
    RegKind method = RegKind::none;
    GridSpec grid;           // ignored when method == none
    int folds = 5;
    int repetitions = 20;
    TuningMetric tuning_metric = TuningMetric::balanced_accuracy;
    std::uint64_t master_seed = 0;
    double test_fraction = 0.3; // holdout protocol only
    ForestConfig forest;
    int jobs = 1; // worker threads across repetitions
};

struct RepetitionResult {
    int rep = 0;
    RegularizerSpec chosen; // tuned hyperparameters (kind none: no tuning)
    double balanced_accuracy = 0.0;
    double roc_auc = 0.0;
};

struct MetricSummary {
    double mean = 0.0;
    double stddev = 0.0; // sample standard deviation; 0 for one repetition
    double min = 0.0;
    double max = 0.0;
};

struct ExperimentReport {
    std::string protocol; // "cv" | "holdout"
    ExperimentConfig config;
    std::vector<std::string> notes;
    std::vector<RepetitionResult> rows;
    MetricSummary balanced_accuracy_summary;
    MetricSummary roc_auc_summary;
};

// Observation hook for tests: reports every dataset handed to fit_forest
// and the held-back rows of each repetition, in originally-loaded row ids.
// Implementations must be thread-safe when config.jobs > 1.
class TrainingTrace {
public:
    virtual ~TrainingTrace() = default;
    virtual void on_fit(int rep, const Dataset& train) = 0;
    virtual void on_held_out(int rep, const std::vector<std::size_t>& test_origin) = 0;
};

// Seed derivation (documented so single work units can be reproduced):
//   rep seed        s_r  = mix_seed(master_seed, rep)
//   tuning          tune = mix_seed(s_r, 1); folds from mix_seed(tune, 0),
//                   fold-j forest seed mix_seed(tune, 1 + j)
//   cv evaluation   eval = mix_seed(s_r, 2); folds from mix_seed(eval, 0),
//                   fold-j forest seed mix_seed(eval, 1 + j)
//   holdout         split seed mix_seed(s_r, 3), final forest seed mix_seed(s_r, 4)

// Cross-validated grid search: one forest per fold, every grid point scored
// on calibrated copies of it against the held-out fold, means compared.
// Returns the index of the best grid point.
std::size_t grid_search_cv(const Dataset& train, const GridSpec& grid, int folds,
                           TuningMetric metric, const ForestConfig& forest_cfg,
                           std::uint64_t seed, int rep = -1, TrainingTrace* trace = nullptr);

// Protocol 1: tune on the full dataset, then score a fresh k-fold pass with
// the tuned hyperparameters. Repeated config.repetitions times.
ExperimentReport experiment_cv(const Dataset& ds, const ExperimentConfig& cfg,
                               TrainingTrace* trace = nullptr);

// Protocol 2: stratified train/test split per repetition; tuning and the
// final fit see only the training part.
ExperimentReport experiment_holdout(const Dataset& ds, const ExperimentConfig& cfg,
                                    TrainingTrace* trace = nullptr);

// Single repetitions, callable in isolation (same values as the full run).
RepetitionResult run_cv_repetition(const Dataset& ds, const ExperimentConfig& cfg, int rep,
                                   TrainingTrace* trace = nullptr);
RepetitionResult run_holdout_repetition(const Dataset& ds, const ExperimentConfig& cfg, int rep,
                                        TrainingTrace* trace = nullptr);

MetricSummary summarize(const std::vector<double>& values);

} // namespace treesmooth
