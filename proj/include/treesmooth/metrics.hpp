#pragma once

#include <cstdint>
#include <vector>

namespace treesmooth {

// 2x2 contingency table indexed [true class][predicted class].
struct ConfusionMatrix {
    std::int64_t counts[2][2] = {{0, 0}, {0, 0}};

    std::int64_t true_positive(int cls) const { return counts[cls][cls]; }
    std::int64_t false_negative(int cls) const { return counts[cls][1 - cls]; }
    std::int64_t actual(int cls) const { return counts[cls][0] + counts[cls][1]; }
};

ConfusionMatrix confusion_matrix(const std::vector<int>& labels, const std::vector<int>& preds);

// Mean of the two per-class recalls. Throws UndefinedMetricError when a
// class has no true instances.
double balanced_accuracy(const ConfusionMatrix& cm);

struct ScoredPredictions {
    std::vector<double> scores; // class-1 probabilities (any monotone score works)
    std::vector<int> labels;
};

// Mann-Whitney AUC: fraction of (positive, negative) pairs ranked
// correctly, ties counted half. O(n log n) via midranks.
double roc_auc_pairs(const ScoredPredictions& sp);

// Trapezoid area under the ROC curve swept over the distinct score
// thresholds; tied scores collapse into a single step. Agrees with
// roc_auc_pairs to ~1e-15.
double roc_auc_trapezoid(const ScoredPredictions& sp);

// The forest's thresholding rule: score >= 0.5 predicts class 1.
std::vector<int> labels_from_scores(const std::vector<double>& scores);

} // namespace treesmooth
