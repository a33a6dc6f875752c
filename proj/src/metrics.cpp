#include "treesmooth/metrics.hpp"

#include "treesmooth/errors.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace treesmooth {

namespace {

void check_scored(const ScoredPredictions& sp) {
    if (sp.scores.size() != sp.labels.size())
        throw std::invalid_argument("scores and labels must have equal length");
    if (sp.scores.empty()) throw std::invalid_argument("empty predictions");
}

std::pair<std::int64_t, std::int64_t> class_totals(const std::vector<int>& labels) {
    std::int64_t n0 = 0, n1 = 0;
    for (int y : labels) (y ? n1 : n0) += 1;
    if (n0 == 0 || n1 == 0)
        throw UndefinedMetricError("ROC-AUC is undefined with a single class present");
    return {n0, n1};
}

} // namespace

ConfusionMatrix confusion_matrix(const std::vector<int>& labels, const std::vector<int>& preds) {
    if (labels.size() != preds.size())
        throw std::invalid_argument("labels and predictions must have equal length");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < labels.size(); ++i) cm.counts[labels[i]][preds[i]] += 1;
    return cm;
}

double balanced_accuracy(const ConfusionMatrix& cm) {
    double sum = 0.0;
    for (int cls = 0; cls < 2; ++cls) {
        const std::int64_t total = cm.actual(cls);
        if (total == 0)
            throw UndefinedMetricError("balanced accuracy undefined: class " +
                                       std::to_string(cls) + " has no true instances");
        sum += static_cast<double>(cm.true_positive(cls)) / static_cast<double>(total);
    }
    return sum / 2.0;
}

double roc_auc_pairs(const ScoredPredictions& sp) {
    check_scored(sp);
    const auto [n0, n1] = class_totals(sp.labels);
    const std::size_t n = sp.scores.size();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return sp.scores[a] < sp.scores[b]; });

    // Midranks over tie groups; the positives' rank sum is the U statistic
    // shifted by n1(n1+1)/2.
    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && sp.scores[order[j]] == sp.scores[order[i]]) ++j;
        const double midrank = 0.5 * static_cast<double>(i + 1 + j); // 1-based average
        for (std::size_t k = i; k < j; ++k)
            if (sp.labels[order[k]] == 1) rank_sum_pos += midrank;
        i = j;
    }
    const double u = rank_sum_pos - 0.5 * static_cast<double>(n1) * static_cast<double>(n1 + 1);
    return u / (static_cast<double>(n0) * static_cast<double>(n1));
}

double roc_auc_trapezoid(const ScoredPredictions& sp) {
    check_scored(sp);
    const auto [n0, n1] = class_totals(sp.labels);
    const std::size_t n = sp.scores.size();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return sp.scores[a] > sp.scores[b]; });

    // Sweep thresholds from high to low; each distinct score advances the
    // curve by one step whose corner coordinates are cumulative (fp, tp).
    double area2 = 0.0; // twice the area, in count units
    std::int64_t tp = 0, fp = 0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        std::int64_t dtp = 0, dfp = 0;
        while (j < n && sp.scores[order[j]] == sp.scores[order[i]]) {
            (sp.labels[order[j]] == 1 ? dtp : dfp) += 1;
            ++j;
        }
        area2 += static_cast<double>(dfp) * static_cast<double>(2 * tp + dtp);
        tp += dtp;
        fp += dfp;
        i = j;
    }
    return 0.5 * area2 / (static_cast<double>(n0) * static_cast<double>(n1));
}

std::vector<int> labels_from_scores(const std::vector<double>& scores) {
    std::vector<int> out;
    out.reserve(scores.size());
    for (double s : scores) out.push_back(s >= 0.5 ? 1 : 0);
    return out;
}

} // namespace treesmooth
