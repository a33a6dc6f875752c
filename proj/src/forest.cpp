#include "treesmooth/forest.hpp"

#include "treesmooth/rng.hpp"

#include <numeric>
#include <stdexcept>

namespace treesmooth {

FittedForest fit_forest(const Dataset& ds, const ForestConfig& cfg) {
    if (cfg.n_trees < 1) throw std::invalid_argument("fit_forest: n_trees must be >= 1");
    const auto counts = ds.class_counts();
    if (counts[0] == 0 || counts[1] == 0)
        throw std::invalid_argument("fit_forest: training data must contain both classes");

    FittedForest forest;
    forest.config = cfg;
    forest.n_features = ds.n_features;
    forest.trees.reserve(cfg.n_trees);
    forest.inbag_indices.reserve(cfg.n_trees);

    const std::size_t n = ds.n_samples();
    for (int t = 0; t < cfg.n_trees; ++t) {
        const std::uint64_t tree_seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(t));
        std::vector<std::size_t> inbag;
        inbag.reserve(n);
        if (cfg.bootstrap) {
            SplitMix64 rng(mix_seed(tree_seed, 0));
            for (std::size_t i = 0; i < n; ++i)
                inbag.push_back(static_cast<std::size_t>(rng.next_below(n)));
        } else {
            inbag.resize(n);
            std::iota(inbag.begin(), inbag.end(), std::size_t{0});
        }
        TreeConfig tree_cfg = cfg.tree;
        tree_cfg.rng_seed = mix_seed(tree_seed, 1);
        forest.trees.push_back(fit_tree(ds, inbag, tree_cfg));
        forest.inbag_indices.push_back(std::move(inbag));
    }
    return forest;
}

double predict_proba_forest(const FittedForest& f, std::span<const double> x) {
    if (f.trees.empty()) throw std::invalid_argument("predict_proba_forest: empty forest");
    double sum = 0.0;
    for (const Tree& tree : f.trees) sum += predict_proba_tree(tree, x);
    return sum / static_cast<double>(f.trees.size());
}

int predict_label(const FittedForest& f, std::span<const double> x) {
    return predict_proba_forest(f, x) >= 0.5 ? 1 : 0;
}

std::vector<double> predict_proba_batch(const FittedForest& f, const Dataset& ds) {
    if (ds.n_features != f.n_features)
        throw std::invalid_argument("predict_proba_batch: dataset has " +
                                    std::to_string(ds.n_features) + " features, forest expects " +
                                    std::to_string(f.n_features));
    std::vector<double> out;
    out.reserve(ds.n_samples());
    for (std::size_t r = 0; r < ds.n_samples(); ++r)
        out.push_back(predict_proba_forest(f, {ds.row(r), ds.n_features}));
    return out;
}

} // namespace treesmooth
