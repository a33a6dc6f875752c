#pragma once

#include "treesmooth/cart.hpp"
#include "treesmooth/regularizer_spec.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace treesmooth {

struct ForestConfig {
    int n_trees = 100;
    TreeConfig tree{.max_depth = -1,
                    .min_samples_leaf = 1,
                    .max_features = kMaxFeaturesSqrt,
                    .rng_seed = 0};
    bool bootstrap = true;
    std::uint64_t seed = 0;
};

// A bagged ensemble of CART trees plus the metadata that reproduces it.
// Immutable after fitting except through regularize::apply, which works on
// a copy.
struct FittedForest {
    ForestConfig config;
    std::size_t n_features = 0;
    std::vector<Tree> trees;
    std::vector<std::vector<std::size_t>> inbag_indices; // per tree, size = training set
    RegularizerSpec calibration;                         // none until apply() sets it
};

// Bootstrap-fits cfg.n_trees trees. Tree t draws its in-bag sample and its
// feature-subsampling stream from mix_seed(cfg.seed, t), so the forest is a
// pure function of (ds, cfg) and trees can be refit in isolation.
// Throws std::invalid_argument when ds has a single class.
FittedForest fit_forest(const Dataset& ds, const ForestConfig& cfg);

// Mean of the trees' leaf values at x — the ensemble class-1 probability.
double predict_proba_forest(const FittedForest& f, std::span<const double> x);

// 1 iff the probability is >= 0.5 (ties go to class 1).
int predict_label(const FittedForest& f, std::span<const double> x);

// predict_proba_forest over every row of ds.
std::vector<double> predict_proba_batch(const FittedForest& f, const Dataset& ds);

} // namespace treesmooth
