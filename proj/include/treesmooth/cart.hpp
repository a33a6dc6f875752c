#pragma once

#include "treesmooth/dataset.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace treesmooth {

// max_features sentinels for TreeConfig.
inline constexpr int kMaxFeaturesAll = 0;
inline constexpr int kMaxFeaturesSqrt = -1; // ceil(sqrt(d)), the forest default

struct TreeConfig {
    int max_depth = -1;       // < 0: unlimited
    int min_samples_leaf = 1; // >= 1
    int max_features = kMaxFeaturesAll;
    std::uint64_t rng_seed = 0; // drives per-node feature subsampling
};

// One node of a fitted tree. Nodes live in Tree::nodes; children are
// indices into that vector (-1 = none). A node is a leaf iff it has no
// split, iff it has no children.
struct TreeNode {
    int split_feature = -1;
    double split_threshold = 0.0;
    int left = -1;
    int right = -1;
    std::int64_t n0 = 0; // class-0 training samples reaching this node
    std::int64_t n1 = 0; // class-1 training samples reaching this node
    double mean_response = 0.0; // n1 / (n0+n1), fixed at fit time
    double leaf_value = 0.0;    // emitted prediction; calibrators overwrite this on leaves

    bool is_leaf() const { return split_feature < 0; }
    std::int64_t n_samples() const { return n0 + n1; }
};

struct Tree {
    std::size_t n_features = 0;
    std::vector<TreeNode> nodes; // nodes[0] is the root; never empty once fitted

    const TreeNode& root() const { return nodes.front(); }
};

// Node indices from the root down to a leaf.
using NodePath = std::vector<int>;

// Greedy Gini CART on the given rows of ds. Splits are placed midway
// between adjacent distinct feature values; query points equal to a
// threshold route left (the `<=` convention). An impure node becomes a leaf
// only when the depth limit is hit or no candidate feature admits a split
// that keeps min_samples_leaf on both sides; zero-gain splits are taken
// (ties broken by lowest feature index, then lowest threshold).
Tree fit_tree(const Dataset& ds, const std::vector<std::size_t>& sample_indices,
              const TreeConfig& cfg);

// Root-to-leaf path containing x. Throws std::invalid_argument on a
// feature-count mismatch.
NodePath find_path(const Tree& tree, std::span<const double> x);

// leaf_value of the leaf containing x.
double predict_proba_tree(const Tree& tree, std::span<const double> x);

// Effective number of split candidates per node for a given feature count.
int resolve_max_features(int max_features, std::size_t n_features);

} // namespace treesmooth
