#include "treesmooth/cart.hpp"

#include "treesmooth/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace treesmooth {

namespace {

struct SplitChoice {
    bool found = false;
    int feature = -1;
    double threshold = 0.0;
    // Sum over children of (l0^2+l1^2)/n_child; maximizing it minimizes the
    // weighted Gini impurity. Exact for equal count layouts, so the
    // lowest-feature/lowest-threshold tie rule actually engages.
    double score = 0.0;
};

struct Builder {
    const Dataset& ds;
    TreeConfig cfg;
    int effective_max_features;
    SplitMix64 rng;
    std::vector<std::size_t> idx;             // partitioned in place
    std::vector<TreeNode> nodes;
    std::vector<int> feature_pool;            // scratch for per-node sampling
    std::vector<std::pair<double, int>> scan; // scratch: (value, label)

    Builder(const Dataset& d, const TreeConfig& c, std::vector<std::size_t> indices)
        : ds(d),
          cfg(c),
          effective_max_features(resolve_max_features(c.max_features, d.n_features)),
          rng(c.rng_seed),
          idx(std::move(indices)) {
        feature_pool.resize(ds.n_features);
    }

    // Candidate features for one node: a uniform draw without replacement,
    // consumed in a fixed preorder so the tree is a pure function of
    // (data, indices, cfg).
    std::span<const int> sample_features() {
        for (std::size_t f = 0; f < ds.n_features; ++f) feature_pool[f] = static_cast<int>(f);
        const int m = effective_max_features;
        if (m >= static_cast<int>(ds.n_features)) return {feature_pool.data(), ds.n_features};
        for (int i = 0; i < m; ++i) {
            const auto j = i + static_cast<int>(rng.next_below(ds.n_features - i));
            std::swap(feature_pool[i], feature_pool[j]);
        }
        return {feature_pool.data(), static_cast<std::size_t>(m)};
    }

    SplitChoice best_split(std::size_t lo, std::size_t hi, std::span<const int> candidates) {
        SplitChoice best;
        const auto n = hi - lo;
        const int msl = cfg.min_samples_leaf;
        std::vector<int> sorted_candidates(candidates.begin(), candidates.end());
        std::sort(sorted_candidates.begin(), sorted_candidates.end());
        for (int f : sorted_candidates) {
            scan.clear();
            for (std::size_t i = lo; i < hi; ++i)
                scan.emplace_back(ds.at(idx[i], f), ds.labels[idx[i]]);
            std::sort(scan.begin(), scan.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });

            std::int64_t l0 = 0, l1 = 0, t0 = 0, t1 = 0;
            for (const auto& p : scan) (p.second ? t1 : t0) += 1;
            for (std::size_t i = 1; i < n; ++i) {
                (scan[i - 1].second ? l1 : l0) += 1;
                if (scan[i].first == scan[i - 1].first) continue;
                const auto nl = static_cast<std::int64_t>(i);
                const auto nr = static_cast<std::int64_t>(n - i);
                if (nl < msl || nr < msl) continue;
                const std::int64_t r0 = t0 - l0, r1 = t1 - l1;
                const double score =
                    static_cast<double>(l0 * l0 + l1 * l1) / static_cast<double>(nl) +
                    static_cast<double>(r0 * r0 + r1 * r1) / static_cast<double>(nr);
                // Midpoint of adjacent representable values can round up to
                // the right value; fall back to the left value so <=-routing
                // reproduces exactly this left/right partition.
                double thr = 0.5 * (scan[i - 1].first + scan[i].first);
                if (!(thr < scan[i].first)) thr = scan[i - 1].first;
                if (!best.found || score > best.score ||
                    (score == best.score &&
                     (f < best.feature || (f == best.feature && thr < best.threshold)))) {
                    best.found = true;
                    best.feature = f;
                    best.threshold = thr;
                    best.score = score;
                }
            }
        }
        return best;
    }

    int build(std::size_t lo, std::size_t hi, int depth) {
        const int node_id = static_cast<int>(nodes.size());
        nodes.emplace_back();
        std::int64_t n0 = 0, n1 = 0;
        for (std::size_t i = lo; i < hi; ++i) (ds.labels[idx[i]] ? n1 : n0) += 1;
        {
            TreeNode& node = nodes[node_id];
            node.n0 = n0;
            node.n1 = n1;
            node.mean_response = static_cast<double>(n1) / static_cast<double>(n0 + n1);
            node.leaf_value = node.mean_response;
        }

        const bool pure = n0 == 0 || n1 == 0;
        const bool depth_capped = cfg.max_depth >= 0 && depth >= cfg.max_depth;
        const auto n = hi - lo;
        if (pure || depth_capped || n < 2 * static_cast<std::size_t>(cfg.min_samples_leaf))
            return node_id;

        const SplitChoice split = best_split(lo, hi, sample_features());
        if (!split.found) return node_id;

        const auto mid_it = std::partition(
            idx.begin() + lo, idx.begin() + hi, [&](std::size_t s) {
                return ds.at(s, split.feature) <= split.threshold;
            });
        const auto mid = static_cast<std::size_t>(mid_it - idx.begin());

        nodes[node_id].split_feature = split.feature;
        nodes[node_id].split_threshold = split.threshold;
        const int left = build(lo, mid, depth + 1);
        nodes[node_id].left = left;
        const int right = build(mid, hi, depth + 1);
        nodes[node_id].right = right;
        return node_id;
    }
};

int walk_to_leaf(const Tree& tree, std::span<const double> x, NodePath* path) {
    if (x.size() != tree.n_features)
        throw std::invalid_argument("query has " + std::to_string(x.size()) +
                                    " features, tree was fitted on " +
                                    std::to_string(tree.n_features));
    int cur = 0;
    while (true) {
        if (path) path->push_back(cur);
        const TreeNode& node = tree.nodes[cur];
        if (node.is_leaf()) return cur;
        cur = x[node.split_feature] <= node.split_threshold ? node.left : node.right;
    }
}

} // namespace

int resolve_max_features(int max_features, std::size_t n_features) {
    const int d = static_cast<int>(n_features);
    if (max_features == kMaxFeaturesSqrt)
        return static_cast<int>(std::ceil(std::sqrt(static_cast<double>(d))));
    if (max_features == kMaxFeaturesAll) return d;
    if (max_features < 0) throw std::invalid_argument("max_features must be >= -1");
    return std::min(max_features, d);
}

Tree fit_tree(const Dataset& ds, const std::vector<std::size_t>& sample_indices,
              const TreeConfig& cfg) {
    if (sample_indices.empty()) throw std::invalid_argument("fit_tree: empty sample index list");
    if (cfg.min_samples_leaf < 1)
        throw std::invalid_argument("fit_tree: min_samples_leaf must be >= 1");
    for (std::size_t s : sample_indices)
        if (s >= ds.n_samples())
            throw std::invalid_argument("fit_tree: sample index out of range");

    Builder builder(ds, cfg, sample_indices);
    builder.build(0, builder.idx.size(), 0);

    Tree tree;
    tree.n_features = ds.n_features;
    tree.nodes = std::move(builder.nodes);
    return tree;
}

NodePath find_path(const Tree& tree, std::span<const double> x) {
    NodePath path;
    walk_to_leaf(tree, x, &path);
    return path;
}

double predict_proba_tree(const Tree& tree, std::span<const double> x) {
    return tree.nodes[walk_to_leaf(tree, x, nullptr)].leaf_value;
}

} // namespace treesmooth
