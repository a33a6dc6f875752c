#include "treesmooth/regularize.hpp"

#include "treesmooth/betafun.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

namespace treesmooth {

std::string to_string(RegKind kind) {
    switch (kind) {
        case RegKind::none: return "none";
        case RegKind::hs: return "hs";
        case RegKind::beta: return "beta";
    }
    return "none";
}

RegKind reg_kind_from_string(const std::string& s) {
    if (s == "none") return RegKind::none;
    if (s == "hs") return RegKind::hs;
    if (s == "beta") return RegKind::beta;
    throw std::invalid_argument("unknown regularizer kind: " + s);
}

void hs_calibrate(Tree& tree, double lambda) {
    if (lambda < 0.0) throw std::domain_error("hs_calibrate: lambda must be >= 0");
    // (node, prediction accumulated down to it)
    std::vector<std::pair<int, double>> stack{{0, tree.root().mean_response}};
    while (!stack.empty()) {
        const auto [id, value] = stack.back();
        stack.pop_back();
        TreeNode& node = tree.nodes[id];
        if (node.is_leaf()) {
            node.leaf_value = value;
            continue;
        }
        const double damp = 1.0 + lambda / static_cast<double>(node.n_samples());
        for (int child : {node.left, node.right}) {
            const double increment =
                (tree.nodes[child].mean_response - node.mean_response) / damp;
            stack.emplace_back(child, value + increment);
        }
    }
}

BetaParams beta_posterior_for_path(const Tree& tree, const NodePath& path,
                                   const BetaParams& prior) {
    BetaParams post = prior;
    for (int id : path) {
        post.alpha += static_cast<double>(tree.nodes[id].n0);
        post.beta += static_cast<double>(tree.nodes[id].n1);
    }
    return post;
}

void beta_calibrate(Tree& tree, const BetaParams& prior) {
    if (!(prior.alpha > 0.0) || !(prior.beta > 0.0))
        throw std::domain_error("beta_calibrate: prior parameters must be positive");
    // (node, class counts accumulated along the path so far)
    struct Frame {
        int id;
        std::int64_t sum0, sum1;
    };
    std::vector<Frame> stack{{0, 0, 0}};
    while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        TreeNode& node = tree.nodes[f.id];
        f.sum0 += node.n0;
        f.sum1 += node.n1;
        if (node.is_leaf()) {
            const BetaParams post{prior.alpha + static_cast<double>(f.sum0),
                                  prior.beta + static_cast<double>(f.sum1)};
            const double level = post.alpha / (post.alpha + post.beta);
            node.leaf_value = 1.0 - beta_ppf(level, post);
            continue;
        }
        stack.push_back({node.left, f.sum0, f.sum1});
        stack.push_back({node.right, f.sum0, f.sum1});
    }
}

FittedForest apply(const FittedForest& forest, const RegularizerSpec& spec) {
    if (forest.calibration.kind != RegKind::none)
        throw std::logic_error("apply: forest is already calibrated (" +
                               to_string(forest.calibration.kind) +
                               "); calibrate a fresh fit instead");
    FittedForest out = forest;
    switch (spec.kind) {
        case RegKind::none:
            break;
        case RegKind::hs:
            for (Tree& tree : out.trees) hs_calibrate(tree, spec.lambda);
            break;
        case RegKind::beta:
            for (Tree& tree : out.trees) beta_calibrate(tree, spec.prior);
            break;
    }
    out.calibration = spec;
    return out;
}

} // namespace treesmooth
