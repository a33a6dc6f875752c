#include "treesmooth/model_io.hpp"

#include "treesmooth/errors.hpp"

#include <fstream>

namespace treesmooth {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ordered_json node_to_json(const Tree& tree, int id) {
    const TreeNode& node = tree.nodes[id];
    ordered_json j;
    if (node.is_leaf()) {
        j["feature"] = nullptr;
        j["threshold"] = nullptr;
    } else {
        j["feature"] = node.split_feature;
        j["threshold"] = node.split_threshold;
    }
    j["n0"] = node.n0;
    j["n1"] = node.n1;
    j["mean"] = node.mean_response;
    j["leaf_value"] = node.leaf_value;
    j["left"] = node.is_leaf() ? ordered_json(nullptr) : node_to_json(tree, node.left);
    j["right"] = node.is_leaf() ? ordered_json(nullptr) : node_to_json(tree, node.right);
    return j;
}

int node_from_json(const json& j, Tree& tree) {
    if (!j.is_object()) throw ParseError("model schema: node must be an object");
    for (const char* key : {"feature", "threshold", "n0", "n1", "mean", "leaf_value", "left", "right"})
        if (!j.contains(key)) throw ParseError(std::string("model schema: node missing '") + key + "'");

    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    {
        TreeNode& node = tree.nodes[id];
        node.n0 = j.at("n0").get<std::int64_t>();
        node.n1 = j.at("n1").get<std::int64_t>();
        node.mean_response = j.at("mean").get<double>();
        node.leaf_value = j.at("leaf_value").get<double>();
        if (node.n0 + node.n1 < 1) throw ParseError("model schema: node with no samples");
    }

    const bool has_split = !j.at("feature").is_null();
    const bool has_children = !j.at("left").is_null() || !j.at("right").is_null();
    if (has_split != has_children)
        throw ParseError("model schema: split and children must be present together");
    if (!has_split) return id;

    const int feature = j.at("feature").get<int>();
    if (feature < 0 || static_cast<std::size_t>(feature) >= tree.n_features)
        throw ParseError("model schema: split feature out of range");
    tree.nodes[id].split_feature = feature;
    tree.nodes[id].split_threshold = j.at("threshold").get<double>();
    const int left = node_from_json(j.at("left"), tree);
    tree.nodes[id].left = left;
    const int right = node_from_json(j.at("right"), tree);
    tree.nodes[id].right = right;
    return id;
}

} // namespace

ordered_json regularizer_to_json(const RegularizerSpec& spec) {
    ordered_json j;
    j["kind"] = to_string(spec.kind);
    if (spec.kind == RegKind::hs) j["lambda"] = spec.lambda;
    if (spec.kind == RegKind::beta) {
        j["alpha"] = spec.prior.alpha;
        j["beta"] = spec.prior.beta;
    }
    return j;
}

RegularizerSpec regularizer_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw ParseError("regularizer schema: missing 'kind'");
    RegularizerSpec spec;
    spec.kind = reg_kind_from_string(j.at("kind").get<std::string>());
    if (spec.kind == RegKind::hs) spec.lambda = j.at("lambda").get<double>();
    if (spec.kind == RegKind::beta)
        spec.prior = {j.at("alpha").get<double>(), j.at("beta").get<double>()};
    return spec;
}

ordered_json tree_to_json(const Tree& tree) { return node_to_json(tree, 0); }

Tree tree_from_json(const json& j, std::size_t n_features) {
    Tree tree;
    tree.n_features = n_features;
    node_from_json(j, tree);
    return tree;
}

ordered_json forest_to_json(const FittedForest& forest) {
    ordered_json j;
    j["schema_version"] = kModelSchemaVersion;
    j["kind"] = "treesmooth.forest";
    ordered_json cfg;
    cfg["n_trees"] = forest.config.n_trees;
    cfg["max_depth"] = forest.config.tree.max_depth;
    cfg["min_samples_leaf"] = forest.config.tree.min_samples_leaf;
    cfg["max_features"] = forest.config.tree.max_features;
    cfg["bootstrap"] = forest.config.bootstrap;
    cfg["seed"] = forest.config.seed;
    j["config"] = cfg;
    j["n_features"] = forest.n_features;
    j["calibration"] = regularizer_to_json(forest.calibration);
    j["inbag_indices"] = forest.inbag_indices;
    ordered_json trees = ordered_json::array();
    for (const Tree& t : forest.trees) trees.push_back(tree_to_json(t));
    j["trees"] = trees;
    return j;
}

FittedForest forest_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("model schema: document must be an object");
    if (!j.contains("schema_version") || j.at("schema_version").get<int>() != kModelSchemaVersion)
        throw ParseError("model schema: unsupported or missing schema_version");
    for (const char* key : {"config", "n_features", "calibration", "trees"})
        if (!j.contains(key)) throw ParseError(std::string("model schema: missing '") + key + "'");

    FittedForest forest;
    const json& cfg = j.at("config");
    forest.config.n_trees = cfg.at("n_trees").get<int>();
    forest.config.tree.max_depth = cfg.at("max_depth").get<int>();
    forest.config.tree.min_samples_leaf = cfg.at("min_samples_leaf").get<int>();
    forest.config.tree.max_features = cfg.at("max_features").get<int>();
    forest.config.bootstrap = cfg.at("bootstrap").get<bool>();
    forest.config.seed = cfg.at("seed").get<std::uint64_t>();
    forest.n_features = j.at("n_features").get<std::size_t>();
    forest.calibration = regularizer_from_json(j.at("calibration"));
    if (j.contains("inbag_indices"))
        forest.inbag_indices = j.at("inbag_indices").get<std::vector<std::vector<std::size_t>>>();

    const json& trees = j.at("trees");
    if (!trees.is_array() || trees.empty()) throw ParseError("model schema: 'trees' must be a non-empty array");
    if (static_cast<int>(trees.size()) != forest.config.n_trees)
        throw ParseError("model schema: tree count does not match config.n_trees");
    for (const json& t : trees) forest.trees.push_back(tree_from_json(t, forest.n_features));
    return forest;
}

void save_forest(const FittedForest& forest, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open file for writing: " + path);
    out << forest_to_json(forest).dump(1) << '\n';
}

FittedForest load_forest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open model file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError("model file is not valid JSON: " + std::string(e.what()));
    }
    try {
        return forest_from_json(j);
    } catch (const json::exception& e) {
        throw ParseError("model schema: " + std::string(e.what()));
    }
}

} // namespace treesmooth
