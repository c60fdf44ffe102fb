#include "codesim/errors.hpp"
#include "codesim/forest.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace codesim {

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

json node_to_json(const TreeNode& node) {
    if (node.is_leaf()) {
        return json{{"votes", {node.clean_votes, node.plag_votes}}};
    }
    return json{{"feature", node.feature},
                {"threshold", node.threshold},
                {"left", node.left},
                {"right", node.right}};
}

TreeNode node_from_json(const json& j) {
    TreeNode node;
    if (j.contains("votes")) {
        const auto& votes = j.at("votes");
        if (!votes.is_array() || votes.size() != 2) {
            throw FormatError("leaf votes must be a two-element array");
        }
        node.clean_votes = votes[0].get<std::int64_t>();
        node.plag_votes = votes[1].get<std::int64_t>();
        if (node.clean_votes < 0 || node.plag_votes < 0) {
            throw FormatError("leaf votes must be non-negative");
        }
        return node;
    }
    node.feature = j.at("feature").get<std::int32_t>();
    node.threshold = j.at("threshold").get<double>();
    node.left = j.at("left").get<std::int32_t>();
    node.right = j.at("right").get<std::int32_t>();
    if (node.feature < 0 || node.feature >= PairFeatures::kCount) {
        throw FormatError("split feature index out of range");
    }
    if (!std::isfinite(node.threshold)) throw FormatError("split threshold must be finite");
    return node;
}

// The node array must form a rooted binary tree: every node reachable from
// node 0 exactly once, no extras.
void validate_tree(const DecisionTree& tree) {
    if (tree.nodes.empty()) throw FormatError("tree has no nodes");
    const auto n = static_cast<std::int32_t>(tree.nodes.size());
    std::vector<char> seen(tree.nodes.size(), 0);
    std::vector<std::int32_t> stack = {0};
    std::size_t visited = 0;
    while (!stack.empty()) {
        const auto id = stack.back();
        stack.pop_back();
        if (id < 0 || id >= n) throw FormatError("tree child index out of range");
        if (seen[id]) throw FormatError("tree node referenced twice");
        seen[id] = 1;
        ++visited;
        const auto& node = tree.nodes[id];
        if (!node.is_leaf()) {
            stack.push_back(node.left);
            stack.push_back(node.right);
        }
    }
    if (visited != tree.nodes.size()) throw FormatError("tree contains unreachable nodes");
}

}  // namespace

std::string save_model(const RandomForestModel& model) {
    json trees = json::array();
    for (const auto& tree : model.trees) {
        json nodes = json::array();
        for (const auto& node : tree.nodes) nodes.push_back(node_to_json(node));
        trees.push_back(json{{"nodes", std::move(nodes)}});
    }
    json j{
        {"format_version", kFormatVersion},
        {"config",
         {{"num_trees", model.config.num_trees},
          {"max_depth", model.config.max_depth},
          {"min_samples_leaf", model.config.min_samples_leaf},
          {"features_per_split", model.config.features_per_split},
          {"seed", model.config.seed}}},
        {"feature_names", {kFeatureNames[0], kFeatureNames[1], kFeatureNames[2]}},
        {"trees", std::move(trees)},
    };
    return j.dump(2) + "\n";
}

RandomForestModel load_model(std::string_view json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("model file is not valid JSON: ") + e.what());
    }

    try {
        const auto version = j.at("format_version").get<int>();
        if (version != kFormatVersion) {
            throw FormatError("unsupported model format version " + std::to_string(version));
        }

        RandomForestModel model;
        const auto& config = j.at("config");
        model.config.num_trees = config.at("num_trees").get<int>();
        model.config.max_depth = config.at("max_depth").get<int>();
        model.config.min_samples_leaf = config.at("min_samples_leaf").get<int>();
        model.config.features_per_split = config.at("features_per_split").get<int>();
        model.config.seed = config.at("seed").get<std::uint64_t>();

        const auto names = j.at("feature_names");
        if (!names.is_array() || names.size() != kFeatureNames.size()) {
            throw FormatError("feature_names must list exactly sim_ab, sim_at, sim_bt");
        }
        for (std::size_t i = 0; i < kFeatureNames.size(); ++i) {
            if (names[i].get<std::string>() != kFeatureNames[i]) {
                throw FormatError("unexpected feature name: " + names[i].get<std::string>());
            }
        }

        const auto& trees = j.at("trees");
        if (!trees.is_array() || static_cast<int>(trees.size()) != model.config.num_trees) {
            throw FormatError("tree count does not match config.num_trees");
        }
        model.trees.reserve(trees.size());
        for (const auto& tj : trees) {
            DecisionTree tree;
            for (const auto& nj : tj.at("nodes")) tree.nodes.push_back(node_from_json(nj));
            validate_tree(tree);
            model.trees.push_back(std::move(tree));
        }
        return model;
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed model file: ") + e.what());
    }
}

void save_model_file(const RandomForestModel& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open model file for writing: " + path.string());
    out << save_model(model);
    if (!out) throw Error("failed writing model file: " + path.string());
}

RandomForestModel load_model_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open model file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return load_model(buffer.str());
}

}  // namespace codesim
