#pragma once

#include "codesim/features.hpp"
#include "codesim/label.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace codesim {

struct LabeledExample {
    PairFeatures features;
    Label label = Label::Clean;
};

struct TrainConfig {
    int num_trees = 100;
    int max_depth = -1;  // -1 = unlimited
    int min_samples_leaf = 1;
    int features_per_split = 2;
    std::uint64_t seed = 42;
};

// Flat node storage; root is node 0. Internal nodes have feature >= 0 and
// route x.feature(feature) <= threshold to `left`, otherwise to `right`.
// Leaves (feature == -1) carry the class counts seen during training.
struct TreeNode {
    std::int32_t feature = -1;
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::int64_t clean_votes = 0;
    std::int64_t plag_votes = 0;

    bool is_leaf() const { return feature < 0; }
};

struct DecisionTree {
    std::vector<TreeNode> nodes;
};

inline constexpr std::array<std::string_view, 3> kFeatureNames = {"sim_ab", "sim_at", "sim_bt"};

struct RandomForestModel {
    std::vector<DecisionTree> trees;
    TrainConfig config;
};

struct Split {
    int feature = 0;
    double threshold = 0.0;
    double gini = 0.0;
};

// Exhaustively evaluates candidate thresholds (midpoints between consecutive
// distinct sorted values) for each candidate feature and returns the split
// minimizing weighted Gini impurity. Ties break toward the lowest feature
// index, then the lowest threshold. Splits that would leave a side with
// fewer than min_samples_leaf samples are skipped; returns nullopt when no
// valid split exists.
std::optional<Split> best_split(const std::vector<LabeledExample>& data,
                                const std::vector<std::int32_t>& node_indices,
                                const std::vector<int>& candidate_features,
                                int min_samples_leaf);

// Trains config.num_trees CART trees, each on a bootstrap sample of |data|
// draws with replacement. Tree t draws all of its randomness from
// SplitMix64(config.seed ^ t), so the result is a pure function of
// (data order, config) regardless of num_threads. Throws EmptyData /
// SingleClassData.
RandomForestModel train(const std::vector<LabeledExample>& data, const TrainConfig& config,
                        int num_threads = 1);

// Fraction of trees whose reached leaf votes Plagiarized; a tied leaf counts
// as half a vote. Always in [0, 1] and a multiple of 0.5/num_trees.
double predict_proba(const RandomForestModel& model, const PairFeatures& x);

// Plagiarized iff predict_proba >= threshold (boundary inclusive).
Label classify(const RandomForestModel& model, const PairFeatures& x, double threshold = 0.5);

// Confusion counts plus derived rates. Plagiarized is the positive class.
// Rates with a zero denominator are NaN; any_undefined() reports that.
struct EvalReport {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t tn = 0;
    std::int64_t fn = 0;
    double tpr = 0.0;
    double tnr = 0.0;
    double balanced_accuracy = 0.0;
    double false_positive_rate = 0.0;
    double precision = 0.0;

    static EvalReport from_counts(std::int64_t tp, std::int64_t fp, std::int64_t tn,
                                  std::int64_t fn);
    bool any_undefined() const;
    std::int64_t total() const { return tp + fp + tn + fn; }
};

EvalReport evaluate(const RandomForestModel& model, const std::vector<LabeledExample>& data,
                    double threshold = 0.5);

struct SweepRow {
    double threshold = 0.0;
    EvalReport report;
};

// One row per threshold in {0.00, 0.01, ..., 1.00}. `selected` is the
// highest-recall threshold whose FPR stays at or below target_fpr (the
// smallest qualifying threshold, since recall only falls as the threshold
// rises). When no threshold qualifies, target_met is false and `selected`
// is the threshold with the lowest FPR, ties broken by recall then by
// threshold.
struct SweepResult {
    std::vector<SweepRow> rows;
    double selected = 1.0;
    bool target_met = false;
};

SweepResult sweep_thresholds(const RandomForestModel& model,
                             const std::vector<LabeledExample>& data, double target_fpr = 0.01);

// Versioned JSON, stable byte-for-byte for a given model. load_model
// validates structure and throws FormatError on unknown versions, missing
// fields, or malformed trees.
std::string save_model(const RandomForestModel& model);
RandomForestModel load_model(std::string_view json_text);

void save_model_file(const RandomForestModel& model, const std::filesystem::path& path);
RandomForestModel load_model_file(const std::filesystem::path& path);

}  // namespace codesim
