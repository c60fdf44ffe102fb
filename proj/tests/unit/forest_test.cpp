#include "codesim/forest.hpp"

#include "codesim/errors.hpp"
#include "codesim/rng.hpp"

#include <doctest.h>

#include "../support/oracles.hpp"

#include <cmath>
#include <string>

using namespace codesim;

namespace {

LabeledExample example(double sim_ab, Label label, double sim_at = 0.25, double sim_bt = 0.25) {
    return {{sim_ab, sim_at, sim_bt}, label};
}

// A seed whose first two bootstrap draws over 2 examples pick both of them,
// so a single-tree forest sees the full training set at the root.
std::uint64_t seed_with_full_bootstrap_of_two() {
    for (std::uint64_t seed = 0;; ++seed) {
        SplitMix64 rng(seed ^ 0);  // tree 0 stream
        const auto first = rng.next_below(2);
        const auto second = rng.next_below(2);
        if (first != second) return seed;
    }
}

DecisionTree leaf_tree(std::int64_t clean_votes, std::int64_t plag_votes) {
    DecisionTree tree;
    TreeNode leaf;
    leaf.clean_votes = clean_votes;
    leaf.plag_votes = plag_votes;
    tree.nodes.push_back(leaf);
    return tree;
}

// Single split on sim_ab at `threshold`: left leaf clean, right leaf plag.
DecisionTree stump_tree(double threshold) {
    DecisionTree tree;
    TreeNode root;
    root.feature = 0;
    root.threshold = threshold;
    root.left = 1;
    root.right = 2;
    tree.nodes.push_back(root);
    TreeNode clean_leaf;
    clean_leaf.clean_votes = 3;
    tree.nodes.push_back(clean_leaf);
    TreeNode plag_leaf;
    plag_leaf.plag_votes = 3;
    tree.nodes.push_back(plag_leaf);
    return tree;
}

RandomForestModel manual_model(std::vector<DecisionTree> trees) {
    RandomForestModel model;
    model.config.num_trees = static_cast<int>(trees.size());
    model.trees = std::move(trees);
    return model;
}

std::vector<LabeledExample> margin_separated_data(int count, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<LabeledExample> data;
    for (int i = 0; i < count; ++i) {
        const bool plag = rng.next_below(2) == 0;
        const double sim_ab = plag ? 0.6 + 0.4 * rng.next_unit() : 0.4 * rng.next_unit();
        data.push_back(example(sim_ab, plag ? Label::Plagiarized : Label::Clean,
                               rng.next_unit(), rng.next_unit()));
    }
    return data;
}

}  // namespace

TEST_CASE("train: degenerate inputs") {
    CHECK_THROWS_AS(train({}, {}), EmptyData);
    CHECK_THROWS_AS(train({example(0.9, Label::Plagiarized), example(0.8, Label::Plagiarized)}, {}),
                    SingleClassData);
    CHECK_THROWS_WITH(
        train({example(0.9, Label::Plagiarized), example(0.8, Label::Plagiarized)}, {}),
        "labels contain a single class");
}

TEST_CASE("train: two separable examples give one split at the midpoint") {
    TrainConfig config;
    config.num_trees = 1;
    config.features_per_split = 3;
    config.seed = seed_with_full_bootstrap_of_two();

    const std::vector<LabeledExample> data = {example(0.9, Label::Plagiarized),
                                              example(0.1, Label::Clean)};
    const auto model = train(data, config);
    REQUIRE(model.trees.size() == 1);
    const auto& nodes = model.trees[0].nodes;
    REQUIRE(nodes.size() == 3);
    CHECK(nodes[0].feature == 0);
    CHECK(nodes[0].threshold == 0.5);
    CHECK(nodes[nodes[0].left].is_leaf());
    CHECK(nodes[nodes[0].right].is_leaf());

    CHECK(predict_proba(model, {0.95, 0.25, 0.25}) == 1.0);
    CHECK(predict_proba(model, {0.05, 0.25, 0.25}) == 0.0);
}

TEST_CASE("train: identical data and seed give byte-identical models") {
    const auto data = margin_separated_data(60, 3);
    TrainConfig config;
    config.num_trees = 12;
    config.seed = 1234;

    const auto first = save_model(train(data, config));
    const auto second = save_model(train(data, config));
    CHECK(first == second);

    const auto threaded = save_model(train(data, config, 8));
    CHECK(first == threaded);
}

TEST_CASE("predict_proba: vote arithmetic") {
    SUBCASE("all trees vote plagiarized") {
        const auto model = manual_model({leaf_tree(0, 5), leaf_tree(1, 4)});
        CHECK(predict_proba(model, {0.5, 0.5, 0.5}) == 1.0);
    }
    SUBCASE("votes P,P,C,C give 0.5") {
        const auto model =
            manual_model({leaf_tree(0, 1), leaf_tree(0, 1), leaf_tree(1, 0), leaf_tree(1, 0)});
        CHECK(predict_proba(model, {0.5, 0.5, 0.5}) == 0.5);
    }
    SUBCASE("tied leaf counts as half a vote") {
        const auto model = manual_model({leaf_tree(2, 2)});
        CHECK(predict_proba(model, {0.5, 0.5, 0.5}) == 0.5);
    }
    SUBCASE("values are multiples of 0.5/num_trees") {
        const auto data = margin_separated_data(40, 9);
        TrainConfig config;
        config.num_trees = 7;
        const auto model = train(data, config);
        SplitMix64 rng(31);
        for (int i = 0; i < 200; ++i) {
            const PairFeatures x{rng.next_unit(), rng.next_unit(), rng.next_unit()};
            const double scaled = predict_proba(model, x) * 2.0 * 7.0;
            CHECK(std::abs(scaled - std::round(scaled)) < 1e-12);
        }
    }
}

TEST_CASE("classify: threshold boundary is inclusive") {
    // 10 single-leaf trees, 7 voting plagiarized: probability 0.7
    std::vector<DecisionTree> trees;
    for (int i = 0; i < 7; ++i) trees.push_back(leaf_tree(0, 1));
    for (int i = 0; i < 3; ++i) trees.push_back(leaf_tree(1, 0));
    const auto model = manual_model(std::move(trees));
    const PairFeatures x{0.5, 0.5, 0.5};

    CHECK(predict_proba(model, x) == doctest::Approx(0.7));
    CHECK(classify(model, x, 0.5) == Label::Plagiarized);
    CHECK(classify(model, x, 0.9) == Label::Clean);

    const auto tied = manual_model({leaf_tree(1, 1)});
    CHECK(predict_proba(tied, x) == 0.5);
    CHECK(classify(tied, x, 0.5) == Label::Plagiarized);  // boundary
}

TEST_CASE("evaluate: confusion counts and rates") {
    const auto model = manual_model({stump_tree(0.5)});

    SUBCASE("perfect predictions") {
        const std::vector<LabeledExample> data = {
            example(0.9, Label::Plagiarized), example(0.8, Label::Plagiarized),
            example(0.1, Label::Clean), example(0.2, Label::Clean)};
        const auto report = evaluate(model, data, 0.5);
        CHECK(report.balanced_accuracy == 1.0);
        CHECK(report.false_positive_rate == 0.0);
    }
    SUBCASE("one missed positive") {
        const std::vector<LabeledExample> data = {
            example(0.9, Label::Plagiarized), example(0.1, Label::Plagiarized),
            example(0.2, Label::Clean), example(0.3, Label::Clean)};
        const auto report = evaluate(model, data, 0.5);
        CHECK(report.tp == 1);
        CHECK(report.fn == 1);
        CHECK(report.tn == 2);
        CHECK(report.fp == 0);
        CHECK(report.tpr == 0.5);
        CHECK(report.tnr == 1.0);
        CHECK(report.balanced_accuracy == 0.75);
        CHECK(report.false_positive_rate == 0.0);
    }
    SUBCASE("everything predicted clean") {
        const auto always_clean = manual_model({leaf_tree(1, 0)});
        const std::vector<LabeledExample> data = {example(0.9, Label::Plagiarized),
                                                  example(0.1, Label::Clean)};
        const auto report = evaluate(always_clean, data, 0.5);
        CHECK(report.tpr == 0.0);
        CHECK(report.tnr == 1.0);
        CHECK(report.balanced_accuracy == 0.5);
    }
    SUBCASE("empty data is an error") {
        CHECK_THROWS_AS(evaluate(model, {}, 0.5), EmptyData);
    }
}

TEST_CASE("EvalReport: zero denominators become NaN and are flagged") {
    const auto report = EvalReport::from_counts(0, 1, 3, 0);  // no positives
    CHECK(report.tpr != report.tpr);
    CHECK(report.balanced_accuracy != report.balanced_accuracy);
    CHECK(report.any_undefined());

    const auto full = EvalReport::from_counts(2, 1, 3, 4);
    CHECK_FALSE(full.any_undefined());
    CHECK(full.balanced_accuracy == (full.tpr + full.tnr) / 2.0);
}

TEST_CASE("save/load round trip preserves predictions exactly") {
    const auto data = margin_separated_data(80, 21);
    TrainConfig config;
    config.num_trees = 15;
    config.seed = 77;
    const auto model = train(data, config);

    const auto reloaded = load_model(save_model(model));
    CHECK(save_model(reloaded) == save_model(model));

    SplitMix64 rng(55);
    for (int i = 0; i < 1000; ++i) {
        const PairFeatures x{rng.next_unit(), rng.next_unit(), rng.next_unit()};
        CHECK(predict_proba(model, x) == predict_proba(reloaded, x));
    }
}

TEST_CASE("load_model: malformed inputs raise FormatError") {
    const auto data = margin_separated_data(20, 4);
    const auto good = save_model(train(data, {.num_trees = 3}));

    SUBCASE("truncated file") {
        CHECK_THROWS_AS(load_model(std::string_view(good).substr(0, good.size() / 2)),
                        FormatError);
    }
    SUBCASE("unknown version is named in the message") {
        auto tampered = good;
        const auto at = tampered.find("\"format_version\": 1");
        REQUIRE(at != std::string::npos);
        tampered.replace(at, std::string("\"format_version\": 1").size(),
                         "\"format_version\": 99");
        CHECK_THROWS_WITH_AS(load_model(tampered), "unsupported model format version 99",
                             FormatError);
    }
    SUBCASE("not JSON at all") {
        CHECK_THROWS_AS(load_model("definitely not json"), FormatError);
    }
    SUBCASE("tree child out of range") {
        CHECK_THROWS_AS(
            load_model(R"({"format_version":1,
                "config":{"num_trees":1,"max_depth":-1,"min_samples_leaf":1,
                          "features_per_split":2,"seed":1},
                "feature_names":["sim_ab","sim_at","sim_bt"],
                "trees":[{"nodes":[{"feature":0,"threshold":0.5,"left":5,"right":6}]}]})"),
            FormatError);
    }
}

TEST_CASE("oracle: best_split matches exhaustive Gini minimization") {
    SplitMix64 rng(2025);
    int checked = 0;
    for (int round = 0; round < 200; ++round) {
        const auto n = 2 + rng.next_below(5);  // 2..6 examples
        std::vector<LabeledExample> data;
        for (std::uint64_t i = 0; i < n; ++i) {
            data.push_back({{rng.next_unit(), rng.next_unit(), rng.next_unit()},
                            rng.next_below(2) == 0 ? Label::Clean : Label::Plagiarized});
        }
        std::vector<std::int32_t> indices(data.size());
        for (std::size_t i = 0; i < data.size(); ++i) indices[i] = static_cast<std::int32_t>(i);

        const auto actual = best_split(data, indices, {0, 1, 2}, 1);
        const auto expected = testsupport::exhaustive_best_split(data, 1);
        REQUIRE(actual.has_value() == expected.has_value());
        if (actual) {
            CHECK(actual->feature == expected->feature);
            CHECK(actual->threshold == expected->threshold);
            CHECK(actual->gini == expected->gini);
            ++checked;
        }
    }
    CHECK(checked > 100);  // most random datasets admit a split
}

TEST_CASE("training accuracy on margin-separated data") {
    const auto data = margin_separated_data(200, 42);
    const auto model = train(data, {});
    const auto report = evaluate(model, data, 0.5);
    const double accuracy = static_cast<double>(report.tp + report.tn) /
                            static_cast<double>(report.total());
    CHECK(accuracy >= 0.99);
}

TEST_CASE("sweep_thresholds: table shape and selection rule") {
    const auto data = margin_separated_data(120, 8);
    const auto model = train(data, {.num_trees = 20});

    const auto sweep = sweep_thresholds(model, data, 0.01);
    REQUIRE(sweep.rows.size() == 101);
    CHECK(sweep.rows.front().threshold == 0.0);
    CHECK(sweep.rows.back().threshold == 1.0);

    // FPR is non-increasing along the sweep
    for (std::size_t i = 1; i < sweep.rows.size(); ++i) {
        CHECK(sweep.rows[i].report.false_positive_rate <=
              sweep.rows[i - 1].report.false_positive_rate);
    }

    // selected = first threshold meeting the target
    for (const auto& row : sweep.rows) {
        if (row.report.false_positive_rate <= 0.01) {
            CHECK(sweep.selected == row.threshold);
            CHECK(sweep.target_met);
            break;
        }
    }

    // a target of 1.0 is met immediately at threshold 0
    const auto lax = sweep_thresholds(model, data, 1.0);
    CHECK(lax.selected == 0.0);
    CHECK(lax.target_met);
}
