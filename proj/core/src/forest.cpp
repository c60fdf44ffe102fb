#include "codesim/forest.hpp"

#include "codesim/errors.hpp"
#include "codesim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

namespace codesim {

namespace {

// Weighted Gini impurity from integer class counts. Exact integer inputs
// plus a fixed operation order make the value identical however the samples
// were enumerated, so tie-breaking is stable.
double weighted_gini(std::int64_t left_clean, std::int64_t left_plag, std::int64_t right_clean,
                     std::int64_t right_plag) {
    const double n_left = static_cast<double>(left_clean + left_plag);
    const double n_right = static_cast<double>(right_clean + right_plag);
    const double n = n_left + n_right;
    const double pc_l = left_clean / n_left;
    const double pp_l = left_plag / n_left;
    const double pc_r = right_clean / n_right;
    const double pp_r = right_plag / n_right;
    const double gini_left = 1.0 - pc_l * pc_l - pp_l * pp_l;
    const double gini_right = 1.0 - pc_r * pc_r - pp_r * pp_r;
    return (n_left / n) * gini_left + (n_right / n) * gini_right;
}

bool split_less(const Split& a, const Split& b) {
    if (a.gini != b.gini) return a.gini < b.gini;
    if (a.feature != b.feature) return a.feature < b.feature;
    return a.threshold < b.threshold;
}

class TreeBuilder {
public:
    TreeBuilder(const std::vector<LabeledExample>& data, const TrainConfig& config,
                std::uint64_t tree_seed)
        : data_(data), config_(config), rng_(tree_seed) {}

    DecisionTree build() {
        const auto n = static_cast<std::uint64_t>(data_.size());
        std::vector<std::int32_t> sample(n);
        for (auto& idx : sample) idx = static_cast<std::int32_t>(rng_.next_below(n));
        tree_.nodes.reserve(2 * n);
        grow(std::move(sample), 0);
        return std::move(tree_);
    }

private:
    const std::vector<LabeledExample>& data_;
    const TrainConfig& config_;
    SplitMix64 rng_;
    DecisionTree tree_;

    std::int32_t make_leaf(const std::vector<std::int32_t>& indices) {
        TreeNode node;
        for (auto idx : indices) {
            if (data_[idx].label == Label::Plagiarized) {
                ++node.plag_votes;
            } else {
                ++node.clean_votes;
            }
        }
        tree_.nodes.push_back(node);
        return static_cast<std::int32_t>(tree_.nodes.size() - 1);
    }

    bool is_pure(const std::vector<std::int32_t>& indices) const {
        for (auto idx : indices) {
            if (data_[idx].label != data_[indices.front()].label) return false;
        }
        return true;
    }

    // Partial Fisher-Yates over {0,1,2}; first k entries are the draw.
    std::vector<int> sample_features() {
        std::array<int, PairFeatures::kCount> pool = {0, 1, 2};
        const int k = config_.features_per_split;
        for (int i = 0; i < k; ++i) {
            const auto j = i + static_cast<int>(rng_.next_below(PairFeatures::kCount - i));
            std::swap(pool[i], pool[j]);
        }
        return {pool.begin(), pool.begin() + k};
    }

    std::int32_t grow(std::vector<std::int32_t> indices, int depth) {
        if (is_pure(indices) || (config_.max_depth >= 0 && depth >= config_.max_depth)) {
            return make_leaf(indices);
        }
        const auto features = sample_features();
        const auto split = best_split(data_, indices, features, config_.min_samples_leaf);
        if (!split) return make_leaf(indices);

        std::vector<std::int32_t> left, right;
        left.reserve(indices.size());
        right.reserve(indices.size());
        for (auto idx : indices) {
            if (data_[idx].features.feature(split->feature) <= split->threshold) {
                left.push_back(idx);
            } else {
                right.push_back(idx);
            }
        }
        indices.clear();
        indices.shrink_to_fit();

        const auto node_id = static_cast<std::int32_t>(tree_.nodes.size());
        tree_.nodes.emplace_back();
        tree_.nodes[node_id].feature = split->feature;
        tree_.nodes[node_id].threshold = split->threshold;
        const auto left_id = grow(std::move(left), depth + 1);
        const auto right_id = grow(std::move(right), depth + 1);
        tree_.nodes[node_id].left = left_id;
        tree_.nodes[node_id].right = right_id;
        return node_id;
    }
};

}  // namespace

std::optional<Split> best_split(const std::vector<LabeledExample>& data,
                                const std::vector<std::int32_t>& node_indices,
                                const std::vector<int>& candidate_features,
                                int min_samples_leaf) {
    const auto n = static_cast<std::int64_t>(node_indices.size());
    std::optional<Split> best;

    std::vector<std::pair<double, Label>> values;
    values.reserve(node_indices.size());

    for (int feature : candidate_features) {
        values.clear();
        for (auto idx : node_indices) {
            values.emplace_back(data[idx].features.feature(feature), data[idx].label);
        }
        std::sort(values.begin(), values.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });

        std::int64_t left_clean = 0, left_plag = 0;
        std::int64_t total_clean = 0, total_plag = 0;
        for (const auto& [v, label] : values) {
            (label == Label::Plagiarized ? total_plag : total_clean) += 1;
        }

        std::size_t i = 0;
        while (i < values.size()) {
            // consume one group of equal values
            const double group_value = values[i].first;
            while (i < values.size() && values[i].first == group_value) {
                (values[i].second == Label::Plagiarized ? left_plag : left_clean) += 1;
                ++i;
            }
            if (i >= values.size()) break;

            const double next_value = values[i].first;
            const double threshold = (group_value + next_value) / 2.0;
            // A midpoint that rounds up to the next value cannot separate
            // the groups under the `x <= threshold` routing rule.
            if (threshold >= next_value) continue;

            const std::int64_t n_left = left_clean + left_plag;
            const std::int64_t n_right = n - n_left;
            if (n_left < min_samples_leaf || n_right < min_samples_leaf) continue;

            Split candidate;
            candidate.feature = feature;
            candidate.threshold = threshold;
            candidate.gini = weighted_gini(left_clean, left_plag, total_clean - left_clean,
                                           total_plag - left_plag);
            if (!best || split_less(candidate, *best)) best = candidate;
        }
    }
    return best;
}

RandomForestModel train(const std::vector<LabeledExample>& data, const TrainConfig& config,
                        int num_threads) {
    if (data.empty()) throw EmptyData("training data is empty");
    bool has_clean = false, has_plag = false;
    for (const auto& ex : data) {
        (ex.label == Label::Plagiarized ? has_plag : has_clean) = true;
    }
    if (!has_clean || !has_plag) {
        throw SingleClassData("labels contain a single class");
    }
    if (config.num_trees < 1) throw std::invalid_argument("num_trees must be >= 1");
    if (config.features_per_split < 1 || config.features_per_split > PairFeatures::kCount) {
        throw std::invalid_argument("features_per_split must be in 1..3");
    }
    if (config.min_samples_leaf < 1) throw std::invalid_argument("min_samples_leaf must be >= 1");

    RandomForestModel model;
    model.config = config;
    model.trees.resize(config.num_trees);

    // Every tree seeds its own generator from (seed ^ tree index), so the
    // partitioning across threads cannot change the result.
    auto build_range = [&](int begin, int end) {
        for (int t = begin; t < end; ++t) {
            TreeBuilder builder(data, config, config.seed ^ static_cast<std::uint64_t>(t));
            model.trees[t] = builder.build();
        }
    };

    num_threads = std::max(1, num_threads);
    if (num_threads == 1 || config.num_trees == 1) {
        build_range(0, config.num_trees);
    } else {
        const int workers = std::min(num_threads, config.num_trees);
        std::vector<std::thread> threads;
        threads.reserve(workers);
        const int per_worker = (config.num_trees + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const int begin = w * per_worker;
            const int end = std::min(config.num_trees, begin + per_worker);
            if (begin >= end) break;
            threads.emplace_back(build_range, begin, end);
        }
        for (auto& th : threads) th.join();
    }
    return model;
}

double predict_proba(const RandomForestModel& model, const PairFeatures& x) {
    std::int64_t half_votes = 0;  // plagiarized votes, in halves
    for (const auto& tree : model.trees) {
        std::int32_t node = 0;
        while (!tree.nodes[node].is_leaf()) {
            const auto& nd = tree.nodes[node];
            node = x.feature(nd.feature) <= nd.threshold ? nd.left : nd.right;
        }
        const auto& leaf = tree.nodes[node];
        if (leaf.plag_votes > leaf.clean_votes) {
            half_votes += 2;
        } else if (leaf.plag_votes == leaf.clean_votes) {
            half_votes += 1;
        }
    }
    return static_cast<double>(half_votes) / (2.0 * static_cast<double>(model.trees.size()));
}

Label classify(const RandomForestModel& model, const PairFeatures& x, double threshold) {
    return predict_proba(model, x) >= threshold ? Label::Plagiarized : Label::Clean;
}

EvalReport EvalReport::from_counts(std::int64_t tp, std::int64_t fp, std::int64_t tn,
                                   std::int64_t fn) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    EvalReport r;
    r.tp = tp;
    r.fp = fp;
    r.tn = tn;
    r.fn = fn;
    r.tpr = (tp + fn) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : nan;
    r.tnr = (tn + fp) > 0 ? static_cast<double>(tn) / static_cast<double>(tn + fp) : nan;
    r.false_positive_rate =
        (fp + tn) > 0 ? static_cast<double>(fp) / static_cast<double>(fp + tn) : nan;
    r.precision = (tp + fp) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : nan;
    r.balanced_accuracy = (r.tpr == r.tpr && r.tnr == r.tnr) ? (r.tpr + r.tnr) / 2.0 : nan;
    return r;
}

bool EvalReport::any_undefined() const {
    return tpr != tpr || tnr != tnr || balanced_accuracy != balanced_accuracy ||
           false_positive_rate != false_positive_rate || precision != precision;
}

EvalReport evaluate(const RandomForestModel& model, const std::vector<LabeledExample>& data,
                    double threshold) {
    if (data.empty()) throw EmptyData("evaluation data is empty");
    std::int64_t tp = 0, fp = 0, tn = 0, fn = 0;
    for (const auto& ex : data) {
        const Label predicted = classify(model, ex.features, threshold);
        if (ex.label == Label::Plagiarized) {
            (predicted == Label::Plagiarized ? tp : fn) += 1;
        } else {
            (predicted == Label::Plagiarized ? fp : tn) += 1;
        }
    }
    return EvalReport::from_counts(tp, fp, tn, fn);
}

SweepResult sweep_thresholds(const RandomForestModel& model,
                             const std::vector<LabeledExample>& data, double target_fpr) {
    if (data.empty()) throw EmptyData("evaluation data is empty");

    std::vector<double> probas;
    probas.reserve(data.size());
    for (const auto& ex : data) probas.push_back(predict_proba(model, ex.features));

    SweepResult result;
    result.rows.reserve(101);
    for (int step = 0; step <= 100; ++step) {
        const double threshold = static_cast<double>(step) / 100.0;
        std::int64_t tp = 0, fp = 0, tn = 0, fn = 0;
        for (std::size_t i = 0; i < data.size(); ++i) {
            const bool predicted_plag = probas[i] >= threshold;
            if (data[i].label == Label::Plagiarized) {
                (predicted_plag ? tp : fn) += 1;
            } else {
                (predicted_plag ? fp : tn) += 1;
            }
        }
        result.rows.push_back({threshold, EvalReport::from_counts(tp, fp, tn, fn)});
    }

    // FPR is non-increasing in the threshold, so the first qualifying row
    // carries the highest recall among them.
    for (const auto& row : result.rows) {
        const double fpr = row.report.false_positive_rate;
        if (fpr == fpr && fpr <= target_fpr) {
            result.selected = row.threshold;
            result.target_met = true;
            return result;
        }
    }

    result.target_met = false;
    const SweepRow* fallback = nullptr;
    for (const auto& row : result.rows) {
        if (row.report.false_positive_rate != row.report.false_positive_rate) continue;
        if (!fallback || row.report.false_positive_rate < fallback->report.false_positive_rate ||
            (row.report.false_positive_rate == fallback->report.false_positive_rate &&
             row.report.tpr > fallback->report.tpr)) {
            fallback = &row;
        }
    }
    result.selected = fallback ? fallback->threshold : 1.0;
    return result;
}

}  // namespace codesim
