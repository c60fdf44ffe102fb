#include "codesim/pipeline.hpp"

#include "codesim/errors.hpp"
#include "codesim/rng.hpp"

#include <algorithm>
#include <charconv>
#include <unordered_map>

namespace codesim {

int CorpusVectors::index_of(std::string_view id) const {
    for (std::size_t i = 0; i < streams.size(); ++i) {
        if (streams[i].source_id == id) return static_cast<int>(i);
    }
    return -1;
}

CorpusVectors vectorize_corpus(const Corpus& corpus, const PipelineConfig& config) {
    CorpusVectors result;
    std::vector<NGramCounts> counts;
    counts.reserve(corpus.submissions.size() + 1);

    for (const auto& file : corpus.submissions) {
        result.streams.push_back(normalize_source(file, config.profile));
        counts.push_back(extract_ngrams(result.streams.back(), config.ngram));
    }

    std::optional<NGramCounts> template_counts;
    if (corpus.template_file) {
        result.template_stream = normalize_source(*corpus.template_file, config.profile);
        template_counts = extract_ngrams(*result.template_stream, config.ngram);
        counts.push_back(*template_counts);
    }

    result.model = fit_tfidf(counts);

    result.vectors.reserve(corpus.submissions.size());
    for (std::size_t i = 0; i < corpus.submissions.size(); ++i) {
        result.vectors.push_back(transform(result.model, counts[i]));
    }
    if (template_counts) {
        result.template_vector = transform(result.model, *template_counts);
    }
    return result;
}

std::vector<DetectionRow> detect_pairs(const Corpus& corpus, const CorpusVectors& vectors,
                                       const RandomForestModel& model, double threshold) {
    std::unordered_map<std::string_view, std::size_t> index;
    index.reserve(corpus.submissions.size());
    for (std::size_t i = 0; i < corpus.submissions.size(); ++i) {
        index.emplace(corpus.submissions[i].id, i);
    }

    std::vector<DetectionRow> rows;
    rows.reserve(corpus.submissions.size() * (corpus.submissions.size() - 1) / 2);
    for (const auto& [id_a, id_b] : enumerate_pairs(corpus)) {
        const auto ia = index.at(id_a);
        const auto ib = index.at(id_b);
        DetectionRow row;
        row.id_a = id_a;
        row.id_b = id_b;
        const auto features = extract_pair_features(vectors.vectors[ia], vectors.vectors[ib],
                                                    vectors.template_vector);
        row.sim_ab = features.sim_ab;
        row.sim_at = features.sim_at;
        row.sim_bt = features.sim_bt;
        row.probability = predict_proba(model, features);
        row.verdict = row.probability >= threshold ? Label::Plagiarized : Label::Clean;
        rows.push_back(std::move(row));
    }

    std::sort(rows.begin(), rows.end(), [](const DetectionRow& x, const DetectionRow& y) {
        if (x.probability != y.probability) return x.probability > y.probability;
        if (x.id_a != y.id_a) return x.id_a < y.id_a;
        return x.id_b < y.id_b;
    });
    return rows;
}

std::string format_double(double value) {
    char buf[64];
    const auto result = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, result.ptr);
}

std::string detection_csv(const std::vector<DetectionRow>& rows) {
    std::string out = "id_a,id_b,sim_ab,sim_at,sim_bt,probability,verdict\n";
    for (const auto& row : rows) {
        out += row.id_a;
        out += ',';
        out += row.id_b;
        out += ',';
        out += format_double(row.sim_ab);
        out += ',';
        out += format_double(row.sim_at);
        out += ',';
        out += format_double(row.sim_bt);
        out += ',';
        out += format_double(row.probability);
        out += ',';
        out += to_string(row.verdict);
        out += '\n';
    }
    return out;
}

std::vector<LabeledExample> features_for_labels(const CorpusVectors& vectors,
                                                const Corpus& corpus, const LabelSet& labels) {
    std::unordered_map<std::string_view, std::size_t> index;
    index.reserve(corpus.submissions.size());
    for (std::size_t i = 0; i < corpus.submissions.size(); ++i) {
        index.emplace(corpus.submissions[i].id, i);
    }

    std::vector<LabeledExample> examples;
    examples.reserve(labels.pairs.size());
    for (const auto& [key, label] : labels.pairs) {
        const auto ia = index.find(key.first);
        const auto ib = index.find(key.second);
        if (ia == index.end()) throw UnknownId(key.first, "unknown submission id '" + key.first + "'");
        if (ib == index.end()) throw UnknownId(key.second, "unknown submission id '" + key.second + "'");
        LabeledExample ex;
        ex.features = extract_pair_features(vectors.vectors[ia->second],
                                            vectors.vectors[ib->second], vectors.template_vector);
        ex.label = label;
        examples.push_back(ex);
    }
    return examples;
}

std::vector<LabeledExample> subsample_clean(const std::vector<LabeledExample>& examples,
                                            double max_clean_ratio, std::uint64_t seed) {
    if (max_clean_ratio <= 0.0) return examples;

    std::vector<std::size_t> clean_positions;
    std::int64_t plag_count = 0;
    for (std::size_t i = 0; i < examples.size(); ++i) {
        if (examples[i].label == Label::Clean) {
            clean_positions.push_back(i);
        } else {
            ++plag_count;
        }
    }
    // single-class inputs pass through so the trainer can report them
    if (plag_count == 0) return examples;
    const auto cap = static_cast<std::int64_t>(max_clean_ratio * static_cast<double>(plag_count));
    if (static_cast<std::int64_t>(clean_positions.size()) <= cap) return examples;

    // seeded partial Fisher-Yates picks the survivors, original order kept
    SplitMix64 rng(seed);
    for (std::size_t i = 0; i < static_cast<std::size_t>(cap); ++i) {
        const auto j = i + rng.next_below(clean_positions.size() - i);
        std::swap(clean_positions[i], clean_positions[j]);
    }
    clean_positions.resize(static_cast<std::size_t>(cap));
    std::sort(clean_positions.begin(), clean_positions.end());

    std::vector<LabeledExample> out;
    out.reserve(static_cast<std::size_t>(cap) + static_cast<std::size_t>(plag_count));
    std::size_t next_clean = 0;
    for (std::size_t i = 0; i < examples.size(); ++i) {
        if (examples[i].label == Label::Plagiarized) {
            out.push_back(examples[i]);
        } else if (next_clean < clean_positions.size() && clean_positions[next_clean] == i) {
            out.push_back(examples[i]);
            ++next_clean;
        }
    }
    return out;
}

}  // namespace codesim
