#pragma once

#include "codesim/corpus.hpp"
#include "codesim/evidence.hpp"
#include "codesim/forest.hpp"
#include "codesim/vectorspace.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace codesim {

struct PipelineConfig {
    NGramConfig ngram{3};
    NormalizationProfile profile = NormalizationProfile::Normalized;
};

// Per-file normalized streams and TF-IDF vectors for one corpus. The IDF is
// fit on all submissions plus the template (when present), so template
// n-grams are down-weighted like any other ubiquitous gram.
struct CorpusVectors {
    TfidfModel model;
    std::vector<NormalizedStream> streams;  // aligned with corpus.submissions
    std::vector<SparseVector> vectors;
    std::optional<NormalizedStream> template_stream;
    SparseVector template_vector;  // empty when no template

    int index_of(std::string_view id) const;  // -1 when unknown
};

CorpusVectors vectorize_corpus(const Corpus& corpus, const PipelineConfig& config);

struct DetectionRow {
    std::string id_a;
    std::string id_b;
    double sim_ab = 0.0;
    double sim_at = 0.0;
    double sim_bt = 0.0;
    double probability = 0.0;
    Label verdict = Label::Clean;
};

// Scores every enumerated pair and sorts rows by probability descending,
// then (id_a, id_b).
std::vector<DetectionRow> detect_pairs(const Corpus& corpus, const CorpusVectors& vectors,
                                       const RandomForestModel& model, double threshold = 0.5);

// Header `id_a,id_b,sim_ab,sim_at,sim_bt,probability,verdict`; numbers in
// shortest round-trip form so identical runs produce identical bytes.
std::string detection_csv(const std::vector<DetectionRow>& rows);

// One labeled example per LabelSet entry, in canonical pair order.
std::vector<LabeledExample> features_for_labels(const CorpusVectors& vectors,
                                                const Corpus& corpus, const LabelSet& labels);

// Caps clean examples at max_clean_ratio x the plagiarized count via a
// seeded shuffle; ratio <= 0 disables the cap. Order of survivors is
// preserved.
std::vector<LabeledExample> subsample_clean(const std::vector<LabeledExample>& examples,
                                            double max_clean_ratio, std::uint64_t seed);

// Shortest round-trip decimal (std::to_chars).
std::string format_double(double value);

}  // namespace codesim
