#pragma once

#include "codesim/lexer.hpp"

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace codesim {

// Window length over NormalizedStream symbols, 1..10.
struct NGramConfig {
    int n = 3;
};

// Symbols inside one n-gram are joined with U+241F so ("ab","c") and
// ("a","bc") never collide.
inline constexpr std::string_view kNGramSeparator = "\xE2\x90\x9F";

using NGramCounts = std::unordered_map<std::string, std::int64_t>;

// Counts every contiguous window of n symbols. A stream shorter than n
// yields an empty map.
NGramCounts extract_ngrams(const NormalizedStream& stream, NGramConfig config);

struct Vocabulary {
    std::unordered_map<std::string, std::int32_t> term_ids;  // dense 0..V-1
    std::vector<std::int32_t> doc_freq;                      // indexed by id
    std::int64_t num_docs = 0;
};

// idf[t] = ln((1 + N) / (1 + df[t])) + 1, always > 0.
struct TfidfModel {
    Vocabulary vocab;
    std::vector<double> idf;
};

// Builds the vocabulary over the union of corpus terms. Term ids are
// assigned in lexicographic order so every downstream float reduction has a
// fixed summation order. Throws EmptyCorpus on an empty corpus.
TfidfModel fit_tfidf(const std::vector<NGramCounts>& corpus);

// L2-normalized sparse weights, entries sorted by id. Empty means the zero
// vector; a non-empty vector has Euclidean norm 1 within 1e-9.
class SparseVector {
public:
    SparseVector() = default;

    // Drops zero/non-finite weights, sorts by id, normalizes. An all-zero
    // input yields the empty vector.
    static SparseVector from_weights(std::vector<std::pair<std::int32_t, double>> weights);

    const std::vector<std::pair<std::int32_t, double>>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }

private:
    std::vector<std::pair<std::int32_t, double>> entries_;
};

// weight(t) = count(t) * idf[t] for in-vocabulary terms, then L2-normalize.
// Out-of-vocabulary terms are dropped; empty or all-OOV input gives the
// empty vector.
SparseVector transform(const TfidfModel& model, const NGramCounts& counts);

// Dot product of two unit vectors, clamped to [0, 1]. Either side empty
// gives 0.
double cosine(const SparseVector& a, const SparseVector& b);

}  // namespace codesim
