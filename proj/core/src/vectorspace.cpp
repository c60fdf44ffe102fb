#include "codesim/vectorspace.hpp"

#include "codesim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace codesim {

NGramCounts extract_ngrams(const NormalizedStream& stream, NGramConfig config) {
    if (config.n < 1 || config.n > 10) {
        throw std::invalid_argument("n-gram length must be in 1..10");
    }
    NGramCounts counts;
    const auto n = static_cast<std::size_t>(config.n);
    if (stream.symbols.size() < n) return counts;

    std::string gram;
    for (std::size_t i = 0; i + n <= stream.symbols.size(); ++i) {
        gram.clear();
        for (std::size_t j = 0; j < n; ++j) {
            if (j > 0) gram += kNGramSeparator;
            gram += stream.symbols[i + j];
        }
        ++counts[gram];
    }
    return counts;
}

TfidfModel fit_tfidf(const std::vector<NGramCounts>& corpus) {
    if (corpus.empty()) throw EmptyCorpus("cannot fit TF-IDF on an empty corpus");

    // Dense ids in lexicographic term order: downstream reductions then sum
    // in one fixed order, which keeps runs bit-for-bit reproducible.
    std::vector<std::string_view> terms;
    for (const auto& doc : corpus) {
        for (const auto& [term, count] : doc) terms.push_back(term);
    }
    std::sort(terms.begin(), terms.end());
    terms.erase(std::unique(terms.begin(), terms.end()), terms.end());

    TfidfModel model;
    model.vocab.num_docs = static_cast<std::int64_t>(corpus.size());
    model.vocab.term_ids.reserve(terms.size());
    model.vocab.doc_freq.assign(terms.size(), 0);
    for (std::size_t id = 0; id < terms.size(); ++id) {
        model.vocab.term_ids.emplace(std::string(terms[id]), static_cast<std::int32_t>(id));
    }
    for (const auto& doc : corpus) {
        for (const auto& [term, count] : doc) {
            ++model.vocab.doc_freq[model.vocab.term_ids.at(term)];
        }
    }

    const double n_docs = static_cast<double>(model.vocab.num_docs);
    model.idf.resize(terms.size());
    for (std::size_t id = 0; id < terms.size(); ++id) {
        model.idf[id] = std::log((1.0 + n_docs) / (1.0 + model.vocab.doc_freq[id])) + 1.0;
    }
    return model;
}

SparseVector SparseVector::from_weights(std::vector<std::pair<std::int32_t, double>> weights) {
    std::erase_if(weights, [](const auto& e) { return e.second == 0.0 || !std::isfinite(e.second); });
    std::sort(weights.begin(), weights.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    double sum_sq = 0.0;
    for (const auto& [id, w] : weights) sum_sq += w * w;
    if (sum_sq == 0.0) return {};

    const double inv_norm = 1.0 / std::sqrt(sum_sq);
    for (auto& [id, w] : weights) w *= inv_norm;

    SparseVector v;
    v.entries_ = std::move(weights);
    return v;
}

SparseVector transform(const TfidfModel& model, const NGramCounts& counts) {
    std::vector<std::pair<std::int32_t, double>> weights;
    weights.reserve(counts.size());
    for (const auto& [term, count] : counts) {
        auto it = model.vocab.term_ids.find(term);
        if (it == model.vocab.term_ids.end()) continue;  // out of vocabulary
        weights.emplace_back(it->second, static_cast<double>(count) * model.idf[it->second]);
    }
    return SparseVector::from_weights(std::move(weights));
}

double cosine(const SparseVector& a, const SparseVector& b) {
    const auto& ea = a.entries();
    const auto& eb = b.entries();
    double dot = 0.0;
    std::size_t i = 0, j = 0;
    while (i < ea.size() && j < eb.size()) {
        if (ea[i].first < eb[j].first) {
            ++i;
        } else if (ea[i].first > eb[j].first) {
            ++j;
        } else {
            dot += ea[i].second * eb[j].second;
            ++i;
            ++j;
        }
    }
    return std::clamp(dot, 0.0, 1.0);
}

}  // namespace codesim
