#include "codesim/vectorspace.hpp"

#include "codesim/errors.hpp"
#include "codesim/rng.hpp"

#include <doctest.h>

#include "../support/oracles.hpp"

#include <cmath>
#include <map>

using namespace codesim;

namespace {

NormalizedStream make_stream(std::vector<std::string> symbols) {
    NormalizedStream stream;
    stream.symbols = std::move(symbols);
    stream.origins.resize(stream.symbols.size());
    return stream;
}

std::string gram(std::initializer_list<std::string_view> parts) {
    std::string out;
    bool first = true;
    for (auto part : parts) {
        if (!first) out += kNGramSeparator;
        out += part;
        first = false;
    }
    return out;
}

// Random count maps over a tiny term universe, for oracle comparisons.
std::vector<NGramCounts> random_corpus(SplitMix64& rng) {
    const auto num_docs = 1 + rng.next_below(5);
    const auto num_terms = 1 + rng.next_below(20);
    std::vector<NGramCounts> corpus;
    for (std::uint64_t d = 0; d < num_docs; ++d) {
        NGramCounts doc;
        for (std::uint64_t t = 0; t < num_terms; ++t) {
            if (rng.next_below(2) == 0) {
                doc["t" + std::to_string(t)] = static_cast<std::int64_t>(1 + rng.next_below(9));
            }
        }
        corpus.push_back(std::move(doc));
    }
    return corpus;
}

}  // namespace

TEST_CASE("extract_ngrams: stream shorter than n") {
    CHECK(extract_ngrams(make_stream({"a"}), {2}).empty());
}

TEST_CASE("extract_ngrams: bigram windows") {
    const auto counts = extract_ngrams(make_stream({"int", "ID", "=", "NUM"}), {2});
    REQUIRE(counts.size() == 3);
    CHECK(counts.at(gram({"int", "ID"})) == 1);
    CHECK(counts.at(gram({"ID", "="})) == 1);
    CHECK(counts.at(gram({"=", "NUM"})) == 1);
}

TEST_CASE("extract_ngrams: repeated gram counted") {
    const auto counts = extract_ngrams(make_stream({"ID", "ID", "ID"}), {2});
    REQUIRE(counts.size() == 1);
    CHECK(counts.at(gram({"ID", "ID"})) == 2);
}

TEST_CASE("extract_ngrams: separator avoids join collisions") {
    const auto ab_c = extract_ngrams(make_stream({"ab", "c"}), {2});
    const auto a_bc = extract_ngrams(make_stream({"a", "bc"}), {2});
    CHECK(ab_c.begin()->first != a_bc.begin()->first);
}

TEST_CASE("fit_tfidf: idf formula on small corpora") {
    SUBCASE("single doc, single term") {
        const auto model = fit_tfidf({{{"a", 1}}});
        CHECK(model.vocab.num_docs == 1);
        CHECK(model.vocab.doc_freq[model.vocab.term_ids.at("a")] == 1);
        CHECK(model.idf[model.vocab.term_ids.at("a")] == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("term in every doc") {
        const auto model = fit_tfidf({{{"a", 1}}, {{"a", 2}}});
        CHECK(model.vocab.num_docs == 2);
        CHECK(model.vocab.doc_freq[model.vocab.term_ids.at("a")] == 2);
        CHECK(model.idf[model.vocab.term_ids.at("a")] == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("term in one of two docs") {
        const auto model = fit_tfidf({{{"a", 1}}, {{"b", 1}}});
        // ln(3/2) + 1
        CHECK(model.idf[model.vocab.term_ids.at("a")] ==
              doctest::Approx(1.4054651081081644).epsilon(1e-12));
    }
}

TEST_CASE("fit_tfidf: empty corpus is an error") {
    CHECK_THROWS_AS(fit_tfidf({}), EmptyCorpus);
}

TEST_CASE("transform: empty and out-of-vocabulary inputs give the empty vector") {
    const auto model = fit_tfidf({{{"a", 1}}, {{"b", 1}}});
    CHECK(transform(model, {}).empty());
    CHECK(transform(model, {{"z", 5}}).empty());
}

TEST_CASE("transform: equal weights normalize to 1/sqrt(2)") {
    const auto model = fit_tfidf({{{"a", 1}}, {{"b", 1}}});
    const auto v = transform(model, {{"a", 1}, {"b", 1}});
    REQUIRE(v.entries().size() == 2);
    CHECK(v.entries()[0].second == doctest::Approx(0.7071067811865476).epsilon(1e-9));
    CHECK(v.entries()[1].second == doctest::Approx(0.7071067811865476).epsilon(1e-9));
}

TEST_CASE("transform: vectors are unit length") {
    SplitMix64 rng(7);
    for (int round = 0; round < 50; ++round) {
        const auto corpus = random_corpus(rng);
        const auto model = fit_tfidf(corpus);
        for (const auto& doc : corpus) {
            const auto v = transform(model, doc);
            if (v.empty()) continue;
            double norm_sq = 0.0;
            for (const auto& [id, w] : v.entries()) norm_sq += w * w;
            CHECK(std::abs(std::sqrt(norm_sq) - 1.0) < 1e-9);
        }
    }
}

TEST_CASE("cosine: identity, orthogonality, hand dot product") {
    const auto model = fit_tfidf({{{"a", 1}}, {{"b", 1}}});
    const auto v = transform(model, {{"a", 2}, {"b", 1}});
    CHECK(cosine(v, v) == doctest::Approx(1.0).epsilon(1e-9));

    const auto va = transform(model, {{"a", 1}});
    const auto vb = transform(model, {{"b", 3}});
    CHECK(cosine(va, vb) == 0.0);
    CHECK(cosine(va, SparseVector{}) == 0.0);

    const auto a = SparseVector::from_weights({{1, 0.6}, {2, 0.8}});
    const auto b = SparseVector::from_weights({{1, 1.0}});
    CHECK(cosine(a, b) == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("property: cosine symmetry is exact and range is [0,1]") {
    SplitMix64 rng(11);
    for (int round = 0; round < 1000; ++round) {
        std::vector<std::pair<std::int32_t, double>> wa, wb;
        const auto na = rng.next_below(12);
        const auto nb = rng.next_below(12);
        for (std::uint64_t i = 0; i < na; ++i) {
            wa.emplace_back(static_cast<std::int32_t>(rng.next_below(20)), rng.next_unit());
        }
        for (std::uint64_t i = 0; i < nb; ++i) {
            wb.emplace_back(static_cast<std::int32_t>(rng.next_below(20)), rng.next_unit());
        }
        const auto a = SparseVector::from_weights(wa);
        const auto b = SparseVector::from_weights(wb);
        const double ab = cosine(a, b);
        CHECK(ab == cosine(b, a));  // bitwise
        CHECK(ab >= 0.0);
        CHECK(ab <= 1.0);
    }
}

TEST_CASE("property: scaling all counts leaves the transformed vector unchanged") {
    SplitMix64 rng(13);
    for (int round = 0; round < 100; ++round) {
        const auto corpus = random_corpus(rng);
        const auto model = fit_tfidf(corpus);
        const auto& doc = corpus[rng.next_below(corpus.size())];
        NGramCounts scaled;
        const auto k = static_cast<std::int64_t>(2 + rng.next_below(9));
        for (const auto& [term, count] : doc) scaled[term] = count * k;

        const auto v1 = transform(model, doc);
        const auto v2 = transform(model, scaled);
        REQUIRE(v1.entries().size() == v2.entries().size());
        for (std::size_t i = 0; i < v1.entries().size(); ++i) {
            CHECK(v1.entries()[i].first == v2.entries()[i].first);
            CHECK(v1.entries()[i].second ==
                  doctest::Approx(v2.entries()[i].second).epsilon(1e-12));
        }
    }
}

TEST_CASE("oracle: sparse pipeline matches dense brute force") {
    SplitMix64 rng(17);
    for (int round = 0; round < 100; ++round) {
        const auto corpus = random_corpus(rng);
        std::vector<std::map<std::string, int>> dense_docs;
        for (const auto& doc : corpus) {
            std::map<std::string, int> d;
            for (const auto& [term, count] : doc) d[term] = static_cast<int>(count);
            dense_docs.push_back(std::move(d));
        }

        const auto model = fit_tfidf(corpus);
        const auto oracle = testsupport::dense_tfidf(dense_docs);

        std::vector<SparseVector> vectors;
        for (const auto& doc : corpus) vectors.push_back(transform(model, doc));

        for (std::size_t d = 0; d < corpus.size(); ++d) {
            for (const auto& [id, weight] : vectors[d].entries()) {
                // locate the term by id through the vocabulary
                for (const auto& [term, term_id] : model.vocab.term_ids) {
                    if (term_id != id) continue;
                    const auto term_pos =
                        std::lower_bound(oracle.terms.begin(), oracle.terms.end(), term) -
                        oracle.terms.begin();
                    CHECK(std::abs(weight - oracle.weights[d][term_pos]) < 1e-9);
                }
            }
        }
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            for (std::size_t j = i; j < corpus.size(); ++j) {
                const double expected = testsupport::dense_cosine(oracle.weights[i], oracle.weights[j]);
                CHECK(std::abs(cosine(vectors[i], vectors[j]) - expected) < 1e-9);
            }
        }
    }
}
