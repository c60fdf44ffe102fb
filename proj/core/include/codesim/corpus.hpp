#pragma once

#include "codesim/label.hpp"
#include "codesim/source.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace codesim {

struct Corpus {
    std::vector<SourceFile> submissions;  // sorted by id, ids unique
    std::optional<SourceFile> template_file;

    const SourceFile* find(std::string_view id) const;
};

struct LoadedCorpus {
    Corpus corpus;
    std::vector<std::string> warnings;  // one entry per skipped file
};

// Loads every regular *.pde / *.java file in dir as a submission
// (id = filename stem, sorted by id). Files that are not valid UTF-8 are
// skipped with a warning. Throws NoSubmissions when fewer than two valid
// files remain, CorpusError on duplicate ids or an unreadable template.
LoadedCorpus load_corpus(const std::filesystem::path& dir,
                         const std::optional<std::filesystem::path>& template_path = {});

// Canonical unordered pair: lexicographically smaller id first.
using PairKey = std::pair<std::string, std::string>;
PairKey make_pair_key(std::string a, std::string b);

// All C(n,2) canonical pairs, sorted lexicographically.
std::vector<PairKey> enumerate_pairs(const Corpus& corpus);

struct LabelSet {
    std::map<PairKey, Label> pairs;
};

// CSV with header `id_a,id_b,label`, label in {plagiarized, clean}. Rows are
// canonicalized; a pair labelled twice with different labels is an error.
// Throws MalformedRow (with line number), UnknownId, ConflictingLabel.
LabelSet parse_labels_csv(std::string_view text, const Corpus& corpus);
LabelSet load_labels(const std::filesystem::path& csv_path, const Corpus& corpus);
void save_labels(const LabelSet& labels, const std::filesystem::path& csv_path);
std::string labels_to_csv(const LabelSet& labels);

enum class MutationOp {
    RenameIdentifiers,
    InsertComments,
    DeleteComments,
    ReorderFunctions,
    PerturbLiterals,
};

std::string_view to_string(MutationOp op);

struct SyntheticConfig {
    int num_originals = 60;
    int num_plagiarized = 40;
    std::vector<MutationOp> mutation_ops = {
        MutationOp::RenameIdentifiers, MutationOp::InsertComments, MutationOp::DeleteComments,
        MutationOp::ReorderFunctions, MutationOp::PerturbLiterals};
    int mutations_per_copy = 3;
    std::uint64_t seed = 7;
};

struct SyntheticCorpus {
    Corpus corpus;
    LabelSet labels;
    // id of the original each copy was derived from, keyed by copy id
    std::map<std::string, std::string> copy_origin;
};

// Emits num_originals seeded Processing-style sketches (ids orig000...) and
// num_plagiarized mutated copies (ids copy000...), each copy derived from a
// random original by mutations_per_copy draws from mutation_ops. Labels:
// (copy, origin) pairs are Plagiarized; original-original and
// copy-vs-unrelated-original pairs are Clean; copy-copy pairs are left
// unlabelled. Fully deterministic for a given config.
SyntheticCorpus generate_synthetic(const SyntheticConfig& config);

// Writes each submission as <id>.pde plus labels.csv into dir (created if
// needed).
void write_corpus(const Corpus& corpus, const LabelSet& labels,
                  const std::filesystem::path& dir);

}  // namespace codesim
