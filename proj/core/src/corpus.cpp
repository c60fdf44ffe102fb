#include "codesim/corpus.hpp"

#include "codesim/errors.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace codesim {

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CorpusError("cannot read file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            lines.push_back(text.substr(start));
            break;
        }
        auto line = text.substr(start, nl - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        start = nl + 1;
    }
    return lines;
}

}  // namespace

const SourceFile* Corpus::find(std::string_view id) const {
    auto it = std::lower_bound(submissions.begin(), submissions.end(), id,
                               [](const SourceFile& f, std::string_view v) { return f.id < v; });
    if (it == submissions.end() || it->id != id) return nullptr;
    return &*it;
}

LoadedCorpus load_corpus(const std::filesystem::path& dir,
                         const std::optional<std::filesystem::path>& template_path) {
    if (!std::filesystem::is_directory(dir)) {
        throw CorpusError("not a directory: " + dir.string());
    }

    LoadedCorpus result;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const auto ext = entry.path().extension().string();
        if (ext != ".pde" && ext != ".java") continue;

        std::string content = read_file(entry.path());
        if (!utf8::validate(content)) {
            result.warnings.push_back("skipped " + entry.path().string() + ": not valid UTF-8");
            continue;
        }
        SourceFile file;
        file.id = entry.path().stem().string();
        file.path = entry.path().string();
        file.content = std::move(content);
        result.corpus.submissions.push_back(std::move(file));
    }

    std::sort(result.corpus.submissions.begin(), result.corpus.submissions.end(),
              [](const SourceFile& a, const SourceFile& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < result.corpus.submissions.size(); ++i) {
        if (result.corpus.submissions[i].id == result.corpus.submissions[i - 1].id) {
            throw CorpusError("duplicate submission id: " + result.corpus.submissions[i].id);
        }
    }
    if (result.corpus.submissions.size() < 2) {
        throw NoSubmissions("need at least 2 valid submissions in " + dir.string() + ", found " +
                            std::to_string(result.corpus.submissions.size()));
    }

    if (template_path) {
        std::string content = read_file(*template_path);
        if (!utf8::validate(content)) {
            throw CorpusError("template is not valid UTF-8: " + template_path->string());
        }
        SourceFile tmpl;
        tmpl.id = template_path->stem().string();
        tmpl.path = template_path->string();
        tmpl.content = std::move(content);
        result.corpus.template_file = std::move(tmpl);
    }
    return result;
}

PairKey make_pair_key(std::string a, std::string b) {
    if (b < a) std::swap(a, b);
    return {std::move(a), std::move(b)};
}

std::vector<PairKey> enumerate_pairs(const Corpus& corpus) {
    const auto& subs = corpus.submissions;
    std::vector<PairKey> pairs;
    pairs.reserve(subs.size() * (subs.size() - 1) / 2);
    // submissions are sorted by id, so (i, j) with i < j is already canonical
    for (std::size_t i = 0; i < subs.size(); ++i) {
        for (std::size_t j = i + 1; j < subs.size(); ++j) {
            pairs.emplace_back(subs[i].id, subs[j].id);
        }
    }
    return pairs;
}

LabelSet parse_labels_csv(std::string_view text, const Corpus& corpus) {
    LabelSet labels;
    const auto lines = split_lines(text);
    if (lines.empty() || lines[0] != "id_a,id_b,label") {
        throw MalformedRow(1, "labels CSV must start with header id_a,id_b,label");
    }

    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto line = lines[i];
        const int line_no = static_cast<int>(i + 1);
        if (line.empty()) continue;  // trailing newline / blank row

        const auto first = line.find(',');
        const auto second = first == std::string_view::npos
                                ? std::string_view::npos
                                : line.find(',', first + 1);
        if (first == std::string_view::npos || second == std::string_view::npos ||
            line.find(',', second + 1) != std::string_view::npos) {
            throw MalformedRow(line_no, "line " + std::to_string(line_no) +
                                            ": expected 3 comma-separated fields");
        }
        std::string id_a(line.substr(0, first));
        std::string id_b(line.substr(first + 1, second - first - 1));
        const auto label_text = line.substr(second + 1);

        const auto label = label_from_string(label_text);
        if (!label) {
            throw MalformedRow(line_no, "line " + std::to_string(line_no) + ": unknown label '" +
                                            std::string(label_text) + "'");
        }
        if (corpus.find(id_a) == nullptr) {
            throw UnknownId(id_a, "line " + std::to_string(line_no) + ": unknown submission id '" +
                                      id_a + "'");
        }
        if (corpus.find(id_b) == nullptr) {
            throw UnknownId(id_b, "line " + std::to_string(line_no) + ": unknown submission id '" +
                                      id_b + "'");
        }
        if (id_a == id_b) {
            throw MalformedRow(line_no, "line " + std::to_string(line_no) +
                                            ": a pair needs two distinct ids, got '" + id_a + "'");
        }

        auto key = make_pair_key(std::move(id_a), std::move(id_b));
        auto [it, inserted] = labels.pairs.emplace(std::move(key), *label);
        if (!inserted && it->second != *label) {
            throw ConflictingLabel("line " + std::to_string(line_no) + ": pair (" +
                                   it->first.first + ", " + it->first.second +
                                   ") labelled both ways");
        }
    }
    return labels;
}

LabelSet load_labels(const std::filesystem::path& csv_path, const Corpus& corpus) {
    return parse_labels_csv(read_file(csv_path), corpus);
}

std::string labels_to_csv(const LabelSet& labels) {
    std::string out = "id_a,id_b,label\n";
    for (const auto& [key, label] : labels.pairs) {
        out += key.first;
        out += ',';
        out += key.second;
        out += ',';
        out += to_string(label);
        out += '\n';
    }
    return out;
}

void save_labels(const LabelSet& labels, const std::filesystem::path& csv_path) {
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw CorpusError("cannot write labels file: " + csv_path.string());
    out << labels_to_csv(labels);
    if (!out) throw CorpusError("failed writing labels file: " + csv_path.string());
}

std::string_view to_string(MutationOp op) {
    switch (op) {
        case MutationOp::RenameIdentifiers: return "rename";
        case MutationOp::InsertComments: return "insert-comments";
        case MutationOp::DeleteComments: return "delete-comments";
        case MutationOp::ReorderFunctions: return "reorder";
        case MutationOp::PerturbLiterals: return "literals";
    }
    return "unknown";
}

void write_corpus(const Corpus& corpus, const LabelSet& labels,
                  const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& file : corpus.submissions) {
        const auto path = dir / (file.id + ".pde");
        std::ofstream out(path, std::ios::binary);
        if (!out) throw CorpusError("cannot write file: " + path.string());
        out << file.content;
        if (!out) throw CorpusError("failed writing file: " + path.string());
    }
    save_labels(labels, dir / "labels.csv");
}

}  // namespace codesim
