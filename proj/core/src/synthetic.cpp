#include "codesim/corpus.hpp"

#include "codesim/errors.hpp"
#include "codesim/lexer.hpp"
#include "codesim/rng.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace codesim {

namespace {

// Processing API names the generator calls; the rename mutation leaves
// these alone so mutated sketches still read like Processing code.
const std::unordered_set<std::string_view>& api_names() {
    static const std::unordered_set<std::string_view> names = {
        "setup",     "draw",     "size",      "background", "fill",      "stroke",
        "noStroke",  "noFill",   "rect",      "ellipse",    "line",      "point",
        "triangle",  "text",     "textSize",  "frameRate",  "random",    "width",
        "height",    "mouseX",   "mouseY",    "mousePressed", "keyPressed", "min",
        "max",       "abs",      "sin",       "cos",        "dist",      "println",
        "strokeWeight",
    };
    return names;
}

constexpr std::string_view kVarPool[] = {
    "speed",    "total",     "score",    "angle",     "radius",   "offset",
    "scale1",   "step",      "delta",    "posX",      "posY",     "velX",
    "velY",     "ticks",     "bound",    "gap",       "vitesse",  "compteur",
    "largeur",  "hauteur",   "rayon",    "couleur",   "bordure",  "niveau",
    "colonne",  "ligne",     "taille",   "marge",     "somme",    "reste",
    "\xC3\xA9tape",   "d\xC3\xA9""calage",  // étape, décalage
};

constexpr std::string_view kHelperPool[] = {
    "updateBall", "drawGrid",   "moveShape",  "resetGame",   "drawFrame", "updateScore",
    "bougerBalle", "dessinerGrille", "avancer", "calculerTotal", "miseAJour", "tracerLigne",
    "spinBox",    "fadeOut",    "checkEdges", "v\xC3\xA9rifierBornes",  // vérifierBornes
};

constexpr std::string_view kRenamePool[] = {
    "tempVal", "aux",    "valeur", "donnee", "item",   "chose",  "truc",   "machin",
    "elem",    "cpt",    "varA",   "varB",   "varC",   "alpha",  "beta",   "gamma",
    "foo",     "bar",    "buf",    "acc",    "tmpX",   "tmpY",   "valNum", "entr\xC3\xA9""e",
};

constexpr std::string_view kCommentPool[] = {
    "update the position",        "draw the frame",
    "reset state",                "main loop",
    "adjust speed",               "met \xC3\xA0 jour la position",
    "dessine le cadre",           "remise \xC3\xA0 z\xC3\xA9ro",
    "boucle principale",          "ajuste la vitesse",
    "v\xC3\xA9rifie les bornes",  "check bounds",
    "increment counter",          "incr\xC3\xA9mente le compteur",
    "small tweak",                "petit r\xC3\xA9glage",
};

constexpr std::string_view kWordPool[] = {
    "score", "jeu", "go", "bravo", "fin", "start", "pause", "niveau", "ready", "stop",
};

constexpr std::string_view kIntOps[] = {"+", "-", "*", "/", "%"};
constexpr std::string_view kCmpOps[] = {"<", ">", "<=", ">=", "==", "!="};

template <typename Pool>
std::string_view pick(SplitMix64& rng, const Pool& pool) {
    return pool[rng.next_below(std::size(pool))];
}

// Builds one Processing-style sketch. Structure (globals, statement mix,
// helper count, operators, literals) all comes from the rng, which is what
// keeps independently generated sketches apart in n-gram space.
class SketchGen {
public:
    explicit SketchGen(SplitMix64& rng) : rng_(rng) {
        // a per-sketch identifier subset, without replacement
        std::vector<std::size_t> order(std::size(kVarPool));
        std::iota(order.begin(), order.end(), 0);
        const std::size_t take = 4 + rng_.next_below(5);
        for (std::size_t i = 0; i < take; ++i) {
            const auto j = i + rng_.next_below(order.size() - i);
            std::swap(order[i], order[j]);
            vars_.emplace_back(kVarPool[order[i]]);
        }
        std::vector<std::size_t> horder(std::size(kHelperPool));
        std::iota(horder.begin(), horder.end(), 0);
        const std::size_t htake = 1 + rng_.next_below(4);
        for (std::size_t i = 0; i < htake; ++i) {
            const auto j = i + rng_.next_below(horder.size() - i);
            std::swap(horder[i], horder[j]);
            helpers_.emplace_back(kHelperPool[horder[i]]);
        }
    }

    std::string run() {
        if (rng_.next_below(2) == 0) comment_line("");
        const std::size_t globals = 1 + rng_.next_below(3);
        for (std::size_t i = 0; i < globals && i < vars_.size(); ++i) {
            global_decl(vars_[i]);
        }
        out_ += "\n";

        out_ += "void setup() {\n";
        line("size(" + int_lit(200, 800) + ", " + int_lit(200, 800) + ");");
        const std::size_t setup_stmts = 1 + rng_.next_below(3);
        for (std::size_t i = 0; i < setup_stmts; ++i) setup_stmt();
        out_ += "}\n\n";

        out_ += "void draw() {\n";
        const std::size_t draw_stmts = 3 + rng_.next_below(6);
        for (std::size_t i = 0; i < draw_stmts; ++i) stmt(1, true);
        out_ += "}\n";

        for (const auto& name : helpers_) {
            out_ += "\n";
            helper(name);
        }
        return std::move(out_);
    }

private:
    SplitMix64& rng_;
    std::vector<std::string> vars_;
    std::vector<std::string> helpers_;
    std::string out_;

    const std::string& var() { return vars_[rng_.next_below(vars_.size())]; }

    std::string int_lit(unsigned lo = 0, unsigned hi = 600) {
        return std::to_string(lo + rng_.next_below(hi - lo));
    }

    std::string float_lit() {
        return std::to_string(rng_.next_below(40)) + "." + std::to_string(rng_.next_below(100));
    }

    void indent(int depth) { out_.append(static_cast<std::size_t>(depth) * 2, ' '); }

    void line(const std::string& text, int depth = 1) {
        indent(depth);
        out_ += text;
        out_ += "\n";
    }

    void comment_line(const std::string& prefix) {
        const auto text = pick(rng_, kCommentPool);
        out_ += prefix;
        if (rng_.next_below(2) == 0) {
            out_ += "// ";
            out_ += text;
        } else {
            out_ += "/* ";
            out_ += text;
            out_ += " */";
        }
        out_ += "\n";
    }

    void global_decl(const std::string& name) {
        switch (rng_.next_below(3)) {
            case 0: out_ += "int " + name + " = " + int_lit() + ";\n"; break;
            case 1: out_ += "float " + name + " = " + float_lit() + ";\n"; break;
            default: out_ += "boolean " + name + " = " +
                             std::string(rng_.next_below(2) ? "true" : "false") + ";\n"; break;
        }
    }

    void setup_stmt() {
        switch (rng_.next_below(4)) {
            case 0: line("background(" + int_lit(0, 255) + ");"); break;
            case 1: line("frameRate(" + int_lit(10, 90) + ");"); break;
            case 2: line("stroke(" + int_lit(0, 255) + ");"); break;
            default: line("noStroke();"); break;
        }
    }

    void assign_stmt(int depth) {
        const auto& target = var();
        switch (rng_.next_below(3)) {
            case 0:
                line(target + " = " + target + " " + std::string(pick(rng_, kIntOps)) + " " +
                         int_lit(1, 40) + ";",
                     depth);
                break;
            case 1:
                line(target + " = " + var() + " " + std::string(pick(rng_, kIntOps)) + " " + var() +
                         ";",
                     depth);
                break;
            default:
                line(target + (rng_.next_below(2) ? "++;" : "--;"), depth);
                break;
        }
    }

    void api_stmt(int depth) {
        switch (rng_.next_below(6)) {
            case 0:
                line("rect(" + var() + ", " + var() + ", " + int_lit(5, 120) + ", " +
                         int_lit(5, 120) + ");",
                     depth);
                break;
            case 1:
                line("ellipse(" + var() + ", " + var() + ", " + int_lit(5, 90) + ", " +
                         int_lit(5, 90) + ");",
                     depth);
                break;
            case 2:
                line("line(" + int_lit() + ", " + var() + ", " + var() + ", " + int_lit() + ");",
                     depth);
                break;
            case 3:
                line("fill(" + int_lit(0, 255) + ", " + int_lit(0, 255) + ", " + int_lit(0, 255) +
                         ");",
                     depth);
                break;
            case 4:
                line("text(\"" + std::string(pick(rng_, kWordPool)) + "\", " + int_lit(10, 300) +
                         ", " + int_lit(10, 300) + ");",
                     depth);
                break;
            default:
                line("point(" + var() + ", " + var() + ");", depth);
                break;
        }
    }

    void stmt(int depth, bool allow_blocks) {
        if (rng_.next_below(6) == 0) {
            indent(depth);
            comment_line("");
        }
        const auto kind = rng_.next_below(allow_blocks ? 8u : 4u);
        switch (kind) {
            case 0:
            case 1: assign_stmt(depth); break;
            case 2:
            case 3: api_stmt(depth); break;
            case 4: {
                line("if (" + var() + " " + std::string(pick(rng_, kCmpOps)) + " " + int_lit() +
                         ") {",
                     depth);
                stmt(depth + 1, false);
                if (rng_.next_below(3) == 0) {
                    line("} else {", depth);
                    stmt(depth + 1, false);
                }
                line("}", depth);
                break;
            }
            case 5: {
                const std::string loop_var = rng_.next_below(2) ? "i" : "j";
                line("for (int " + loop_var + " = 0; " + loop_var + " < " + int_lit(2, 30) + "; " +
                         loop_var + "++) {",
                     depth);
                stmt(depth + 1, false);
                line("}", depth);
                break;
            }
            case 6:
                line(std::string(helpers_[rng_.next_below(helpers_.size())]) + "();", depth);
                break;
            default:
                line("float " + var() + "2 = " + float_lit() + ";", depth);
                break;
        }
    }

    void helper(const std::string& name) {
        if (rng_.next_below(3) == 0) {
            out_ += "int " + name + "(int input) {\n";
            line("return input " + std::string(pick(rng_, kIntOps)) + " " + int_lit(1, 60) + ";");
            out_ += "}\n";
            return;
        }
        out_ += "void " + name + "() {\n";
        const std::size_t stmts = 2 + rng_.next_below(5);
        for (std::size_t i = 0; i < stmts; ++i) stmt(1, true);
        out_ += "}\n";
    }
};

std::string generate_sketch(SplitMix64& rng) { return SketchGen(rng).run(); }

std::string rename_identifiers(const std::string& src, SplitMix64& rng) {
    const auto tokens = tokenize(src);
    std::unordered_map<std::string, std::string> renames;
    std::unordered_set<std::string> taken;
    for (const auto& tok : tokens) {
        if (tok.kind == TokenKind::Ident) taken.insert(tok.text);
    }

    std::size_t pool_pos = rng.next_below(std::size(kRenamePool));
    std::size_t suffix = 0;
    auto fresh_name = [&]() {
        for (;;) {
            std::string candidate(kRenamePool[pool_pos % std::size(kRenamePool)]);
            ++pool_pos;
            if (suffix > 0) candidate += std::to_string(suffix);
            if (pool_pos % std::size(kRenamePool) == 0) ++suffix;
            if (!taken.contains(candidate) && !is_keyword(candidate)) {
                taken.insert(candidate);
                return candidate;
            }
        }
    };

    std::string out;
    out.reserve(src.size());
    std::size_t pos = 0;
    for (const auto& tok : tokens) {
        out.append(src, pos, tok.span.start - pos);
        if (tok.kind == TokenKind::Ident && !api_names().contains(tok.text)) {
            auto it = renames.find(tok.text);
            if (it == renames.end()) it = renames.emplace(tok.text, fresh_name()).first;
            out += it->second;
        } else {
            out.append(src, tok.span.start, tok.span.size());
        }
        pos = tok.span.end;
    }
    out.append(src, pos, src.size() - pos);
    return out;
}

std::string insert_comments(const std::string& src, SplitMix64& rng) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start <= src.size()) {
        const auto nl = src.find('\n', start);
        if (nl == std::string::npos) {
            lines.push_back(src.substr(start));
            break;
        }
        lines.push_back(src.substr(start, nl - start));
        start = nl + 1;
    }

    const std::size_t insertions = 1 + rng.next_below(4);
    for (std::size_t i = 0; i < insertions; ++i) {
        const auto at = rng.next_below(lines.size() + 1);
        const auto text = std::string(pick(rng, kCommentPool));
        const auto comment = rng.next_below(2) ? "// " + text : "/* " + text + " */";
        lines.insert(lines.begin() + static_cast<std::ptrdiff_t>(at), comment);
    }

    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        out += lines[i];
        if (i + 1 < lines.size()) out += "\n";
    }
    return out;
}

std::string delete_comments(const std::string& src) {
    const auto tokens = tokenize(src);
    std::string out;
    out.reserve(src.size());
    std::size_t pos = 0;
    for (const auto& tok : tokens) {
        out.append(src, pos, tok.span.start - pos);
        if (tok.kind != TokenKind::Comment) out.append(src, tok.span.start, tok.span.size());
        pos = tok.span.end;
    }
    out.append(src, pos, src.size() - pos);
    return out;
}

std::string reorder_functions(const std::string& src, SplitMix64& rng) {
    const auto tokens = tokenize(src);
    // top-level chunks split after each closing brace that returns to depth 0
    std::vector<std::size_t> boundaries;  // byte offsets just past a top-level '}'
    int depth = 0;
    for (const auto& tok : tokens) {
        if (tok.kind != TokenKind::Punct) continue;
        if (tok.text == "{") ++depth;
        if (tok.text == "}") {
            --depth;
            if (depth == 0) boundaries.push_back(tok.span.end);
        }
    }
    if (boundaries.size() < 2) return src;

    std::vector<std::string> chunks;
    std::size_t pos = 0;
    for (const auto b : boundaries) {
        chunks.push_back(src.substr(pos, b - pos));
        pos = b;
    }
    const std::string tail = src.substr(pos);

    // Fisher-Yates over the function chunks
    for (std::size_t i = chunks.size() - 1; i > 0; --i) {
        const auto j = rng.next_below(i + 1);
        std::swap(chunks[i], chunks[j]);
    }

    std::string out;
    out.reserve(src.size());
    for (auto& chunk : chunks) {
        // a chunk displaced from the file head may not start on its own line
        if (!out.empty() && out.back() != '\n' && !chunk.empty() && chunk.front() != '\n') {
            out += "\n";
        }
        out += chunk;
    }
    out += tail;
    return out;
}

std::string perturb_literals(const std::string& src, SplitMix64& rng) {
    const auto tokens = tokenize(src);
    std::string out;
    out.reserve(src.size());
    std::size_t pos = 0;
    for (const auto& tok : tokens) {
        out.append(src, pos, tok.span.start - pos);
        bool replaced = false;
        if (tok.kind == TokenKind::Number && rng.next_below(2) == 0) {
            const bool plain_int =
                tok.text.find_first_not_of("0123456789") == std::string::npos;
            const bool plain_float =
                !plain_int &&
                tok.text.find_first_not_of("0123456789.") == std::string::npos &&
                std::count(tok.text.begin(), tok.text.end(), '.') == 1;
            if (plain_int) {
                out += std::to_string(rng.next_below(600));
                replaced = true;
            } else if (plain_float) {
                out += std::to_string(rng.next_below(40)) + "." +
                       std::to_string(rng.next_below(100));
                replaced = true;
            }
        }
        if (!replaced) out.append(src, tok.span.start, tok.span.size());
        pos = tok.span.end;
    }
    out.append(src, pos, src.size() - pos);
    return out;
}

std::string apply_mutation(MutationOp op, const std::string& src, SplitMix64& rng) {
    switch (op) {
        case MutationOp::RenameIdentifiers: return rename_identifiers(src, rng);
        case MutationOp::InsertComments: return insert_comments(src, rng);
        case MutationOp::DeleteComments: return delete_comments(src);
        case MutationOp::ReorderFunctions: return reorder_functions(src, rng);
        case MutationOp::PerturbLiterals: return perturb_literals(src, rng);
    }
    return src;
}

std::string padded_id(const char* prefix, int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%04d", prefix, index);
    return buf;
}

}  // namespace

SyntheticCorpus generate_synthetic(const SyntheticConfig& config) {
    if (config.num_originals < 2) throw Error("synthetic corpus needs at least 2 originals");
    if (config.num_plagiarized < 0) throw Error("num_plagiarized must be >= 0");
    if (config.num_plagiarized > 0 && config.mutations_per_copy > 0 &&
        config.mutation_ops.empty()) {
        throw Error("mutation op set is empty");
    }

    SplitMix64 rng(config.seed);
    SyntheticCorpus result;

    std::vector<SourceFile> originals;
    originals.reserve(config.num_originals);
    for (int i = 0; i < config.num_originals; ++i) {
        SourceFile file;
        file.id = padded_id("orig", i);
        file.content = generate_sketch(rng);
        originals.push_back(std::move(file));
    }

    std::vector<SourceFile> copies;
    copies.reserve(config.num_plagiarized);
    for (int c = 0; c < config.num_plagiarized; ++c) {
        const auto origin =
            static_cast<std::size_t>(rng.next_below(static_cast<std::uint64_t>(config.num_originals)));
        std::string text = originals[origin].content;
        for (int m = 0; m < config.mutations_per_copy; ++m) {
            const auto op = config.mutation_ops[rng.next_below(config.mutation_ops.size())];
            text = apply_mutation(op, text, rng);
        }
        SourceFile file;
        file.id = padded_id("copy", c);
        file.content = std::move(text);
        result.copy_origin.emplace(file.id, originals[origin].id);
        copies.push_back(std::move(file));
    }

    for (std::size_t i = 0; i < originals.size(); ++i) {
        for (std::size_t j = i + 1; j < originals.size(); ++j) {
            result.labels.pairs.emplace(make_pair_key(originals[i].id, originals[j].id),
                                        Label::Clean);
        }
    }
    for (const auto& [copy_id, origin_id] : result.copy_origin) {
        for (const auto& orig : originals) {
            result.labels.pairs.emplace(
                make_pair_key(copy_id, orig.id),
                orig.id == origin_id ? Label::Plagiarized : Label::Clean);
        }
    }

    result.corpus.submissions = std::move(copies);
    result.corpus.submissions.insert(result.corpus.submissions.end(),
                                     std::make_move_iterator(originals.begin()),
                                     std::make_move_iterator(originals.end()));
    std::sort(result.corpus.submissions.begin(), result.corpus.submissions.end(),
              [](const SourceFile& a, const SourceFile& b) { return a.id < b.id; });
    return result;
}

}  // namespace codesim
