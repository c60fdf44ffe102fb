#include "codesim/lexer.hpp"

#include <algorithm>
#include <array>
#include <unordered_set>

namespace codesim {

namespace {

// Java keywords and literal words, plus Processing's `color` primitive.
const std::unordered_set<std::string_view>& keyword_set() {
    static const std::unordered_set<std::string_view> kws = {
        "abstract", "assert",   "boolean",   "break",      "byte",     "case",
        "catch",    "char",     "class",     "const",      "continue", "default",
        "do",       "double",   "else",      "enum",       "extends",  "final",
        "finally",  "float",    "for",       "goto",       "if",       "implements",
        "import",   "instanceof", "int",     "interface",  "long",     "native",
        "new",      "package",  "private",   "protected",  "public",   "return",
        "short",    "static",   "strictfp",  "super",      "switch",   "synchronized",
        "this",     "throw",    "throws",    "transient",  "try",      "void",
        "volatile", "while",    "true",      "false",      "null",     "color",
    };
    return kws;
}

// Approximate Unicode letter test by code-point range. Covers Latin
// (including all French accents), Greek, Cyrillic, Arabic, CJK and more;
// punctuation, symbol and arrow blocks are excluded.
bool is_unicode_letter(char32_t cp) {
    if (cp == 0xAA || cp == 0xB5 || cp == 0xBA) return true;
    if (cp >= 0xC0 && cp <= 0x2AF) return cp != 0xD7 && cp != 0xF7;
    if (cp >= 0x370 && cp <= 0x1FFF) return true;
    if (cp >= 0x2C00 && cp <= 0x2DFF) return true;
    if (cp >= 0x3040 && cp <= 0xD7FF) return true;
    if (cp >= 0xF900 && cp <= 0xFDCF) return true;
    if (cp >= 0xFE70 && cp <= 0xFEFC) return true;
    if (cp >= 0x10000 && cp <= 0xEFFFF) return true;
    return false;
}

bool is_ident_start(char32_t cp) {
    if ((cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z')) return true;
    if (cp == '_' || cp == '$') return true;
    return cp >= 0x80 && is_unicode_letter(cp);
}

bool is_ident_part(char32_t cp) {
    return is_ident_start(cp) || (cp >= '0' && cp <= '9');
}

bool is_digit(char32_t cp) { return cp >= '0' && cp <= '9'; }

bool is_hex_digit(char32_t cp) {
    return is_digit(cp) || (cp >= 'a' && cp <= 'f') || (cp >= 'A' && cp <= 'F');
}

bool is_space(char32_t cp) {
    return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' || cp == '\v';
}

// Multi-character operators, longest first within each bucket.
constexpr std::array<std::string_view, 1> kOps4 = {">>>="};
constexpr std::array<std::string_view, 3> kOps3 = {">>>", "<<=", ">>="};
constexpr std::array<std::string_view, 20> kOps2 = {
    "==", "!=", "<=", ">=", "&&", "||", "++", "--", "+=", "-=",
    "*=", "/=", "%=", "&=", "|=", "^=", "<<", ">>", "->", "::"};
constexpr std::string_view kOps1 = "+-*/%=<>!&|^~?:";
constexpr std::string_view kPunct = "(){}[];,.@";

class Scanner {
public:
    explicit Scanner(std::string_view text) : text_(text) {}

    std::vector<Token> run() {
        std::vector<Token> tokens;
        while (pos_ < text_.size()) {
            char32_t cp = peek();
            if (is_space(cp)) {
                advance();
                continue;
            }
            tokens.push_back(next_token());
        }
        return tokens;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;

    char32_t peek() const {
        std::size_t p = pos_;
        return utf8::decode(text_, p);
    }

    char32_t peek_second() const {
        std::size_t p = pos_;
        utf8::decode(text_, p);
        if (p >= text_.size()) return 0;
        return utf8::decode(text_, p);
    }

    char byte_at(std::size_t offset) const {
        std::size_t p = pos_ + offset;
        return p < text_.size() ? text_[p] : '\0';
    }

    void advance() {
        char32_t cp = utf8::decode(text_, pos_);
        if (cp == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
    }

    bool starts_with(std::string_view prefix) const {
        return text_.compare(pos_, prefix.size(), prefix) == 0;
    }

    Token next_token() {
        Token tok;
        tok.line = line_;
        tok.col = col_;
        tok.span.start = pos_;

        char32_t cp = peek();
        if (starts_with("//")) {
            scan_line_comment();
            tok.kind = TokenKind::Comment;
        } else if (starts_with("/*")) {
            scan_block_comment();
            tok.kind = TokenKind::Comment;
        } else if (cp == '"') {
            scan_quoted('"');
            tok.kind = TokenKind::String;
        } else if (cp == '\'') {
            scan_quoted('\'');
            tok.kind = TokenKind::Char;
        } else if (is_digit(cp) || (cp == '.' && is_digit(peek_second()))) {
            scan_number();
            tok.kind = TokenKind::Number;
        } else if (is_ident_start(cp)) {
            scan_identifier();
            tok.kind = TokenKind::Ident;
        } else if (auto len = match_operator(); len > 0) {
            for (int i = 0; i < len; ++i) advance();
            tok.kind = TokenKind::Operator;
        } else if (cp < 0x80 && kPunct.find(static_cast<char>(cp)) != std::string_view::npos) {
            advance();
            tok.kind = TokenKind::Punct;
        } else {
            advance();
            tok.kind = TokenKind::Other;
        }

        tok.span.end = pos_;
        tok.text = std::string(text_.substr(tok.span.start, tok.span.end - tok.span.start));
        if (tok.kind == TokenKind::Ident && keyword_set().contains(tok.text)) {
            tok.kind = TokenKind::Keyword;
        }
        return tok;
    }

    void scan_line_comment() {
        advance();  // '/'
        advance();  // '/'
        while (pos_ < text_.size() && peek() != '\n') advance();
    }

    void scan_block_comment() {
        advance();  // '/'
        advance();  // '*'
        while (pos_ < text_.size()) {
            if (starts_with("*/")) {
                advance();
                advance();
                return;
            }
            advance();
        }
        // unterminated: runs to end of input
    }

    void scan_quoted(char32_t quote) {
        advance();  // opening quote
        while (pos_ < text_.size()) {
            char32_t cp = peek();
            if (cp == '\\') {
                advance();
                if (pos_ < text_.size()) advance();
                continue;
            }
            advance();
            if (cp == quote) return;
        }
        // unterminated: runs to end of input
    }

    void scan_number() {
        if (peek() == '0' && (byte_at(1) == 'x' || byte_at(1) == 'X')) {
            advance();
            advance();
            while (pos_ < text_.size() && (is_hex_digit(peek()) || peek() == '_')) advance();
        } else if (peek() == '0' && (byte_at(1) == 'b' || byte_at(1) == 'B')) {
            advance();
            advance();
            while (pos_ < text_.size() && (peek() == '0' || peek() == '1' || peek() == '_'))
                advance();
        } else {
            while (pos_ < text_.size() && (is_digit(peek()) || peek() == '_')) advance();
            if (pos_ < text_.size() && peek() == '.' && is_digit(peek_second())) {
                advance();
                while (pos_ < text_.size() && (is_digit(peek()) || peek() == '_')) advance();
            }
            if (pos_ < text_.size() && (peek() == 'e' || peek() == 'E')) {
                std::size_t p = pos_;
                utf8::decode(text_, p);
                char32_t sign = p < text_.size() ? text_[p] : '\0';
                std::size_t digit_pos = p + ((sign == '+' || sign == '-') ? 1 : 0);
                if (digit_pos < text_.size() && is_digit(text_[digit_pos])) {
                    advance();  // e
                    if (sign == '+' || sign == '-') advance();
                    while (pos_ < text_.size() && is_digit(peek())) advance();
                }
            }
        }
        if (pos_ < text_.size()) {
            char32_t suffix = peek();
            if (suffix == 'f' || suffix == 'F' || suffix == 'd' || suffix == 'D' ||
                suffix == 'l' || suffix == 'L') {
                advance();
            }
        }
    }

    void scan_identifier() {
        advance();
        while (pos_ < text_.size() && is_ident_part(peek())) advance();
    }

    int match_operator() const {
        for (auto op : kOps4)
            if (starts_with(op)) return static_cast<int>(op.size());
        for (auto op : kOps3)
            if (starts_with(op)) return static_cast<int>(op.size());
        for (auto op : kOps2)
            if (starts_with(op)) return static_cast<int>(op.size());
        char32_t cp = peek();
        if (cp < 0x80 && kOps1.find(static_cast<char>(cp)) != std::string_view::npos) return 1;
        return 0;
    }
};

}  // namespace

std::string_view to_string(TokenKind kind) {
    switch (kind) {
        case TokenKind::Keyword: return "keyword";
        case TokenKind::Ident: return "ident";
        case TokenKind::Number: return "number";
        case TokenKind::String: return "string";
        case TokenKind::Char: return "char";
        case TokenKind::Operator: return "operator";
        case TokenKind::Punct: return "punct";
        case TokenKind::Comment: return "comment";
        case TokenKind::Other: return "other";
    }
    return "other";
}

bool is_keyword(std::string_view word) { return keyword_set().contains(word); }

std::vector<Token> tokenize(std::string_view content) { return Scanner(content).run(); }

std::vector<Token> tokenize(const SourceFile& source) { return tokenize(source.content); }

NormalizedStream normalize(const std::vector<Token>& tokens, NormalizationProfile profile,
                           std::string source_id) {
    NormalizedStream stream;
    stream.source_id = std::move(source_id);
    stream.symbols.reserve(tokens.size());
    stream.origins.reserve(tokens.size());

    for (const Token& tok : tokens) {
        if (profile == NormalizationProfile::Text) {
            stream.symbols.push_back(tok.text);
            stream.origins.push_back(tok.span);
            continue;
        }
        switch (tok.kind) {
            case TokenKind::Comment:
                continue;  // dropped
            case TokenKind::Ident:
                stream.symbols.emplace_back("ID");
                break;
            case TokenKind::Number:
                stream.symbols.emplace_back("NUM");
                break;
            case TokenKind::String:
                stream.symbols.emplace_back("STR");
                break;
            case TokenKind::Char:
                stream.symbols.emplace_back("CHR");
                break;
            case TokenKind::Other:
                stream.symbols.emplace_back("?");
                break;
            default:
                stream.symbols.push_back(tok.text);
                break;
        }
        stream.origins.push_back(tok.span);
    }
    return stream;
}

NormalizedStream normalize_source(const SourceFile& source, NormalizationProfile profile) {
    return normalize(tokenize(source), profile, source.id);
}

}  // namespace codesim
