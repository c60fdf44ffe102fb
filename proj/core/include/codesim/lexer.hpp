#pragma once

#include "codesim/source.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace codesim {

enum class TokenKind {
    Keyword,
    Ident,
    Number,
    String,
    Char,
    Operator,
    Punct,
    Comment,
    Other,
};

std::string_view to_string(TokenKind kind);

struct Token {
    TokenKind kind = TokenKind::Other;
    std::string text;
    ByteSpan span;
    int line = 1;  // 1-based
    int col = 1;   // 1-based, counted in code points
};

// Java keywords plus the Processing primitive type `color`. API names such
// as setup/draw/size are deliberately plain identifiers.
bool is_keyword(std::string_view word);

// Splits source text into an ordered, non-overlapping token cover of all
// non-whitespace bytes. Total: never throws on any input; bytes that fit no
// rule come back as single Other tokens. Line comments, block comments,
// string/char literals with escapes, and Unicode identifiers are recognized.
// An unterminated string or comment extends to end of input.
std::vector<Token> tokenize(const SourceFile& source);
std::vector<Token> tokenize(std::string_view content);

// Normalized: comments dropped, identifiers/literals abstracted so that a
// consistent rename or any comment edit leaves the stream unchanged.
// Text: every token kept verbatim, comments included.
enum class NormalizationProfile { Normalized, Text };

struct NormalizedStream {
    std::vector<std::string> symbols;
    std::vector<ByteSpan> origins;  // aligned 1:1 with symbols
    std::string source_id;

    std::size_t size() const { return symbols.size(); }
};

NormalizedStream normalize(const std::vector<Token>& tokens, NormalizationProfile profile,
                           std::string source_id = {});

// tokenize + normalize in one go.
NormalizedStream normalize_source(const SourceFile& source, NormalizationProfile profile);

}  // namespace codesim
