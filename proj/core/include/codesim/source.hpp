#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace codesim {

// Half-open byte range [start, end) into a file's content.
struct ByteSpan {
    std::size_t start = 0;
    std::size_t end = 0;

    std::size_t size() const { return end - start; }
    bool operator==(const ByteSpan&) const = default;
};

// One submission (or the instructor template). `content` is UTF-8 text;
// `id` is unique within a corpus.
struct SourceFile {
    std::string id;
    std::string path;
    std::string content;
};

namespace utf8 {

// True when `text` is well-formed UTF-8 (no overlongs, surrogates, or
// truncated sequences).
bool validate(std::string_view text);

// Decodes the code point starting at `pos` and advances `pos` past it.
// Malformed bytes decode as U+FFFD, consuming a single byte, so iteration
// always makes progress.
char32_t decode(std::string_view text, std::size_t& pos);

}  // namespace utf8

}  // namespace codesim
