#include "codesim/source.hpp"

namespace codesim::utf8 {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

inline bool is_continuation(unsigned char b) { return (b & 0xC0) == 0x80; }

}  // namespace

char32_t decode(std::string_view text, std::size_t& pos) {
    const auto* bytes = reinterpret_cast<const unsigned char*>(text.data());
    const std::size_t n = text.size();
    unsigned char b0 = bytes[pos];

    if (b0 < 0x80) {
        ++pos;
        return b0;
    }
    if ((b0 & 0xE0) == 0xC0) {
        if (pos + 1 < n && is_continuation(bytes[pos + 1])) {
            char32_t cp = (char32_t(b0 & 0x1F) << 6) | (bytes[pos + 1] & 0x3F);
            if (cp >= 0x80) {  // reject overlong
                pos += 2;
                return cp;
            }
        }
    } else if ((b0 & 0xF0) == 0xE0) {
        if (pos + 2 < n && is_continuation(bytes[pos + 1]) && is_continuation(bytes[pos + 2])) {
            char32_t cp = (char32_t(b0 & 0x0F) << 12) | (char32_t(bytes[pos + 1] & 0x3F) << 6) |
                          (bytes[pos + 2] & 0x3F);
            if (cp >= 0x800 && !(cp >= 0xD800 && cp <= 0xDFFF)) {
                pos += 3;
                return cp;
            }
        }
    } else if ((b0 & 0xF8) == 0xF0) {
        if (pos + 3 < n && is_continuation(bytes[pos + 1]) && is_continuation(bytes[pos + 2]) &&
            is_continuation(bytes[pos + 3])) {
            char32_t cp = (char32_t(b0 & 0x07) << 18) | (char32_t(bytes[pos + 1] & 0x3F) << 12) |
                          (char32_t(bytes[pos + 2] & 0x3F) << 6) | (bytes[pos + 3] & 0x3F);
            if (cp >= 0x10000 && cp <= 0x10FFFF) {
                pos += 4;
                return cp;
            }
        }
    }
    ++pos;
    return kReplacement;
}

bool validate(std::string_view text) {
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t before = pos;
        char32_t cp = decode(text, pos);
        // decode() consumes a single byte only when it hit a malformed
        // sequence; a genuine U+FFFD in the input consumes three.
        if (cp == kReplacement && pos - before == 1) return false;
    }
    return true;
}

}  // namespace codesim::utf8
