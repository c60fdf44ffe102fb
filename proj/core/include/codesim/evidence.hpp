#pragma once

#include "codesim/features.hpp"
#include "codesim/lexer.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace codesim {

// One matched run between two files: `length` symbols starting at a_start
// in file A and b_start in file B, verbatim-equal on both sides. Byte spans
// cover the run in the original sources (first symbol start to last symbol
// end, so gaps left by stripped comments stay inside the highlight).
struct Tile {
    std::int32_t a_start = 0;
    std::int32_t b_start = 0;
    std::int32_t length = 0;
    ByteSpan a_bytes;
    ByteSpan b_bytes;
    bool template_derived = false;
};

// Wise-style greedy string tiling: repeatedly take the longest common
// contiguous run between still-unmarked regions of a and b until the longest
// remaining run is shorter than min_match. Length ties break toward the
// smallest a_start, then the smallest b_start. Returned tiles never overlap
// in either file's symbol index space and are sorted by a_start.
std::vector<Tile> greedy_string_tiling(const NormalizedStream& a, const NormalizedStream& b,
                                       int min_match);

// Flags a pair tile as template_derived when at least overlap_fraction of
// its a-side symbols lie inside a_vs_template tiles AND the same holds for
// its b-side against b_vs_template.
std::vector<Tile> mark_template(std::vector<Tile> tiles, const std::vector<Tile>& a_vs_template,
                                const std::vector<Tile>& b_vs_template,
                                double overlap_fraction = 0.8);

struct EvidenceReport {
    std::string id_a;
    std::string id_b;
    std::vector<Tile> tiles;  // sorted by a_start
    double coverage_a = 0.0;  // fraction of A's symbols inside tiles
    double coverage_b = 0.0;
    int min_match = 8;
};

// Tiling plus template marking in one call. template_stream may be null.
EvidenceReport build_evidence(const NormalizedStream& a, const NormalizedStream& b,
                              const NormalizedStream* template_stream, int min_match = 8,
                              double overlap_fraction = 0.8);

// Optional extras for the report header.
struct RenderInfo {
    std::optional<PairFeatures> scores;
    std::optional<double> probability;
};

// Renders a self-contained side-by-side HTML document: both files in full,
// each tile's byte range wrapped in a <mark> element (exactly two per tile,
// one per pane), matching tiles sharing a color class, template-derived
// tiles muted and labelled. All source text is HTML-escaped. Throws
// SpanOutOfRange if a tile's byte span exceeds its file.
std::string render_html(const EvidenceReport& report, const SourceFile& a, const SourceFile& b,
                        const RenderInfo& info = {});

}  // namespace codesim
