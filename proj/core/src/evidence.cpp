#include "codesim/evidence.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace codesim {

namespace {

// Interned symbol streams so the tiling loop compares ints, not strings.
std::pair<std::vector<std::int32_t>, std::vector<std::int32_t>> intern_symbols(
    const NormalizedStream& a, const NormalizedStream& b) {
    std::unordered_map<std::string_view, std::int32_t> ids;
    auto intern = [&](const std::vector<std::string>& symbols) {
        std::vector<std::int32_t> out;
        out.reserve(symbols.size());
        for (const auto& s : symbols) {
            auto [it, inserted] = ids.emplace(s, static_cast<std::int32_t>(ids.size()));
            out.push_back(it->second);
        }
        return out;
    };
    return {intern(a.symbols), intern(b.symbols)};
}

// Total symbols of `tiles` covered by the union of [start, start+length)
// intervals in `intervals` (non-overlapping, sorted by start).
std::int64_t covered_symbols(std::int32_t start, std::int32_t length,
                             const std::vector<std::pair<std::int32_t, std::int32_t>>& intervals) {
    const std::int64_t lo = start;
    const std::int64_t hi = start + length;
    std::int64_t covered = 0;
    for (const auto& [s, e] : intervals) {
        const std::int64_t left = std::max<std::int64_t>(lo, s);
        const std::int64_t right = std::min<std::int64_t>(hi, e);
        if (right > left) covered += right - left;
    }
    return covered;
}

}  // namespace

std::vector<Tile> greedy_string_tiling(const NormalizedStream& a, const NormalizedStream& b,
                                       int min_match) {
    if (min_match < 1) throw std::invalid_argument("min_match must be >= 1");

    const auto [sa, sb] = intern_symbols(a, b);
    const auto la = sa.size();
    const auto lb = sb.size();
    std::vector<Tile> tiles;
    if (la == 0 || lb == 0) return tiles;

    std::vector<char> marked_a(la, 0), marked_b(lb, 0);
    // ext[i*(lb+1) + j] = length of the matching unmarked run starting at
    // (i, j); recomputed after each tile since marks change.
    std::vector<std::int32_t> ext((la + 1) * (lb + 1), 0);
    const auto stride = lb + 1;

    for (;;) {
        for (std::size_t i = la; i-- > 0;) {
            if (marked_a[i]) {
                std::fill_n(ext.begin() + static_cast<std::ptrdiff_t>(i * stride), lb, 0);
                continue;
            }
            for (std::size_t j = lb; j-- > 0;) {
                ext[i * stride + j] = (!marked_b[j] && sa[i] == sb[j])
                                          ? ext[(i + 1) * stride + j + 1] + 1
                                          : 0;
            }
        }

        std::int32_t best_len = 0;
        std::size_t best_i = 0, best_j = 0;
        for (std::size_t i = 0; i < la; ++i) {
            for (std::size_t j = 0; j < lb; ++j) {
                if (ext[i * stride + j] > best_len) {
                    best_len = ext[i * stride + j];
                    best_i = i;
                    best_j = j;
                }
            }
        }
        if (best_len < min_match) break;

        std::fill_n(marked_a.begin() + static_cast<std::ptrdiff_t>(best_i), best_len, 1);
        std::fill_n(marked_b.begin() + static_cast<std::ptrdiff_t>(best_j), best_len, 1);

        Tile tile;
        tile.a_start = static_cast<std::int32_t>(best_i);
        tile.b_start = static_cast<std::int32_t>(best_j);
        tile.length = best_len;
        tile.a_bytes = {a.origins[best_i].start, a.origins[best_i + best_len - 1].end};
        tile.b_bytes = {b.origins[best_j].start, b.origins[best_j + best_len - 1].end};
        tiles.push_back(tile);
    }

    std::sort(tiles.begin(), tiles.end(),
              [](const Tile& x, const Tile& y) { return x.a_start < y.a_start; });
    return tiles;
}

std::vector<Tile> mark_template(std::vector<Tile> tiles, const std::vector<Tile>& a_vs_template,
                                const std::vector<Tile>& b_vs_template, double overlap_fraction) {
    if (overlap_fraction <= 0.0 || overlap_fraction > 1.0) {
        throw std::invalid_argument("overlap_fraction must be in (0, 1]");
    }

    std::vector<std::pair<std::int32_t, std::int32_t>> a_intervals, b_intervals;
    a_intervals.reserve(a_vs_template.size());
    for (const auto& t : a_vs_template) a_intervals.emplace_back(t.a_start, t.a_start + t.length);
    b_intervals.reserve(b_vs_template.size());
    for (const auto& t : b_vs_template) b_intervals.emplace_back(t.a_start, t.a_start + t.length);

    for (auto& tile : tiles) {
        if (tile.length == 0) continue;
        const double frac_a =
            static_cast<double>(covered_symbols(tile.a_start, tile.length, a_intervals)) /
            static_cast<double>(tile.length);
        const double frac_b =
            static_cast<double>(covered_symbols(tile.b_start, tile.length, b_intervals)) /
            static_cast<double>(tile.length);
        tile.template_derived = frac_a >= overlap_fraction && frac_b >= overlap_fraction;
    }
    return tiles;
}

EvidenceReport build_evidence(const NormalizedStream& a, const NormalizedStream& b,
                              const NormalizedStream* template_stream, int min_match,
                              double overlap_fraction) {
    EvidenceReport report;
    report.id_a = a.source_id;
    report.id_b = b.source_id;
    report.min_match = min_match;
    report.tiles = greedy_string_tiling(a, b, min_match);

    if (template_stream != nullptr && template_stream->size() > 0) {
        const auto a_vs_t = greedy_string_tiling(a, *template_stream, min_match);
        const auto b_vs_t = greedy_string_tiling(b, *template_stream, min_match);
        report.tiles = mark_template(std::move(report.tiles), a_vs_t, b_vs_t, overlap_fraction);
    }

    std::int64_t covered = 0;
    for (const auto& tile : report.tiles) covered += tile.length;
    report.coverage_a =
        a.size() > 0 ? static_cast<double>(covered) / static_cast<double>(a.size()) : 0.0;
    report.coverage_b =
        b.size() > 0 ? static_cast<double>(covered) / static_cast<double>(b.size()) : 0.0;
    return report;
}

}  // namespace codesim
