#include "codesim/errors.hpp"
#include "codesim/evidence.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace codesim {

namespace {

// Eight distinguishable highlight colors; tiles cycle through them so the
// matching run in both panes shares a class.
constexpr const char* kStyle = R"(
body { font-family: sans-serif; margin: 1rem; background: #fafafa; color: #222; }
h1 { font-size: 1.2rem; }
table.meta { border-collapse: collapse; margin-bottom: 1rem; }
table.meta td { padding: 0.15rem 0.8rem 0.15rem 0; font-size: 0.9rem; }
div.panes { display: grid; grid-template-columns: 1fr 1fr; gap: 1rem; align-items: start; }
div.pane { background: #fff; border: 1px solid #ccc; border-radius: 4px; overflow: auto; }
div.pane h2 { font-size: 1rem; margin: 0; padding: 0.4rem 0.6rem; background: #eee; border-bottom: 1px solid #ccc; }
div.pane h2 span.cov { font-weight: normal; font-size: 0.85rem; color: #555; }
pre.code { margin: 0; padding: 0.6rem; font-size: 0.85rem; line-height: 1.35; white-space: pre-wrap; word-break: break-all; }
mark.c0 { background: #ffd54f; }
mark.c1 { background: #aed581; }
mark.c2 { background: #4fc3f7; }
mark.c3 { background: #f48fb1; }
mark.c4 { background: #ce93d8; }
mark.c5 { background: #ffab91; }
mark.c6 { background: #80cbc4; }
mark.c7 { background: #e6ee9c; }
mark.tpl { background: #e0e0e0; color: #555; outline: 1px dashed #999; }
p.legend { font-size: 0.8rem; color: #555; }
)";

std::string escape_html(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c; break;
        }
    }
    return out;
}

std::string percent(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f%%", fraction * 100.0);
    return buf;
}

std::string score(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", value);
    return buf;
}

struct Highlight {
    ByteSpan span;
    std::size_t tile_index;
    bool template_derived;
};

// One pane: escaped source with each highlight's byte range wrapped in a
// single <mark> element.
void append_pane(std::ostringstream& out, const std::string& id, const std::string& content,
                 double coverage, std::vector<Highlight> highlights) {
    std::sort(highlights.begin(), highlights.end(),
              [](const Highlight& x, const Highlight& y) { return x.span.start < y.span.start; });

    out << "<div class=\"pane\">\n<h2>" << escape_html(id) << " <span class=\"cov\">("
        << percent(coverage) << " matched)</span></h2>\n<pre class=\"code\">";
    std::size_t pos = 0;
    for (const auto& h : highlights) {
        out << escape_html(std::string_view(content).substr(pos, h.span.start - pos));
        out << "<mark class=\"" << (h.template_derived ? "tpl" : "c" + std::to_string(h.tile_index % 8))
            << "\" title=\""
            << (h.template_derived ? std::string("matches instructor template")
                                   : "match " + std::to_string(h.tile_index + 1))
            << "\">";
        out << escape_html(std::string_view(content).substr(h.span.start, h.span.size()));
        out << "</mark>";
        pos = h.span.end;
    }
    out << escape_html(std::string_view(content).substr(pos));
    out << "</pre>\n</div>\n";
}

}  // namespace

std::string render_html(const EvidenceReport& report, const SourceFile& a, const SourceFile& b,
                        const RenderInfo& info) {
    std::vector<Highlight> highlights_a, highlights_b;
    highlights_a.reserve(report.tiles.size());
    highlights_b.reserve(report.tiles.size());
    for (std::size_t i = 0; i < report.tiles.size(); ++i) {
        const Tile& tile = report.tiles[i];
        if (tile.a_bytes.end > a.content.size() || tile.a_bytes.start > tile.a_bytes.end) {
            throw SpanOutOfRange("tile byte span exceeds file " + a.id);
        }
        if (tile.b_bytes.end > b.content.size() || tile.b_bytes.start > tile.b_bytes.end) {
            throw SpanOutOfRange("tile byte span exceeds file " + b.id);
        }
        highlights_a.push_back({tile.a_bytes, i, tile.template_derived});
        highlights_b.push_back({tile.b_bytes, i, tile.template_derived});
    }

    std::size_t template_tiles = 0;
    for (const auto& tile : report.tiles) template_tiles += tile.template_derived ? 1 : 0;

    std::ostringstream out;
    out << "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n<title>"
        << escape_html(report.id_a) << " vs " << escape_html(report.id_b)
        << "</title>\n<style>" << kStyle << "</style>\n</head>\n<body>\n";
    out << "<h1>Overlap evidence: " << escape_html(report.id_a) << " vs "
        << escape_html(report.id_b) << "</h1>\n";

    out << "<table class=\"meta\">\n";
    out << "<tr><td>matched tiles</td><td>" << report.tiles.size() << " (" << template_tiles
        << " from template)</td></tr>\n";
    out << "<tr><td>coverage</td><td>" << escape_html(report.id_a) << ": "
        << percent(report.coverage_a) << ", " << escape_html(report.id_b) << ": "
        << percent(report.coverage_b) << "</td></tr>\n";
    out << "<tr><td>minimum match length</td><td>" << report.min_match
        << " symbols</td></tr>\n";
    if (info.scores) {
        out << "<tr><td>similarity</td><td>pair " << score(info.scores->sim_ab) << ", vs template "
            << score(info.scores->sim_at) << " / " << score(info.scores->sim_bt)
            << "</td></tr>\n";
    }
    if (info.probability) {
        out << "<tr><td>model probability</td><td>" << score(*info.probability)
            << "</td></tr>\n";
    }
    out << "</table>\n";

    out << "<div class=\"panes\">\n";
    append_pane(out, report.id_a, a.content, report.coverage_a, std::move(highlights_a));
    append_pane(out, report.id_b, b.content, report.coverage_b, std::move(highlights_b));
    out << "</div>\n";
    out << "<p class=\"legend\">Colored runs appear in both files; gray dashed runs also occur "
           "in the instructor template.</p>\n";
    out << "</body>\n</html>\n";
    return out.str();
}

}  // namespace codesim
