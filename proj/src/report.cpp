#include "topkbench/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "topkbench/bench.hpp"

namespace topkbench {

std::vector<SummaryRow> parse_summary_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("summary parse error: ") + e.what());
    }
    if (!j.contains("format") || j["format"] != kSummaryFormatVersion)
        throw std::runtime_error("unrecognized summary format (expected " +
                                 std::string(kSummaryFormatVersion) + ")");
    std::vector<SummaryRow> rows;
    for (const auto& r : j.at("measurements")) {
        SummaryRow row;
        row.sf = r.at("sf").get<double>();
        row.n_docs = r.at("n_docs").get<std::size_t>();
        row.query = r.at("query").get<std::string>();
        row.mode = r.at("mode").get<std::string>();
        row.scheme = r.at("scheme").get<std::string>();
        row.layout = r.at("layout").get<std::string>();
        row.gender = r.at("gender").get<std::string>();
        row.shards = r.at("shards").get<unsigned>();
        row.k = r.at("k").get<unsigned>();
        row.reps = r.at("reps").get<std::size_t>();
        row.mean_ms = r.at("mean_ms").get<double>();
        row.stddev_ms = r.at("stddev_ms").get<double>();
        row.selectivity = r.at("selectivity").get<double>();
        row.published_complexity = r.at("published_complexity").get<unsigned>();
        row.breakdown_total = r.at("breakdown_total").get<unsigned>();
        row.result_digest = r.at("result_digest").get<std::string>();
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

std::string fmt(double v, int prec) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*f", prec, v);
    return buf;
}

}  // namespace

std::string render_table(std::span<const SummaryRow> rows) {
    std::vector<SummaryRow> sorted(rows.begin(), rows.end());
    std::sort(sorted.begin(), sorted.end(), [](const SummaryRow& a, const SummaryRow& b) {
        return std::tie(a.sf, a.mode, a.scheme, a.layout, a.gender, a.query) <
               std::tie(b.sf, b.mode, b.scheme, b.layout, b.gender, b.query);
    });

    std::vector<std::vector<std::string>> cells;
    cells.push_back({"sf", "n_docs", "query", "mode", "scheme", "layout", "gender",
                     "mean_ms", "stddev_ms", "selectivity", "complexity"});
    for (const auto& r : sorted) {
        cells.push_back({fmt(r.sf, 2), std::to_string(r.n_docs), r.query, r.mode, r.scheme,
                         r.layout, r.gender, fmt(r.mean_ms, 3), fmt(r.stddev_ms, 3),
                         fmt(r.selectivity, 4), std::to_string(r.published_complexity)});
    }

    std::vector<std::size_t> width(cells[0].size(), 0);
    for (const auto& row : cells)
        for (std::size_t c = 0; c < row.size(); ++c)
            width[c] = std::max(width[c], row[c].size());

    std::ostringstream os;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        for (std::size_t c = 0; c < cells[i].size(); ++c) {
            os << cells[i][c] << std::string(width[c] - cells[i][c].size(), ' ');
            if (c + 1 < cells[i].size()) os << "  ";
        }
        os << '\n';
        if (i == 0) {
            std::size_t total = 0;
            for (std::size_t c = 0; c < width.size(); ++c) total += width[c] + (c ? 2 : 0);
            os << std::string(total, '-') << '\n';
        }
    }
    return os.str();
}

std::string render_svg_chart(std::span<const SummaryRow> rows, const std::string& mode,
                             const std::string& scheme, const std::string& layout,
                             const std::string& gender) {
    // series: query id -> (sf -> mean_ms)
    std::map<std::string, std::map<double, double>> series;
    for (const auto& r : rows) {
        if (r.mode != mode || r.scheme != scheme || r.layout != layout || r.gender != gender)
            continue;
        series[r.query][r.sf] = r.mean_ms;
    }
    if (series.empty()) return {};

    std::set<double> sfs;
    double max_ms = 0.0;
    for (const auto& [q, pts] : series)
        for (const auto& [sf, ms] : pts) {
            sfs.insert(sf);
            max_ms = std::max(max_ms, ms);
        }
    if (max_ms <= 0.0) max_ms = 1.0;
    const double min_sf = *sfs.begin();
    const double max_sf = *sfs.rbegin();
    const double sf_span = max_sf > min_sf ? max_sf - min_sf : 1.0;

    const double w = 640, h = 400;
    const double ml = 64, mr = 140, mt = 32, mb = 48;  // margins
    const double pw = w - ml - mr, ph = h - mt - mb;

    auto px = [&](double sf) { return ml + (sf - min_sf) / sf_span * pw; };
    auto py = [&](double ms) { return mt + ph - ms / (max_ms * 1.05) * ph; };

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
        << "\" viewBox=\"0 0 " << w << " " << h << "\">\n"
        << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n"
        << "<text x=\"" << ml << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">"
        << "mean_ms vs sf — " << mode << " / " << scheme << " / " << layout << " / "
        << gender << "</text>\n";

    // axes
    svg << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw
        << "\" y2=\"" << mt + ph << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
        << mt + ph << "\" stroke=\"black\"/>\n";
    for (double sf : sfs) {
        svg << "<line x1=\"" << px(sf) << "\" y1=\"" << mt + ph << "\" x2=\"" << px(sf)
            << "\" y2=\"" << mt + ph + 5 << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << px(sf) << "\" y=\"" << mt + ph + 20
            << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">"
            << fmt(sf, 2) << "</text>\n";
    }
    for (int i = 0; i <= 5; ++i) {
        const double ms = max_ms * 1.05 * i / 5.0;
        svg << "<line x1=\"" << ml - 5 << "\" y1=\"" << py(ms) << "\" x2=\"" << ml
            << "\" y2=\"" << py(ms) << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << ml - 8 << "\" y=\"" << py(ms) + 4
            << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">"
            << fmt(ms, ms < 10 ? 2 : 1) << "</text>\n";
    }
    svg << "<text x=\"" << ml + pw / 2 << "\" y=\"" << h - 8
        << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">sf</text>\n";

    int ci = 0;
    for (const auto& [q, pts] : series) {
        const char* color = colors[ci % 4];
        std::ostringstream poly;
        for (const auto& [sf, ms] : pts) poly << px(sf) << "," << py(ms) << " ";
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\""
            << poly.str() << "\"/>\n";
        for (const auto& [sf, ms] : pts)
            svg << "<circle cx=\"" << px(sf) << "\" cy=\"" << py(ms)
                << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        const double ly = mt + 16 + 18 * ci;
        svg << "<line x1=\"" << ml + pw + 12 << "\" y1=\"" << ly - 4 << "\" x2=\""
            << ml + pw + 34 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << ml + pw + 40 << "\" y=\"" << ly
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << q << "</text>\n";
        ++ci;
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace topkbench
