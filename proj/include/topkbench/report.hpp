#pragma once

#include <span>
#include <string>
#include <vector>

namespace topkbench {

// One summarized measurement as read back from a summary JSON file. Enum
// fields stay as strings so the renderer round-trips unknown future values.
struct SummaryRow {
    double sf = 1.0;
    std::size_t n_docs = 0;
    std::string query;
    std::string mode;
    std::string scheme;
    std::string layout;
    std::string gender;
    unsigned shards = 1;
    unsigned k = 10;
    std::size_t reps = 0;
    double mean_ms = 0.0;
    double stddev_ms = 0.0;
    double selectivity = 0.0;
    unsigned published_complexity = 0;
    unsigned breakdown_total = 0;
    std::string result_digest;
};

// Parses a summary produced by summary_json(). Throws std::runtime_error on
// an unknown format marker or missing fields.
std::vector<SummaryRow> parse_summary_json(const std::string& text);

// Fixed-width text table of every row, sorted for stable output.
std::string render_table(std::span<const SummaryRow> rows);

// Line chart of mean_ms against sf, one series per query id, restricted to
// rows matching (mode, scheme, layout, gender). Returns an empty string when
// nothing matches.
std::string render_svg_chart(std::span<const SummaryRow> rows, const std::string& mode,
                             const std::string& scheme, const std::string& layout,
                             const std::string& gender);

}  // namespace topkbench
