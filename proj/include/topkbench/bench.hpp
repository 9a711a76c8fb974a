#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "topkbench/engine.hpp"
#include "topkbench/storage.hpp"

namespace topkbench {

struct ProtocolConfig {
    unsigned reps_keywords = 40;
    unsigned reps_documents = 10;
    bool warmup = true;
    unsigned shards = 1;              // >1 routes through sharded_evaluate
    std::vector<QuerySpec> suite;     // must be non-empty
    std::vector<double> sf_labels;    // optional; when set, one label per store
    std::vector<Layout> layouts = {Layout::Normalized, Layout::Star};
    // Called once per engine execution, warm-ups included; lets tests verify
    // the warm-up policy without touching the timed region.
    std::function<void()> on_execute;
};

// One corpus at one scale factor, materialized in both layouts.
struct BenchStore {
    double sf = 1.0;
    NormalizedStore normalized;
    StarStore star;
};

// One (spec, store, layout) measurement.
struct Measurement {
    double sf = 1.0;
    std::size_t n_docs = 0;           // actual document count, kept honest
    QuerySpec spec;
    Layout layout = Layout::Normalized;
    unsigned shards = 1;
    std::vector<double> samples_ms;   // |samples| == configured reps
    double mean_ms = 0.0;
    double stddev_ms = 0.0;           // population formula
    double selectivity = 0.0;
    unsigned published_complexity = 0;
    std::string result_digest;        // sha-256 hex of the ranked output
};

struct BenchReport {
    std::vector<Measurement> measurements;
};

// Report serialization format identifiers; bump on schema change.
inline constexpr const char* kCsvFormatVersion = "topkbench-csv-v1";
inline constexpr const char* kSummaryFormatVersion = "topkbench-summary-v1";

// S(Q) = 1 - n(Q)/N with n(Q) = |apply_constraints| (c4 included in
// documents mode) and N the corpus document count. Throws on an empty corpus.
double selectivity(const NormalizedStore& store, const QuerySpec& spec);
double selectivity(const StarStore& store, const QuerySpec& spec);

// Arithmetic mean and population standard deviation. Throws on empty input.
std::pair<double, double> summarize(std::span<const double> samples);

// Canonical digest of a ranked output (sha-256 hex). Two results digest
// equal iff keys, order and score bit patterns all match.
std::string result_digest(const RankedResult& result);

// Runs the full protocol: for every store, every suite spec, and both
// layouts, one untimed warm-up (when configured) followed by the configured
// repetitions under a monotonic clock. Engine errors are rethrown annotated
// with the failing combination. Measurements run sequentially.
BenchReport run_protocol(std::span<const BenchStore> stores, const ProtocolConfig& config);

// CSV rows, one per timed repetition. Columns: sf, n_docs, query, mode,
// scheme, layout, shards, rep, time_ms, gender.
void write_csv(const BenchReport& report, std::ostream& out);

// JSON summary: means, stddevs, selectivities, complexities, digests.
std::string summary_json(const BenchReport& report);

}  // namespace topkbench
