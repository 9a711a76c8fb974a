#pragma once

#include <optional>
#include <string>
#include <vector>

#include "topkbench/stats.hpp"
#include "topkbench/storage.hpp"
#include "topkbench/types.hpp"
#include "topkbench/weighting.hpp"

namespace topkbench {

enum class QueryId : std::uint8_t { Q1, Q2, Q3, Q4 };
enum class QueryMode : std::uint8_t { Keywords, Documents };
enum class Layout : std::uint8_t { Normalized, Star };

std::string to_string(QueryId q);
std::string to_string(QueryMode m);
std::string to_string(Layout l);
QueryId query_id_from_string(const std::string& s);
QueryMode mode_from_string(const std::string& s);
Layout layout_from_string(const std::string& s);

struct QueryParams {
    Gender gender = Gender::Male;
    std::optional<Timestamp> start_date;  // c2, Q2/Q4
    std::optional<Timestamp> end_date;
    std::optional<double> start_x;        // c3, Q3/Q4
    std::optional<double> end_x;
    std::optional<double> start_y;
    std::optional<double> end_y;
    std::vector<std::string> terms;       // c4, documents mode
};

struct QuerySpec {
    QueryId query_id = QueryId::Q1;
    QueryMode mode = QueryMode::Keywords;
    QueryParams params;
    SchemeParams scheme;
    unsigned k = 10;
};

// Throws std::invalid_argument when required parameters for the query id are
// missing or out of order, or when documents mode has no search terms.
void validate_spec(const QuerySpec& spec);

struct RankedEntry {
    std::string term;   // keywords mode
    DocId doc_id = 0;   // documents mode
    double score = 0.0;
};

struct RankedResult {
    QueryMode mode = QueryMode::Keywords;
    std::vector<RankedEntry> entries;  // score desc, ties by key asc, length <= k
    std::size_t subset_size = 0;       // n(Q); includes c4 in documents mode
    CorpusStats stats_used;            // subset statistics the scores used
};

// Ids of documents satisfying the query's constraint conjunction, ascending.
// Documents reach a query result only through the vocabulary/fact join, so
// documents with no postings never qualify. In documents mode c4 (at least
// one search term present) applies as well.
std::vector<DocId> apply_constraints(const NormalizedStore& store, const QuerySpec& spec);
std::vector<DocId> apply_constraints(const StarStore& store, const QuerySpec& spec);

// Group-by-term aggregation over the constrained subset; weights use
// subset-level N, n and avgdl.
RankedResult topk_keywords(const NormalizedStore& store, const QuerySpec& spec);
RankedResult topk_keywords(const StarStore& store, const QuerySpec& spec);

// Group-by-document aggregation. Subset statistics are taken after c1..c3
// but before c4, so scores reflect the demographic/time/geo slice.
RankedResult topk_documents(const NormalizedStore& store, const QuerySpec& spec);
RankedResult topk_documents(const StarStore& store, const QuerySpec& spec);

// Dispatches on spec.mode.
RankedResult evaluate(const NormalizedStore& store, const QuerySpec& spec);
RankedResult evaluate(const StarStore& store, const QuerySpec& spec);

// Two-phase execution: a global phase computes the subset and its statistics,
// shards partition the subset by document id modulo shard_count and emit
// partial group sums, and a reduce phase merges partials in shard order
// before the canonical sort. shard_count == 1 reproduces the single-instance
// result exactly.
RankedResult sharded_evaluate(const NormalizedStore& store, const QuerySpec& spec,
                              unsigned shard_count);
RankedResult sharded_evaluate(const StarStore& store, const QuerySpec& spec,
                              unsigned shard_count);

}  // namespace topkbench
