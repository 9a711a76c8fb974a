#pragma once

// Corpus builders and comparison helpers shared by the unit and acceptance
// suites.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "topkbench/engine.hpp"
#include "topkbench/generator.hpp"
#include "topkbench/storage.hpp"
#include "topkbench/text.hpp"
#include "topkbench/types.hpp"

#include "oracle.hpp"

namespace helpers {

inline topkbench::RawRecord make_record(topkbench::DocId id, const std::string& text,
                                        topkbench::Gender gender,
                                        topkbench::Timestamp date = 1442448000,
                                        double x = 30.0, double y = 0.0) {
    topkbench::RawRecord rec;
    rec.id = id;
    rec.raw_text = text;
    rec.author_id = 2 * id + (gender == topkbench::Gender::Male ? 1 : 2);
    rec.author_first = "pat";
    rec.author_last = "doe";
    rec.age = 30;
    rec.gender = gender;
    rec.date = date;
    rec.geo_x = x;
    rec.geo_y = y;
    return rec;
}

inline std::vector<topkbench::ProcessedDocument> preprocess_all(
    const std::vector<topkbench::RawRecord>& records, double tf_k = 0.5) {
    const topkbench::StopwordSet& stopwords = topkbench::default_stopwords();
    topkbench::SuffixRuleLemmatizer lemmatizer;
    std::vector<topkbench::ProcessedDocument> docs;
    docs.reserve(records.size());
    for (const auto& rec : records)
        docs.push_back(topkbench::preprocess(rec, stopwords, lemmatizer, tf_k));
    return docs;
}

// Seeded random corpus through the real generator + preprocessing pipeline.
inline std::vector<topkbench::ProcessedDocument> random_corpus(std::uint64_t n,
                                                               std::uint64_t seed) {
    topkbench::GeneratorConfig cfg;
    cfg.sf = 1.0;
    cfg.base = n;
    cfg.seed = seed;
    return preprocess_all(topkbench::generate(cfg));
}

// Table 1 parameter block on a QuerySpec.
inline topkbench::QuerySpec table1_spec(topkbench::QueryId query, topkbench::QueryMode mode,
                                        topkbench::Scheme scheme, topkbench::Gender gender) {
    topkbench::QuerySpec spec;
    spec.query_id = query;
    spec.mode = mode;
    spec.scheme.scheme = scheme;
    spec.params.gender = gender;
    spec.params.start_date = topkbench::parse_timestamp("2015-09-17 00:00:00");
    spec.params.end_date = topkbench::parse_timestamp("2015-09-18 00:00:00");
    spec.params.start_x = 20.0;
    spec.params.end_x = 40.0;
    spec.params.start_y = -100.0;
    spec.params.end_y = 100.0;
    spec.params.terms = {"think", "today", "friday"};
    return spec;
}

// The same parameters for the oracle.
inline oracle::Params oracle_params(const topkbench::QuerySpec& spec) {
    oracle::Params p;
    p.query = spec.query_id;
    p.gender = spec.params.gender;
    p.start_date = spec.params.start_date;
    p.end_date = spec.params.end_date;
    p.start_x = spec.params.start_x;
    p.end_x = spec.params.end_x;
    p.start_y = spec.params.start_y;
    p.end_y = spec.params.end_y;
    p.terms = spec.params.terms;
    p.scheme = spec.scheme;
    p.k = spec.k;
    return p;
}

// Full (untruncated) oracle ranking for the spec's query.
inline std::vector<oracle::Entry> oracle_full_ranking(
    std::span<const topkbench::ProcessedDocument> docs, const topkbench::QuerySpec& spec) {
    oracle::Params p = oracle_params(spec);
    p.k = std::numeric_limits<unsigned>::max();
    return spec.mode == topkbench::QueryMode::Keywords ? oracle::topk_keywords(docs, p)
                                                       : oracle::topk_documents(docs, p);
}

// True when the engine output matches the first k entries of the full oracle
// ranking: per-rank scores within tol, and keys in the same order wherever
// scores are distinguishable. Entries whose oracle scores tie within tol form
// a group; the two implementations sum in different orders, so last-ulp
// rounding can permute a group, and the keys only need to agree as a set.
// When the top-k boundary cuts a group, the engine's picks just have to come
// from that group. On mismatch, fills `why`.
inline bool matches_oracle(const topkbench::RankedResult& got,
                           const std::vector<oracle::Entry>& full, unsigned k, double tol,
                           std::string& why) {
    const std::size_t want_size = std::min<std::size_t>(k, full.size());
    if (got.entries.size() != want_size) {
        why = "size " + std::to_string(got.entries.size()) + " vs oracle " +
              std::to_string(want_size);
        return false;
    }
    const bool keywords = got.mode == topkbench::QueryMode::Keywords;
    auto got_key = [&](std::size_t i) {
        return keywords ? got.entries[i].term : std::to_string(got.entries[i].doc_id);
    };
    auto want_key = [&](std::size_t i) {
        return keywords ? full[i].term : std::to_string(full[i].doc);
    };

    std::size_t a = 0;
    while (a < want_size) {
        std::size_t b = a + 1;  // extend the tie group led by rank a
        while (b < full.size() && full[a].score - full[b].score <= tol) ++b;
        const std::size_t cut = std::min(b, want_size);

        std::vector<std::string> got_keys, want_keys;
        for (std::size_t i = a; i < cut; ++i) {
            if (std::fabs(got.entries[i].score - full[i].score) > tol) {
                why = "rank " + std::to_string(i) + ": score off by " +
                      std::to_string(std::fabs(got.entries[i].score - full[i].score));
                return false;
            }
            got_keys.push_back(got_key(i));
        }
        for (std::size_t i = a; i < b; ++i) want_keys.push_back(want_key(i));
        std::sort(got_keys.begin(), got_keys.end());
        std::sort(want_keys.begin(), want_keys.end());
        const bool ok = b <= want_size
                            ? got_keys == want_keys
                            : std::includes(want_keys.begin(), want_keys.end(),
                                            got_keys.begin(), got_keys.end());
        if (!ok) {
            why = "tie group at rank " + std::to_string(a) + ": keys differ";
            return false;
        }
        a = b;
    }
    return true;
}

}  // namespace helpers
