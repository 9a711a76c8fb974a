#include "topkbench/engine.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace topkbench {

std::string to_string(QueryId q) {
    switch (q) {
        case QueryId::Q1: return "Q1";
        case QueryId::Q2: return "Q2";
        case QueryId::Q3: return "Q3";
        case QueryId::Q4: return "Q4";
    }
    return "Q?";
}

std::string to_string(QueryMode m) {
    return m == QueryMode::Keywords ? "keywords" : "documents";
}

std::string to_string(Layout l) {
    return l == Layout::Normalized ? "normalized" : "star";
}

QueryId query_id_from_string(const std::string& s) {
    if (s == "Q1" || s == "q1") return QueryId::Q1;
    if (s == "Q2" || s == "q2") return QueryId::Q2;
    if (s == "Q3" || s == "q3") return QueryId::Q3;
    if (s == "Q4" || s == "q4") return QueryId::Q4;
    throw std::invalid_argument("unknown query id: " + s);
}

QueryMode mode_from_string(const std::string& s) {
    if (s == "keywords") return QueryMode::Keywords;
    if (s == "documents") return QueryMode::Documents;
    throw std::invalid_argument("unknown mode: " + s);
}

Layout layout_from_string(const std::string& s) {
    if (s == "normalized") return Layout::Normalized;
    if (s == "star") return Layout::Star;
    throw std::invalid_argument("unknown layout: " + s);
}

namespace {

bool wants_date(QueryId q) { return q == QueryId::Q2 || q == QueryId::Q4; }
bool wants_geo(QueryId q) { return q == QueryId::Q3 || q == QueryId::Q4; }

}  // namespace

void validate_spec(const QuerySpec& spec) {
    check_params(spec.scheme);
    if (wants_date(spec.query_id)) {
        if (!spec.params.start_date || !spec.params.end_date)
            throw std::invalid_argument(to_string(spec.query_id) +
                                        " requires start_date and end_date");
        if (*spec.params.start_date >= *spec.params.end_date)
            throw std::invalid_argument("start_date must precede end_date");
    }
    if (wants_geo(spec.query_id)) {
        if (!spec.params.start_x || !spec.params.end_x || !spec.params.start_y ||
            !spec.params.end_y)
            throw std::invalid_argument(to_string(spec.query_id) +
                                        " requires x and y bounds");
        if (*spec.params.start_x >= *spec.params.end_x)
            throw std::invalid_argument("start_x must be below end_x");
        if (*spec.params.start_y >= *spec.params.end_y)
            throw std::invalid_argument("start_y must be below end_y");
    }
    if (spec.mode == QueryMode::Documents && spec.params.terms.empty())
        throw std::invalid_argument("documents mode requires at least one search term");
}

namespace {

// One posting restricted to the constrained subset. doc_len is the lemma
// length of the owning document; tf is the stored augmented term frequency.
struct SubsetPosting {
    DocId doc = 0;
    WordRef word = 0;
    double tf = 0.0;
    std::uint32_t doc_len = 0;
};

// Everything the aggregation needs, produced by a layout-specific scan.
struct LayoutScan {
    std::vector<DocId> subset;  // ascending, c1..c3 and join-reachable
    double avgdl = 0.0;
    std::size_t word_count = 0;
    std::vector<SubsetPosting> postings;        // sorted by (doc, word)
    std::vector<std::string> terms;             // word ref -> lemma
};

bool date_ok(const QuerySpec& spec, Timestamp date) {
    if (!wants_date(spec.query_id)) return true;
    return date >= *spec.params.start_date && date <= *spec.params.end_date;
}

bool geo_ok(const QuerySpec& spec, double x, double y) {
    if (!wants_geo(spec.query_id)) return true;
    return x >= *spec.params.start_x && x <= *spec.params.end_x &&
           y >= *spec.params.start_y && y <= *spec.params.end_y;
}

void finish_scan(LayoutScan& scan) {
    std::sort(scan.postings.begin(), scan.postings.end(),
              [](const SubsetPosting& a, const SubsetPosting& b) {
                  return a.doc != b.doc ? a.doc < b.doc : a.word < b.word;
              });
    std::sort(scan.subset.begin(), scan.subset.end());
    if (!scan.subset.empty()) {
        // avgdl over the subset; every subset doc has at least one posting.
        unsigned long long total = 0;
        DocId last = 0;
        bool first = true;
        for (const auto& p : scan.postings) {
            if (first || p.doc != last) total += p.doc_len;
            last = p.doc;
            first = false;
        }
        scan.avgdl = static_cast<double>(total) / static_cast<double>(scan.subset.size());
    }
}

LayoutScan scan_normalized(const NormalizedStore& store, const QuerySpec& spec) {
    LayoutScan scan;
    scan.word_count = store.words().size();
    scan.terms.reserve(scan.word_count);
    for (const auto& w : store.words()) scan.terms.push_back(w.lemma);

    // c1: resolve the gender row, then the matching author ids.
    std::uint32_t gender_ref = 0;
    for (const auto& g : store.genders())
        if (g.type == spec.params.gender) gender_ref = g.id;
    if (gender_ref == 0) return scan;  // no such gender in this corpus

    std::unordered_set<AuthorId> author_pass;
    for (const auto& a : store.authors())
        if (a.gender_ref == gender_ref) author_pass.insert(a.id);

    std::unordered_set<DocId> linked;
    for (const auto& da : store.documents_authors())
        if (author_pass.count(da.author_ref)) linked.insert(da.doc_ref);

    // c2/c3 over the document rows; skip documents without postings (they
    // cannot reach the result through the vocabulary join).
    std::unordered_map<DocId, std::uint32_t> doc_len;
    for (const auto& d : store.documents()) {
        if (!linked.count(d.id) || d.lemma_length == 0) continue;
        if (!date_ok(spec, d.date)) continue;
        if (wants_geo(spec.query_id)) {
            const auto& geo = store.geo_locations().at(d.geo_ref - 1);
            if (!geo_ok(spec, geo.x, geo.y)) continue;
        }
        scan.subset.push_back(d.id);
        doc_len.emplace(d.id, d.lemma_length);
    }

    scan.postings.reserve(scan.subset.empty() ? 0 : store.vocabulary().size() / 2);
    for (const auto& v : store.vocabulary()) {
        auto it = doc_len.find(v.doc_ref);
        if (it == doc_len.end()) continue;
        scan.postings.push_back({v.doc_ref, v.word_ref, v.tf, it->second});
    }
    finish_scan(scan);
    return scan;
}

LayoutScan scan_star(const StarStore& store, const QuerySpec& spec) {
    LayoutScan scan;
    scan.word_count = store.word_dimension().size();
    scan.terms.reserve(scan.word_count);
    for (const auto& w : store.word_dimension()) scan.terms.push_back(w.lemma);

    std::unordered_set<AuthorId> author_pass;
    for (const auto& a : store.author_dimension())
        if (a.gender == spec.params.gender) author_pass.insert(a.id);

    // Time and location ids are dense (assigned on star conversion), so the
    // constraint verdicts fit in flat tables sized by the largest id.
    std::uint32_t max_time = 0, max_loc = 0;
    for (const auto& t : store.time_dimension()) max_time = std::max(max_time, t.id);
    for (const auto& l : store.location_dimension()) max_loc = std::max(max_loc, l.id);

    std::vector<char> time_ok(max_time + 1, 1);
    if (wants_date(spec.query_id))
        for (const auto& t : store.time_dimension())
            time_ok[t.id] = date_ok(spec, t.full_date) ? 1 : 0;

    std::vector<char> loc_ok(max_loc + 1, 1);
    if (wants_geo(spec.query_id))
        for (const auto& l : store.location_dimension())
            loc_ok[l.id] = geo_ok(spec, l.x, l.y) ? 1 : 0;

    // Document ids are the original (possibly sparse) ids, so use a map.
    std::unordered_map<DocId, std::uint32_t> doc_len;
    doc_len.reserve(store.document_dimension().size());
    for (const auto& d : store.document_dimension()) doc_len.emplace(d.id, d.lemma_length);

    std::unordered_set<DocId> seen;
    for (const auto& f : store.fact()) {
        if (!author_pass.count(f.id_author)) continue;
        if (!time_ok[f.id_time] || !loc_ok[f.id_location]) continue;
        scan.postings.push_back({f.id_document, f.id_word, f.tf, doc_len.at(f.id_document)});
        if (seen.insert(f.id_document).second) scan.subset.push_back(f.id_document);
    }
    finish_scan(scan);
    return scan;
}

CorpusStats stats_from_scan(const LayoutScan& scan,
                            const std::vector<std::uint32_t>& freq) {
    CorpusStats stats;
    stats.n_docs = scan.subset.size();
    stats.avg_doc_len = scan.avgdl;
    for (WordRef w = 0; w < freq.size(); ++w) {
        if (freq[w] == 0) continue;
        stats.doc_frequency.emplace(scan.terms[w], freq[w]);
    }
    stats.vocab_size = stats.doc_frequency.size();
    return stats;
}

// Document frequencies per word over the subset. Postings are (doc, word)
// sorted, so a word repeats for the same doc never (postings are unique per
// doc/word) and counting is a single pass.
std::vector<std::uint32_t> subset_frequencies(const LayoutScan& scan) {
    std::vector<std::uint32_t> freq(scan.word_count, 0);
    for (const auto& p : scan.postings) ++freq[p.word];
    return freq;
}

double posting_weight(const SubsetPosting& p, double idf_value, double avgdl,
                      const SchemeParams& params) {
    return scheme_weight(p.tf, idf_value, p.doc_len, avgdl, params);
}

RankedResult rank_keywords(const LayoutScan& scan, const QuerySpec& spec,
                           unsigned shard_count) {
    RankedResult result;
    result.mode = QueryMode::Keywords;
    result.subset_size = scan.subset.size();

    const auto freq = subset_frequencies(scan);
    result.stats_used = stats_from_scan(scan, freq);
    if (scan.subset.empty()) return result;

    std::vector<double> idf_by_word(scan.word_count, 0.0);
    for (WordRef w = 0; w < freq.size(); ++w)
        if (freq[w] > 0) idf_by_word[w] = idf(scan.subset.size(), freq[w]);

    std::vector<double> sums(scan.word_count, 0.0);
    if (shard_count <= 1) {
        // Single instance: accumulate in (doc, word) order.
        for (const auto& p : scan.postings)
            sums[p.word] += posting_weight(p, idf_by_word[p.word], scan.avgdl, spec.scheme);
    } else {
        // Map phase: partition postings by doc id modulo shard_count; each
        // shard keeps its own partial sums. Reduce merges in shard order.
        std::vector<std::vector<SubsetPosting>> parts(shard_count);
        for (const auto& p : scan.postings)
            parts[static_cast<std::size_t>(p.doc % shard_count)].push_back(p);
        std::vector<std::future<std::vector<double>>> futures;
        futures.reserve(shard_count);
        for (unsigned s = 0; s < shard_count; ++s) {
            futures.push_back(std::async(std::launch::async, [&, s] {
                std::vector<double> partial(scan.word_count, 0.0);
                for (const auto& p : parts[s])
                    partial[p.word] +=
                        posting_weight(p, idf_by_word[p.word], scan.avgdl, spec.scheme);
                return partial;
            }));
        }
        for (auto& f : futures) {
            const auto partial = f.get();
            for (WordRef w = 0; w < partial.size(); ++w) sums[w] += partial[w];
        }
    }

    result.entries.reserve(result.stats_used.vocab_size);
    for (WordRef w = 0; w < freq.size(); ++w) {
        if (freq[w] == 0) continue;
        RankedEntry e;
        e.term = scan.terms[w];
        e.score = sums[w];
        result.entries.push_back(std::move(e));
    }
    std::sort(result.entries.begin(), result.entries.end(),
              [](const RankedEntry& a, const RankedEntry& b) {
                  return a.score != b.score ? a.score > b.score : a.term < b.term;
              });
    if (result.entries.size() > spec.k) result.entries.resize(spec.k);
    return result;
}

RankedResult rank_documents(const LayoutScan& scan, const QuerySpec& spec,
                            unsigned shard_count) {
    RankedResult result;
    result.mode = QueryMode::Documents;

    // Statistics come from the c1..c3 subset, before c4 trims it.
    const auto freq = subset_frequencies(scan);
    result.stats_used = stats_from_scan(scan, freq);

    // c4: resolve the distinct query terms to word refs. Terms missing from
    // the corpus vocabulary simply contribute nothing.
    std::unordered_set<std::string> distinct(spec.params.terms.begin(),
                                             spec.params.terms.end());
    std::vector<char> wanted(scan.word_count, 0);
    for (WordRef w = 0; w < scan.word_count; ++w)
        if (distinct.count(scan.terms[w])) wanted[w] = 1;

    if (scan.subset.empty()) return result;

    std::vector<double> idf_by_word(scan.word_count, 0.0);
    for (WordRef w = 0; w < freq.size(); ++w)
        if (freq[w] > 0 && wanted[w]) idf_by_word[w] = idf(scan.subset.size(), freq[w]);

    // Candidate postings in (doc, word) order; docs stay grouped.
    std::vector<std::pair<DocId, double>> partial;  // (doc, accumulated score)
    auto accumulate = [&](const std::vector<SubsetPosting>& postings,
                          std::vector<std::pair<DocId, double>>& out) {
        for (const auto& p : postings) {
            if (!wanted[p.word]) continue;
            const double w = posting_weight(p, idf_by_word[p.word], scan.avgdl, spec.scheme);
            if (!out.empty() && out.back().first == p.doc)
                out.back().second += w;
            else
                out.emplace_back(p.doc, w);
        }
    };

    if (shard_count <= 1) {
        accumulate(scan.postings, partial);
    } else {
        std::vector<std::vector<SubsetPosting>> parts(shard_count);
        for (const auto& p : scan.postings)
            parts[static_cast<std::size_t>(p.doc % shard_count)].push_back(p);
        std::vector<std::future<std::vector<std::pair<DocId, double>>>> futures;
        futures.reserve(shard_count);
        for (unsigned s = 0; s < shard_count; ++s) {
            futures.push_back(std::async(std::launch::async, [&, s] {
                std::vector<std::pair<DocId, double>> out;
                accumulate(parts[s], out);
                return out;
            }));
        }
        for (auto& f : futures) {
            auto out = f.get();
            partial.insert(partial.end(), out.begin(), out.end());
        }
        // Each document lives in exactly one shard, so concatenation holds
        // one entry per candidate; order is restored by the canonical sort.
    }

    result.subset_size = partial.size();  // n(Q) with c4 applied
    result.entries.reserve(partial.size());
    for (const auto& [doc, score] : partial) {
        RankedEntry e;
        e.doc_id = doc;
        e.score = score;
        result.entries.push_back(std::move(e));
    }
    std::sort(result.entries.begin(), result.entries.end(),
              [](const RankedEntry& a, const RankedEntry& b) {
                  return a.score != b.score ? a.score > b.score : a.doc_id < b.doc_id;
              });
    if (result.entries.size() > spec.k) result.entries.resize(spec.k);
    return result;
}

RankedResult rank(const LayoutScan& scan, const QuerySpec& spec, unsigned shard_count) {
    return spec.mode == QueryMode::Keywords ? rank_keywords(scan, spec, shard_count)
                                            : rank_documents(scan, spec, shard_count);
}

std::vector<DocId> constrained_ids(const LayoutScan& scan, const QuerySpec& spec) {
    if (spec.mode == QueryMode::Keywords) return scan.subset;
    std::unordered_set<std::string> distinct(spec.params.terms.begin(),
                                             spec.params.terms.end());
    std::vector<char> wanted(scan.word_count, 0);
    for (WordRef w = 0; w < scan.word_count; ++w)
        if (distinct.count(scan.terms[w])) wanted[w] = 1;
    std::vector<DocId> ids;
    DocId last = 0;
    for (const auto& p : scan.postings) {
        if (!wanted[p.word]) continue;
        if (ids.empty() || last != p.doc) ids.push_back(p.doc);
        last = p.doc;
    }
    return ids;  // ascending: postings are doc-sorted
}

}  // namespace

std::vector<DocId> apply_constraints(const NormalizedStore& store, const QuerySpec& spec) {
    validate_spec(spec);
    return constrained_ids(scan_normalized(store, spec), spec);
}

std::vector<DocId> apply_constraints(const StarStore& store, const QuerySpec& spec) {
    validate_spec(spec);
    return constrained_ids(scan_star(store, spec), spec);
}

RankedResult topk_keywords(const NormalizedStore& store, const QuerySpec& spec) {
    QuerySpec s = spec;
    s.mode = QueryMode::Keywords;
    validate_spec(s);
    return rank_keywords(scan_normalized(store, s), s, 1);
}

RankedResult topk_keywords(const StarStore& store, const QuerySpec& spec) {
    QuerySpec s = spec;
    s.mode = QueryMode::Keywords;
    validate_spec(s);
    return rank_keywords(scan_star(store, s), s, 1);
}

RankedResult topk_documents(const NormalizedStore& store, const QuerySpec& spec) {
    QuerySpec s = spec;
    s.mode = QueryMode::Documents;
    validate_spec(s);
    return rank_documents(scan_normalized(store, s), s, 1);
}

RankedResult topk_documents(const StarStore& store, const QuerySpec& spec) {
    QuerySpec s = spec;
    s.mode = QueryMode::Documents;
    validate_spec(s);
    return rank_documents(scan_star(store, s), s, 1);
}

RankedResult evaluate(const NormalizedStore& store, const QuerySpec& spec) {
    validate_spec(spec);
    return rank(scan_normalized(store, spec), spec, 1);
}

RankedResult evaluate(const StarStore& store, const QuerySpec& spec) {
    validate_spec(spec);
    return rank(scan_star(store, spec), spec, 1);
}

RankedResult sharded_evaluate(const NormalizedStore& store, const QuerySpec& spec,
                              unsigned shard_count) {
    if (shard_count == 0) throw std::invalid_argument("shard_count must be at least 1");
    validate_spec(spec);
    return rank(scan_normalized(store, spec), spec, shard_count);
}

RankedResult sharded_evaluate(const StarStore& store, const QuerySpec& spec,
                              unsigned shard_count) {
    if (shard_count == 0) throw std::invalid_argument("shard_count must be at least 1");
    validate_spec(spec);
    return rank(scan_star(store, spec), spec, shard_count);
}

}  // namespace topkbench
