#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "topkbench/stats.hpp"
#include "topkbench/types.hpp"

namespace topkbench {

enum class Scheme : std::uint8_t { Tfidf, Okapi };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

struct SchemeParams {
    Scheme scheme = Scheme::Tfidf;
    double k = 0.5;    // augmented-TF floor
    double k1 = 1.2;   // Okapi saturation
    double b = 0.75;   // Okapi length normalization
};

// Throws on k or b outside [0, 1]; k1 outside [1.2, 2.0] only yields a warning.
void check_params(const SchemeParams& p);
std::optional<std::string> param_warning(const SchemeParams& p);

// Augmented term frequency: k + (1-k) * count / max_count.
double tf(std::uint32_t count, std::uint32_t max_count, double k);

// 1 + ln(N/n). Natural log; the base rescales IDF uniformly but can change
// Okapi rankings, so every route in this project uses ln.
double idf(std::size_t n_docs, std::size_t doc_freq);

double tfidf(std::uint32_t count, std::uint32_t max_count, std::size_t n_docs,
             std::size_t doc_freq, const SchemeParams& p);

// tfidf * (k1+1) / (tf + k1 * (1 - b + b * doc_len / avg_len)).
double okapi(std::uint32_t count, std::uint32_t max_count, std::size_t n_docs,
             std::size_t doc_freq, std::uint32_t doc_len, double avg_len,
             const SchemeParams& p);

// Scheme-dispatched weight from an already-materialized augmented TF,
// as stored in the vocabulary.
double scheme_weight(double tf_value, double idf_value, std::uint32_t doc_len, double avg_len,
                     const SchemeParams& p);

// One term occurrence as seen from the scoring side.
struct TermPosting {
    DocId doc_id = 0;
    std::uint32_t count = 0;
    std::uint32_t max_count = 0;  // most frequent term in the same document
    std::uint32_t doc_len = 0;
};

// Sum of per-document weights for one term, Eq.-(2)/(3) style. Stats must
// describe the subset the postings were taken from. Summation runs in
// document-id order. No postings -> 0.
double score_keyword(const std::string& term, const CorpusStats& stats,
                     std::span<const TermPosting> postings, const SchemeParams& p);

// Sum over the query terms present in the document. Duplicated query terms
// count once. Throws on an empty query.
double score_document(const std::vector<std::string>& query_terms, const ProcessedDocument& doc,
                      const CorpusStats& stats, const SchemeParams& p);

}  // namespace topkbench
