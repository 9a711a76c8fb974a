#include "topkbench/weighting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace topkbench {

std::string to_string(Scheme s) {
    return s == Scheme::Tfidf ? "tfidf" : "okapi";
}

Scheme scheme_from_string(const std::string& s) {
    if (s == "tfidf") return Scheme::Tfidf;
    if (s == "okapi") return Scheme::Okapi;
    throw std::invalid_argument("unknown weighting scheme: \"" + s + "\"");
}

void check_params(const SchemeParams& p) {
    if (p.k < 0.0 || p.k > 1.0)
        throw std::invalid_argument("augmented-TF floor k must be in [0, 1]");
    if (p.b < 0.0 || p.b > 1.0)
        throw std::invalid_argument("length-normalization b must be in [0, 1]");
}

std::optional<std::string> param_warning(const SchemeParams& p) {
    if (p.k1 < 1.2 || p.k1 > 2.0)
        return "k1 = " + std::to_string(p.k1) + " is outside the customary [1.2, 2.0] range";
    return std::nullopt;
}

double tf(std::uint32_t count, std::uint32_t max_count, double k) {
    if (max_count == 0) throw std::invalid_argument("tf: max_count is zero (empty document)");
    if (count < 1 || count > max_count)
        throw std::invalid_argument("tf: count must satisfy 1 <= count <= max_count");
    return k + (1.0 - k) * static_cast<double>(count) / static_cast<double>(max_count);
}

double idf(std::size_t n_docs, std::size_t doc_freq) {
    if (doc_freq == 0 || doc_freq > n_docs)
        throw std::invalid_argument("idf: doc_freq must satisfy 1 <= n <= N");
    return 1.0 + std::log(static_cast<double>(n_docs) / static_cast<double>(doc_freq));
}

double tfidf(std::uint32_t count, std::uint32_t max_count, std::size_t n_docs,
             std::size_t doc_freq, const SchemeParams& p) {
    return tf(count, max_count, p.k) * idf(n_docs, doc_freq);
}

double okapi(std::uint32_t count, std::uint32_t max_count, std::size_t n_docs,
             std::size_t doc_freq, std::uint32_t doc_len, double avg_len,
             const SchemeParams& p) {
    if (avg_len <= 0.0) throw std::invalid_argument("okapi: avg_len must be positive");
    if (doc_len == 0) throw std::invalid_argument("okapi: doc_len must be >= 1");
    const double tf_value = tf(count, max_count, p.k);
    const double idf_value = idf(n_docs, doc_freq);
    const double denom = tf_value + p.k1 * (1.0 - p.b + p.b * doc_len / avg_len);
    return tf_value * idf_value * (p.k1 + 1.0) / denom;
}

double scheme_weight(double tf_value, double idf_value, std::uint32_t doc_len, double avg_len,
                     const SchemeParams& p) {
    const double w = tf_value * idf_value;
    if (p.scheme == Scheme::Tfidf) return w;
    if (avg_len <= 0.0) throw std::invalid_argument("scheme_weight: avg_len must be positive");
    const double denom = tf_value + p.k1 * (1.0 - p.b + p.b * doc_len / avg_len);
    return w * (p.k1 + 1.0) / denom;
}

double score_keyword(const std::string& term, const CorpusStats& stats,
                     std::span<const TermPosting> postings, const SchemeParams& p) {
    if (postings.empty()) return 0.0;
    const std::size_t n = stats.doc_freq(term);
    const double idf_value = idf(stats.n_docs, n);

    std::vector<TermPosting> ordered(postings.begin(), postings.end());
    std::sort(ordered.begin(), ordered.end(),
              [](const TermPosting& a, const TermPosting& b) { return a.doc_id < b.doc_id; });

    double sum = 0.0;
    for (const TermPosting& post : ordered) {
        const double tf_value = tf(post.count, post.max_count, p.k);
        sum += scheme_weight(tf_value, idf_value, post.doc_len, stats.avg_doc_len, p);
    }
    return sum;
}

double score_document(const std::vector<std::string>& query_terms, const ProcessedDocument& doc,
                      const CorpusStats& stats, const SchemeParams& p) {
    if (query_terms.empty()) throw std::invalid_argument("score_document: empty query");

    std::uint32_t max_count = 0;
    for (const VocabularyEntry& e : doc.postings) max_count = std::max(max_count, e.count);

    double sum = 0.0;
    std::unordered_set<std::string> seen;
    for (const std::string& q : query_terms) {
        if (!seen.insert(q).second) continue;
        const auto it = std::find_if(doc.postings.begin(), doc.postings.end(),
                                     [&](const VocabularyEntry& e) { return e.term == q; });
        if (it == doc.postings.end()) continue;  // absent terms contribute 0
        const double tf_value = tf(it->count, max_count, p.k);
        const double idf_value = idf(stats.n_docs, stats.doc_freq(q));
        sum += scheme_weight(tf_value, idf_value, doc.lemma_length, stats.avg_doc_len, p);
    }
    return sum;
}

}  // namespace topkbench
