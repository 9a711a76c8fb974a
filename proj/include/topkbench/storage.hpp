#pragma once

#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "topkbench/stats.hpp"
#include "topkbench/types.hpp"

namespace topkbench {

// ---- normalized layout ----------------------------------------------------

struct DocumentRow {
    DocId id = 0;
    std::string raw_text;
    std::string clean_text;
    std::string lemma_text;
    Timestamp date = 0;
    std::uint32_t lemma_length = 0;
    std::uint32_t geo_ref = 0;
};

struct AuthorRow {
    AuthorId id = 0;
    std::string first;
    std::string last;
    unsigned age = 0;
    std::uint32_t gender_ref = 0;
};

struct GenderRow {
    std::uint32_t id = 0;
    Gender type = Gender::Male;
};

struct DocumentAuthorRow {
    DocId doc_ref = 0;
    AuthorId author_ref = 0;
};

struct GeoLocationRow {
    std::uint32_t id = 0;
    double x = 0.0;
    double y = 0.0;
};

struct WordRow {
    WordRef id = 0;
    std::string lemma;
};

struct VocabularyRow {
    DocId doc_ref = 0;
    WordRef word_ref = 0;
    std::uint32_t count = 0;
    double tf = 0.0;
};

// Bridge-table layout of one corpus. Immutable after load; only primary-key
// lookups are indexed.
class NormalizedStore {
public:
    const std::vector<DocumentRow>& documents() const { return documents_; }
    const std::vector<AuthorRow>& authors() const { return authors_; }
    const std::vector<GenderRow>& genders() const { return genders_; }
    const std::vector<DocumentAuthorRow>& documents_authors() const { return documents_authors_; }
    const std::vector<GeoLocationRow>& geo_locations() const { return geo_locations_; }
    const std::vector<WordRow>& words() const { return words_; }
    const std::vector<VocabularyRow>& vocabulary() const { return vocabulary_; }

    // Primary-key lookups; throw on an unknown id.
    const DocumentRow& document(DocId id) const;
    const AuthorRow& author(AuthorId id) const;
    bool has_document(DocId id) const { return doc_index_.contains(id); }

private:
    friend NormalizedStore load_normalized(std::span<const ProcessedDocument> docs);
    friend NormalizedStore load_snapshot(const std::string& path);

    void rebuild_indexes();

    std::vector<DocumentRow> documents_;
    std::vector<AuthorRow> authors_;
    std::vector<GenderRow> genders_;
    std::vector<DocumentAuthorRow> documents_authors_;
    std::vector<GeoLocationRow> geo_locations_;
    std::vector<WordRow> words_;
    std::vector<VocabularyRow> vocabulary_;

    std::unordered_map<DocId, std::size_t> doc_index_;
    std::unordered_map<AuthorId, std::size_t> author_index_;
};

// ---- star layout ------------------------------------------------------

struct DocumentFactRow {
    DocId id_document = 0;
    WordRef id_word = 0;
    AuthorId id_author = 0;
    std::uint32_t id_time = 0;
    std::uint32_t id_location = 0;
    std::uint32_t count = 0;
    double tf = 0.0;
};

struct DocumentDimensionRow {
    DocId id = 0;
    std::string raw_text;
    std::string clean_text;
    std::string lemma_text;
    std::uint32_t lemma_length = 0;
};

struct TimeDimensionRow {
    std::uint32_t id = 0;
    unsigned minute = 0;
    unsigned hour = 0;
    unsigned day = 0;
    unsigned month = 0;
    int year = 0;
    Timestamp full_date = 0;
};

struct AuthorDimensionRow {
    AuthorId id = 0;
    Gender gender = Gender::Male;
    unsigned age = 0;
    std::string first;
    std::string last;
};

struct LocationDimensionRow {
    std::uint32_t id = 0;
    double x = 0.0;
    double y = 0.0;
};

class StarStore {
public:
    const std::vector<DocumentFactRow>& fact() const { return fact_; }
    const std::vector<DocumentDimensionRow>& document_dimension() const { return documents_; }
    const std::vector<WordRow>& word_dimension() const { return words_; }
    const std::vector<TimeDimensionRow>& time_dimension() const { return times_; }
    const std::vector<AuthorDimensionRow>& author_dimension() const { return authors_; }
    const std::vector<LocationDimensionRow>& location_dimension() const { return locations_; }

    const DocumentDimensionRow& document(DocId id) const;
    const AuthorDimensionRow& author(AuthorId id) const;
    bool has_document(DocId id) const { return doc_index_.contains(id); }

private:
    friend StarStore to_star(const NormalizedStore& norm);

    std::vector<DocumentFactRow> fact_;
    std::vector<DocumentDimensionRow> documents_;
    std::vector<WordRow> words_;
    std::vector<TimeDimensionRow> times_;
    std::vector<AuthorDimensionRow> authors_;
    std::vector<LocationDimensionRow> locations_;

    std::unordered_map<DocId, std::size_t> doc_index_;
    std::unordered_map<AuthorId, std::size_t> author_index_;
};

// ---- construction and statistics -------------------------------------

// Throws on a duplicate document id (names the id). Word ids are assigned
// densely in first-seen order; geo locations and genders are deduplicated.
NormalizedStore load_normalized(std::span<const ProcessedDocument> docs);

StarStore to_star(const NormalizedStore& norm);

// Statistics over the whole corpus or, when given, a document-id subset.
// Throws if the subset names an unknown document.
CorpusStats stats(const NormalizedStore& store,
                  std::optional<std::span<const DocId>> subset = std::nullopt);
CorpusStats stats(const StarStore& store,
                  std::optional<std::span<const DocId>> subset = std::nullopt);

// ---- snapshot ---------------------------------------------------------

// Versioned little-endian binary image of a NormalizedStore (the star layout
// is rederived with to_star). See docs/snapshot-format.md.
void save_snapshot(const NormalizedStore& store, const std::string& path);
NormalizedStore load_snapshot(const std::string& path);

}  // namespace topkbench
