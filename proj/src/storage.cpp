#include "topkbench/storage.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <map>
#include <stdexcept>
#include <unordered_set>

namespace topkbench {

namespace {

std::uint32_t gender_ref_for(std::vector<GenderRow>& genders, Gender g) {
    for (const GenderRow& row : genders)
        if (row.type == g) return row.id;
    GenderRow row;
    row.id = static_cast<std::uint32_t>(genders.size() + 1);
    row.type = g;
    genders.push_back(row);
    return row.id;
}

}  // namespace

const DocumentRow& NormalizedStore::document(DocId id) const {
    const auto it = doc_index_.find(id);
    if (it == doc_index_.end())
        throw std::out_of_range("unknown document id " + std::to_string(id));
    return documents_[it->second];
}

const AuthorRow& NormalizedStore::author(AuthorId id) const {
    const auto it = author_index_.find(id);
    if (it == author_index_.end())
        throw std::out_of_range("unknown author id " + std::to_string(id));
    return authors_[it->second];
}

void NormalizedStore::rebuild_indexes() {
    doc_index_.clear();
    author_index_.clear();
    doc_index_.reserve(documents_.size());
    for (std::size_t i = 0; i < documents_.size(); ++i) doc_index_[documents_[i].id] = i;
    author_index_.reserve(authors_.size());
    for (std::size_t i = 0; i < authors_.size(); ++i) author_index_[authors_[i].id] = i;
}

NormalizedStore load_normalized(std::span<const ProcessedDocument> docs) {
    NormalizedStore store;
    std::map<std::pair<double, double>, std::uint32_t> geo_index;
    std::unordered_map<std::string, WordRef> word_index;

    for (const ProcessedDocument& doc : docs) {
        const RawRecord& rec = doc.record;
        if (store.doc_index_.contains(rec.id))
            throw std::invalid_argument("duplicate document id " + std::to_string(rec.id));

        const auto geo_key = std::make_pair(rec.geo_x, rec.geo_y);
        auto geo_it = geo_index.find(geo_key);
        if (geo_it == geo_index.end()) {
            GeoLocationRow geo;
            geo.id = static_cast<std::uint32_t>(store.geo_locations_.size() + 1);
            geo.x = rec.geo_x;
            geo.y = rec.geo_y;
            store.geo_locations_.push_back(geo);
            geo_it = geo_index.emplace(geo_key, geo.id).first;
        }

        DocumentRow row;
        row.id = rec.id;
        row.raw_text = rec.raw_text;
        row.clean_text = doc.clean_text;
        row.lemma_text = doc.lemma_text;
        row.date = rec.date;
        row.lemma_length = doc.lemma_length;
        row.geo_ref = geo_it->second;
        store.doc_index_[rec.id] = store.documents_.size();
        store.documents_.push_back(std::move(row));

        if (!store.author_index_.contains(rec.author_id)) {
            AuthorRow author;
            author.id = rec.author_id;
            author.first = rec.author_first;
            author.last = rec.author_last;
            author.age = rec.age;
            author.gender_ref = gender_ref_for(store.genders_, rec.gender);
            store.author_index_[rec.author_id] = store.authors_.size();
            store.authors_.push_back(std::move(author));
        }
        store.documents_authors_.push_back({rec.id, rec.author_id});

        for (const VocabularyEntry& entry : doc.postings) {
            auto [it, inserted] = word_index.emplace(
                entry.term, static_cast<WordRef>(store.words_.size()));
            if (inserted) store.words_.push_back({it->second, entry.term});
            store.vocabulary_.push_back({rec.id, it->second, entry.count, entry.tf});
        }
    }
    return store;
}

const DocumentDimensionRow& StarStore::document(DocId id) const {
    const auto it = doc_index_.find(id);
    if (it == doc_index_.end())
        throw std::out_of_range("unknown document id " + std::to_string(id));
    return documents_[it->second];
}

const AuthorDimensionRow& StarStore::author(AuthorId id) const {
    const auto it = author_index_.find(id);
    if (it == author_index_.end())
        throw std::out_of_range("unknown author id " + std::to_string(id));
    return authors_[it->second];
}

StarStore to_star(const NormalizedStore& norm) {
    StarStore star;

    star.words_ = norm.words();

    star.documents_.reserve(norm.documents().size());
    std::unordered_map<DocId, Timestamp> doc_date;
    for (const DocumentRow& doc : norm.documents()) {
        DocumentDimensionRow row;
        row.id = doc.id;
        row.raw_text = doc.raw_text;
        row.clean_text = doc.clean_text;
        row.lemma_text = doc.lemma_text;
        row.lemma_length = doc.lemma_length;
        star.doc_index_[doc.id] = star.documents_.size();
        star.documents_.push_back(std::move(row));
        doc_date[doc.id] = doc.date;
    }

    std::unordered_map<std::uint32_t, Gender> gender_by_ref;
    for (const GenderRow& g : norm.genders()) gender_by_ref[g.id] = g.type;
    star.authors_.reserve(norm.authors().size());
    for (const AuthorRow& a : norm.authors()) {
        AuthorDimensionRow row;
        row.id = a.id;
        row.gender = gender_by_ref.at(a.gender_ref);
        row.age = a.age;
        row.first = a.first;
        row.last = a.last;
        star.author_index_[a.id] = star.authors_.size();
        star.authors_.push_back(std::move(row));
    }

    star.locations_.reserve(norm.geo_locations().size());
    for (const GeoLocationRow& g : norm.geo_locations())
        star.locations_.push_back({g.id, g.x, g.y});

    std::unordered_map<DocId, AuthorId> doc_author;
    for (const DocumentAuthorRow& link : norm.documents_authors())
        doc_author[link.doc_ref] = link.author_ref;
    std::unordered_map<DocId, std::uint32_t> doc_geo;
    for (const DocumentRow& doc : norm.documents()) doc_geo[doc.id] = doc.geo_ref;

    std::unordered_map<Timestamp, std::uint32_t> time_index;
    const auto time_ref_for = [&](Timestamp ts) {
        auto [it, inserted] = time_index.emplace(
            ts, static_cast<std::uint32_t>(star.times_.size() + 1));
        if (inserted) {
            const TimeParts parts = time_parts(ts);
            TimeDimensionRow row;
            row.id = it->second;
            row.minute = parts.minute;
            row.hour = parts.hour;
            row.day = parts.day;
            row.month = parts.month;
            row.year = parts.year;
            row.full_date = ts;
            star.times_.push_back(row);
        }
        return it->second;
    };

    star.fact_.reserve(norm.vocabulary().size());
    for (const VocabularyRow& v : norm.vocabulary()) {
        DocumentFactRow fact;
        fact.id_document = v.doc_ref;
        fact.id_word = v.word_ref;
        fact.id_author = doc_author.at(v.doc_ref);
        fact.id_time = time_ref_for(doc_date.at(v.doc_ref));
        fact.id_location = doc_geo.at(v.doc_ref);
        fact.count = v.count;
        fact.tf = v.tf;
        star.fact_.push_back(fact);
    }
    return star;
}

namespace {

// Shared subset handling: resolve the optional id set, validating membership.
template <typename HasDoc>
std::optional<std::unordered_set<DocId>> subset_filter(
    std::optional<std::span<const DocId>> subset, const HasDoc& has_document) {
    if (!subset) return std::nullopt;
    std::unordered_set<DocId> ids;
    ids.reserve(subset->size());
    for (DocId id : *subset) {
        if (!has_document(id))
            throw std::invalid_argument("stats subset names unknown document id " +
                                        std::to_string(id));
        ids.insert(id);
    }
    return ids;
}

}  // namespace

CorpusStats stats(const NormalizedStore& store, std::optional<std::span<const DocId>> subset) {
    const auto filter =
        subset_filter(subset, [&](DocId id) { return store.has_document(id); });
    const auto in_subset = [&](DocId id) { return !filter || filter->contains(id); };

    CorpusStats out;
    std::uint64_t total_len = 0;
    for (const DocumentRow& doc : store.documents()) {
        if (!in_subset(doc.id)) continue;
        ++out.n_docs;
        total_len += doc.lemma_length;
    }
    out.avg_doc_len = out.n_docs == 0 ? 0.0 : static_cast<double>(total_len) / out.n_docs;

    std::vector<std::size_t> freq(store.words().size(), 0);
    for (const VocabularyRow& v : store.vocabulary())
        if (in_subset(v.doc_ref)) ++freq[v.word_ref];
    for (const WordRow& w : store.words()) {
        if (freq[w.id] == 0) continue;
        out.doc_frequency.emplace(w.lemma, freq[w.id]);
    }
    out.vocab_size = out.doc_frequency.size();
    return out;
}

CorpusStats stats(const StarStore& store, std::optional<std::span<const DocId>> subset) {
    const auto filter =
        subset_filter(subset, [&](DocId id) { return store.has_document(id); });
    const auto in_subset = [&](DocId id) { return !filter || filter->contains(id); };

    CorpusStats out;
    std::uint64_t total_len = 0;
    for (const DocumentDimensionRow& doc : store.document_dimension()) {
        if (!in_subset(doc.id)) continue;
        ++out.n_docs;
        total_len += doc.lemma_length;
    }
    out.avg_doc_len = out.n_docs == 0 ? 0.0 : static_cast<double>(total_len) / out.n_docs;

    std::vector<std::size_t> freq(store.word_dimension().size(), 0);
    for (const DocumentFactRow& f : store.fact())
        if (in_subset(f.id_document)) ++freq[f.id_word];
    for (const WordRow& w : store.word_dimension()) {
        if (freq[w.id] == 0) continue;
        out.doc_frequency.emplace(w.lemma, freq[w.id]);
    }
    out.vocab_size = out.doc_frequency.size();
    return out;
}

// ---- snapshot ---------------------------------------------------------

namespace {

constexpr char kMagic[8] = {'T', 'K', 'B', 'S', 'N', 'A', 'P', '1'};
constexpr std::uint32_t kVersion = 1;

class Writer {
public:
    explicit Writer(std::ostream& out) : out_(out) {}

    void u32(std::uint32_t v) {
        char buf[4];
        for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
        out_.write(buf, 4);
    }
    void u64(std::uint64_t v) {
        char buf[8];
        for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
        out_.write(buf, 8);
    }
    void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
    void f64(double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, 8);
        u64(bits);
    }
    void str(const std::string& s) {
        u32(static_cast<std::uint32_t>(s.size()));
        out_.write(s.data(), static_cast<std::streamsize>(s.size()));
    }

private:
    std::ostream& out_;
};

class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    std::uint32_t u32() {
        char buf[4];
        read(buf, 4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf[i])) << (8 * i);
        return v;
    }
    std::uint64_t u64() {
        char buf[8];
        read(buf, 8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[i])) << (8 * i);
        return v;
    }
    std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
    double f64() {
        const std::uint64_t bits = u64();
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    }
    std::string str() {
        const std::uint32_t n = u32();
        std::string s(n, '\0');
        if (n > 0) read(s.data(), n);
        return s;
    }

private:
    void read(char* dst, std::size_t n) {
        in_.read(dst, static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in_.gcount()) != n)
            throw std::runtime_error("snapshot truncated");
    }
    std::istream& in_;
};

}  // namespace

void save_snapshot(const NormalizedStore& store, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open snapshot for writing: " + path);
    Writer w(out);
    out.write(kMagic, sizeof(kMagic));
    w.u32(kVersion);

    w.u64(store.documents().size());
    for (const DocumentRow& d : store.documents()) {
        w.u64(d.id);
        w.str(d.raw_text);
        w.str(d.clean_text);
        w.str(d.lemma_text);
        w.i64(d.date);
        w.u32(d.lemma_length);
        w.u32(d.geo_ref);
    }
    w.u64(store.authors().size());
    for (const AuthorRow& a : store.authors()) {
        w.u64(a.id);
        w.str(a.first);
        w.str(a.last);
        w.u32(a.age);
        w.u32(a.gender_ref);
    }
    w.u64(store.genders().size());
    for (const GenderRow& g : store.genders()) {
        w.u32(g.id);
        w.u32(static_cast<std::uint32_t>(g.type));
    }
    w.u64(store.documents_authors().size());
    for (const DocumentAuthorRow& link : store.documents_authors()) {
        w.u64(link.doc_ref);
        w.u64(link.author_ref);
    }
    w.u64(store.geo_locations().size());
    for (const GeoLocationRow& g : store.geo_locations()) {
        w.u32(g.id);
        w.f64(g.x);
        w.f64(g.y);
    }
    w.u64(store.words().size());
    for (const WordRow& word : store.words()) {
        w.u32(word.id);
        w.str(word.lemma);
    }
    w.u64(store.vocabulary().size());
    for (const VocabularyRow& v : store.vocabulary()) {
        w.u64(v.doc_ref);
        w.u32(v.word_ref);
        w.u32(v.count);
        w.f64(v.tf);
    }
    if (!out) throw std::runtime_error("snapshot write failed: " + path);
}

NormalizedStore load_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open snapshot: " + path);
    char magic[8];
    in.read(magic, sizeof(magic));
    if (in.gcount() != sizeof(magic) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw std::runtime_error("not a snapshot file: " + path);
    Reader r(in);
    const std::uint32_t version = r.u32();
    if (version != kVersion)
        throw std::runtime_error("unsupported snapshot version " + std::to_string(version));

    NormalizedStore store;
    store.documents_.resize(r.u64());
    for (DocumentRow& d : store.documents_) {
        d.id = r.u64();
        d.raw_text = r.str();
        d.clean_text = r.str();
        d.lemma_text = r.str();
        d.date = r.i64();
        d.lemma_length = r.u32();
        d.geo_ref = r.u32();
    }
    store.authors_.resize(r.u64());
    for (AuthorRow& a : store.authors_) {
        a.id = r.u64();
        a.first = r.str();
        a.last = r.str();
        a.age = r.u32();
        a.gender_ref = r.u32();
    }
    store.genders_.resize(r.u64());
    for (GenderRow& g : store.genders_) {
        g.id = r.u32();
        g.type = static_cast<Gender>(r.u32());
    }
    store.documents_authors_.resize(r.u64());
    for (DocumentAuthorRow& link : store.documents_authors_) {
        link.doc_ref = r.u64();
        link.author_ref = r.u64();
    }
    store.geo_locations_.resize(r.u64());
    for (GeoLocationRow& g : store.geo_locations_) {
        g.id = r.u32();
        g.x = r.f64();
        g.y = r.f64();
    }
    store.words_.resize(r.u64());
    for (WordRow& word : store.words_) {
        word.id = r.u32();
        word.lemma = r.str();
    }
    store.vocabulary_.resize(r.u64());
    for (VocabularyRow& v : store.vocabulary_) {
        v.doc_ref = r.u64();
        v.word_ref = r.u32();
        v.count = r.u32();
        v.tf = r.f64();
    }
    store.rebuild_indexes();
    return store;
}

}  // namespace topkbench
