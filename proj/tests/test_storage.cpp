#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "topkbench/storage.hpp"

#include "helpers.hpp"

using namespace topkbench;

namespace {

// Four documents, two sharing coordinates and two sharing a timestamp, so
// the dedup paths in both layouts are exercised.
std::vector<ProcessedDocument> tiny_corpus() {
    std::vector<RawRecord> records = {
        helpers::make_record(1, "alpha beta", Gender::Male,
                             parse_timestamp("2015-09-17 23:39:11"), 30.0, 10.0),
        helpers::make_record(2, "alpha", Gender::Female,
                             parse_timestamp("2015-09-17 23:39:11"), 30.0, 10.0),
        helpers::make_record(3, "beta gamma beta", Gender::Male,
                             parse_timestamp("2015-09-18 01:00:00"), 25.0, -50.0),
        helpers::make_record(4, "delta", Gender::Female,
                             parse_timestamp("2015-09-18 02:30:00"), 35.0, 80.0),
    };
    return helpers::preprocess_all(records);
}

}  // namespace

TEST_CASE("load_normalized builds consistent tables") {
    const auto docs = tiny_corpus();
    const NormalizedStore store = load_normalized(docs);

    CHECK(store.documents().size() == 4);
    CHECK(store.genders().size() == 2);
    CHECK(store.documents_authors().size() == 4);
    // docs 1 and 2 share coordinates -> one geo row deduplicated
    CHECK(store.geo_locations().size() == 3);
    // vocabulary: doc1 {alpha,beta} doc2 {alpha} doc3 {beta,gamma} doc4 {delta}
    CHECK(store.vocabulary().size() == 6);
    CHECK(store.words().size() == 4);

    // every vocabulary row must resolve through the keys
    std::unordered_set<WordRef> word_ids;
    for (const auto& w : store.words()) word_ids.insert(w.id);
    for (const auto& v : store.vocabulary()) {
        CHECK(store.has_document(v.doc_ref));
        CHECK(word_ids.count(v.word_ref) == 1);
        CHECK(v.count >= 1);
        CHECK(v.tf > 0.0);
        CHECK(v.tf <= 1.0);
    }

    // geo references resolve and agree with the raw records
    for (const auto& d : store.documents()) {
        REQUIRE(d.geo_ref >= 1);
        REQUIRE(d.geo_ref <= store.geo_locations().size());
    }
    CHECK(store.document(1).lemma_length == 2);
    CHECK(store.document(3).lemma_length == 3);
    CHECK(store.document(2).geo_ref == store.document(1).geo_ref);
    CHECK_THROWS_AS(store.document(99), std::out_of_range);
    CHECK_FALSE(store.has_document(99));

    // author reuse: same author id must map to a single row
    CHECK(store.authors().size() == 4);
    CHECK_THROWS_AS(store.author(9999), std::out_of_range);
}

TEST_CASE("duplicate document ids are rejected by name") {
    auto docs = tiny_corpus();
    docs.push_back(docs.front());
    try {
        load_normalized(docs);
        FAIL("expected duplicate id error");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("1") != std::string::npos);
    }
}

TEST_CASE("to_star mirrors the corpus in star form") {
    const auto docs = tiny_corpus();
    const NormalizedStore norm = load_normalized(docs);
    const StarStore star = to_star(norm);

    CHECK(star.fact().size() == norm.vocabulary().size());
    CHECK(star.document_dimension().size() == 4);
    CHECK(star.word_dimension().size() == norm.words().size());
    CHECK(star.author_dimension().size() == norm.authors().size());
    CHECK(star.location_dimension().size() == norm.geo_locations().size());
    // docs 1 and 2 share a timestamp -> one time row deduplicated
    CHECK(star.time_dimension().size() == 3);

    // the documented hierarchy decomposition
    bool found = false;
    for (const auto& t : star.time_dimension()) {
        if (t.full_date != parse_timestamp("2015-09-17 23:39:11")) continue;
        found = true;
        CHECK(t.minute == 39);
        CHECK(t.hour == 23);
        CHECK(t.day == 17);
        CHECK(t.month == 9);
        CHECK(t.year == 2015);
    }
    CHECK(found);

    // every fact resolves into the dimensions
    std::unordered_set<DocId> doc_ids;
    for (const auto& d : star.document_dimension()) doc_ids.insert(d.id);
    std::unordered_set<AuthorId> author_ids;
    for (const auto& a : star.author_dimension()) author_ids.insert(a.id);
    std::set<std::uint32_t> time_ids, loc_ids;
    for (const auto& t : star.time_dimension()) time_ids.insert(t.id);
    for (const auto& l : star.location_dimension()) loc_ids.insert(l.id);
    for (const auto& f : star.fact()) {
        CHECK(doc_ids.count(f.id_document) == 1);
        CHECK(author_ids.count(f.id_author) == 1);
        CHECK(time_ids.count(f.id_time) == 1);
        CHECK(loc_ids.count(f.id_location) == 1);
        CHECK(f.count >= 1);
    }
}

TEST_CASE("stats over the whole corpus and over subsets") {
    const auto docs = tiny_corpus();
    const NormalizedStore norm = load_normalized(docs);
    const StarStore star = to_star(norm);

    const CorpusStats full_n = stats(norm, std::nullopt);
    CHECK(full_n.n_docs == 4);
    // lengths 2, 1, 3, 1 -> avgdl 7/4
    CHECK(full_n.avg_doc_len == doctest::Approx(1.75).epsilon(1e-12));
    CHECK(full_n.vocab_size == 4);
    CHECK(full_n.doc_freq("alpha") == 2);
    CHECK(full_n.doc_freq("beta") == 2);
    CHECK(full_n.doc_freq("gamma") == 1);
    CHECK(full_n.doc_freq("nothere") == 0);

    const CorpusStats full_s = stats(star, std::nullopt);
    CHECK(full_s.n_docs == full_n.n_docs);
    CHECK(full_s.avg_doc_len == doctest::Approx(full_n.avg_doc_len).epsilon(1e-12));
    CHECK(full_s.doc_frequency == full_n.doc_frequency);

    const std::vector<DocId> subset = {1, 3};
    const CorpusStats sub_n = stats(norm, std::span<const DocId>(subset));
    CHECK(sub_n.n_docs == 2);
    CHECK(sub_n.avg_doc_len == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(sub_n.doc_freq("alpha") == 1);
    CHECK(sub_n.doc_freq("beta") == 2);
    const CorpusStats sub_s = stats(star, std::span<const DocId>(subset));
    CHECK(sub_s.doc_frequency == sub_n.doc_frequency);

    const std::vector<DocId> unknown = {1, 99};
    try {
        stats(norm, std::span<const DocId>(unknown));
        FAIL("expected unknown id error");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("99") != std::string::npos);
    }
    CHECK_THROWS_AS(stats(star, std::span<const DocId>(unknown)), std::invalid_argument);
}

TEST_CASE("snapshot round trip preserves every table") {
    const auto docs = helpers::random_corpus(150, 21);
    const NormalizedStore store = load_normalized(docs);
    const std::string path = "test_snapshot.tmp";
    save_snapshot(store, path);
    const NormalizedStore back = load_snapshot(path);

    REQUIRE(back.documents().size() == store.documents().size());
    for (std::size_t i = 0; i < store.documents().size(); ++i) {
        const auto& a = store.documents()[i];
        const auto& b = back.documents()[i];
        CHECK(a.id == b.id);
        CHECK(a.raw_text == b.raw_text);
        CHECK(a.clean_text == b.clean_text);
        CHECK(a.lemma_text == b.lemma_text);
        CHECK(a.date == b.date);
        CHECK(a.lemma_length == b.lemma_length);
        CHECK(a.geo_ref == b.geo_ref);
    }
    REQUIRE(back.vocabulary().size() == store.vocabulary().size());
    for (std::size_t i = 0; i < store.vocabulary().size(); ++i) {
        CHECK(back.vocabulary()[i].doc_ref == store.vocabulary()[i].doc_ref);
        CHECK(back.vocabulary()[i].word_ref == store.vocabulary()[i].word_ref);
        CHECK(back.vocabulary()[i].count == store.vocabulary()[i].count);
        CHECK(back.vocabulary()[i].tf == store.vocabulary()[i].tf);  // bit-exact
    }
    REQUIRE(back.authors().size() == store.authors().size());
    REQUIRE(back.words().size() == store.words().size());
    for (std::size_t i = 0; i < store.words().size(); ++i)
        CHECK(back.words()[i].lemma == store.words()[i].lemma);
    REQUIRE(back.geo_locations().size() == store.geo_locations().size());
    for (std::size_t i = 0; i < store.geo_locations().size(); ++i) {
        CHECK(back.geo_locations()[i].x == store.geo_locations()[i].x);
        CHECK(back.geo_locations()[i].y == store.geo_locations()[i].y);
    }
    std::remove(path.c_str());
}

TEST_CASE("snapshot loader rejects damaged files") {
    CHECK_THROWS_AS(load_snapshot("no-such-file.snap"), std::runtime_error);

    const std::string bad_magic = "test_badmagic.tmp";
    {
        std::ofstream f(bad_magic, std::ios::binary);
        f << "NOTASNAPxxxxxxxxxxxxxxxx";
    }
    CHECK_THROWS_AS(load_snapshot(bad_magic), std::runtime_error);
    std::remove(bad_magic.c_str());

    // truncated file: write a valid snapshot, chop it
    const auto docs = tiny_corpus();
    const NormalizedStore store = load_normalized(docs);
    const std::string full_path = "test_full.tmp";
    save_snapshot(store, full_path);
    std::ifstream in(full_path, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();
    const std::string cut_path = "test_cut.tmp";
    {
        std::ofstream f(cut_path, std::ios::binary);
        f.write(bytes.data(), static_cast<std::streamsize>(bytes.size() / 2));
    }
    CHECK_THROWS_AS(load_snapshot(cut_path), std::runtime_error);
    std::remove(full_path.c_str());
    std::remove(cut_path.c_str());
}

TEST_CASE("star conversion after a snapshot round trip is unchanged") {
    const auto docs = helpers::random_corpus(80, 31);
    const NormalizedStore store = load_normalized(docs);
    const std::string path = "test_star_rt.tmp";
    save_snapshot(store, path);
    const StarStore a = to_star(store);
    const StarStore b = to_star(load_snapshot(path));
    REQUIRE(a.fact().size() == b.fact().size());
    for (std::size_t i = 0; i < a.fact().size(); ++i) {
        CHECK(a.fact()[i].id_document == b.fact()[i].id_document);
        CHECK(a.fact()[i].id_word == b.fact()[i].id_word);
        CHECK(a.fact()[i].id_author == b.fact()[i].id_author);
        CHECK(a.fact()[i].id_time == b.fact()[i].id_time);
        CHECK(a.fact()[i].id_location == b.fact()[i].id_location);
        CHECK(a.fact()[i].tf == b.fact()[i].tf);
    }
    std::remove(path.c_str());
}
