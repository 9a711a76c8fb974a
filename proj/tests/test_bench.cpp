#include "doctest.h"

#include <atomic>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "topkbench/bench.hpp"
#include "topkbench/engine.hpp"
#include "topkbench/report.hpp"
#include "topkbench/storage.hpp"

#include "helpers.hpp"

using namespace topkbench;

namespace {

BenchStore make_store(double sf, const std::vector<ProcessedDocument>& docs) {
    BenchStore bs;
    bs.sf = sf;
    bs.normalized = load_normalized(docs);
    bs.star = to_star(bs.normalized);
    return bs;
}

std::size_t count_lines(const std::string& text) {
    std::size_t n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

}  // namespace

TEST_CASE("summarize: mean and population stddev") {
    {
        const std::vector<double> one = {4.0};
        const auto [mean, sd] = summarize(one);
        CHECK(mean == 4.0);
        CHECK(sd == 0.0);
    }
    {
        const std::vector<double> v = {1.0, 2.0, 3.0};
        const auto [mean, sd] = summarize(v);
        CHECK(mean == doctest::Approx(2.0).epsilon(1e-12));
        // population formula: sqrt(2/3), not the sample estimator 1.0
        CHECK(sd == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-9));
    }
    {
        const std::vector<double> zeros = {0.0, 0.0, 0.0, 0.0};
        const auto [mean, sd] = summarize(zeros);
        CHECK(mean == 0.0);
        CHECK(sd == 0.0);
    }
    const std::vector<double> empty;
    CHECK_THROWS_AS(summarize(empty), std::invalid_argument);
}

TEST_CASE("selectivity on a corpus with known counts") {
    // 2 of 4 docs are male -> S(Q1 male) = 1 - 2/4
    const auto docs = helpers::preprocess_all({
        helpers::make_record(1, "alpha beta", Gender::Male),
        helpers::make_record(2, "alpha", Gender::Male),
        helpers::make_record(3, "beta gamma", Gender::Female),
        helpers::make_record(4, "delta", Gender::Female),
    });
    const auto store = make_store(1.0, docs);

    QuerySpec spec;
    spec.query_id = QueryId::Q1;
    spec.mode = QueryMode::Keywords;
    spec.params.gender = Gender::Male;
    CHECK(selectivity(store.normalized, spec) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(selectivity(store.star, spec) == doctest::Approx(0.5).epsilon(1e-12));

    // documents mode adds c4; only doc 1 of the male pair has "beta"
    spec.mode = QueryMode::Documents;
    spec.params.terms = {"beta"};
    CHECK(selectivity(store.normalized, spec) == doctest::Approx(0.75).epsilon(1e-12));

    // no match at all -> S = 1
    spec.params.terms = {"omega"};
    CHECK(selectivity(store.normalized, spec) == doctest::Approx(1.0).epsilon(1e-12));

    const NormalizedStore empty_store;
    spec.mode = QueryMode::Keywords;
    CHECK_THROWS_AS(selectivity(empty_store, spec), std::invalid_argument);
}

TEST_CASE("selectivity ordering follows constraint nesting") {
    const auto docs = helpers::random_corpus(300, 7);
    const auto store = make_store(1.0, docs);
    for (Gender g : {Gender::Male, Gender::Female}) {
        double s[5];
        for (int i = 1; i <= 4; ++i) {
            const auto spec = helpers::table1_spec(static_cast<QueryId>(i - 1),
                                                   QueryMode::Keywords, Scheme::Tfidf, g);
            s[i] = selectivity(store.normalized, spec);
        }
        CHECK(s[2] >= s[1]);  // Q2 adds c2
        CHECK(s[3] >= s[1]);  // Q3 adds c3
        CHECK(s[4] >= s[2]);
        CHECK(s[4] >= s[3]);
        for (int i = 1; i <= 4; ++i) {
            CHECK(s[i] >= 0.0);
            CHECK(s[i] <= 1.0);
        }
        // documents mode can only drop more documents
        const auto kw = helpers::table1_spec(QueryId::Q1, QueryMode::Keywords,
                                             Scheme::Tfidf, g);
        auto dm = helpers::table1_spec(QueryId::Q1, QueryMode::Documents, Scheme::Tfidf, g);
        CHECK(selectivity(store.normalized, dm) >= selectivity(store.normalized, kw));
    }
}

TEST_CASE("run_protocol: repetition counts and warm-up accounting") {
    const auto docs = helpers::random_corpus(60, 3);
    const std::vector<BenchStore> stores = {make_store(1.0, docs)};

    ProtocolConfig config;
    config.reps_keywords = 5;
    config.reps_documents = 2;
    config.suite = {
        helpers::table1_spec(QueryId::Q1, QueryMode::Keywords, Scheme::Tfidf, Gender::Male),
        helpers::table1_spec(QueryId::Q1, QueryMode::Documents, Scheme::Tfidf, Gender::Male),
    };
    std::atomic<unsigned> executions{0};
    config.on_execute = [&executions] { ++executions; };

    const BenchReport report = run_protocol(stores, config);
    REQUIRE(report.measurements.size() == 4);  // 2 specs x 2 layouts
    unsigned expected_execs = 0;
    for (const auto& m : report.measurements) {
        const unsigned reps =
            m.spec.mode == QueryMode::Keywords ? config.reps_keywords : config.reps_documents;
        CHECK(m.samples_ms.size() == reps);
        expected_execs += reps + 1;  // plus the untimed warm-up
        CHECK(!m.result_digest.empty());
        CHECK(m.n_docs == 60);
        CHECK(m.published_complexity > 0);
        for (double t : m.samples_ms) CHECK(t >= 0.0);
        const auto [mean, sd] = summarize(m.samples_ms);
        CHECK(m.mean_ms == doctest::Approx(mean).epsilon(1e-12));
        CHECK(m.stddev_ms == doctest::Approx(sd).epsilon(1e-12));
    }
    CHECK(executions.load() == expected_execs);

    // disabling warm-up removes exactly one execution per measurement
    executions = 0;
    config.warmup = false;
    run_protocol(stores, config);
    CHECK(executions.load() == expected_execs - 4);
}

TEST_CASE("run_protocol: digests agree across layouts") {
    const auto docs = helpers::random_corpus(80, 11);
    const std::vector<BenchStore> stores = {make_store(1.0, docs)};
    ProtocolConfig config;
    config.reps_keywords = 2;
    config.reps_documents = 2;
    config.suite = {helpers::table1_spec(QueryId::Q4, QueryMode::Keywords, Scheme::Okapi,
                                         Gender::Female)};
    const BenchReport report = run_protocol(stores, config);
    REQUIRE(report.measurements.size() == 2);
    CHECK(report.measurements[0].layout == Layout::Normalized);
    CHECK(report.measurements[1].layout == Layout::Star);
    CHECK(report.measurements[0].result_digest == report.measurements[1].result_digest);
}

TEST_CASE("run_protocol: configuration errors") {
    const auto docs = helpers::random_corpus(10, 1);
    const std::vector<BenchStore> stores = {make_store(1.0, docs)};

    ProtocolConfig config;  // empty suite
    CHECK_THROWS_AS(run_protocol(stores, config), std::invalid_argument);

    config.suite = {helpers::table1_spec(QueryId::Q1, QueryMode::Keywords, Scheme::Tfidf,
                                         Gender::Male)};
    config.sf_labels = {1.0, 2.0};  // two labels, one store
    CHECK_THROWS_AS(run_protocol(stores, config), std::invalid_argument);

    config.sf_labels.clear();
    config.reps_keywords = 0;
    CHECK_THROWS_AS(run_protocol(stores, config), std::invalid_argument);

    config.reps_keywords = 1;
    config.layouts.clear();
    CHECK_THROWS_AS(run_protocol(stores, config), std::invalid_argument);
}

TEST_CASE("run_protocol: engine errors name the failing combination") {
    const auto docs = helpers::random_corpus(10, 2);
    const std::vector<BenchStore> stores = {make_store(1.0, docs)};
    ProtocolConfig config;
    config.reps_keywords = 1;
    QuerySpec bad = helpers::table1_spec(QueryId::Q2, QueryMode::Keywords, Scheme::Tfidf,
                                         Gender::Male);
    bad.params.start_date.reset();  // invalid: Q2 without dates
    config.suite = {bad};
    try {
        run_protocol(stores, config);
        FAIL("expected run_protocol to throw");
    } catch (const std::exception& e) {
        const std::string what = e.what();
        CHECK(what.find("while measuring") != std::string::npos);
        CHECK(what.find("Q2") != std::string::npos);
    }
}

TEST_CASE("write_csv emits one row per repetition plus a header") {
    const auto docs = helpers::random_corpus(40, 9);
    const std::vector<BenchStore> stores = {make_store(0.5, docs)};
    ProtocolConfig config;
    config.reps_keywords = 3;
    config.reps_documents = 2;
    config.suite = {
        helpers::table1_spec(QueryId::Q1, QueryMode::Keywords, Scheme::Tfidf, Gender::Male),
        helpers::table1_spec(QueryId::Q2, QueryMode::Documents, Scheme::Okapi, Gender::Female),
    };
    const BenchReport report = run_protocol(stores, config);

    std::ostringstream out;
    write_csv(report, out);
    const std::string csv = out.str();

    std::istringstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header == "sf,n_docs,query,mode,scheme,layout,shards,rep,time_ms,gender");
    // (3 + 2) reps x 2 layouts data rows
    CHECK(count_lines(csv) == 1 + 10);
    CHECK(csv.find("0.5,40,Q1,keywords,tfidf,normalized,1,1,") != std::string::npos);
    CHECK(csv.find("Q2,documents,okapi,star") != std::string::npos);
    CHECK(csv.find("female") != std::string::npos);
}

TEST_CASE("summary_json round-trips through the report parser") {
    const auto docs = helpers::random_corpus(50, 13);
    const std::vector<BenchStore> stores = {make_store(1.5, docs)};
    ProtocolConfig config;
    config.reps_keywords = 2;
    config.reps_documents = 2;
    config.suite = {
        helpers::table1_spec(QueryId::Q3, QueryMode::Keywords, Scheme::Okapi, Gender::Male),
        helpers::table1_spec(QueryId::Q3, QueryMode::Documents, Scheme::Tfidf, Gender::Male),
    };
    const BenchReport report = run_protocol(stores, config);
    const std::string json = summary_json(report);

    const auto parsed = nlohmann::json::parse(json);
    CHECK(parsed.at("format") == kSummaryFormatVersion);
    REQUIRE(parsed.at("measurements").size() == 4);
    const auto& first = parsed.at("measurements")[0];
    CHECK(first.at("sf") == 1.5);
    CHECK(first.at("query") == "Q3");
    CHECK(first.at("reps") == 2);

    const auto rows = parse_summary_json(json);
    REQUIRE(rows.size() == 4);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& m = report.measurements[i];
        CHECK(rows[i].sf == m.sf);
        CHECK(rows[i].query == to_string(m.spec.query_id));
        CHECK(rows[i].mode == to_string(m.spec.mode));
        CHECK(rows[i].scheme == to_string(m.spec.scheme.scheme));
        CHECK(rows[i].layout == to_string(m.layout));
        CHECK(rows[i].gender == to_string(m.spec.params.gender));
        CHECK(rows[i].mean_ms == doctest::Approx(m.mean_ms).epsilon(1e-9));
        CHECK(rows[i].stddev_ms == doctest::Approx(m.stddev_ms).epsilon(1e-9));
        CHECK(rows[i].selectivity == doctest::Approx(m.selectivity).epsilon(1e-9));
        CHECK(rows[i].result_digest == m.result_digest);
    }
}

TEST_CASE("result digests separate results and normalize signed zero") {
    RankedResult a;
    a.mode = QueryMode::Keywords;
    a.entries = {{"alpha", 1, 2.0}, {"beta", 2, 1.5}};
    RankedResult b = a;
    CHECK(result_digest(a) == result_digest(b));

    b.entries[1].score = 1.5000000001;  // different bits -> different digest
    CHECK(result_digest(a) != result_digest(b));

    RankedResult swapped = a;
    std::swap(swapped.entries[0], swapped.entries[1]);
    CHECK(result_digest(a) != result_digest(swapped));  // order matters

    RankedResult pos = a, neg = a;
    pos.entries[0].score = 0.0;
    neg.entries[0].score = -0.0;
    CHECK(result_digest(pos) == result_digest(neg));

    RankedResult docs_mode = a;
    docs_mode.mode = QueryMode::Documents;
    CHECK(result_digest(a) != result_digest(docs_mode));
}
