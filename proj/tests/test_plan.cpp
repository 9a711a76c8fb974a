#include "doctest.h"

#include <nlohmann/json.hpp>
#include <stdexcept>
#include <string>

#include "topkbench/plan.hpp"

#include "helpers.hpp"

using namespace topkbench;

namespace {

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

constexpr QueryId kQueries[4] = {QueryId::Q1, QueryId::Q2, QueryId::Q3, QueryId::Q4};

}  // namespace

TEST_CASE("published traversal counts match the tabulated values") {
    // normalized layout: one table covers both modes
    const unsigned norm_tfidf[4] = {12, 12, 15, 15};
    const unsigned norm_okapi[4] = {17, 17, 21, 21};
    const unsigned star_kw_tfidf[4] = {3, 5, 5, 7};
    const unsigned star_kw_okapi[4] = {4, 6, 6, 8};
    const unsigned star_doc_tfidf[4] = {5, 8, 8, 11};
    const unsigned star_doc_okapi[4] = {6, 9, 9, 12};

    for (int i = 0; i < 4; ++i) {
        const QueryId q = kQueries[i];
        for (QueryMode m : {QueryMode::Keywords, QueryMode::Documents}) {
            CHECK(plan_complexity(Layout::Normalized, Scheme::Tfidf, q, m).published ==
                  norm_tfidf[i]);
            CHECK(plan_complexity(Layout::Normalized, Scheme::Okapi, q, m).published ==
                  norm_okapi[i]);
        }
        CHECK(plan_complexity(Layout::Star, Scheme::Tfidf, q, QueryMode::Keywords).published ==
              star_kw_tfidf[i]);
        CHECK(plan_complexity(Layout::Star, Scheme::Okapi, q, QueryMode::Keywords).published ==
              star_kw_okapi[i]);
        CHECK(plan_complexity(Layout::Star, Scheme::Tfidf, q, QueryMode::Documents).published ==
              star_doc_tfidf[i]);
        CHECK(plan_complexity(Layout::Star, Scheme::Okapi, q, QueryMode::Documents).published ==
              star_doc_okapi[i]);
    }
}

TEST_CASE("breakdown preserves the published orderings") {
    for (Layout layout : {Layout::Normalized, Layout::Star}) {
        for (QueryMode m : {QueryMode::Keywords, QueryMode::Documents}) {
            for (int i = 0; i < 4; ++i) {
                const QueryId q = kQueries[i];
                const auto tf = plan_complexity(layout, Scheme::Tfidf, q, m);
                const auto ok = plan_complexity(layout, Scheme::Okapi, q, m);
                // Okapi adds the avgdl scan, so it can only cost more
                CHECK(ok.breakdown_total() > tf.breakdown_total());
                CHECK(ok.published > tf.published);
                CHECK(ok.breakdown.size() == tf.breakdown.size() + 1);

                for (Scheme s : {Scheme::Tfidf, Scheme::Okapi}) {
                    const auto q1 = plan_complexity(layout, s, QueryId::Q1, m);
                    const auto qn = plan_complexity(layout, s, q, m);
                    CHECK(qn.breakdown_total() >= q1.breakdown_total());
                    CHECK(qn.published >= q1.published);
                    // Q4 carries every constraint, so it tops the column
                    const auto q4 = plan_complexity(layout, s, QueryId::Q4, m);
                    CHECK(q4.breakdown_total() >= qn.breakdown_total());
                    CHECK(q4.published >= qn.published);
                }
            }
        }
    }
}

TEST_CASE("only Okapi plans include the avgdl traversal") {
    auto has_avgdl = [](const PlanComplexity& pc) {
        for (const auto& t : pc.breakdown)
            if (contains(t.name, "avgdl")) return true;
        return false;
    };
    for (Layout layout : {Layout::Normalized, Layout::Star}) {
        for (QueryMode m : {QueryMode::Keywords, QueryMode::Documents}) {
            CHECK(has_avgdl(plan_complexity(layout, Scheme::Okapi, QueryId::Q2, m)));
            CHECK_FALSE(has_avgdl(plan_complexity(layout, Scheme::Tfidf, QueryId::Q2, m)));
        }
    }
}

TEST_CASE("breakdown traversals stay non-empty and well formed") {
    for (Layout layout : {Layout::Normalized, Layout::Star}) {
        for (Scheme s : {Scheme::Tfidf, Scheme::Okapi}) {
            for (QueryMode m : {QueryMode::Keywords, QueryMode::Documents}) {
                for (QueryId q : kQueries) {
                    const auto pc = plan_complexity(layout, s, q, m);
                    REQUIRE(!pc.breakdown.empty());
                    unsigned total = 0;
                    for (const auto& t : pc.breakdown) {
                        CHECK(!t.name.empty());
                        CHECK(!t.entities.empty());
                        total += static_cast<unsigned>(t.entities.size());
                    }
                    CHECK(pc.breakdown_total() == total);
                }
            }
        }
    }
}

TEST_CASE("plan JSON carries the constraint set of the query") {
    const QuerySpec q1 = helpers::table1_spec(QueryId::Q1, QueryMode::Keywords,
                                              Scheme::Tfidf, Gender::Male);
    const auto j1 = nlohmann::json::parse(plan_json(Layout::Normalized, q1));
    CHECK(j1.at("layout") == "normalized");
    CHECK(j1.at("query") == "Q1");
    CHECK(j1.at("mode") == "keywords");
    CHECK(j1.at("scheme") == "tfidf");
    CHECK(j1.at("k") == 10);
    CHECK(j1.at("published_complexity") == 12);
    REQUIRE(j1.at("constraints").size() == 1);  // c1 only
    CHECK(j1.at("constraints")[0].at("field") == "gender");
    CHECK(j1.at("breakdown_total").get<unsigned>() ==
          plan_complexity(Layout::Normalized, Scheme::Tfidf, QueryId::Q1,
                          QueryMode::Keywords).breakdown_total());

    const QuerySpec q4 = helpers::table1_spec(QueryId::Q4, QueryMode::Documents,
                                              Scheme::Okapi, Gender::Female);
    const auto j4 = nlohmann::json::parse(plan_json(Layout::Star, q4));
    // c1 + c2 + c3(x) + c3(y) + c4
    CHECK(j4.at("constraints").size() == 5);
    CHECK(j4.at("published_complexity") == 12);  // star documents okapi Q4
    bool saw_c4 = false;
    for (const auto& c : j4.at("constraints"))
        if (c.at("id") == "c4") saw_c4 = true;
    CHECK(saw_c4);
    REQUIRE(j4.at("traversals").is_array());
    CHECK(j4.at("traversals").size() == 4);  // main + N + n + avgdl
}

TEST_CASE("plan SQL mentions the right clauses") {
    const QuerySpec q4 = helpers::table1_spec(QueryId::Q4, QueryMode::Documents,
                                              Scheme::Okapi, Gender::Male);
    for (Layout layout : {Layout::Normalized, Layout::Star}) {
        const std::string sql = plan_sql(layout, q4);
        CHECK(contains(sql, "LIMIT 10"));
        CHECK(contains(sql, "'male'"));
        CHECK(contains(sql, "BETWEEN"));
        CHECK(contains(sql, "'think', 'today', 'friday'"));
        CHECK(contains(sql, "ORDER BY score DESC"));
        CHECK(contains(sql, "2015-09-17T00:00:00Z"));  // format_timestamp shape
    }
    CHECK(contains(plan_sql(Layout::Normalized, q4), "documents_authors"));
    CHECK(contains(plan_sql(Layout::Star, q4), "document_fact"));

    const QuerySpec q1 = helpers::table1_spec(QueryId::Q1, QueryMode::Keywords,
                                              Scheme::Tfidf, Gender::Male);
    const std::string kw = plan_sql(Layout::Normalized, q1);
    CHECK(contains(kw, "keyword"));
    CHECK_FALSE(contains(kw, " IN ("));  // no c4 term list in keyword mode
    CHECK_FALSE(contains(kw, "avgdl)) "));
}

TEST_CASE("invalid specs are rejected before rendering") {
    QuerySpec bad;
    bad.query_id = QueryId::Q2;  // dates missing
    bad.mode = QueryMode::Keywords;
    bad.params.gender = Gender::Male;
    CHECK_THROWS_AS(plan_json(Layout::Normalized, bad), std::invalid_argument);
    CHECK_THROWS_AS(plan_sql(Layout::Star, bad), std::invalid_argument);
}
