#include "topkbench/plan.hpp"

#include <sstream>

#include <nlohmann/json.hpp>

namespace topkbench {

unsigned PlanComplexity::breakdown_total() const {
    unsigned total = 0;
    for (const auto& t : breakdown) total += static_cast<unsigned>(t.entities.size());
    return total;
}

namespace {

std::size_t query_index(QueryId q) { return static_cast<std::size_t>(q); }

unsigned published_count(Layout layout, Scheme scheme, QueryId query_id, QueryMode mode) {
    // Tabulated traversal counts per (layout, scheme, query); the normalized
    // layout publishes one table for both modes.
    static constexpr unsigned kNormTfidf[4] = {12, 12, 15, 15};
    static constexpr unsigned kNormOkapi[4] = {17, 17, 21, 21};
    static constexpr unsigned kStarKwTfidf[4] = {3, 5, 5, 7};
    static constexpr unsigned kStarKwOkapi[4] = {4, 6, 6, 8};
    static constexpr unsigned kStarDocTfidf[4] = {5, 8, 8, 11};
    static constexpr unsigned kStarDocOkapi[4] = {6, 9, 9, 12};

    const std::size_t q = query_index(query_id);
    if (layout == Layout::Normalized)
        return scheme == Scheme::Tfidf ? kNormTfidf[q] : kNormOkapi[q];
    if (mode == QueryMode::Keywords)
        return scheme == Scheme::Tfidf ? kStarKwTfidf[q] : kStarKwOkapi[q];
    return scheme == Scheme::Tfidf ? kStarDocTfidf[q] : kStarDocOkapi[q];
}

// Entities every constraint evaluation touches for the layout/query.
std::vector<std::string> constraint_entities(Layout layout, QueryId q) {
    std::vector<std::string> e;
    if (layout == Layout::Normalized) {
        e = {"documents", "documents_authors", "authors", "genders"};
        if (q == QueryId::Q3 || q == QueryId::Q4) e.push_back("geo_location");
    } else {
        e = {"document_fact", "author_dimension"};
        if (q == QueryId::Q2 || q == QueryId::Q4) e.push_back("time_dimension");
        if (q == QueryId::Q3 || q == QueryId::Q4) e.push_back("location_dimension");
    }
    return e;
}

}  // namespace

PlanComplexity plan_complexity(Layout layout, Scheme scheme, QueryId query_id,
                               QueryMode mode) {
    PlanComplexity pc;
    pc.published = published_count(layout, scheme, query_id, mode);

    const auto chain = constraint_entities(layout, query_id);
    auto with = [&chain](std::initializer_list<const char*> extra) {
        std::vector<std::string> e = chain;
        for (const char* x : extra) e.emplace_back(x);
        return e;
    };

    if (layout == Layout::Normalized) {
        pc.breakdown.push_back({"main plan", with({"vocabulary", "words"})});
        pc.breakdown.push_back({"subset count (N)", chain});
        pc.breakdown.push_back({"per-term document count (n)", with({"vocabulary", "words"})});
    } else {
        auto main_extra = mode == QueryMode::Keywords
                              ? with({"word_dimension"})
                              : with({"word_dimension", "document_dimension"});
        pc.breakdown.push_back({"main plan", std::move(main_extra)});
        pc.breakdown.push_back({"subset count (N)", chain});
        pc.breakdown.push_back({"per-term document count (n)", with({"word_dimension"})});
    }
    if (scheme == Scheme::Okapi) {
        auto len_entities = layout == Layout::Normalized ? chain : with({"document_dimension"});
        pc.breakdown.push_back({"average document length (avgdl)", std::move(len_entities)});
    }
    return pc;
}

namespace {

nlohmann::ordered_json constraints_json(const QuerySpec& spec) {
    nlohmann::ordered_json c = nlohmann::ordered_json::array();
    c.push_back({{"id", "c1"}, {"field", "gender"}, {"equals", to_string(spec.params.gender)}});
    if (spec.query_id == QueryId::Q2 || spec.query_id == QueryId::Q4) {
        c.push_back({{"id", "c2"},
                     {"field", "date"},
                     {"between", {format_timestamp(*spec.params.start_date),
                                  format_timestamp(*spec.params.end_date)}}});
    }
    if (spec.query_id == QueryId::Q3 || spec.query_id == QueryId::Q4) {
        c.push_back({{"id", "c3"},
                     {"field", "x"},
                     {"between", {*spec.params.start_x, *spec.params.end_x}}});
        c.push_back({{"id", "c3"},
                     {"field", "y"},
                     {"between", {*spec.params.start_y, *spec.params.end_y}}});
    }
    if (spec.mode == QueryMode::Documents)
        c.push_back({{"id", "c4"}, {"field", "lemma"}, {"any_of", spec.params.terms}});
    return c;
}

}  // namespace

std::string plan_json(Layout layout, const QuerySpec& spec) {
    validate_spec(spec);
    const auto pc = plan_complexity(layout, spec.scheme.scheme, spec.query_id, spec.mode);

    nlohmann::ordered_json j;
    j["layout"] = to_string(layout);
    j["query"] = to_string(spec.query_id);
    j["mode"] = to_string(spec.mode);
    j["scheme"] = to_string(spec.scheme.scheme);
    j["k"] = spec.k;
    j["constraints"] = constraints_json(spec);
    j["operators"] = nlohmann::ordered_json::array(
        {"scan", "filter(constraints)", "statistics(N, n, avgdl)",
         std::string("group_by(") + (spec.mode == QueryMode::Keywords ? "term" : "document") + ")",
         "score(" + to_string(spec.scheme.scheme) + ")", "sort(score desc, key asc)",
         "limit(k)"});
    j["published_complexity"] = pc.published;
    nlohmann::ordered_json trav = nlohmann::ordered_json::array();
    for (const auto& t : pc.breakdown)
        trav.push_back({{"name", t.name}, {"entities", t.entities}});
    j["traversals"] = trav;
    j["breakdown_total"] = pc.breakdown_total();
    return j.dump(2);
}

namespace {

std::string sql_quote(const std::string& s) {
    std::string out = "'";
    for (char ch : s) {
        out += ch;
        if (ch == '\'') out += ch;  // double embedded quotes
    }
    out += "'";
    return out;
}

std::string term_list(const std::vector<std::string>& terms) {
    std::string out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (i) out += ", ";
        out += sql_quote(terms[i]);
    }
    return out;
}

std::string number(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

std::string plan_sql(Layout layout, const QuerySpec& spec) {
    validate_spec(spec);
    const bool dated = spec.query_id == QueryId::Q2 || spec.query_id == QueryId::Q4;
    const bool geo = spec.query_id == QueryId::Q3 || spec.query_id == QueryId::Q4;
    const bool okapi = spec.scheme.scheme == Scheme::Okapi;
    const bool keywords = spec.mode == QueryMode::Keywords;

    std::ostringstream sql;
    sql << "-- " << to_string(spec.query_id) << " " << to_string(spec.mode) << " "
        << to_string(spec.scheme.scheme) << " over the " << to_string(layout)
        << " schema; tf column stores the augmented term frequency\n";

    if (layout == Layout::Normalized) {
        sql << "WITH subset AS (\n"
            << "  SELECT d.id, d.lemma_length\n"
            << "  FROM documents d\n"
            << "  JOIN documents_authors da ON da.doc_ref = d.id\n"
            << "  JOIN authors a ON a.id = da.author_ref\n"
            << "  JOIN genders g ON g.id = a.gender_ref\n";
        if (geo) sql << "  JOIN geo_location geo ON geo.id = d.geo_ref\n";
        sql << "  WHERE g.type = " << sql_quote(to_string(spec.params.gender));
        if (dated)
            sql << "\n    AND d.date BETWEEN "
                << sql_quote(format_timestamp(*spec.params.start_date)) << " AND "
                << sql_quote(format_timestamp(*spec.params.end_date));
        if (geo)
            sql << "\n    AND geo.x BETWEEN " << number(*spec.params.start_x) << " AND "
                << number(*spec.params.end_x) << "\n    AND geo.y BETWEEN "
                << number(*spec.params.start_y) << " AND " << number(*spec.params.end_y);
        sql << "\n),\n"
            << "doc_freq AS (\n"
            << "  SELECT v.word_ref, COUNT(DISTINCT v.doc_ref) AS n\n"
            << "  FROM vocabulary v JOIN subset s ON s.id = v.doc_ref\n"
            << "  GROUP BY v.word_ref\n"
            << "),\n"
            << "totals AS (\n"
            << "  SELECT COUNT(*) AS n_docs, AVG(lemma_length * 1.0) AS avgdl FROM subset\n"
            << ")\n";
        const std::string idf = "(1 + LN(t.n_docs * 1.0 / df.n))";
        const std::string weight =
            okapi ? "v.tf * " + idf + " * (" + number(spec.scheme.k1) + " + 1) / (v.tf + " +
                        number(spec.scheme.k1) + " * (1 - " + number(spec.scheme.b) + " + " +
                        number(spec.scheme.b) + " * s.lemma_length / t.avgdl))"
                  : "v.tf * " + idf;
        if (keywords)
            sql << "SELECT w.lemma AS keyword,\n       SUM(" << weight << ") AS score\n";
        else
            sql << "SELECT s.id AS document_id,\n       SUM(" << weight << ") AS score\n";
        sql << "FROM vocabulary v\n"
            << "JOIN subset s ON s.id = v.doc_ref\n"
            << "JOIN words w ON w.id = v.word_ref\n"
            << "JOIN doc_freq df ON df.word_ref = v.word_ref\n"
            << "CROSS JOIN totals t\n";
        if (!keywords) sql << "WHERE w.lemma IN (" << term_list(spec.params.terms) << ")\n";
        sql << "GROUP BY " << (keywords ? "w.lemma" : "s.id") << "\n"
            << "ORDER BY score DESC, " << (keywords ? "keyword" : "document_id") << " ASC\n"
            << "LIMIT " << spec.k << ";\n";
    } else {
        sql << "WITH subset AS (\n"
            << "  SELECT f.id_document AS id, f.id_word, f.tf, dd.lemma_length\n"
            << "  FROM document_fact f\n"
            << "  JOIN author_dimension a ON a.id = f.id_author\n"
            << "  JOIN document_dimension dd ON dd.id = f.id_document\n";
        if (dated) sql << "  JOIN time_dimension td ON td.id = f.id_time\n";
        if (geo) sql << "  JOIN location_dimension ld ON ld.id = f.id_location\n";
        sql << "  WHERE a.gender = " << sql_quote(to_string(spec.params.gender));
        if (dated)
            sql << "\n    AND td.full_date BETWEEN "
                << sql_quote(format_timestamp(*spec.params.start_date)) << " AND "
                << sql_quote(format_timestamp(*spec.params.end_date));
        if (geo)
            sql << "\n    AND ld.x BETWEEN " << number(*spec.params.start_x) << " AND "
                << number(*spec.params.end_x) << "\n    AND ld.y BETWEEN "
                << number(*spec.params.start_y) << " AND " << number(*spec.params.end_y);
        sql << "\n),\n"
            << "doc_freq AS (\n"
            << "  SELECT id_word, COUNT(DISTINCT id) AS n FROM subset GROUP BY id_word\n"
            << "),\n"
            << "totals AS (\n"
            << "  SELECT COUNT(DISTINCT id) AS n_docs,\n"
            << "         AVG(lemma_length * 1.0) AS avgdl\n"
            << "  FROM (SELECT DISTINCT id, lemma_length FROM subset) u\n"
            << ")\n";
        const std::string idf = "(1 + LN(t.n_docs * 1.0 / df.n))";
        const std::string weight =
            okapi ? "s.tf * " + idf + " * (" + number(spec.scheme.k1) + " + 1) / (s.tf + " +
                        number(spec.scheme.k1) + " * (1 - " + number(spec.scheme.b) + " + " +
                        number(spec.scheme.b) + " * s.lemma_length / t.avgdl))"
                  : "s.tf * " + idf;
        if (keywords)
            sql << "SELECT w.lemma AS keyword,\n       SUM(" << weight << ") AS score\n";
        else
            sql << "SELECT s.id AS document_id,\n       SUM(" << weight << ") AS score\n";
        sql << "FROM subset s\n"
            << "JOIN word_dimension w ON w.id = s.id_word\n"
            << "JOIN doc_freq df ON df.id_word = s.id_word\n"
            << "CROSS JOIN totals t\n";
        if (!keywords) sql << "WHERE w.lemma IN (" << term_list(spec.params.terms) << ")\n";
        sql << "GROUP BY " << (keywords ? "w.lemma" : "s.id") << "\n"
            << "ORDER BY score DESC, " << (keywords ? "keyword" : "document_id") << " ASC\n"
            << "LIMIT " << spec.k << ";\n";
    }
    return sql.str();
}

}  // namespace topkbench
