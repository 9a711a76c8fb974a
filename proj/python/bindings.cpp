// pybind11 bindings for the benchmark core. The Corpus class wraps both
// layouts of one loaded corpus; query parameters default to the standard
// workload values so every query id is valid out of the box.

#include <cstdint>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "topkbench/bench.hpp"
#include "topkbench/engine.hpp"
#include "topkbench/generator.hpp"
#include "topkbench/plan.hpp"
#include "topkbench/report.hpp"
#include "topkbench/storage.hpp"
#include "topkbench/text.hpp"
#include "topkbench/types.hpp"
#include "topkbench/weighting.hpp"

namespace py = pybind11;
using namespace topkbench;

namespace {

// int epoch seconds or a string parse_timestamp() understands
Timestamp to_timestamp(const py::object& value) {
    if (py::isinstance<py::str>(value)) return parse_timestamp(value.cast<std::string>());
    return value.cast<Timestamp>();
}

QuerySpec build_spec(const std::string& query, const std::string& mode,
                     const std::string& scheme, const std::string& gender, unsigned k,
                     const py::object& start_date, const py::object& end_date, double x_min,
                     double x_max, double y_min, double y_max,
                     const std::vector<std::string>& terms, double k1, double b) {
    QuerySpec spec;
    spec.query_id = query_id_from_string(query);
    spec.mode = mode_from_string(mode);
    spec.scheme.scheme = scheme_from_string(scheme);
    spec.scheme.k1 = k1;
    spec.scheme.b = b;
    spec.k = k;
    spec.params.gender = gender_from_string(gender);
    spec.params.start_date = start_date.is_none() ? parse_timestamp("2015-09-17 00:00:00")
                                                  : to_timestamp(start_date);
    spec.params.end_date = end_date.is_none() ? parse_timestamp("2015-09-18 00:00:00")
                                              : to_timestamp(end_date);
    spec.params.start_x = x_min;
    spec.params.end_x = x_max;
    spec.params.start_y = y_min;
    spec.params.end_y = y_max;
    spec.params.terms = terms;
    validate_spec(spec);
    return spec;
}

std::vector<ProcessedDocument> preprocess_records(const std::vector<RawRecord>& records,
                                                  double tf_k) {
    const StopwordSet& stopwords = default_stopwords();
    SuffixRuleLemmatizer lemmatizer;
    std::vector<ProcessedDocument> docs;
    docs.reserve(records.size());
    for (const auto& rec : records) docs.push_back(preprocess(rec, stopwords, lemmatizer, tf_k));
    return docs;
}

struct Corpus {
    NormalizedStore normalized;
    StarStore star;

    explicit Corpus(NormalizedStore norm)
        : normalized(std::move(norm)), star(to_star(normalized)) {}

    std::size_t n_docs() const { return normalized.documents().size(); }

    RankedResult run(const QuerySpec& spec, const std::string& layout,
                     unsigned shards) const {
        const Layout l = layout_from_string(layout);
        if (shards == 1)
            return l == Layout::Normalized ? evaluate(normalized, spec) : evaluate(star, spec);
        return l == Layout::Normalized ? sharded_evaluate(normalized, spec, shards)
                                       : sharded_evaluate(star, spec, shards);
    }
};

py::dict document_to_dict(const ProcessedDocument& doc) {
    py::dict d;
    d["id"] = doc.record.id;
    d["clean_text"] = doc.clean_text;
    d["lemma_text"] = doc.lemma_text;
    d["lemma_length"] = doc.lemma_length;
    d["hashtags"] = doc.hashtags;
    d["attags"] = doc.attags;
    py::list postings;
    for (const auto& p : doc.postings) {
        py::dict e;
        e["term"] = p.term;
        e["count"] = p.count;
        e["tf"] = p.tf;
        postings.append(e);
    }
    d["postings"] = postings;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "top-k keyword and document extraction benchmark core";
    m.attr("__version__") = "0.1.0";

    // keyword-argument block shared by the query methods
    constexpr const char* kSpecDoc =
        "Query parameters default to the standard workload values (gender male, "
        "dates 2015-09-17..18, x in [20,40], y in [-100,100], terms "
        "think/today/friday, k=10).";

    py::class_<Corpus>(m, "Corpus", "One corpus materialized in both layouts")
        .def_static(
            "generate",
            [](double sf, std::uint64_t base, std::uint64_t seed, double tf_k) {
                GeneratorConfig cfg;
                cfg.sf = sf;
                cfg.base = base;
                cfg.seed = seed;
                return std::make_unique<Corpus>(
                    load_normalized(preprocess_records(generate(cfg), tf_k)));
            },
            py::arg("sf") = 1.0, py::arg("base") = 1000000, py::arg("seed") = 0,
            py::arg("tf_k") = 0.5, "Generate a seeded synthetic corpus")
        .def_static(
            "from_jsonl",
            [](const std::string& path, bool skip_bad, double tf_k) {
                const auto result = ingest_jsonl_file(
                    path, skip_bad ? IngestErrorPolicy::Skip : IngestErrorPolicy::Fail);
                return std::make_unique<Corpus>(
                    load_normalized(preprocess_records(result.records, tf_k)));
            },
            py::arg("path"), py::arg("skip_bad") = false, py::arg("tf_k") = 0.5,
            "Ingest and preprocess a JSON-lines corpus")
        .def_static(
            "from_snapshot",
            [](const std::string& path) {
                return std::make_unique<Corpus>(load_snapshot(path));
            },
            py::arg("path"), "Reload a snapshot written by save_snapshot")
        .def_property_readonly("n_docs", &Corpus::n_docs)
        .def(
            "save_snapshot",
            [](const Corpus& c, const std::string& path) { save_snapshot(c.normalized, path); },
            py::arg("path"))
        .def(
            "topk_keywords",
            [](const Corpus& c, const std::string& query, const std::string& scheme,
               const std::string& layout, const std::string& gender, unsigned k,
               const py::object& start_date, const py::object& end_date, double x_min,
               double x_max, double y_min, double y_max, unsigned shards, double k1,
               double b) {
                const QuerySpec spec =
                    build_spec(query, "keywords", scheme, gender, k, start_date, end_date,
                               x_min, x_max, y_min, y_max, {}, k1, b);
                const RankedResult r = c.run(spec, layout, shards);
                std::vector<std::pair<std::string, double>> out;
                out.reserve(r.entries.size());
                for (const auto& e : r.entries) out.emplace_back(e.term, e.score);
                return out;
            },
            py::arg("query") = "Q1", py::arg("scheme") = "tfidf",
            py::arg("layout") = "normalized", py::arg("gender") = "male", py::arg("k") = 10,
            py::arg("start_date") = py::none(), py::arg("end_date") = py::none(),
            py::arg("x_min") = 20.0, py::arg("x_max") = 40.0, py::arg("y_min") = -100.0,
            py::arg("y_max") = 100.0, py::arg("shards") = 1, py::arg("k1") = 1.2,
            py::arg("b") = 0.75, kSpecDoc)
        .def(
            "topk_documents",
            [](const Corpus& c, const std::vector<std::string>& terms,
               const std::string& query, const std::string& scheme, const std::string& layout,
               const std::string& gender, unsigned k, const py::object& start_date,
               const py::object& end_date, double x_min, double x_max, double y_min,
               double y_max, unsigned shards, double k1, double b) {
                const QuerySpec spec =
                    build_spec(query, "documents", scheme, gender, k, start_date, end_date,
                               x_min, x_max, y_min, y_max, terms, k1, b);
                const RankedResult r = c.run(spec, layout, shards);
                std::vector<std::pair<DocId, double>> out;
                out.reserve(r.entries.size());
                for (const auto& e : r.entries) out.emplace_back(e.doc_id, e.score);
                return out;
            },
            py::arg("terms") = std::vector<std::string>{"think", "today", "friday"},
            py::arg("query") = "Q1", py::arg("scheme") = "tfidf",
            py::arg("layout") = "normalized", py::arg("gender") = "male", py::arg("k") = 10,
            py::arg("start_date") = py::none(), py::arg("end_date") = py::none(),
            py::arg("x_min") = 20.0, py::arg("x_max") = 40.0, py::arg("y_min") = -100.0,
            py::arg("y_max") = 100.0, py::arg("shards") = 1, py::arg("k1") = 1.2,
            py::arg("b") = 0.75, kSpecDoc)
        .def(
            "selectivity",
            [](const Corpus& c, const std::string& query, const std::string& mode,
               const std::string& gender, const py::object& start_date,
               const py::object& end_date, double x_min, double x_max, double y_min,
               double y_max, const std::vector<std::string>& terms) {
                const QuerySpec spec = build_spec(query, mode, "tfidf", gender, 10, start_date,
                                                  end_date, x_min, x_max, y_min, y_max, terms,
                                                  1.2, 0.75);
                return selectivity(c.normalized, spec);
            },
            py::arg("query") = "Q1", py::arg("mode") = "keywords", py::arg("gender") = "male",
            py::arg("start_date") = py::none(), py::arg("end_date") = py::none(),
            py::arg("x_min") = 20.0, py::arg("x_max") = 40.0, py::arg("y_min") = -100.0,
            py::arg("y_max") = 100.0,
            py::arg("terms") = std::vector<std::string>{"think", "today", "friday"},
            "S(Q) = 1 - n(Q)/N")
        .def(
            "benchmark",
            [](const Corpus& c, double sf, unsigned reps_keywords, unsigned reps_documents,
               bool warmup, unsigned shards) {
                std::vector<BenchStore> stores(1);
                stores[0].sf = sf;
                stores[0].normalized = c.normalized;
                stores[0].star = c.star;
                ProtocolConfig config;
                config.reps_keywords = reps_keywords;
                config.reps_documents = reps_documents;
                config.warmup = warmup;
                config.shards = shards;
                for (const char* gender : {"male", "female"})
                    for (const char* mode : {"keywords", "documents"})
                        for (const char* scheme : {"tfidf", "okapi"})
                            for (const char* query : {"Q1", "Q2", "Q3", "Q4"})
                                config.suite.push_back(build_spec(
                                    query, mode, scheme, gender, 10, py::none(), py::none(),
                                    20.0, 40.0, -100.0, 100.0,
                                    {"think", "today", "friday"}, 1.2, 0.75));
                return summary_json(run_protocol(stores, config));
            },
            py::arg("sf") = 1.0, py::arg("reps_keywords") = 40,
            py::arg("reps_documents") = 10, py::arg("warmup") = true, py::arg("shards") = 1,
            "Run the standard suite on this corpus; returns the summary JSON text")
        .def("__repr__", [](const Corpus& c) {
            return "<topkbench.Corpus with " + std::to_string(c.n_docs()) + " documents>";
        });

    m.def(
        "generate_jsonl",
        [](const std::string& path, double sf, std::uint64_t base, std::uint64_t seed) {
            GeneratorConfig cfg;
            cfg.sf = sf;
            cfg.base = base;
            cfg.seed = seed;
            std::size_t n = 0;
            std::ofstream out(path, std::ios::binary);
            if (!out) throw std::runtime_error("cannot open output file: " + path);
            CorpusGenerator gen(cfg);
            while (auto rec = gen.next()) {
                out << record_to_json_line(*rec) << '\n';
                ++n;
            }
            return n;
        },
        py::arg("path"), py::arg("sf") = 1.0, py::arg("base") = 1000000, py::arg("seed") = 0,
        "Write a deterministic synthetic corpus as JSON lines; returns the record count");

    m.def(
        "preprocess_text",
        [](const std::string& raw_text, double tf_k) {
            RawRecord rec;
            rec.id = 1;
            rec.raw_text = raw_text;
            rec.date = parse_timestamp("2015-09-17 12:00:00");
            SuffixRuleLemmatizer lemmatizer;
            return document_to_dict(preprocess(rec, default_stopwords(), lemmatizer, tf_k));
        },
        py::arg("raw_text"), py::arg("tf_k") = 0.5,
        "Run the preprocessing pipeline on one text; returns the processed fields");

    m.def(
        "plan_json",
        [](const std::string& layout, const std::string& query, const std::string& mode,
           const std::string& scheme) {
            return plan_json(layout_from_string(layout),
                             build_spec(query, mode, scheme, "male", 10, py::none(),
                                        py::none(), 20.0, 40.0, -100.0, 100.0,
                                        {"think", "today", "friday"}, 1.2, 0.75));
        },
        py::arg("layout"), py::arg("query"), py::arg("mode"), py::arg("scheme"),
        "JSON description of the evaluation plan");

    m.def(
        "plan_sql",
        [](const std::string& layout, const std::string& query, const std::string& mode,
           const std::string& scheme) {
            return plan_sql(layout_from_string(layout),
                            build_spec(query, mode, scheme, "male", 10, py::none(),
                                       py::none(), 20.0, 40.0, -100.0, 100.0,
                                       {"think", "today", "friday"}, 1.2, 0.75));
        },
        py::arg("layout"), py::arg("query"), py::arg("mode"), py::arg("scheme"),
        "Portable SQL rendering of the query (documentation aid)");

    m.def(
        "published_complexity",
        [](const std::string& layout, const std::string& scheme, const std::string& query,
           const std::string& mode) {
            return plan_complexity(layout_from_string(layout), scheme_from_string(scheme),
                                   query_id_from_string(query), mode_from_string(mode))
                .published;
        },
        py::arg("layout"), py::arg("scheme"), py::arg("query"), py::arg("mode"),
        "Tabulated traversal count for the combination");
}
