// topkbench: generate corpora, ingest them, run the benchmark protocol, and
// render reports. Exit codes: 0 success, 1 usage error, 2 data error,
// 3 internal error.

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "CLI11.hpp"

#include "topkbench/bench.hpp"
#include "topkbench/engine.hpp"
#include "topkbench/generator.hpp"
#include "topkbench/plan.hpp"
#include "topkbench/report.hpp"
#include "topkbench/storage.hpp"
#include "topkbench/text.hpp"

namespace fs = std::filesystem;
using namespace topkbench;

namespace {

// Config files are plain `key = value` lines (# starts a comment). Per the
// interface contract they override flags, so they are applied after parsing.
class ConfigOverrides {
public:
    void bind(const std::string& key, std::function<void(const std::string&)> apply) {
        setters_[key] = std::move(apply);
    }

    void apply_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open config file: " + path);
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                if (line.find_first_not_of(" \t\r") != std::string::npos)
                    throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                             ": expected key = value");
                continue;
            }
            auto trim = [](std::string s) {
                const auto a = s.find_first_not_of(" \t\r");
                const auto b = s.find_last_not_of(" \t\r");
                return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
            };
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            auto it = setters_.find(key);
            if (it == setters_.end())
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": unknown config key \"" + key + "\"");
            it->second(value);
        }
    }

private:
    std::map<std::string, std::function<void(const std::string&)>> setters_;
};

double parse_double(const std::string& v) {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::runtime_error("not a number: " + v);
    return d;
}

std::uint64_t parse_u64(const std::string& v) {
    std::size_t pos = 0;
    const unsigned long long u = std::stoull(v, &pos);
    if (pos != v.size()) throw std::runtime_error("not an integer: " + v);
    return u;
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(v);
    while (std::getline(is, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

bool parse_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw std::runtime_error("not a boolean: " + v);
}

// ---------------------------------------------------------------- generate

struct GenerateOptions {
    double sf = 1.0;
    std::uint64_t base = 1'000'000;
    std::uint64_t seed = 0;
    std::string out = "corpus.jsonl";
    std::string config;
};

int cmd_generate(const GenerateOptions& opt) {
    GeneratorConfig cfg;
    cfg.sf = opt.sf;
    cfg.base = opt.base;
    cfg.seed = opt.seed;

    std::ofstream out(opt.out, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + opt.out);
    CorpusGenerator gen(cfg);
    std::size_t n = 0;
    while (auto rec = gen.next()) {
        out << record_to_json_line(*rec) << '\n';
        ++n;
    }
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + opt.out);
    std::cerr << "wrote " << n << " records to " << opt.out << "\n";
    return 0;
}

// ------------------------------------------------------------------ ingest

struct IngestOptions {
    std::string input;
    std::string out = "corpus.snap";
    std::string stopwords_path;
    std::string contractions_path;  // reserved for future pipeline overrides
    double tf_k = 0.5;
    bool skip_bad = false;
    std::string config;
};

int cmd_ingest(const IngestOptions& opt) {
    const auto policy = opt.skip_bad ? IngestErrorPolicy::Skip : IngestErrorPolicy::Fail;
    const IngestResult ingested = ingest_jsonl_file(opt.input, policy);
    if (ingested.skipped > 0)
        std::cerr << "skipped " << ingested.skipped << " malformed line(s)\n";

    const StopwordSet stopwords = opt.stopwords_path.empty()
                                      ? default_stopwords()
                                      : load_stopwords(opt.stopwords_path);
    SuffixRuleLemmatizer lemmatizer;
    std::vector<ProcessedDocument> docs;
    docs.reserve(ingested.records.size());
    for (const auto& rec : ingested.records)
        docs.push_back(preprocess(rec, stopwords, lemmatizer, opt.tf_k));

    const NormalizedStore store = load_normalized(docs);
    save_snapshot(store, opt.out);
    std::cerr << "ingested " << store.documents().size() << " documents into " << opt.out
              << "\n";
    return 0;
}

// --------------------------------------------------------------------- run

struct RunOptions {
    std::vector<double> sfs = {1.0};
    std::uint64_t base = 1'000'000;
    std::uint64_t seed = 0;
    std::string corpus;    // optional JSONL input instead of generation
    std::string snapshot;  // optional snapshot input instead of generation
    unsigned reps_keywords = 40;
    unsigned reps_documents = 10;
    bool no_warmup = false;
    unsigned shards = 1;
    std::string scheme = "both";
    std::string layout = "both";
    std::string mode = "both";
    unsigned k = 10;
    std::vector<std::string> terms = {"think", "today", "friday"};
    std::string start_date = "2015-09-17 00:00:00";
    std::string end_date = "2015-09-18 00:00:00";
    double x_min = 20.0, x_max = 40.0;
    double y_min = -100.0, y_max = 100.0;
    double k1 = 1.2, b = 0.75;
    std::string out = "report";
    std::string config;
};

BenchStore build_store(std::vector<ProcessedDocument> docs, double sf) {
    BenchStore bs;
    bs.sf = sf;
    bs.normalized = load_normalized(docs);
    bs.star = to_star(bs.normalized);
    return bs;
}

std::vector<ProcessedDocument> preprocess_all(const std::vector<RawRecord>& records) {
    const StopwordSet& stopwords = default_stopwords();
    SuffixRuleLemmatizer lemmatizer;
    std::vector<ProcessedDocument> docs;
    docs.reserve(records.size());
    for (const auto& rec : records) docs.push_back(preprocess(rec, stopwords, lemmatizer));
    return docs;
}

void echo_config(const RunOptions& opt, const fs::path& path) {
    std::ofstream out(path);
    out << "# effective configuration\n";
    out << "sf = ";
    for (std::size_t i = 0; i < opt.sfs.size(); ++i) out << (i ? "," : "") << opt.sfs[i];
    out << "\nbase = " << opt.base << "\nseed = " << opt.seed
        << "\ncorpus = " << opt.corpus << "\nsnapshot = " << opt.snapshot
        << "\nreps-keywords = " << opt.reps_keywords
        << "\nreps-documents = " << opt.reps_documents
        << "\nwarmup = " << (opt.no_warmup ? "false" : "true") << "\nshards = " << opt.shards
        << "\nscheme = " << opt.scheme << "\nlayout = " << opt.layout
        << "\nmode = " << opt.mode << "\nk = " << opt.k << "\nterms = ";
    for (std::size_t i = 0; i < opt.terms.size(); ++i) out << (i ? "," : "") << opt.terms[i];
    out << "\nstart-date = " << opt.start_date << "\nend-date = " << opt.end_date
        << "\nx-min = " << opt.x_min << "\nx-max = " << opt.x_max
        << "\ny-min = " << opt.y_min << "\ny-max = " << opt.y_max << "\nk1 = " << opt.k1
        << "\nb = " << opt.b << "\nout = " << opt.out << "\n";
}

int cmd_run(const RunOptions& opt) {
    // Resolve enumerated selections up front so usage problems surface early.
    std::vector<Scheme> schemes;
    if (opt.scheme == "both")
        schemes = {Scheme::Tfidf, Scheme::Okapi};
    else
        schemes = {scheme_from_string(opt.scheme)};
    std::vector<QueryMode> modes;
    if (opt.mode == "both")
        modes = {QueryMode::Keywords, QueryMode::Documents};
    else
        modes = {mode_from_string(opt.mode)};
    std::vector<Layout> layouts;
    if (opt.layout == "both")
        layouts = {Layout::Normalized, Layout::Star};
    else
        layouts = {layout_from_string(opt.layout)};

    const Timestamp start_date = parse_timestamp(opt.start_date);
    const Timestamp end_date = parse_timestamp(opt.end_date);

    // Corpora: either one ingested corpus or one generated corpus per sf.
    std::vector<BenchStore> stores;
    if (!opt.snapshot.empty()) {
        BenchStore bs;
        bs.sf = opt.sfs.size() == 1 ? opt.sfs[0] : 1.0;
        bs.normalized = load_snapshot(opt.snapshot);
        bs.star = to_star(bs.normalized);
        stores.push_back(std::move(bs));
    } else if (!opt.corpus.empty()) {
        const IngestResult ingested = ingest_jsonl_file(opt.corpus, IngestErrorPolicy::Fail);
        stores.push_back(build_store(preprocess_all(ingested.records),
                                     opt.sfs.size() == 1 ? opt.sfs[0] : 1.0));
    } else {
        for (double sf : opt.sfs) {
            GeneratorConfig cfg;
            cfg.sf = sf;
            cfg.base = opt.base;
            cfg.seed = opt.seed;
            stores.push_back(build_store(preprocess_all(generate(cfg)), sf));
        }
    }

    // Table 1 suite: both genders, all four queries, selected modes/schemes.
    ProtocolConfig config;
    config.reps_keywords = opt.reps_keywords;
    config.reps_documents = opt.reps_documents;
    config.warmup = !opt.no_warmup;
    config.shards = opt.shards;
    config.layouts = layouts;
    for (Gender gender : {Gender::Male, Gender::Female}) {
        for (QueryMode mode : modes) {
            for (Scheme scheme : schemes) {
                for (QueryId query : {QueryId::Q1, QueryId::Q2, QueryId::Q3, QueryId::Q4}) {
                    QuerySpec spec;
                    spec.query_id = query;
                    spec.mode = mode;
                    spec.k = opt.k;
                    spec.scheme.scheme = scheme;
                    spec.scheme.k1 = opt.k1;
                    spec.scheme.b = opt.b;
                    spec.params.gender = gender;
                    spec.params.start_date = start_date;
                    spec.params.end_date = end_date;
                    spec.params.start_x = opt.x_min;
                    spec.params.end_x = opt.x_max;
                    spec.params.start_y = opt.y_min;
                    spec.params.end_y = opt.y_max;
                    spec.params.terms = opt.terms;
                    if (auto warning = param_warning(spec.scheme))
                        std::cerr << "warning: " << *warning << "\n";
                    config.suite.push_back(std::move(spec));
                }
            }
        }
    }

    const BenchReport report = run_protocol(stores, config);

    fs::create_directories(opt.out);
    {
        std::ofstream csv(fs::path(opt.out) / "results.csv", std::ios::binary);
        if (!csv) throw std::runtime_error("cannot write results.csv under " + opt.out);
        write_csv(report, csv);
    }
    {
        std::ofstream json(fs::path(opt.out) / "summary.json", std::ios::binary);
        if (!json) throw std::runtime_error("cannot write summary.json under " + opt.out);
        json << summary_json(report) << '\n';
    }
    echo_config(opt, fs::path(opt.out) / "config-echo.txt");
    std::cerr << "wrote " << report.measurements.size() << " measurements to " << opt.out
              << "\n";
    return 0;
}

// ------------------------------------------------------------------ report

struct ReportOptions {
    std::string input;
    std::string out;      // optional directory for table.txt + SVG charts
    bool no_svg = false;
    std::string config;
};

int cmd_report(const ReportOptions& opt) {
    std::ifstream in(opt.input, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open summary: " + opt.input);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::vector<SummaryRow> rows = parse_summary_json(buffer.str());

    const std::string table = render_table(rows);
    std::cout << table;

    if (opt.out.empty()) return 0;
    fs::create_directories(opt.out);
    {
        std::ofstream t(fs::path(opt.out) / "table.txt", std::ios::binary);
        t << table;
    }
    if (!opt.no_svg) {
        std::set<std::tuple<std::string, std::string, std::string, std::string>> combos;
        for (const auto& r : rows) combos.insert({r.mode, r.scheme, r.layout, r.gender});
        std::size_t written = 0;
        for (const auto& [mode, scheme, layout, gender] : combos) {
            const std::string svg = render_svg_chart(rows, mode, scheme, layout, gender);
            if (svg.empty()) continue;
            const std::string name =
                "chart-" + mode + "-" + scheme + "-" + layout + "-" + gender + ".svg";
            std::ofstream f(fs::path(opt.out) / name, std::ios::binary);
            f << svg;
            ++written;
        }
        std::cerr << "wrote table.txt and " << written << " chart(s) to " << opt.out << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"top-k keyword and document extraction benchmark"};
    app.require_subcommand(1);

    GenerateOptions gen_opt;
    auto* gen = app.add_subcommand("generate", "Write a deterministic synthetic corpus (JSONL)");
    gen->add_option("--sf", gen_opt.sf, "Scale factor (docs = floor(sf * base))");
    gen->add_option("--base", gen_opt.base, "Base document count at sf = 1");
    gen->add_option("--seed", gen_opt.seed, "Generator seed");
    gen->add_option("--out", gen_opt.out, "Output JSONL path");
    gen->add_option("--config", gen_opt.config, "key = value file overriding flags");

    IngestOptions ing_opt;
    auto* ing = app.add_subcommand("ingest", "Preprocess a JSONL corpus into a snapshot");
    ing->add_option("input", ing_opt.input, "JSONL corpus path")->required();
    ing->add_option("--out", ing_opt.out, "Snapshot output path");
    ing->add_option("--stopwords", ing_opt.stopwords_path, "Stop-word list, one per line");
    ing->add_option("--tf-k", ing_opt.tf_k, "Augmented-TF floor K");
    ing->add_flag("--skip-bad", ing_opt.skip_bad, "Skip malformed lines instead of failing");
    ing->add_option("--config", ing_opt.config, "key = value file overriding flags");

    RunOptions run_opt;
    auto* run = app.add_subcommand("run", "Run the full benchmark protocol");
    run->add_option("--sf", run_opt.sfs, "Scale factors (comma separated)")->delimiter(',');
    run->add_option("--base", run_opt.base, "Base document count at sf = 1");
    run->add_option("--seed", run_opt.seed, "Generator seed");
    run->add_option("--corpus", run_opt.corpus, "Benchmark this JSONL corpus instead of generating");
    run->add_option("--snapshot", run_opt.snapshot, "Benchmark this snapshot instead of generating");
    run->add_option("--reps-keywords", run_opt.reps_keywords, "Timed repetitions, keywords mode");
    run->add_option("--reps-documents", run_opt.reps_documents, "Timed repetitions, documents mode");
    run->add_flag("--no-warmup", run_opt.no_warmup, "Skip the untimed warm-up execution");
    run->add_option("--shards", run_opt.shards, "Shard count for two-phase evaluation");
    run->add_option("--scheme", run_opt.scheme, "tfidf, okapi, or both")
        ->check(CLI::IsMember({"tfidf", "okapi", "both"}));
    run->add_option("--layout", run_opt.layout, "normalized, star, or both")
        ->check(CLI::IsMember({"normalized", "star", "both"}));
    run->add_option("--mode", run_opt.mode, "keywords, documents, or both")
        ->check(CLI::IsMember({"keywords", "documents", "both"}));
    run->add_option("--k", run_opt.k, "Result size per query");
    run->add_option("--terms", run_opt.terms, "Search terms (comma separated)")->delimiter(',');
    run->add_option("--start-date", run_opt.start_date, "c2 lower bound");
    run->add_option("--end-date", run_opt.end_date, "c2 upper bound");
    run->add_option("--x-min", run_opt.x_min, "c3 x lower bound");
    run->add_option("--x-max", run_opt.x_max, "c3 x upper bound");
    run->add_option("--y-min", run_opt.y_min, "c3 y lower bound");
    run->add_option("--y-max", run_opt.y_max, "c3 y upper bound");
    run->add_option("--k1", run_opt.k1, "Okapi k1");
    run->add_option("--b", run_opt.b, "Okapi b");
    run->add_option("--out", run_opt.out, "Report directory");
    run->add_option("--config", run_opt.config, "key = value file overriding flags");

    ReportOptions rep_opt;
    auto* rep = app.add_subcommand("report", "Render a summary as a table and SVG charts");
    rep->add_option("input", rep_opt.input, "summary.json path")->required();
    rep->add_option("--out", rep_opt.out, "Directory for table.txt and charts");
    rep->add_flag("--no-svg", rep_opt.no_svg, "Skip chart emission");
    rep->add_option("--config", rep_opt.config, "key = value file overriding flags");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help();
        return 1;
    }

    try {
        if (gen->parsed()) {
            if (!gen_opt.config.empty()) {
                ConfigOverrides c;
                c.bind("sf", [&](const std::string& v) { gen_opt.sf = parse_double(v); });
                c.bind("base", [&](const std::string& v) { gen_opt.base = parse_u64(v); });
                c.bind("seed", [&](const std::string& v) { gen_opt.seed = parse_u64(v); });
                c.bind("out", [&](const std::string& v) { gen_opt.out = v; });
                c.apply_file(gen_opt.config);
            }
            return cmd_generate(gen_opt);
        }
        if (ing->parsed()) {
            if (!ing_opt.config.empty()) {
                ConfigOverrides c;
                c.bind("out", [&](const std::string& v) { ing_opt.out = v; });
                c.bind("stopwords", [&](const std::string& v) { ing_opt.stopwords_path = v; });
                c.bind("tf-k", [&](const std::string& v) { ing_opt.tf_k = parse_double(v); });
                c.bind("skip-bad", [&](const std::string& v) { ing_opt.skip_bad = parse_bool(v); });
                c.apply_file(ing_opt.config);
            }
            return cmd_ingest(ing_opt);
        }
        if (run->parsed()) {
            if (!run_opt.config.empty()) {
                ConfigOverrides c;
                c.bind("sf", [&](const std::string& v) {
                    run_opt.sfs.clear();
                    for (const auto& item : split_list(v)) run_opt.sfs.push_back(parse_double(item));
                });
                c.bind("base", [&](const std::string& v) { run_opt.base = parse_u64(v); });
                c.bind("seed", [&](const std::string& v) { run_opt.seed = parse_u64(v); });
                c.bind("corpus", [&](const std::string& v) { run_opt.corpus = v; });
                c.bind("snapshot", [&](const std::string& v) { run_opt.snapshot = v; });
                c.bind("reps-keywords", [&](const std::string& v) {
                    run_opt.reps_keywords = static_cast<unsigned>(parse_u64(v));
                });
                c.bind("reps-documents", [&](const std::string& v) {
                    run_opt.reps_documents = static_cast<unsigned>(parse_u64(v));
                });
                c.bind("warmup", [&](const std::string& v) { run_opt.no_warmup = !parse_bool(v); });
                c.bind("shards", [&](const std::string& v) {
                    run_opt.shards = static_cast<unsigned>(parse_u64(v));
                });
                c.bind("scheme", [&](const std::string& v) { run_opt.scheme = v; });
                c.bind("layout", [&](const std::string& v) { run_opt.layout = v; });
                c.bind("mode", [&](const std::string& v) { run_opt.mode = v; });
                c.bind("k", [&](const std::string& v) {
                    run_opt.k = static_cast<unsigned>(parse_u64(v));
                });
                c.bind("terms", [&](const std::string& v) { run_opt.terms = split_list(v); });
                c.bind("start-date", [&](const std::string& v) { run_opt.start_date = v; });
                c.bind("end-date", [&](const std::string& v) { run_opt.end_date = v; });
                c.bind("x-min", [&](const std::string& v) { run_opt.x_min = parse_double(v); });
                c.bind("x-max", [&](const std::string& v) { run_opt.x_max = parse_double(v); });
                c.bind("y-min", [&](const std::string& v) { run_opt.y_min = parse_double(v); });
                c.bind("y-max", [&](const std::string& v) { run_opt.y_max = parse_double(v); });
                c.bind("k1", [&](const std::string& v) { run_opt.k1 = parse_double(v); });
                c.bind("b", [&](const std::string& v) { run_opt.b = parse_double(v); });
                c.bind("out", [&](const std::string& v) { run_opt.out = v; });
                c.apply_file(run_opt.config);
            }
            return cmd_run(run_opt);
        }
        if (rep->parsed()) {
            if (!rep_opt.config.empty()) {
                ConfigOverrides c;
                c.bind("out", [&](const std::string& v) { rep_opt.out = v; });
                c.bind("no-svg", [&](const std::string& v) { rep_opt.no_svg = parse_bool(v); });
                c.apply_file(rep_opt.config);
            }
            return cmd_report(rep_opt);
        }
        std::cerr << "no subcommand selected\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
