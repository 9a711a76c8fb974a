#include "topkbench/bench.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "topkbench/plan.hpp"

namespace topkbench {

namespace {

double selectivity_impl(std::size_t n_total, std::size_t n_query) {
    if (n_total == 0) throw std::invalid_argument("selectivity of an empty corpus");
    return 1.0 - static_cast<double>(n_query) / static_cast<double>(n_total);
}

}  // namespace

double selectivity(const NormalizedStore& store, const QuerySpec& spec) {
    return selectivity_impl(store.documents().size(), apply_constraints(store, spec).size());
}

double selectivity(const StarStore& store, const QuerySpec& spec) {
    return selectivity_impl(store.document_dimension().size(),
                            apply_constraints(store, spec).size());
}

std::pair<double, double> summarize(std::span<const double> samples) {
    if (samples.empty()) throw std::invalid_argument("summarize: no samples");
    double sum = 0.0;
    for (double s : samples) sum += s;
    const double mean = sum / static_cast<double>(samples.size());
    double sq = 0.0;
    for (double s : samples) sq += (s - mean) * (s - mean);
    return {mean, std::sqrt(sq / static_cast<double>(samples.size()))};
}

std::string result_digest(const RankedResult& result) {
    // Canonical byte stream: mode, then one line per entry with the exact
    // score bit pattern so equal digests mean bit-equal outputs.
    std::string payload = to_string(result.mode);
    payload += '\n';
    char line[128];
    for (const auto& e : result.entries) {
        double score = e.score == 0.0 ? 0.0 : e.score;  // normalize -0.0
        std::uint64_t bits;
        static_assert(sizeof(bits) == sizeof(score));
        std::memcpy(&bits, &score, sizeof(bits));
        if (result.mode == QueryMode::Keywords) {
            payload += e.term;
            std::snprintf(line, sizeof(line), "\t%016llx\n",
                          static_cast<unsigned long long>(bits));
        } else {
            std::snprintf(line, sizeof(line), "%llu\t%016llx\n",
                          static_cast<unsigned long long>(e.doc_id),
                          static_cast<unsigned long long>(bits));
        }
        payload += line;
    }

    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int md_len = 0;
    if (EVP_Digest(payload.data(), payload.size(), md, &md_len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha-256 digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(md_len * 2);
    for (unsigned int i = 0; i < md_len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 0x0f];
    }
    return out;
}

namespace {

std::string describe(const Measurement& m) {
    std::ostringstream os;
    os << "sf=" << m.sf << " " << to_string(m.spec.query_id) << " "
       << to_string(m.spec.mode) << " " << to_string(m.spec.scheme.scheme) << " "
       << to_string(m.layout) << " gender=" << to_string(m.spec.params.gender);
    return os.str();
}

template <typename Store>
void measure_one(const Store& store, const QuerySpec& spec, const ProtocolConfig& config,
                 Measurement& m) {
    using clock = std::chrono::steady_clock;
    const unsigned reps =
        spec.mode == QueryMode::Keywords ? config.reps_keywords : config.reps_documents;

    auto run_once = [&] {
        if (config.on_execute) config.on_execute();
        return config.shards > 1 ? sharded_evaluate(store, spec, config.shards)
                                 : evaluate(store, spec);
    };

    if (config.warmup) (void)run_once();  // cold run, not measured

    m.samples_ms.reserve(reps);
    for (unsigned rep = 0; rep < reps; ++rep) {
        const auto t0 = clock::now();
        const RankedResult result = run_once();
        const auto t1 = clock::now();
        m.samples_ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());

        const std::string digest = result_digest(result);
        if (rep == 0)
            m.result_digest = digest;
        else if (digest != m.result_digest)
            throw std::runtime_error("nondeterministic result across repetitions");
    }

    const auto [mean, stddev] = summarize(m.samples_ms);
    m.mean_ms = mean;
    m.stddev_ms = stddev;
    m.selectivity = selectivity(store, spec);
    m.published_complexity =
        plan_complexity(m.layout, spec.scheme.scheme, spec.query_id, spec.mode).published;
}

}  // namespace

BenchReport run_protocol(std::span<const BenchStore> stores, const ProtocolConfig& config) {
    if (config.suite.empty()) throw std::invalid_argument("protocol suite is empty");
    if (config.reps_keywords == 0 || config.reps_documents == 0)
        throw std::invalid_argument("repetition counts must be at least 1");
    if (!config.sf_labels.empty() && config.sf_labels.size() != stores.size())
        throw std::invalid_argument("sf_labels must match the store count");
    if (config.layouts.empty()) throw std::invalid_argument("no layouts selected");

    BenchReport report;
    for (std::size_t si = 0; si < stores.size(); ++si) {
        const BenchStore& bs = stores[si];
        const double sf = config.sf_labels.empty() ? bs.sf : config.sf_labels[si];
        for (const QuerySpec& spec : config.suite) {
            for (Layout layout : config.layouts) {
                Measurement m;
                m.sf = sf;
                m.n_docs = bs.normalized.documents().size();
                m.spec = spec;
                m.layout = layout;
                m.shards = config.shards;
                try {
                    if (layout == Layout::Normalized)
                        measure_one(bs.normalized, spec, config, m);
                    else
                        measure_one(bs.star, spec, config, m);
                } catch (const std::exception& e) {
                    throw std::runtime_error("while measuring " + describe(m) + ": " +
                                             e.what());
                }
                report.measurements.push_back(std::move(m));
            }
        }
    }
    return report;
}

void write_csv(const BenchReport& report, std::ostream& out) {
    out << "sf,n_docs,query,mode,scheme,layout,shards,rep,time_ms,gender\n";
    char buf[64];
    for (const auto& m : report.measurements) {
        for (std::size_t rep = 0; rep < m.samples_ms.size(); ++rep) {
            std::snprintf(buf, sizeof(buf), "%.6f", m.samples_ms[rep]);
            out << m.sf << ',' << m.n_docs << ',' << to_string(m.spec.query_id) << ','
                << to_string(m.spec.mode) << ',' << to_string(m.spec.scheme.scheme) << ','
                << to_string(m.layout) << ',' << m.shards << ',' << rep + 1 << ',' << buf
                << ',' << to_string(m.spec.params.gender) << '\n';
        }
    }
}

std::string summary_json(const BenchReport& report) {
    nlohmann::ordered_json j;
    j["format"] = kSummaryFormatVersion;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& m : report.measurements) {
        const auto pc =
            plan_complexity(m.layout, m.spec.scheme.scheme, m.spec.query_id, m.spec.mode);
        nlohmann::ordered_json row;
        row["sf"] = m.sf;
        row["n_docs"] = m.n_docs;
        row["query"] = to_string(m.spec.query_id);
        row["mode"] = to_string(m.spec.mode);
        row["scheme"] = to_string(m.spec.scheme.scheme);
        row["layout"] = to_string(m.layout);
        row["gender"] = to_string(m.spec.params.gender);
        row["shards"] = m.shards;
        row["k"] = m.spec.k;
        row["reps"] = m.samples_ms.size();
        row["mean_ms"] = m.mean_ms;
        row["stddev_ms"] = m.stddev_ms;
        row["selectivity"] = m.selectivity;
        row["published_complexity"] = m.published_complexity;
        row["breakdown_total"] = pc.breakdown_total();
        row["result_digest"] = m.result_digest;
        rows.push_back(std::move(row));
    }
    j["measurements"] = std::move(rows);
    return j.dump(2);
}

}  // namespace topkbench
