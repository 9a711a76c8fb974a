#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "topkbench/types.hpp"

namespace topkbench {

// Default generation window, 2015-09-17 20:41:35 .. 2015-09-19 04:05:45 UTC.
inline constexpr Timestamp kDefaultDateMin = 1442522495;
inline constexpr Timestamp kDefaultDateMax = 1442635545;

struct GeneratorConfig {
    double sf = 1.0;                   // docs = floor(sf * base)
    std::uint64_t base = 1'000'000;    // desk-scale runs shrink this
    std::uint64_t seed = 0;
    Timestamp date_min = kDefaultDateMin;
    Timestamp date_max = kDefaultDateMax;
    double x_min = 15.0, x_max = 50.0;
    double y_min = -124.0, y_max = 120.0;
    std::uint32_t vocab_size = 1000;
    double zipf_exponent = 1.0;
    double doc_length_mean = 8.0;
};

// mt19937_64 behind portable bounded draws. std::uniform_int_distribution is
// implementation-defined, so bounds are applied with integer rejection here.
class PortableRng {
public:
    explicit PortableRng(std::uint64_t seed) : gen_(seed) {}
    std::uint64_t next() { return gen_(); }
    // Unbiased draw in [0, bound).
    std::uint64_t below(std::uint64_t bound);

private:
    std::mt19937_64 gen_;
};

// Zipf-ranked synthetic lexicon. The first three entries are the default
// search terms ("think", "today", "friday") so document-mode queries always
// have matches; the rest are generated syllable words that pass through the
// lemmatizer unchanged.
std::vector<std::string> build_lexicon(std::uint32_t vocab_size);

class CorpusGenerator {
public:
    explicit CorpusGenerator(GeneratorConfig cfg);  // throws if the config yields zero docs

    std::uint64_t total() const { return total_; }
    std::optional<RawRecord> next();

private:
    GeneratorConfig cfg_;
    PortableRng rng_;
    std::uint64_t total_ = 0;
    std::uint64_t produced_ = 0;
    std::vector<std::string> lexicon_;
    std::vector<std::uint64_t> zipf_cumulative_;  // fixed-point CDF ticks

    const std::string& draw_term();
};

// Collects the whole stream; convenient at desk scale.
std::vector<RawRecord> generate(const GeneratorConfig& cfg);

// Fig.-4-shaped JSON object, one line, fixed field order.
std::string record_to_json_line(const RawRecord& record);

enum class IngestErrorPolicy { Fail, Skip };

struct IngestResult {
    std::vector<RawRecord> records;
    std::size_t skipped = 0;
};

// Parses one JSON-lines record. Throws std::runtime_error naming the line
// number and offending field.
RawRecord parse_record_line(const std::string& line, std::size_t lineno);

IngestResult ingest_jsonl(std::istream& in, IngestErrorPolicy policy = IngestErrorPolicy::Fail);
IngestResult ingest_jsonl_file(const std::string& path,
                               IngestErrorPolicy policy = IngestErrorPolicy::Fail);

}  // namespace topkbench
