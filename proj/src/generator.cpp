#include "topkbench/generator.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "topkbench/text.hpp"

namespace topkbench {

namespace {

constexpr const char* kFirstNames[] = {"alex", "casey", "jordan", "morgan", "riley",
                                       "sam",  "taylor", "quinn",  "avery",  "drew"};
constexpr const char* kLastNames[] = {"smith", "jones", "brown", "davis", "miller",
                                      "wilson", "moore", "clark", "hall",  "young"};

// Syllables end in vowels so concatenations never hit a lemmatizer suffix rule.
constexpr const char* kSyllables[] = {"ba", "re", "mo", "ta", "lu", "ki", "so", "na", "ve", "po",
                                      "da", "mi", "tu", "ga", "ri", "ze", "ko", "fa", "ne", "wo"};
constexpr std::size_t kSyllableCount = sizeof(kSyllables) / sizeof(kSyllables[0]);

std::string syllable_word(std::uint64_t index) {
    std::string word;
    std::uint64_t v = index;
    do {
        word += kSyllables[v % kSyllableCount];
        v /= kSyllableCount;
    } while (v > 0);
    return word;
}

}  // namespace

std::uint64_t PortableRng::below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("PortableRng::below: zero bound");
    const std::uint64_t threshold = (-bound) % bound;
    for (;;) {
        const std::uint64_t r = gen_();
        if (r >= threshold) return r % bound;
    }
}

std::vector<std::string> build_lexicon(std::uint32_t vocab_size) {
    if (vocab_size < 3) throw std::invalid_argument("vocab_size must be at least 3");
    std::vector<std::string> lexicon = {"think", "today", "friday"};
    lexicon.reserve(vocab_size);
    const StopwordSet& stop = default_stopwords();
    std::uint64_t index = 0;
    while (lexicon.size() < vocab_size) {
        std::string word = syllable_word(index++);
        if (word.size() < 4) continue;  // skip one-syllable collisions with short words
        if (stop.contains(word)) continue;
        lexicon.push_back(std::move(word));
    }
    return lexicon;
}

CorpusGenerator::CorpusGenerator(GeneratorConfig cfg) : cfg_(cfg), rng_(cfg.seed) {
    if (cfg_.sf <= 0.0) throw std::invalid_argument("scale factor must be positive");
    if (cfg_.date_min >= cfg_.date_max)
        throw std::invalid_argument("generator date range is degenerate");
    if (cfg_.x_min >= cfg_.x_max || cfg_.y_min >= cfg_.y_max)
        throw std::invalid_argument("generator coordinate range is degenerate");
    if (cfg_.doc_length_mean < 1.0)
        throw std::invalid_argument("doc_length_mean must be at least 1");
    total_ = static_cast<std::uint64_t>(cfg_.sf * static_cast<double>(cfg_.base));
    if (total_ == 0)
        throw std::invalid_argument("sf * base yields zero documents");
    lexicon_ = build_lexicon(cfg_.vocab_size);

    // Fixed-point Zipf CDF; sampling then needs integer draws only.
    long double norm = 0.0L;
    std::vector<long double> weights(lexicon_.size());
    for (std::size_t i = 0; i < lexicon_.size(); ++i) {
        weights[i] = 1.0L / std::pow(static_cast<long double>(i + 1),
                                     static_cast<long double>(cfg_.zipf_exponent));
        norm += weights[i];
    }
    zipf_cumulative_.resize(lexicon_.size());
    constexpr long double kScale = 1ULL << 62;
    long double acc = 0.0L;
    for (std::size_t i = 0; i < lexicon_.size(); ++i) {
        acc += weights[i] / norm;
        zipf_cumulative_[i] = static_cast<std::uint64_t>(acc * kScale);
    }
    zipf_cumulative_.back() = static_cast<std::uint64_t>(kScale);
}

const std::string& CorpusGenerator::draw_term() {
    const std::uint64_t u = rng_.below(zipf_cumulative_.back());
    const auto it = std::upper_bound(zipf_cumulative_.begin(), zipf_cumulative_.end(), u);
    return lexicon_[static_cast<std::size_t>(it - zipf_cumulative_.begin())];
}

std::optional<RawRecord> CorpusGenerator::next() {
    if (produced_ >= total_) return std::nullopt;
    const std::uint64_t i = produced_++;

    RawRecord rec;
    rec.id = i + 1;
    rec.gender = (i % 2 == 0) ? Gender::Male : Gender::Female;

    // Male authors take odd ids, female even, so author attributes stay a
    // consistent function of the id across records.
    const std::uint64_t author_pool = std::max<std::uint64_t>(1, total_ / 4);
    const std::uint64_t slot = rng_.below(author_pool);
    rec.author_id = 2 * slot + (rec.gender == Gender::Male ? 1 : 2);
    rec.author_first = kFirstNames[rec.author_id % 10];
    rec.author_last = kLastNames[(rec.author_id / 10) % 10];
    rec.age = 18 + static_cast<unsigned>((rec.author_id / 2) % 48);

    rec.date = cfg_.date_min + static_cast<Timestamp>(rng_.below(
                                   static_cast<std::uint64_t>(cfg_.date_max - cfg_.date_min) + 1));

    // 0.001-degree grid keeps coordinate draws integer-based; dividing the
    // combined milli-degree value once avoids float noise like 26.144000...5.
    const auto grid = [&](double lo, double hi) {
        const std::int64_t lo_milli = std::llround(lo * 1000.0);
        const std::int64_t hi_milli = std::llround(hi * 1000.0);
        const std::uint64_t ticks = static_cast<std::uint64_t>(hi_milli - lo_milli) + 1;
        return static_cast<double>(lo_milli + static_cast<std::int64_t>(rng_.below(ticks))) /
               1000.0;
    };
    rec.geo_x = grid(cfg_.x_min, cfg_.x_max);
    rec.geo_y = grid(cfg_.y_min, cfg_.y_max);

    const std::uint64_t mean = static_cast<std::uint64_t>(std::llround(cfg_.doc_length_mean));
    const std::uint64_t length = 1 + rng_.below(2 * mean - 1);  // uniform, mean == doc_length_mean
    std::string text;
    for (std::uint64_t t = 0; t < length; ++t) {
        if (!text.empty()) text.push_back(' ');
        text += draw_term();
    }
    // Sprinkle pipeline fodder: tags, links, contractions.
    const std::uint64_t decoration = rng_.below(16);
    if (decoration == 0) text += " #" + draw_term();
    if (decoration == 1) text += " @user" + std::to_string(1 + rng_.below(512));
    if (decoration == 2) text += " http://t.ln/" + std::to_string(rng_.below(4096));
    if (decoration == 3) text += " it's " + draw_term();
    rec.raw_text = std::move(text);
    return rec;
}

std::vector<RawRecord> generate(const GeneratorConfig& cfg) {
    CorpusGenerator gen(cfg);
    std::vector<RawRecord> records;
    records.reserve(gen.total());
    while (auto rec = gen.next()) records.push_back(std::move(*rec));
    return records;
}

std::string record_to_json_line(const RawRecord& record) {
    nlohmann::ordered_json j;
    j["_id"] = record.id;
    j["rawText"] = record.raw_text;
    j["author"] = record.author_id;
    j["authorFirst"] = record.author_first;
    j["authorLast"] = record.author_last;
    j["gender"] = to_string(record.gender);
    j["age"] = record.age;
    j["geoLocation"] = {record.geo_x, record.geo_y};
    j["date"] = format_timestamp(record.date);
    return j.dump();
}

namespace {

[[noreturn]] void line_error(std::size_t lineno, const std::string& what) {
    throw std::runtime_error("line " + std::to_string(lineno) + ": " + what);
}

}  // namespace

RawRecord parse_record_line(const std::string& line, std::size_t lineno) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        line_error(lineno, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) line_error(lineno, "record is not a JSON object");

    const auto require = [&](const char* field) -> const nlohmann::json& {
        const auto it = j.find(field);
        if (it == j.end()) line_error(lineno, std::string("missing field \"") + field + "\"");
        return *it;
    };

    RawRecord rec;
    try {
        rec.id = require("_id").get<std::uint64_t>();
        rec.raw_text = require("rawText").get<std::string>();
        rec.author_id = require("author").get<std::uint64_t>();
        rec.gender = gender_from_string(require("gender").get<std::string>());
        rec.age = require("age").get<unsigned>();
        rec.date = parse_timestamp(require("date").get<std::string>());
        const auto& geo = require("geoLocation");
        if (!geo.is_array() || geo.size() != 2)
            line_error(lineno, "field \"geoLocation\" must be a [x, y] array");
        rec.geo_x = geo[0].get<double>();
        rec.geo_y = geo[1].get<double>();
        if (j.contains("authorFirst")) rec.author_first = j["authorFirst"].get<std::string>();
        if (j.contains("authorLast")) rec.author_last = j["authorLast"].get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        line_error(lineno, std::string("ill-typed field: ") + e.what());
    } catch (const std::invalid_argument& e) {
        line_error(lineno, e.what());
    }
    return rec;
}

IngestResult ingest_jsonl(std::istream& in, IngestErrorPolicy policy) {
    IngestResult result;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        try {
            result.records.push_back(parse_record_line(line, lineno));
        } catch (const std::runtime_error&) {
            if (policy == IngestErrorPolicy::Fail) throw;
            ++result.skipped;
        }
    }
    return result;
}

IngestResult ingest_jsonl_file(const std::string& path, IngestErrorPolicy policy) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open corpus file: " + path);
    return ingest_jsonl(in, policy);
}

}  // namespace topkbench
