#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace topkbench {

using DocId = std::uint64_t;
using AuthorId = std::uint64_t;
using WordRef = std::uint32_t;

enum class Gender : std::uint8_t { Male = 0, Female = 1 };

std::string to_string(Gender g);
Gender gender_from_string(const std::string& s);

// Seconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;

struct TimeParts {
    unsigned minute = 0;
    unsigned hour = 0;
    unsigned day = 0;
    unsigned month = 0;
    int year = 0;
    unsigned second = 0;
};

// Breaks a timestamp into UTC calendar fields.
TimeParts time_parts(Timestamp ts);

// Accepts "YYYY-MM-DD HH:MM:SS" and "YYYY-MM-DDTHH:MM:SSZ".
// Throws std::invalid_argument on malformed input.
Timestamp parse_timestamp(const std::string& text);

// Formats as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_timestamp(Timestamp ts);

// A document as it enters the pipeline: text plus author/time/space metadata.
struct RawRecord {
    DocId id = 0;
    std::string raw_text;
    AuthorId author_id = 0;
    std::string author_first;
    std::string author_last;
    unsigned age = 0;
    Gender gender = Gender::Male;
    Timestamp date = 0;
    double geo_x = 0.0;
    double geo_y = 0.0;
};

// One (term, document) posting. tf is the augmented term frequency,
// K + (1-K) * count / max_count, so the most frequent term has tf = 1.
struct VocabularyEntry {
    std::string term;
    DocId doc_id = 0;
    std::uint32_t count = 0;
    double tf = 0.0;
};

struct ProcessedDocument {
    RawRecord record;
    std::string clean_text;
    std::string lemma_text;
    std::uint32_t lemma_length = 0;  // total lemma token count, sum of posting counts
    std::vector<std::string> hashtags;
    std::vector<std::string> attags;
    std::vector<VocabularyEntry> postings;  // distinct terms, first-seen order
};

}  // namespace topkbench
