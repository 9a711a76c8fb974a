#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "topkbench/types.hpp"

namespace topkbench {

using StopwordSet = std::unordered_set<std::string>;
using ContractionTable = std::unordered_map<std::string, std::string>;

// Fixed English defaults; override with the file loaders below.
const StopwordSet& default_stopwords();
const ContractionTable& default_contractions();

// One entry per line, blank lines and lines starting with '#' ignored.
StopwordSet load_stopwords(const std::string& path);
// Lines of the form "short<TAB>expansion".
ContractionTable load_contractions(const std::string& path);

struct TagExtraction {
    std::vector<std::string> hashtags;  // '#' marker stripped
    std::vector<std::string> attags;    // '@' marker stripped
    std::string stripped;               // remaining tokens, original order, single-spaced
};

// Pulls '#'/'@' tokens out of the text and drops URL tokens
// (http://, https:// and www. prefixes).
TagExtraction extract_tags(std::string_view raw_text);

// Replaces table hits token by token, preserving the case of the leading
// character. A trailing "'s" on a word not in the table is expanded to " is".
std::string expand_contractions(std::string_view text, const ContractionTable& table);

// Splits on '.', '!' or '?' followed by whitespace (or end of text).
std::vector<std::string> split_sentences(std::string_view text);

enum class PosTag : std::uint8_t { Noun, Verb, Adjective, Adverb, Other };

// Suffix-based guess; no sentence context.
PosTag guess_pos(std::string_view token);

// Maps a token to its base form. Implementations must be total: any token
// yields some lemma (worst case the lowercased token itself).
class Lemmatizer {
public:
    virtual ~Lemmatizer() = default;
    virtual std::string lemma(const std::string& token, PosTag pos) const = 0;
};

// Default heuristic: lowercase plus a small plural/verb suffix rule table.
class SuffixRuleLemmatizer final : public Lemmatizer {
public:
    std::string lemma(const std::string& token, PosTag pos) const override;
};

// Runs the full pipeline: tag extraction, contraction expansion, sentence
// split, POS tagging, punctuation removal (clean_text), stop-word removal
// and lemmatization (lemma_text), posting construction. Hashtag bodies are
// lemmatized into the vocabulary; attags stay metadata.
//
// tf_k is the augmented-TF floor stored with each posting.
// Throws std::invalid_argument on id == 0 or a negative date.
ProcessedDocument preprocess(const RawRecord& record, const StopwordSet& stopwords,
                             const Lemmatizer& lemmatizer, double tf_k = 0.5);

}  // namespace topkbench
