#include "topkbench/text.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

namespace topkbench {

namespace {

bool is_ascii_punct(char c) {
    return std::ispunct(static_cast<unsigned char>(c)) != 0;
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

// Bytes >= 0x80 are UTF-8 continuation/lead bytes and pass through untouched.
std::string strip_punct(std::string_view token) {
    std::string out;
    out.reserve(token.size());
    for (char c : token)
        if (static_cast<unsigned char>(c) >= 0x80 || !is_ascii_punct(c)) out.push_back(c);
    return out;
}

std::vector<std::string> split_ws(std::string_view text) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t j = i;
        while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
        if (j > i) tokens.emplace_back(text.substr(i, j - i));
        i = j;
    }
    return tokens;
}

bool is_url(std::string_view token) {
    return token.starts_with("http://") || token.starts_with("https://") ||
           token.starts_with("www.");
}

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

const StopwordSet& default_stopwords() {
    static const StopwordSet words = {
        "a",      "about",  "above", "after",  "again", "all",    "am",     "an",
        "and",    "any",    "are",   "as",     "at",    "be",     "because", "been",
        "before", "being",  "below", "between", "both", "but",    "by",     "can",
        "could",  "did",    "do",    "does",   "doing", "down",   "during", "each",
        "few",    "for",    "from",  "further", "had",  "has",    "have",   "having",
        "he",     "her",    "here",  "hers",   "him",   "his",    "how",    "i",
        "if",     "in",     "into",  "is",     "it",    "its",    "just",   "me",
        "more",   "most",   "much",  "my",     "no",    "nor",    "not",    "now",
        "of",     "off",    "on",    "once",   "only",  "or",     "other",  "our",
        "ours",   "out",    "over",  "own",    "same",  "she",    "should", "so",
        "some",   "such",   "than",  "that",   "the",   "their",  "theirs", "them",
        "then",   "there",  "these", "they",   "this",  "those",  "through", "to",
        "too",    "under",  "until", "up",     "very",  "was",    "we",     "were",
        "what",   "when",   "where", "which",  "while", "who",    "whom",   "why",
        "will",   "with",   "would", "you",    "your",  "yours",
    };
    return words;
}

const ContractionTable& default_contractions() {
    static const ContractionTable table = {
        {"ain't", "am not"},     {"aren't", "are not"},   {"can't", "cannot"},
        {"couldn't", "could not"}, {"didn't", "did not"}, {"doesn't", "does not"},
        {"don't", "do not"},     {"hadn't", "had not"},   {"hasn't", "has not"},
        {"haven't", "have not"}, {"he'd", "he would"},    {"he'll", "he will"},
        {"he's", "he is"},       {"how's", "how is"},     {"i'd", "i would"},
        {"i'll", "i will"},      {"i'm", "i am"},         {"i've", "i have"},
        {"isn't", "is not"},     {"it'd", "it would"},    {"it'll", "it will"},
        {"it's", "it is"},       {"let's", "let us"},     {"mustn't", "must not"},
        {"shan't", "shall not"}, {"she'd", "she would"},  {"she'll", "she will"},
        {"she's", "she is"},     {"shouldn't", "should not"}, {"that's", "that is"},
        {"there's", "there is"}, {"they'd", "they would"}, {"they'll", "they will"},
        {"they're", "they are"}, {"they've", "they have"}, {"wasn't", "was not"},
        {"we'd", "we would"},    {"we'll", "we will"},    {"we're", "we are"},
        {"we've", "we have"},    {"weren't", "were not"}, {"what's", "what is"},
        {"where's", "where is"}, {"who's", "who is"},     {"won't", "will not"},
        {"wouldn't", "would not"}, {"you'd", "you would"}, {"you'll", "you will"},
        {"you're", "you are"},   {"you've", "you have"},
    };
    return table;
}

StopwordSet load_stopwords(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open stop-word file: " + path);
    StopwordSet words;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        words.insert(to_lower(line));
    }
    return words;
}

ContractionTable load_contractions(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open contraction file: " + path);
    ContractionTable table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw std::runtime_error("contraction file " + path + " line " +
                                     std::to_string(lineno) + ": missing tab separator");
        table[to_lower(line.substr(0, tab))] = line.substr(tab + 1);
    }
    return table;
}

TagExtraction extract_tags(std::string_view raw_text) {
    TagExtraction out;
    for (const std::string& token : split_ws(raw_text)) {
        if (is_url(token)) continue;
        if (token.size() > 1 && token.front() == '#') {
            out.hashtags.push_back(token.substr(1));
        } else if (token.size() > 1 && token.front() == '@') {
            out.attags.push_back(token.substr(1));
        } else {
            if (!out.stripped.empty()) out.stripped.push_back(' ');
            out.stripped += token;
        }
    }
    return out;
}

std::string expand_contractions(std::string_view text, const ContractionTable& table) {
    std::string out;
    for (const std::string& token : split_ws(text)) {
        // Trailing sentence punctuation is carried over unchanged.
        std::size_t core_len = token.size();
        while (core_len > 0 && is_ascii_punct(token[core_len - 1]) && token[core_len - 1] != '\'')
            --core_len;
        const std::string core = token.substr(0, core_len);
        const std::string tail = token.substr(core_len);
        const std::string low = to_lower(core);

        std::string replacement;
        if (auto it = table.find(low); it != table.end()) {
            replacement = it->second;
            if (!core.empty() && !replacement.empty() &&
                std::isupper(static_cast<unsigned char>(core[0])))
                replacement[0] =
                    static_cast<char>(std::toupper(static_cast<unsigned char>(replacement[0])));
        } else if (core.size() > 2 && ends_with(low, "'s")) {
            // Possessive form read as a contraction of "is".
            replacement = core.substr(0, core.size() - 2) + " is";
        } else {
            replacement = core;
        }
        if (!out.empty()) out.push_back(' ');
        out += replacement + tail;
    }
    return out;
}

std::vector<std::string> split_sentences(std::string_view text) {
    std::vector<std::string> sentences;
    std::string current;
    for (std::size_t i = 0; i < text.size(); ++i) {
        current.push_back(text[i]);
        const char c = text[i];
        if ((c == '.' || c == '!' || c == '?') &&
            (i + 1 == text.size() || std::isspace(static_cast<unsigned char>(text[i + 1])))) {
            while (!current.empty() && std::isspace(static_cast<unsigned char>(current.front())))
                current.erase(current.begin());
            if (!current.empty()) sentences.push_back(current);
            current.clear();
        }
    }
    while (!current.empty() && std::isspace(static_cast<unsigned char>(current.front())))
        current.erase(current.begin());
    if (!current.empty()) sentences.push_back(current);
    return sentences;
}

PosTag guess_pos(std::string_view token) {
    if (ends_with(token, "ing") || ends_with(token, "ed")) return PosTag::Verb;
    if (ends_with(token, "ly")) return PosTag::Adverb;
    if (ends_with(token, "ous") || ends_with(token, "ful") || ends_with(token, "ive") ||
        ends_with(token, "able"))
        return PosTag::Adjective;
    return PosTag::Noun;
}

std::string SuffixRuleLemmatizer::lemma(const std::string& token, PosTag pos) const {
    std::string t = to_lower(token);
    const auto undouble = [](std::string& s) {
        if (s.size() >= 3 && s[s.size() - 1] == s[s.size() - 2]) s.pop_back();
    };
    if (pos == PosTag::Verb) {
        if (ends_with(t, "ies") && t.size() > 4) return t.substr(0, t.size() - 3) + "y";
        if (ends_with(t, "ing") && t.size() > 5) {
            t = t.substr(0, t.size() - 3);
            undouble(t);
            return t;
        }
        if (ends_with(t, "ed") && t.size() > 4) {
            t = t.substr(0, t.size() - 2);
            undouble(t);
            return t;
        }
    }
    if (ends_with(t, "ies") && t.size() > 4) return t.substr(0, t.size() - 3) + "y";
    if (ends_with(t, "es") && t.size() > 3) {
        const std::string_view stem(t.data(), t.size() - 2);
        if (stem.ends_with("s") || stem.ends_with("x") || stem.ends_with("z") ||
            stem.ends_with("ch") || stem.ends_with("sh"))
            return std::string(stem);
    }
    if (ends_with(t, "s") && !ends_with(t, "ss") && !ends_with(t, "us") && !ends_with(t, "is") &&
        t.size() > 3)
        return t.substr(0, t.size() - 1);
    return t;
}

ProcessedDocument preprocess(const RawRecord& record, const StopwordSet& stopwords,
                             const Lemmatizer& lemmatizer, double tf_k) {
    if (record.id == 0) throw std::invalid_argument("preprocess: record has empty id");
    if (record.date < 0)
        throw std::invalid_argument("preprocess: record " + std::to_string(record.id) +
                                    " has malformed timestamp");

    ProcessedDocument doc;
    doc.record = record;

    TagExtraction tags = extract_tags(record.raw_text);
    doc.hashtags = std::move(tags.hashtags);
    doc.attags = std::move(tags.attags);

    const std::string expanded = expand_contractions(tags.stripped, default_contractions());

    std::vector<std::string> clean_tokens;
    for (const std::string& sentence : split_sentences(expanded)) {
        for (const std::string& token : split_ws(sentence)) {
            std::string cleaned = strip_punct(token);
            if (!cleaned.empty()) clean_tokens.push_back(std::move(cleaned));
        }
    }
    for (std::size_t i = 0; i < clean_tokens.size(); ++i) {
        if (i > 0) doc.clean_text.push_back(' ');
        doc.clean_text += clean_tokens[i];
    }

    std::vector<std::string> lemma_stream;
    const auto add_lemma_token = [&](const std::string& token) {
        const std::string low = to_lower(token);
        if (low.empty() || stopwords.contains(low)) return;
        std::string lem = lemmatizer.lemma(low, guess_pos(low));
        if (!lem.empty()) lemma_stream.push_back(std::move(lem));
    };
    for (const std::string& token : clean_tokens) add_lemma_token(token);
    for (const std::string& body : doc.hashtags) {
        const std::string cleaned = strip_punct(body);
        if (!cleaned.empty()) add_lemma_token(cleaned);
    }

    doc.lemma_length = static_cast<std::uint32_t>(lemma_stream.size());
    for (std::size_t i = 0; i < lemma_stream.size(); ++i) {
        if (i > 0) doc.lemma_text.push_back(' ');
        doc.lemma_text += lemma_stream[i];
    }

    // Postings in first-seen order.
    std::unordered_map<std::string, std::size_t> index;
    for (const std::string& lem : lemma_stream) {
        auto [it, inserted] = index.emplace(lem, doc.postings.size());
        if (inserted) {
            VocabularyEntry entry;
            entry.term = lem;
            entry.doc_id = record.id;
            entry.count = 1;
            doc.postings.push_back(std::move(entry));
        } else {
            ++doc.postings[it->second].count;
        }
    }
    std::uint32_t max_count = 0;
    for (const VocabularyEntry& e : doc.postings) max_count = std::max(max_count, e.count);
    for (VocabularyEntry& e : doc.postings)
        e.tf = tf_k + (1.0 - tf_k) * static_cast<double>(e.count) / max_count;

    return doc;
}

}  // namespace topkbench
