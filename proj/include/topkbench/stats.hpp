#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>

namespace topkbench {

// Corpus-level figures the weighting formulas depend on. When computed over
// a constraint-selected subset, every field refers to that subset only.
struct CorpusStats {
    std::size_t n_docs = 0;
    double avg_doc_len = 0.0;
    std::size_t vocab_size = 0;
    std::unordered_map<std::string, std::size_t> doc_frequency;  // term -> n

    std::size_t doc_freq(const std::string& term) const {
        auto it = doc_frequency.find(term);
        return it == doc_frequency.end() ? 0 : it->second;
    }
};

}  // namespace topkbench
