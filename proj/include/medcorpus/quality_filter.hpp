#pragma once

#include <string_view>

#include "medcorpus/corpus.hpp"

namespace medcorpus {

struct FilterConfig {
    double min_letter_ratio = 0.60;
    double min_words_per_line = 3.0;

    // Throws ConfigError unless both thresholds are finite, non-negative and
    // the ratio lies in [0, 1].
    void validate() const;
};

enum class FilterReason { Kept, LowLetterRatio, LowWordsPerLine };

std::string_view to_string(FilterReason reason);

struct FilterVerdict {
    bool kept = false;
    double letter_ratio = 0.0;
    double words_per_line = 0.0;
    FilterReason reason = FilterReason::Kept;

    bool operator==(const FilterVerdict&) const = default;
};

// Alphabetic codepoints over non-whitespace codepoints; 0 for an empty
// denominator.
double letter_ratio(std::string_view text);

// Whitespace-delimited words over non-blank lines; 0 when there are no lines.
double words_per_line(std::string_view text);

// Values exactly at a threshold are kept. When both checks fail the letter
// ratio is reported.
FilterVerdict apply_filter(std::string_view paragraph_text, const FilterConfig& cfg);

inline FilterVerdict apply_filter(const Paragraph& p, const FilterConfig& cfg) {
    return apply_filter(p.text, cfg);
}

nlohmann::json verdict_to_json(const Paragraph& p, const FilterVerdict& v);

}  // namespace medcorpus
