#include "medcorpus/quality_filter.hpp"

#include <cmath>

#include "medcorpus/error.hpp"
#include "medcorpus/utf8.hpp"

namespace medcorpus {

void FilterConfig::validate() const {
    if (!std::isfinite(min_letter_ratio) || min_letter_ratio < 0.0 || min_letter_ratio > 1.0) {
        throw ConfigError("min_letter_ratio must lie in [0, 1]");
    }
    if (!std::isfinite(min_words_per_line) || min_words_per_line < 0.0) {
        throw ConfigError("min_words_per_line must be finite and non-negative");
    }
}

std::string_view to_string(FilterReason reason) {
    switch (reason) {
        case FilterReason::Kept:
            return "Kept";
        case FilterReason::LowLetterRatio:
            return "LowLetterRatio";
        case FilterReason::LowWordsPerLine:
            return "LowWordsPerLine";
    }
    return "Unknown";
}

double letter_ratio(std::string_view text) {
    std::size_t letters = 0;
    std::size_t visible = 0;
    for (const auto& cp : utf8::decode(text)) {
        if (utf8::is_whitespace(cp.value)) {
            continue;
        }
        ++visible;
        if (utf8::is_alphabetic(cp.value)) {
            ++letters;
        }
    }
    return visible == 0 ? 0.0 : static_cast<double>(letters) / static_cast<double>(visible);
}

double words_per_line(std::string_view text) {
    std::size_t words = 0;
    std::size_t lines = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            nl = text.size();
        }
        const auto n = utf8::split_words(text.substr(pos, nl - pos)).size();
        if (n > 0) {
            words += n;
            ++lines;
        }
        pos = nl + 1;
    }
    return lines == 0 ? 0.0 : static_cast<double>(words) / static_cast<double>(lines);
}

FilterVerdict apply_filter(std::string_view paragraph_text, const FilterConfig& cfg) {
    FilterVerdict v;
    v.letter_ratio = letter_ratio(paragraph_text);
    v.words_per_line = words_per_line(paragraph_text);
    if (v.letter_ratio < cfg.min_letter_ratio) {
        v.reason = FilterReason::LowLetterRatio;
    } else if (v.words_per_line < cfg.min_words_per_line) {
        v.reason = FilterReason::LowWordsPerLine;
    } else {
        v.reason = FilterReason::Kept;
    }
    v.kept = v.reason == FilterReason::Kept;
    return v;
}

nlohmann::json verdict_to_json(const Paragraph& p, const FilterVerdict& v) {
    return nlohmann::json{{"doc_id", p.doc_id},
                          {"para_index", p.index},
                          {"kept", v.kept},
                          {"letter_ratio", v.letter_ratio},
                          {"words_per_line", v.words_per_line},
                          {"reason", std::string(to_string(v.reason))}};
}

}  // namespace medcorpus
