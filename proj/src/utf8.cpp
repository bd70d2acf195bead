#include "medcorpus/utf8.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

namespace medcorpus::utf8 {

namespace {

template <typename Fn>
void for_each(std::string_view text, Fn&& fn) {
    const auto* s = reinterpret_cast<const uint8_t*>(text.data());
    const auto n = static_cast<int32_t>(text.size());
    int32_t i = 0;
    while (i < n) {
        const int32_t start = i;
        UChar32 c;
        U8_NEXT(s, i, n, c);
        const char32_t value = c < 0 ? kInvalidCodepoint : static_cast<char32_t>(c);
        if (!fn(Codepoint{value, static_cast<std::size_t>(start), static_cast<std::size_t>(i - start)})) {
            return;
        }
    }
}

bool valid_cp(char32_t c) { return c != kInvalidCodepoint; }

}  // namespace

std::vector<Codepoint> decode(std::string_view text) {
    std::vector<Codepoint> out;
    out.reserve(text.size());
    for_each(text, [&](const Codepoint& cp) {
        out.push_back(cp);
        return true;
    });
    return out;
}

bool is_valid(std::string_view text) {
    bool ok = true;
    for_each(text, [&](const Codepoint& cp) {
        ok = valid_cp(cp.value);
        return ok;
    });
    return ok;
}

bool is_alphabetic(char32_t c) { return valid_cp(c) && u_isUAlphabetic(static_cast<UChar32>(c)); }

bool is_whitespace(char32_t c) { return valid_cp(c) && u_isUWhiteSpace(static_cast<UChar32>(c)); }

bool is_uppercase(char32_t c) { return valid_cp(c) && u_isUUppercase(static_cast<UChar32>(c)); }

bool is_digit(char32_t c) { return valid_cp(c) && u_isdigit(static_cast<UChar32>(c)); }

bool is_punctuation(char32_t c) { return valid_cp(c) && u_ispunct(static_cast<UChar32>(c)); }

std::string encode(char32_t c) {
    uint8_t buf[U8_MAX_LENGTH];
    int32_t len = 0;
    UBool error = false;
    U8_APPEND(buf, len, U8_MAX_LENGTH, static_cast<UChar32>(c), error);
    if (error) {
        return "\xEF\xBF\xBD";
    }
    return std::string(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(len));
}

std::string to_lower(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for_each(text, [&](const Codepoint& cp) {
        if (!valid_cp(cp.value)) {
            out.append(text.substr(cp.offset, cp.length));
        } else {
            out += encode(static_cast<char32_t>(u_tolower(static_cast<UChar32>(cp.value))));
        }
        return true;
    });
    return out;
}

std::vector<std::string_view> split_words(std::string_view text) {
    std::vector<std::string_view> words;
    std::size_t word_start = 0;
    bool in_word = false;
    for_each(text, [&](const Codepoint& cp) {
        const bool space = is_whitespace(cp.value);
        if (space && in_word) {
            words.push_back(text.substr(word_start, cp.offset - word_start));
            in_word = false;
        } else if (!space && !in_word) {
            word_start = cp.offset;
            in_word = true;
        }
        return true;
    });
    if (in_word) {
        words.push_back(text.substr(word_start));
    }
    return words;
}

std::string_view trim(std::string_view text) {
    std::size_t first = text.size();
    std::size_t last = 0;
    for_each(text, [&](const Codepoint& cp) {
        if (!is_whitespace(cp.value)) {
            if (first == text.size()) {
                first = cp.offset;
            }
            last = cp.offset + cp.length;
        }
        return true;
    });
    if (first == text.size()) {
        return {};
    }
    return text.substr(first, last - first);
}

std::string collapse_whitespace(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (const auto word : split_words(text)) {
        if (!out.empty()) {
            out += ' ';
        }
        out.append(word);
    }
    return out;
}

std::size_t codepoint_count(std::string_view text) {
    std::size_t n = 0;
    for_each(text, [&](const Codepoint&) {
        ++n;
        return true;
    });
    return n;
}

}  // namespace medcorpus::utf8
