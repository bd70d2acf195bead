#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

// Thin UTF-8 helpers over ICU character properties. Invalid byte sequences
// decode to kInvalidCodepoint and are never letters or whitespace.
namespace medcorpus::utf8 {

inline constexpr char32_t kInvalidCodepoint = 0xFFFFFFFF;

struct Codepoint {
    char32_t value;
    std::size_t offset;  // byte offset of the first code unit
    std::size_t length;  // number of code units
};

std::vector<Codepoint> decode(std::string_view text);

bool is_valid(std::string_view text);

bool is_alphabetic(char32_t c);
bool is_whitespace(char32_t c);
bool is_uppercase(char32_t c);
bool is_digit(char32_t c);
bool is_punctuation(char32_t c);

std::string encode(char32_t c);

// Simple (one-to-one) lowercase mapping per codepoint.
std::string to_lower(std::string_view text);

// Whitespace-delimited words, using the Unicode White_Space property.
std::vector<std::string_view> split_words(std::string_view text);

std::string_view trim(std::string_view text);

// Trim and collapse every whitespace run to a single ASCII space.
std::string collapse_whitespace(std::string_view text);

std::size_t codepoint_count(std::string_view text);

}  // namespace medcorpus::utf8
