#include "medcorpus/tokenizer.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_map>

#include "medcorpus/error.hpp"
#include "medcorpus/utf8.hpp"

namespace medcorpus {

SubwordVocab::SubwordVocab(std::vector<std::string> pieces, std::string unk_piece,
                           std::string continuation_prefix)
    : pieces_(std::move(pieces)),
      unk_piece_(std::move(unk_piece)),
      continuation_prefix_(std::move(continuation_prefix)) {
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        if (pieces_[i].empty()) {
            throw DataError("vocab entry " + std::to_string(i) + " is empty");
        }
        if (!index_.insert(pieces_[i]).second) {
            throw DataError("duplicate vocab piece \"" + pieces_[i] + "\"");
        }
        max_piece_bytes_ = std::max(max_piece_bytes_, pieces_[i].size());
    }
    if (!index_.contains(unk_piece_)) {
        throw DataError("vocab lacks the unknown piece \"" + unk_piece_ + "\"");
    }
}

long SubwordVocab::id_of(std::string_view piece) const {
    const auto it = std::find(pieces_.begin(), pieces_.end(), piece);
    return it == pieces_.end() ? -1 : static_cast<long>(it - pieces_.begin());
}

SubwordVocab load_vocab(const std::filesystem::path& path, const std::string& unk_piece,
                        const std::string& continuation_prefix) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open vocab " + path.string());
    }
    std::vector<std::string> pieces;
    std::unordered_map<std::string, std::size_t> first_line;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            throw DataError(path.string() + ": empty piece on line " + std::to_string(lineno));
        }
        const auto [it, inserted] = first_line.emplace(line, lineno);
        if (!inserted) {
            throw DataError(path.string() + ": duplicate piece \"" + line + "\" on lines " +
                            std::to_string(it->second) + " and " + std::to_string(lineno));
        }
        pieces.push_back(line);
    }
    if (!first_line.contains(unk_piece)) {
        throw DataError(path.string() + ": missing unknown piece \"" + unk_piece + "\"");
    }
    return SubwordVocab(std::move(pieces), unk_piece, continuation_prefix);
}

std::vector<std::string> wordpiece(std::string_view word, const SubwordVocab& vocab) {
    // Candidate cut points are codepoint boundaries only.
    std::vector<std::size_t> bounds;
    for (const auto& cp : utf8::decode(word)) {
        bounds.push_back(cp.offset);
    }
    bounds.push_back(word.size());

    std::vector<std::string> pieces;
    std::size_t start = 0;  // index into bounds
    std::string candidate;
    while (start + 1 < bounds.size()) {
        const std::string_view prefix = start == 0 ? std::string_view{} : vocab.continuation_prefix();
        bool matched = false;
        for (std::size_t end = bounds.size() - 1; end > start; --end) {
            const std::size_t len = bounds[end] - bounds[start];
            if (len > vocab.max_piece_bytes()) {
                continue;
            }
            candidate.assign(prefix);
            candidate.append(word.substr(bounds[start], len));
            if (vocab.contains(candidate)) {
                pieces.push_back(candidate);
                start = end;
                matched = true;
                break;
            }
        }
        if (!matched) {
            return {vocab.unk_piece()};
        }
    }
    return pieces;
}

std::size_t count_word_tokens(std::string_view word, const TokenizerKind& tk) {
    if (std::holds_alternative<WhitespaceTokenizer>(tk)) {
        return word.empty() ? 0 : 1;
    }
    return wordpiece(word, *std::get<GreedySubwordTokenizer>(tk).vocab).size();
}

std::size_t count_tokens(std::string_view text, const TokenizerKind& tk) {
    const auto words = utf8::split_words(text);
    if (std::holds_alternative<WhitespaceTokenizer>(tk)) {
        return words.size();
    }
    std::size_t total = 0;
    for (const auto word : words) {
        total += count_word_tokens(word, tk);
    }
    return total;
}

TokenizerKind parse_tokenizer_spec(const std::string& spec) {
    if (spec == "whitespace") {
        return WhitespaceTokenizer{};
    }
    constexpr std::string_view kSubword = "subword:";
    if (spec.starts_with(kSubword) && spec.size() > kSubword.size()) {
        return GreedySubwordTokenizer{
            std::make_shared<const SubwordVocab>(load_vocab(spec.substr(kSubword.size())))};
    }
    throw ConfigError("tokenizer must be 'whitespace' or 'subword:<vocab-path>', got '" + spec + "'");
}

std::string describe(const TokenizerKind& tk) {
    if (std::holds_alternative<WhitespaceTokenizer>(tk)) {
        return "whitespace";
    }
    return "subword(" + std::to_string(std::get<GreedySubwordTokenizer>(tk).vocab->size()) + " pieces)";
}

}  // namespace medcorpus
