#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_set>
#include <variant>
#include <vector>

namespace medcorpus {

// Ordered piece list; a piece's id is its position. Matching is
// case-sensitive.
class SubwordVocab {
public:
    SubwordVocab(std::vector<std::string> pieces, std::string unk_piece = "[UNK]",
                 std::string continuation_prefix = "##");

    std::size_t size() const { return pieces_.size(); }
    const std::vector<std::string>& pieces() const { return pieces_; }
    const std::string& unk_piece() const { return unk_piece_; }
    const std::string& continuation_prefix() const { return continuation_prefix_; }
    std::size_t max_piece_bytes() const { return max_piece_bytes_; }

    bool contains(const std::string& piece) const { return index_.contains(piece); }
    // Id of piece, or -1.
    long id_of(std::string_view piece) const;

private:
    std::vector<std::string> pieces_;
    std::unordered_set<std::string> index_;
    std::string unk_piece_;
    std::string continuation_prefix_;
    std::size_t max_piece_bytes_ = 0;
};

// One piece per line; id = zero-based line number. Throws DataError on
// duplicate or empty pieces and when the unk piece is absent.
SubwordVocab load_vocab(const std::filesystem::path& path, const std::string& unk_piece = "[UNK]",
                        const std::string& continuation_prefix = "##");

struct WhitespaceTokenizer {};

struct GreedySubwordTokenizer {
    std::shared_ptr<const SubwordVocab> vocab;
};

using TokenizerKind = std::variant<WhitespaceTokenizer, GreedySubwordTokenizer>;

// Content tokens only; no special begin/end tokens are added.
std::size_t count_tokens(std::string_view text, const TokenizerKind& tk);

// Greedy longest-match pieces of a single word. A word with any unmatched
// position yields exactly {unk}.
std::vector<std::string> wordpiece(std::string_view word, const SubwordVocab& vocab);

std::size_t count_word_tokens(std::string_view word, const TokenizerKind& tk);

// Parses "whitespace" or "subword:<vocab-path>".
TokenizerKind parse_tokenizer_spec(const std::string& spec);

std::string describe(const TokenizerKind& tk);

}  // namespace medcorpus
