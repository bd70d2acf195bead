#pragma once

#include <cstddef>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "medcorpus/corpus.hpp"
#include "medcorpus/tokenizer.hpp"

namespace medcorpus {

std::set<std::string> default_abbreviations();

struct SegmenterConfig {
    std::size_t max_tokens = 128;
    std::set<std::string> abbreviations = default_abbreviations();
    TokenizerKind tokenizer = WhitespaceTokenizer{};

    void validate() const;
};

// One abbreviation per line; blank lines ignored.
std::set<std::string> load_abbreviations(const std::filesystem::path& path);

// Boundaries fall after '.', '!' or '?' followed by whitespace and then an
// uppercase letter or digit, except inside decimals and after a configured
// abbreviation. Sentence text is whitespace-collapsed.
std::vector<Sentence> split_sentences(const Paragraph& p, const SegmenterConfig& cfg);

// Greedy sequential packing of one document's sentences (document-level
// ordinals = position in the vector). Sentences that alone exceed the budget
// are hard-split at word boundaries into standalone segments.
std::vector<Segment> pack_segments(const std::vector<Sentence>& sentences, const SegmenterConfig& cfg,
                                   const std::string& source = {});

// All sentences of a document in reading order.
std::vector<Sentence> document_sentences(const Document& doc, const SegmenterConfig& cfg);

std::vector<Segment> segment_document(const Document& doc, const SegmenterConfig& cfg);

struct SourceCounts {
    std::string source;
    std::size_t documents = 0;
    std::size_t segments = 0;
    std::size_t tokens = 0;

    bool operator==(const SourceCounts&) const = default;
};

// Per-source original document count (distinct doc_id), segment count and
// token total, in first-appearance order of the source.
std::vector<SourceCounts> count_segments(const std::vector<Segment>& segments);

}  // namespace medcorpus
