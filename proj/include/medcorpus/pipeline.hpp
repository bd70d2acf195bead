#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "medcorpus/corpus.hpp"
#include "medcorpus/quality_filter.hpp"
#include "medcorpus/segmenter.hpp"
#include "medcorpus/tokenizer.hpp"

// Document-level pipeline kernels. Each kernel exists twice: an OpenMP
// version in medcorpus::parallel and a straightforward serial version in
// medcorpus::serial that the tests use as the reference. Results are written
// into per-document slots, so output order never depends on the worker count.
namespace medcorpus {

struct FilteredDocument {
    // Kept paragraphs joined with a blank line; empty when nothing survived.
    Document doc;
    std::size_t paragraphs = 0;
    std::size_t kept = 0;
    std::vector<std::pair<Paragraph, FilterVerdict>> dropped;

    bool operator==(const FilteredDocument&) const = default;
};

FilteredDocument filter_document(const Document& doc, const FilterConfig& cfg);

namespace serial {

std::vector<FilteredDocument> filter_documents(std::span<const Document> docs, const FilterConfig& cfg);

std::vector<std::vector<Segment>> segment_documents(std::span<const Document> docs, const SegmenterConfig& cfg);

std::vector<std::size_t> count_tokens(std::span<const std::string> texts, const TokenizerKind& tk);

}  // namespace serial

namespace parallel {

// workers < 1 means "use the OpenMP default".
std::vector<FilteredDocument> filter_documents(std::span<const Document> docs, const FilterConfig& cfg,
                                               int workers);

std::vector<std::vector<Segment>> segment_documents(std::span<const Document> docs, const SegmenterConfig& cfg,
                                                    int workers);

std::vector<std::size_t> count_tokens(std::span<const std::string> texts, const TokenizerKind& tk, int workers);

}  // namespace parallel

}  // namespace medcorpus
