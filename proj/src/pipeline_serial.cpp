#include "medcorpus/pipeline.hpp"

namespace medcorpus {

FilteredDocument filter_document(const Document& doc, const FilterConfig& cfg) {
    FilteredDocument out;
    out.doc.id = doc.id;
    out.doc.source = doc.source;
    out.doc.meta = doc.meta;
    for (auto& para : split_paragraphs(doc)) {
        ++out.paragraphs;
        const auto verdict = apply_filter(para, cfg);
        if (verdict.kept) {
            ++out.kept;
            if (!out.doc.text.empty()) {
                out.doc.text += "\n\n";
            }
            out.doc.text += para.text;
        } else {
            out.dropped.emplace_back(std::move(para), verdict);
        }
    }
    return out;
}

namespace serial {

std::vector<FilteredDocument> filter_documents(std::span<const Document> docs, const FilterConfig& cfg) {
    cfg.validate();
    std::vector<FilteredDocument> out;
    out.reserve(docs.size());
    for (const auto& doc : docs) {
        out.push_back(filter_document(doc, cfg));
    }
    return out;
}

std::vector<std::vector<Segment>> segment_documents(std::span<const Document> docs, const SegmenterConfig& cfg) {
    cfg.validate();
    std::vector<std::vector<Segment>> out;
    out.reserve(docs.size());
    for (const auto& doc : docs) {
        out.push_back(segment_document(doc, cfg));
    }
    return out;
}

std::vector<std::size_t> count_tokens(std::span<const std::string> texts, const TokenizerKind& tk) {
    std::vector<std::size_t> out;
    out.reserve(texts.size());
    for (const auto& text : texts) {
        out.push_back(medcorpus::count_tokens(text, tk));
    }
    return out;
}

}  // namespace serial

}  // namespace medcorpus
