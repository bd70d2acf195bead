#include "medcorpus/segmenter.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <unordered_map>
#include <unordered_set>

#include "medcorpus/error.hpp"
#include "medcorpus/utf8.hpp"

namespace medcorpus {

std::set<std::string> default_abbreviations() {
    return {"z.B.", "Dr.", "bzw.", "ca.", "u.a.", "evtl.", "ggf."};
}

void SegmenterConfig::validate() const {
    if (max_tokens < 1) {
        throw ConfigError("max_tokens must be at least 1");
    }
    for (const auto& abbrev : abbreviations) {
        if (abbrev.empty() || abbrev.back() != '.') {
            throw ConfigError("abbreviation \"" + abbrev + "\" must end with '.'");
        }
    }
}

std::set<std::string> load_abbreviations(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open abbreviation file " + path.string());
    }
    std::set<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        const auto entry = utf8::trim(line);
        if (!entry.empty()) {
            out.emplace(entry);
        }
    }
    return out;
}

namespace {

bool is_terminator(char32_t c) { return c == U'.' || c == U'!' || c == U'?'; }

bool is_opening(char32_t c) { return c == U'(' || c == U'[' || c == U'"' || c == U'\''; }

// The whitespace-delimited word ending at cps[end], with leading
// opening brackets/quotes removed.
std::string_view word_ending_at(std::string_view text, const std::vector<utf8::Codepoint>& cps, std::size_t end) {
    std::size_t begin = end;
    while (begin > 0 && !utf8::is_whitespace(cps[begin - 1].value)) {
        --begin;
    }
    while (begin < end && is_opening(cps[begin].value)) {
        ++begin;
    }
    const std::size_t from = cps[begin].offset;
    return text.substr(from, cps[end].offset + cps[end].length - from);
}

}  // namespace

std::vector<Sentence> split_sentences(const Paragraph& p, const SegmenterConfig& cfg) {
    const std::string_view text = p.text;
    const auto cps = utf8::decode(text);
    std::vector<Sentence> out;

    auto emit = [&](std::size_t from, std::size_t to) {
        auto body = utf8::collapse_whitespace(text.substr(from, to - from));
        if (!body.empty()) {
            out.push_back({p.doc_id, p.index, out.size(), std::move(body)});
        }
    };

    std::size_t sentence_start = 0;
    for (std::size_t i = 0; i < cps.size(); ++i) {
        if (!is_terminator(cps[i].value)) {
            continue;
        }
        if (i + 1 >= cps.size() || !utf8::is_whitespace(cps[i + 1].value)) {
            continue;
        }
        std::size_t next = i + 1;
        while (next < cps.size() && utf8::is_whitespace(cps[next].value)) {
            ++next;
        }
        if (next >= cps.size()) {
            continue;
        }
        if (!utf8::is_uppercase(cps[next].value) && !utf8::is_digit(cps[next].value)) {
            continue;
        }
        if (cps[i].value == U'.') {
            if (i > 0 && utf8::is_digit(cps[i - 1].value) && utf8::is_digit(cps[i + 1].value)) {
                continue;
            }
            if (cfg.abbreviations.contains(std::string(word_ending_at(text, cps, i)))) {
                continue;
            }
        }
        const std::size_t end = cps[i].offset + cps[i].length;
        emit(sentence_start, end);
        sentence_start = cps[next].offset;
        i = next - 1;
    }
    emit(sentence_start, text.size());
    return out;
}

namespace {

struct OpenSegment {
    std::size_t first = 0;
    std::size_t last = 0;
    std::size_t tokens = 0;
    std::string text;
};

// Splits a word whose own count exceeds the budget into fragments of at most
// max_tokens codepoints; a fragment never counts more tokens than codepoints.
std::vector<std::string> fragment_word(std::string_view word, std::size_t max_tokens) {
    std::vector<std::string> fragments;
    const auto cps = utf8::decode(word);
    for (std::size_t i = 0; i < cps.size(); i += max_tokens) {
        const std::size_t j = std::min(cps.size(), i + max_tokens);
        const std::size_t from = cps[i].offset;
        const std::size_t to = j == cps.size() ? word.size() : cps[j].offset;
        fragments.emplace_back(word.substr(from, to - from));
    }
    return fragments;
}

void hard_split(const Sentence& sentence, std::size_t ordinal, const SegmenterConfig& cfg,
                const std::string& source, std::vector<Segment>& out) {
    Segment piece{sentence.doc_id, source, 0, ordinal, ordinal, {}, 0, true};
    auto flush = [&] {
        if (piece.token_count > 0) {
            piece.index = out.size();
            out.push_back(piece);
        }
        piece.text.clear();
        piece.token_count = 0;
    };
    auto add = [&](std::string_view word, std::size_t tokens) {
        if (piece.token_count + tokens > cfg.max_tokens) {
            flush();
        }
        if (!piece.text.empty()) {
            piece.text += ' ';
        }
        piece.text.append(word);
        piece.token_count += tokens;
    };
    for (const auto word : utf8::split_words(sentence.text)) {
        const std::size_t tokens = count_word_tokens(word, cfg.tokenizer);
        if (tokens <= cfg.max_tokens) {
            add(word, tokens);
            continue;
        }
        for (const auto& fragment : fragment_word(word, cfg.max_tokens)) {
            add(fragment, count_word_tokens(fragment, cfg.tokenizer));
        }
    }
    flush();
}

}  // namespace

std::vector<Segment> pack_segments(const std::vector<Sentence>& sentences, const SegmenterConfig& cfg,
                                   const std::string& source) {
    cfg.validate();
    std::vector<Segment> out;
    std::optional<OpenSegment> open;
    const std::string doc_id = sentences.empty() ? std::string{} : sentences.front().doc_id;

    auto close = [&] {
        if (open) {
            out.push_back({doc_id, source, out.size(), open->first, open->last, std::move(open->text),
                           open->tokens, false});
            open.reset();
        }
    };

    for (std::size_t i = 0; i < sentences.size(); ++i) {
        const auto& sentence = sentences[i];
        // Token counts are additive over whitespace joins, so the joined
        // segment's count is the running sum.
        const std::size_t tokens = count_tokens(sentence.text, cfg.tokenizer);
        if (tokens > cfg.max_tokens) {
            close();
            hard_split(sentence, i, cfg, source, out);
            continue;
        }
        if (open && open->tokens + tokens <= cfg.max_tokens) {
            open->text += ' ';
            open->text += sentence.text;
            open->tokens += tokens;
            open->last = i;
            continue;
        }
        close();
        open = OpenSegment{i, i, tokens, sentence.text};
    }
    close();
    return out;
}

std::vector<Sentence> document_sentences(const Document& doc, const SegmenterConfig& cfg) {
    std::vector<Sentence> all;
    for (const auto& para : split_paragraphs(doc)) {
        auto sentences = split_sentences(para, cfg);
        all.insert(all.end(), std::make_move_iterator(sentences.begin()),
                   std::make_move_iterator(sentences.end()));
    }
    return all;
}

std::vector<Segment> segment_document(const Document& doc, const SegmenterConfig& cfg) {
    return pack_segments(document_sentences(doc, cfg), cfg, doc.source);
}

std::vector<SourceCounts> count_segments(const std::vector<Segment>& segments) {
    std::vector<SourceCounts> rows;
    std::unordered_map<std::string, std::size_t> row_of;
    std::unordered_map<std::string, std::unordered_set<std::string>> docs_of;
    for (const auto& seg : segments) {
        auto [it, inserted] = row_of.emplace(seg.source, rows.size());
        if (inserted) {
            rows.push_back({seg.source, 0, 0, 0});
        }
        auto& row = rows[it->second];
        ++row.segments;
        row.tokens += seg.token_count;
        if (docs_of[seg.source].insert(seg.doc_id).second) {
            ++row.documents;
        }
    }
    return rows;
}

}  // namespace medcorpus
