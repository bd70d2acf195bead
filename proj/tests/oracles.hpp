#pragma once

#include <cctype>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "medcorpus/metrics.hpp"
#include "medcorpus/quality_filter.hpp"
#include "medcorpus/segmenter.hpp"
#include "medcorpus/utf8.hpp"

// Independent re-computations used by the unit and acceptance tests. They
// avoid the library's own scanning code wherever possible.
namespace oracles {

struct FilterResult {
    bool kept = false;
    double ratio = 0.0;
    double wpl = 0.0;
    medcorpus::FilterReason reason = medcorpus::FilterReason::Kept;
};

// Texts must be drawn from ASCII plus the German umlauts; multi-byte
// sequences are matched against a fixed letter table.
inline FilterResult filter(const std::string& text, double min_ratio, double min_wpl) {
    static const std::set<std::string> umlauts{"ä", "ö", "ü", "Ä", "Ö", "Ü", "ß"};
    std::size_t letters = 0;
    std::size_t visible = 0;
    for (std::size_t i = 0; i < text.size();) {
        const auto byte = static_cast<unsigned char>(text[i]);
        if (byte < 0x80) {
            if (!std::isspace(byte)) {
                ++visible;
                letters += std::isalpha(byte) ? 1 : 0;
            }
            ++i;
            continue;
        }
        if (!umlauts.contains(text.substr(i, 2))) {
            throw std::logic_error("filter oracle: unsupported byte sequence");
        }
        ++visible;
        ++letters;
        i += 2;
    }
    std::size_t words = 0;
    std::size_t lines = 0;
    std::istringstream all(text);
    std::string line;
    while (std::getline(all, line)) {
        std::istringstream ls(line);
        std::string w;
        std::size_t n = 0;
        while (ls >> w) {
            ++n;
        }
        if (n > 0) {
            words += n;
            ++lines;
        }
    }
    FilterResult v;
    v.ratio = visible == 0 ? 0.0 : static_cast<double>(letters) / static_cast<double>(visible);
    v.wpl = lines == 0 ? 0.0 : static_cast<double>(words) / static_cast<double>(lines);
    if (v.ratio < min_ratio) {
        v.reason = medcorpus::FilterReason::LowLetterRatio;
    } else if (v.wpl < min_wpl) {
        v.reason = medcorpus::FilterReason::LowWordsPerLine;
    }
    v.kept = v.reason == medcorpus::FilterReason::Kept;
    return v;
}

// Every (start, end, label) interval that forms a maximal B/I run, found by
// testing each candidate against the definition. Sorted.
inline std::vector<medcorpus::NerSpan> bio_spans(const std::vector<std::string>& tags) {
    auto is_inside = [&](std::size_t i, const std::string& label) { return tags[i] == "I-" + label; };
    std::vector<medcorpus::NerSpan> out;
    for (std::size_t s = 0; s < tags.size(); ++s) {
        if (tags[s] == "O") {
            continue;
        }
        const auto label = tags[s].substr(2);
        const bool starts =
            tags[s][0] == 'B' || s == 0 || (tags[s - 1] != "B-" + label && tags[s - 1] != "I-" + label);
        if (!starts) {
            continue;
        }
        for (std::size_t e = s; e < tags.size(); ++e) {
            bool body = true;
            for (std::size_t k = s + 1; k <= e; ++k) {
                body = body && is_inside(k, label);
            }
            const bool maximal = e + 1 == tags.size() || !is_inside(e + 1, label);
            if (body && maximal) {
                out.push_back({s, e, label});
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct PrfCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
};

// Pairwise comparison of every predicted span against every gold span.
inline PrfCounts span_counts(const std::vector<std::vector<medcorpus::NerSpan>>& gold,
                             const std::vector<std::vector<medcorpus::NerSpan>>& pred) {
    PrfCounts c;
    for (std::size_t s = 0; s < gold.size(); ++s) {
        std::size_t tp = 0;
        for (const auto& p : pred[s]) {
            for (const auto& g : gold[s]) {
                tp += (p.start == g.start && p.end == g.end && p.label == g.label) ? 1 : 0;
            }
        }
        c.tp += tp;
        c.fp += pred[s].size() - tp;
        c.fn += gold[s].size() - tp;
    }
    return c;
}

inline std::string words_without_spaces(const std::string& s) {
    std::string out;
    for (const auto w : medcorpus::utf8::split_words(s)) {
        out.append(w);
    }
    return out;
}

// First violated packing invariant of one document's segments, if any:
// budget (by recount), dense indices, exact sentence joins, the greedy rule,
// and ordered coverage of every sentence.
inline std::optional<std::string> packing_violation(const std::vector<medcorpus::Sentence>& sentences,
                                                    const std::vector<medcorpus::Segment>& segments,
                                                    const medcorpus::SegmenterConfig& cfg) {
    using medcorpus::count_tokens;
    std::vector<std::size_t> tokens;
    for (const auto& s : sentences) {
        tokens.push_back(count_tokens(s.text, cfg.tokenizer));
    }
    for (std::size_t k = 0; k < segments.size(); ++k) {
        const auto& seg = segments[k];
        const auto where = "segment " + std::to_string(k) + " of " + seg.doc_id + ": ";
        if (seg.index != k) {
            return where + "index not dense";
        }
        const auto recount = count_tokens(seg.text, cfg.tokenizer);
        if (recount != seg.token_count) {
            return where + "token_count " + std::to_string(seg.token_count) + " but recount " + std::to_string(recount);
        }
        if (recount < 1 || recount > cfg.max_tokens) {
            return where + std::to_string(recount) + " tokens outside [1, budget]";
        }
        if (seg.last_sentence >= sentences.size() || seg.first_sentence > seg.last_sentence) {
            return where + "bad sentence range";
        }
        if (seg.hard_split) {
            if (seg.first_sentence != seg.last_sentence || tokens[seg.first_sentence] <= cfg.max_tokens) {
                return where + "hard split of a sentence that fits";
            }
            continue;
        }
        std::string joined;
        for (std::size_t i = seg.first_sentence; i <= seg.last_sentence; ++i) {
            joined += (joined.empty() ? "" : " ") + sentences[i].text;
        }
        if (joined != seg.text) {
            return where + "text is not the join of its sentences";
        }
        if (k + 1 < segments.size() && !segments[k + 1].hard_split &&
            seg.token_count + tokens[segments[k + 1].first_sentence] <= cfg.max_tokens) {
            return where + "next sentence would have fit";
        }
    }
    std::size_t k = 0;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        if (k >= segments.size()) {
            return "sentence " + std::to_string(i) + " not covered";
        }
        if (segments[k].hard_split) {
            std::string pieces;
            while (k < segments.size() && segments[k].hard_split && segments[k].first_sentence == i) {
                pieces += segments[k].text + " ";
                ++k;
            }
            if (words_without_spaces(pieces) != words_without_spaces(sentences[i].text)) {
                return "hard-split pieces of sentence " + std::to_string(i) + " lose text";
            }
        } else {
            if (segments[k].first_sentence != i) {
                return "sentence " + std::to_string(i) + " skipped or out of order";
            }
            i = segments[k].last_sentence;
            ++k;
        }
    }
    if (k != segments.size()) {
        return "segments beyond the last sentence";
    }
    return std::nullopt;
}

}  // namespace oracles
