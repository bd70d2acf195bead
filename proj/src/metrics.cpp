#include "medcorpus/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <unordered_map>

#include "medcorpus/error.hpp"
#include "medcorpus/utf8.hpp"

namespace medcorpus {

std::vector<NerSpan> decode_bio(std::span<const std::string> tags) {
    std::vector<NerSpan> spans;
    bool open = false;
    for (std::size_t i = 0; i < tags.size(); ++i) {
        const std::string& tag = tags[i];
        if (tag == "O") {
            open = false;
            continue;
        }
        if (tag.size() < 3 || (tag[0] != 'B' && tag[0] != 'I') || tag[1] != '-') {
            throw DataError("malformed BIO tag \"" + tag + "\" at position " + std::to_string(i));
        }
        const std::string label = tag.substr(2);
        if (tag[0] == 'I' && open && spans.back().label == label) {
            spans.back().end = i;
            continue;
        }
        spans.push_back({i, i, label});
        open = true;
    }
    return spans;
}

std::vector<std::string> encode_bio(std::span<const NerSpan> spans, std::size_t length) {
    std::vector<std::string> tags(length, "O");
    for (const auto& span : spans) {
        if (span.start > span.end || span.end >= length || span.label.empty()) {
            throw DataError("span (" + std::to_string(span.start) + ", " + std::to_string(span.end) + ", " +
                            span.label + ") is invalid for length " + std::to_string(length));
        }
        for (std::size_t i = span.start; i <= span.end; ++i) {
            if (tags[i] != "O") {
                throw DataError("overlapping spans at position " + std::to_string(i));
            }
            tags[i] = (i == span.start ? "B-" : "I-") + span.label;
        }
    }
    return tags;
}

MetricReport report_from_counts(std::size_t tp, std::size_t fp, std::size_t fn) {
    MetricReport r;
    r.tp = tp;
    r.fp = fp;
    r.fn = fn;
    const auto t = static_cast<double>(tp);
    r.precision = tp + fp == 0 ? 0.0 : t / static_cast<double>(tp + fp);
    r.recall = tp + fn == 0 ? 0.0 : t / static_cast<double>(tp + fn);
    // 2tp / (2tp + fp + fn) is the harmonic mean of P and R, rounded once.
    r.f1 = tp == 0 ? 0.0 : 2.0 * t / static_cast<double>(2 * tp + fp + fn);
    return r;
}

nlohmann::json to_json(const MetricReport& r) {
    nlohmann::json j{{"tp", r.tp},        {"fp", r.fp}, {"fn", r.fn}, {"precision", r.precision},
                     {"recall", r.recall}, {"f1", r.f1}, {"n", r.n}};
    if (r.em) {
        j["em"] = *r.em;
    }
    return j;
}

MetricReport metric_report_from_json(const nlohmann::json& j) {
    try {
        MetricReport r;
        r.tp = j.value("tp", std::size_t{0});
        r.fp = j.value("fp", std::size_t{0});
        r.fn = j.value("fn", std::size_t{0});
        r.precision = j.at("precision").get<double>();
        r.recall = j.at("recall").get<double>();
        r.f1 = j.at("f1").get<double>();
        r.n = j.value("n", std::size_t{0});
        if (j.contains("em") && !j["em"].is_null()) {
            r.em = j["em"].get<double>();
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("bad metric report: ") + e.what());
    }
}

MetricReport ner_micro_prf(const std::vector<std::vector<NerSpan>>& gold,
                           const std::vector<std::vector<NerSpan>>& pred) {
    if (gold.size() != pred.size()) {
        throw DataError("gold has " + std::to_string(gold.size()) + " sentences, predictions have " +
                        std::to_string(pred.size()));
    }
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    for (std::size_t s = 0; s < gold.size(); ++s) {
        const std::set<NerSpan> g(gold[s].begin(), gold[s].end());
        const std::set<NerSpan> p(pred[s].begin(), pred[s].end());
        std::size_t hits = 0;
        for (const auto& span : p) {
            hits += g.count(span);
        }
        tp += hits;
        fp += p.size() - hits;
        fn += g.size() - hits;
    }
    auto r = report_from_counts(tp, fp, fn);
    r.n = gold.size();
    return r;
}

MetricReport multilabel_micro_prf(std::span<const LabelSet> gold, std::span<const LabelSet> pred) {
    std::unordered_map<std::string, const LabelSet*> pred_by_id;
    for (const auto& p : pred) {
        if (!pred_by_id.emplace(p.doc_id, &p).second) {
            throw DataError("duplicate prediction for document " + p.doc_id);
        }
    }
    std::unordered_map<std::string, bool> gold_ids;
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    for (const auto& g : gold) {
        if (!gold_ids.emplace(g.doc_id, true).second) {
            throw DataError("duplicate gold document " + g.doc_id);
        }
        const auto it = pred_by_id.find(g.doc_id);
        if (it == pred_by_id.end()) {
            throw DataError("document " + g.doc_id + " has gold labels but no prediction");
        }
        const auto& p = it->second->labels;
        std::size_t hits = 0;
        for (const auto& label : p) {
            hits += g.labels.count(label);
        }
        tp += hits;
        fp += p.size() - hits;
        fn += g.labels.size() - hits;
    }
    for (const auto& p : pred) {
        if (!gold_ids.contains(p.doc_id)) {
            throw DataError("document " + p.doc_id + " has a prediction but no gold labels");
        }
    }
    auto r = report_from_counts(tp, fp, fn);
    r.n = gold.size();
    return r;
}

ClassWeights class_weights(const std::map<std::string, std::size_t>& counts, std::size_t total) {
    if (total < 1) {
        throw ConfigError("total sample count must be at least 1");
    }
    ClassWeights w;
    w.total = total;
    w.counts = counts;
    for (const auto& [label, count] : counts) {
        w.weights[label] = std::log(static_cast<double>(total) / (1.0 + static_cast<double>(count)));
        if (count + 1 > total) {
            w.negative.push_back(label);
        }
    }
    return w;
}

ArticleSet parse_article_set(std::string_view name) {
    if (name == "de" || name == "german") {
        return ArticleSet::German;
    }
    if (name == "en" || name == "english") {
        return ArticleSet::English;
    }
    if (name == "none") {
        return ArticleSet::None;
    }
    throw ConfigError("article set must be de, en or none");
}

namespace {

const std::set<std::string, std::less<>>& articles_for(ArticleSet set) {
    static const std::set<std::string, std::less<>> german{"der", "die",   "das",   "den",   "dem",  "des",
                                                           "ein", "eine", "einen", "einem", "einer", "eines"};
    static const std::set<std::string, std::less<>> english{"a", "an", "the"};
    static const std::set<std::string, std::less<>> none;
    switch (set) {
        case ArticleSet::German:
            return german;
        case ArticleSet::English:
            return english;
        case ArticleSet::None:
            break;
    }
    return none;
}

bool is_answer_punctuation(char32_t c) {
    return (c < 0x80 && std::ispunct(static_cast<int>(c))) || utf8::is_punctuation(c);
}

std::vector<std::string> answer_tokens(std::string_view text, const QaOptions& options) {
    const auto normalized = normalize_answer(text, options);
    std::vector<std::string> tokens;
    for (const auto word : utf8::split_words(normalized)) {
        tokens.emplace_back(word);
    }
    return tokens;
}

}  // namespace

std::string normalize_answer(std::string_view text, const QaOptions& options) {
    const auto lowered = utf8::to_lower(text);
    std::string stripped;
    stripped.reserve(lowered.size());
    for (const auto& cp : utf8::decode(lowered)) {
        if (!is_answer_punctuation(cp.value)) {
            stripped.append(lowered, cp.offset, cp.length);
        }
    }
    const auto& articles = articles_for(options.articles);
    std::string out;
    for (const auto word : utf8::split_words(stripped)) {
        if (articles.contains(word)) {
            continue;
        }
        if (!out.empty()) {
            out += ' ';
        }
        out.append(word);
    }
    return out;
}

QaScore score_against(std::string_view prediction, std::string_view gold, const QaOptions& options) {
    const auto pred_tokens = answer_tokens(prediction, options);
    const auto gold_tokens = answer_tokens(gold, options);
    QaScore s;
    s.pred_tokens = pred_tokens.size();
    s.gold_tokens = gold_tokens.size();
    s.exact = pred_tokens == gold_tokens;
    if (pred_tokens.empty() || gold_tokens.empty()) {
        // Two empty answers agree completely; otherwise nothing overlaps.
        const double v = s.exact ? 1.0 : 0.0;
        s.f1 = s.precision = s.recall = v;
        return s;
    }
    std::unordered_map<std::string_view, std::size_t> remaining;
    for (const auto& t : gold_tokens) {
        ++remaining[t];
    }
    for (const auto& t : pred_tokens) {
        auto it = remaining.find(t);
        if (it != remaining.end() && it->second > 0) {
            --it->second;
            ++s.overlap;
        }
    }
    if (s.overlap == 0) {
        return s;
    }
    const auto overlap = static_cast<double>(s.overlap);
    s.precision = overlap / static_cast<double>(s.pred_tokens);
    s.recall = overlap / static_cast<double>(s.gold_tokens);
    s.f1 = 2.0 * overlap / static_cast<double>(s.pred_tokens + s.gold_tokens);
    return s;
}

QaScore score_answer(const QaAnswer& answer, const QaOptions& options) {
    if (answer.gold_texts.empty()) {
        throw DataError("question " + answer.question_id + " has no gold answers");
    }
    QaScore best;
    bool first = true;
    bool exact = false;
    for (const auto& gold : answer.gold_texts) {
        const auto s = score_against(answer.predicted_text, gold, options);
        exact = exact || s.exact;
        if (first || s.f1 > best.f1) {
            best = s;
            first = false;
        }
    }
    best.exact = exact;
    return best;
}

MetricReport qa_f1_em(std::span<const QaAnswer> answers, const QaOptions& options) {
    MetricReport r;
    double f1 = 0.0;
    double em = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    for (const auto& answer : answers) {
        const auto s = score_answer(answer, options);
        f1 += s.f1;
        em += s.exact ? 1.0 : 0.0;
        precision += s.precision;
        recall += s.recall;
        r.tp += s.overlap;
        r.fp += s.pred_tokens - s.overlap;
        r.fn += s.gold_tokens - s.overlap;
    }
    r.n = answers.size();
    if (!answers.empty()) {
        const auto n = static_cast<double>(answers.size());
        r.f1 = f1 / n;
        r.precision = precision / n;
        r.recall = recall / n;
        r.em = em / n;
    } else {
        r.em = 0.0;
    }
    return r;
}

}  // namespace medcorpus
