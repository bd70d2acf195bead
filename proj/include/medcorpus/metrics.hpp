#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace medcorpus {

// Token span, inclusive on both ends.
struct NerSpan {
    std::size_t start = 0;
    std::size_t end = 0;
    std::string label;

    auto operator<=>(const NerSpan&) const = default;
};

// Maximal B-X I-X* runs become spans. An I-X that does not continue a span of
// type X opens a new one. Throws DataError naming the position of a tag that
// is neither "O" nor "B-<label>"/"I-<label>".
std::vector<NerSpan> decode_bio(std::span<const std::string> tags);

// Inverse of decode_bio for non-overlapping spans inside [0, length).
std::vector<std::string> encode_bio(std::span<const NerSpan> spans, std::size_t length);

struct MetricReport {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::optional<double> em;  // QA only
    std::size_t n = 0;         // evaluated sentences, documents or questions
};

// Micro scores from pooled counts; 0 wherever a denominator is 0.
MetricReport report_from_counts(std::size_t tp, std::size_t fp, std::size_t fn);

nlohmann::json to_json(const MetricReport& r);
MetricReport metric_report_from_json(const nlohmann::json& j);

// Exact (start, end, label) matching, pooled over aligned sentences.
MetricReport ner_micro_prf(const std::vector<std::vector<NerSpan>>& gold,
                           const std::vector<std::vector<NerSpan>>& pred);

struct LabelSet {
    std::string doc_id;
    std::set<std::string> labels;
};

// (doc, label) pairs pooled over documents aligned by doc_id.
MetricReport multilabel_micro_prf(std::span<const LabelSet> gold, std::span<const LabelSet> pred);

struct ClassWeights {
    std::size_t total = 0;
    std::map<std::string, std::size_t> counts;
    std::map<std::string, double> weights;
    // Labels with count > total - 1; their weights are negative.
    std::vector<std::string> negative;
};

// w = ln(total / (1 + count)) per label.
ClassWeights class_weights(const std::map<std::string, std::size_t>& counts, std::size_t total);

enum class ArticleSet { German, English, None };

struct QaOptions {
    ArticleSet articles = ArticleSet::German;
};

ArticleSet parse_article_set(std::string_view name);

struct QaAnswer {
    std::string question_id;
    std::vector<std::string> gold_texts;
    std::string predicted_text;
};

// Lowercase, drop punctuation, drop articles, collapse whitespace.
std::string normalize_answer(std::string_view text, const QaOptions& options = {});

struct QaScore {
    double f1 = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    bool exact = false;
    std::size_t overlap = 0;
    std::size_t pred_tokens = 0;
    std::size_t gold_tokens = 0;
};

// Token-level scores against a single gold text.
QaScore score_against(std::string_view prediction, std::string_view gold, const QaOptions& options = {});

// Best gold by F1; exact if any gold matches.
QaScore score_answer(const QaAnswer& answer, const QaOptions& options = {});

// Means over questions of F1, EM, precision and recall; tp/fp/fn pool the
// token overlaps of each question's best gold.
MetricReport qa_f1_em(std::span<const QaAnswer> answers, const QaOptions& options = {});

}  // namespace medcorpus
