#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

namespace medcorpus {

struct Document {
    std::string id;
    std::string source;
    std::string text;
    std::map<std::string, std::string> meta;

    bool operator==(const Document&) const = default;
};

struct Paragraph {
    std::string doc_id;
    std::size_t index = 0;
    std::string text;

    bool operator==(const Paragraph&) const = default;
};

struct Sentence {
    std::string doc_id;
    std::size_t para_index = 0;
    std::size_t index = 0;  // ordinal within the paragraph
    std::string text;

    bool operator==(const Sentence&) const = default;
};

// A translation unit: consecutive sentences of one document whose token
// count fits the configured budget. sentence_range uses document-level
// sentence ordinals, inclusive on both ends.
struct Segment {
    std::string doc_id;
    std::string source;
    std::size_t index = 0;
    std::size_t first_sentence = 0;
    std::size_t last_sentence = 0;
    std::string text;
    std::size_t token_count = 0;
    bool hard_split = false;

    bool operator==(const Segment&) const = default;
};

void to_json(nlohmann::json& j, const Document& doc);
void from_json(const nlohmann::json& j, Document& doc);
void to_json(nlohmann::json& j, const Segment& seg);
void from_json(const nlohmann::json& j, Segment& seg);

// One JSON object per line, no trailing newline.
std::string to_jsonl_line(const Document& doc);
std::string to_jsonl_line(const Segment& seg);

enum class OnBadRecord { FailFast, SkipAndLog };

struct RecordError {
    std::size_t line = 0;  // 1-based
    std::string message;
};

// Sequential JSONL document reader. Blank lines are ignored; CRLF is
// normalized to LF in line framing and in document text.
class DocumentReader {
public:
    explicit DocumentReader(std::istream& in, OnBadRecord mode = OnBadRecord::FailFast);

    // Next valid document, or nullopt at end of input. In FailFast mode a
    // bad record throws DataError naming the line; in SkipAndLog mode it is
    // recorded in skipped() and reading continues.
    std::optional<Document> next();

    const std::vector<RecordError>& skipped() const { return skipped_; }
    std::size_t lines_read() const { return line_; }

private:
    std::istream& in_;
    OnBadRecord mode_;
    std::size_t line_ = 0;
    std::unordered_set<std::string> seen_ids_;
    std::vector<RecordError> skipped_;
};

std::vector<Document> ingest_jsonl(const std::filesystem::path& path,
                                   OnBadRecord mode = OnBadRecord::FailFast,
                                   std::vector<RecordError>* skipped = nullptr);

std::vector<Segment> read_segments_jsonl(const std::filesystem::path& path);

void write_jsonl(std::ostream& out, const std::vector<Document>& docs);
void write_jsonl(std::ostream& out, const std::vector<Segment>& segments);

std::string normalize_newlines(std::string_view text);

// Paragraphs are separated by one or more blank (whitespace-only) lines.
// Each paragraph is trimmed; empty ones are dropped; ordinals are dense.
std::vector<Paragraph> split_paragraphs(const Document& doc);

}  // namespace medcorpus
