#include "medcorpus/corpus.hpp"

#include <fstream>

#include "medcorpus/error.hpp"
#include "medcorpus/utf8.hpp"

namespace medcorpus {

using nlohmann::json;

void to_json(json& j, const Document& doc) {
    j = json{{"id", doc.id}, {"source", doc.source}, {"text", doc.text}};
    if (!doc.meta.empty()) {
        j["meta"] = doc.meta;
    }
}

void from_json(const json& j, Document& doc) {
    if (!j.is_object()) {
        throw DataError("record is not a JSON object");
    }
    const auto id = j.find("id");
    if (id == j.end() || !id->is_string()) {
        throw DataError("missing or non-string \"id\"");
    }
    const auto text = j.find("text");
    if (text == j.end() || !text->is_string()) {
        throw DataError("missing or non-string \"text\"");
    }
    doc.id = id->get<std::string>();
    if (doc.id.empty()) {
        throw DataError("empty \"id\"");
    }
    doc.text = normalize_newlines(text->get_ref<const std::string&>());
    doc.source.clear();
    if (const auto src = j.find("source"); src != j.end()) {
        if (!src->is_string()) {
            throw DataError("non-string \"source\"");
        }
        doc.source = src->get<std::string>();
    }
    doc.meta.clear();
    if (const auto meta = j.find("meta"); meta != j.end() && !meta->is_null()) {
        if (!meta->is_object()) {
            throw DataError("\"meta\" is not an object");
        }
        for (const auto& [key, value] : meta->items()) {
            doc.meta[key] = value.is_string() ? value.get<std::string>() : value.dump();
        }
    }
}

void to_json(json& j, const Segment& seg) {
    j = json{{"doc_id", seg.doc_id},
             {"source", seg.source},
             {"index", seg.index},
             {"sentence_range", {seg.first_sentence, seg.last_sentence}},
             {"text", seg.text},
             {"token_count", seg.token_count},
             {"hard_split", seg.hard_split}};
}

void from_json(const json& j, Segment& seg) {
    try {
        seg.doc_id = j.at("doc_id").get<std::string>();
        seg.source = j.value("source", std::string{});
        seg.index = j.at("index").get<std::size_t>();
        const auto& range = j.at("sentence_range");
        if (!range.is_array() || range.size() != 2) {
            throw DataError("\"sentence_range\" must be a two-element array");
        }
        seg.first_sentence = range[0].get<std::size_t>();
        seg.last_sentence = range[1].get<std::size_t>();
        seg.text = j.at("text").get<std::string>();
        seg.token_count = j.at("token_count").get<std::size_t>();
        seg.hard_split = j.value("hard_split", false);
    } catch (const json::exception& e) {
        throw DataError(std::string("bad segment record: ") + e.what());
    }
}

std::string to_jsonl_line(const Document& doc) { return json(doc).dump(); }

std::string to_jsonl_line(const Segment& seg) { return json(seg).dump(); }

std::string normalize_newlines(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
            continue;
        }
        out += text[i];
    }
    return out;
}

DocumentReader::DocumentReader(std::istream& in, OnBadRecord mode) : in_(in), mode_(mode) {}

std::optional<Document> DocumentReader::next() {
    std::string line;
    while (std::getline(in_, line)) {
        ++line_;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (utf8::trim(line).empty()) {
            continue;
        }
        try {
            Document doc;
            try {
                from_json(json::parse(line), doc);
            } catch (const json::exception& e) {
                throw DataError(e.what());
            }
            if (!seen_ids_.insert(doc.id).second) {
                throw DataError("duplicate id \"" + doc.id + "\"");
            }
            return doc;
        } catch (const DataError& e) {
            if (mode_ == OnBadRecord::FailFast) {
                throw DataError("line " + std::to_string(line_) + ": " + e.what());
            }
            skipped_.push_back({line_, e.what()});
        }
    }
    return std::nullopt;
}

std::vector<Document> ingest_jsonl(const std::filesystem::path& path, OnBadRecord mode,
                                   std::vector<RecordError>* skipped) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    DocumentReader reader(in, mode);
    std::vector<Document> docs;
    while (auto doc = reader.next()) {
        docs.push_back(std::move(*doc));
    }
    if (skipped) {
        *skipped = reader.skipped();
    }
    return docs;
}

std::vector<Segment> read_segments_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    std::vector<Segment> segments;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (utf8::trim(line).empty()) {
            continue;
        }
        try {
            json j;
            try {
                j = json::parse(line);
            } catch (const json::exception& e) {
                throw DataError(e.what());
            }
            segments.push_back(j.get<Segment>());
        } catch (const DataError& e) {
            throw DataError(path.string() + " line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return segments;
}

void write_jsonl(std::ostream& out, const std::vector<Document>& docs) {
    for (const auto& doc : docs) {
        out << to_jsonl_line(doc) << '\n';
    }
}

void write_jsonl(std::ostream& out, const std::vector<Segment>& segments) {
    for (const auto& seg : segments) {
        out << to_jsonl_line(seg) << '\n';
    }
}

std::vector<Paragraph> split_paragraphs(const Document& doc) {
    std::vector<Paragraph> paragraphs;
    const std::string_view text = doc.text;
    std::size_t para_start = std::string_view::npos;
    std::size_t para_end = 0;

    auto flush = [&] {
        if (para_start == std::string_view::npos) {
            return;
        }
        const auto body = utf8::trim(text.substr(para_start, para_end - para_start));
        if (!body.empty()) {
            paragraphs.push_back({doc.id, paragraphs.size(), std::string(body)});
        }
        para_start = std::string_view::npos;
    };

    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            nl = text.size();
        }
        const auto line = text.substr(pos, nl - pos);
        if (utf8::trim(line).empty()) {
            flush();
        } else {
            if (para_start == std::string_view::npos) {
                para_start = pos;
            }
            para_end = nl;
        }
        pos = nl + 1;
    }
    flush();
    return paragraphs;
}

}  // namespace medcorpus
