#include "medcorpus/formats.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "medcorpus/error.hpp"

namespace medcorpus {

using nlohmann::json;

namespace {

std::ifstream open_or_throw(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    return in;
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
        const auto tab = line.find('\t', pos);
        fields.push_back(line.substr(pos, tab - pos));
        if (tab == std::string::npos) {
            break;
        }
        pos = tab + 1;
    }
    return fields;
}

bool blank(const std::string& line) { return line.find_first_not_of(" \t") == std::string::npos; }

json parse_file(const std::filesystem::path& path) {
    auto in = open_or_throw(path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

template <typename Fn>
void for_each_jsonl(const std::filesystem::path& path, Fn&& fn) {
    auto in = open_or_throw(path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (blank(line)) {
            continue;
        }
        try {
            fn(json::parse(line));
        } catch (const json::exception& e) {
            throw DataError(path.string() + " line " + std::to_string(lineno) + ": " + e.what());
        } catch (const DataError& e) {
            throw DataError(path.string() + " line " + std::to_string(lineno) + ": " + e.what());
        }
    }
}

std::string record_id(const json& j) {
    const auto id = j.find("id");
    if (id == j.end() || !id->is_string()) {
        throw DataError("missing or non-string \"id\"");
    }
    return id->get<std::string>();
}

LabelSet label_list(const json& j) {
    LabelSet set{record_id(j), {}};
    for (const auto& label : j.at("labels")) {
        set.labels.insert(label.get<std::string>());
    }
    return set;
}

std::vector<std::vector<NerSpan>> spans_from_column(const std::vector<ConllSentence>& sentences,
                                                    std::size_t column, const std::filesystem::path& path) {
    std::vector<std::vector<NerSpan>> out;
    out.reserve(sentences.size());
    std::vector<std::string> tags;
    for (std::size_t s = 0; s < sentences.size(); ++s) {
        tags.clear();
        for (const auto& row : sentences[s]) {
            tags.push_back(column == std::string::npos ? row.back() : row.at(column));
        }
        try {
            out.push_back(decode_bio(tags));
        } catch (const DataError& e) {
            throw DataError(path.string() + " sentence " + std::to_string(s + 1) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace

std::vector<ConllSentence> read_conll(const std::filesystem::path& path) {
    auto in = open_or_throw(path);
    std::vector<ConllSentence> sentences;
    ConllSentence current;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (blank(line)) {
            if (!current.empty()) {
                sentences.push_back(std::move(current));
                current.clear();
            }
            continue;
        }
        if (line.starts_with("-DOCSTART-")) {
            continue;
        }
        auto fields = split_tabs(line);
        if (fields.size() < 2) {
            throw DataError(path.string() + " line " + std::to_string(lineno) + ": expected tab-separated columns");
        }
        if (!current.empty() && current.front().size() != fields.size()) {
            throw DataError(path.string() + " line " + std::to_string(lineno) + ": column count changes within a sentence");
        }
        current.push_back(std::move(fields));
    }
    if (!current.empty()) {
        sentences.push_back(std::move(current));
    }
    return sentences;
}

NerEvalInput load_ner_combined(const std::filesystem::path& path) {
    const auto sentences = read_conll(path);
    for (std::size_t s = 0; s < sentences.size(); ++s) {
        if (sentences[s].front().size() < 3) {
            throw DataError(path.string() + " sentence " + std::to_string(s + 1) +
                            ": expected token, gold and predicted tag columns");
        }
    }
    const auto n = sentences.empty() ? 0 : sentences.front().front().size();
    return {spans_from_column(sentences, n >= 3 ? n - 2 : 1, path), spans_from_column(sentences, std::string::npos, path)};
}

NerEvalInput load_ner_pair(const std::filesystem::path& gold_path, const std::filesystem::path& pred_path) {
    const auto gold = read_conll(gold_path);
    const auto pred = read_conll(pred_path);
    if (gold.size() != pred.size()) {
        throw DataError("gold has " + std::to_string(gold.size()) + " sentences, predictions have " +
                        std::to_string(pred.size()));
    }
    for (std::size_t s = 0; s < gold.size(); ++s) {
        if (gold[s].size() != pred[s].size()) {
            throw DataError("sentence " + std::to_string(s + 1) + " has " + std::to_string(gold[s].size()) +
                            " gold tokens but " + std::to_string(pred[s].size()) + " predicted");
        }
        for (std::size_t t = 0; t < gold[s].size(); ++t) {
            if (gold[s][t].front() != pred[s][t].front()) {
                throw DataError("sentence " + std::to_string(s + 1) + " token " + std::to_string(t + 1) +
                                " differs: \"" + gold[s][t].front() + "\" vs \"" + pred[s][t].front() + "\"");
            }
        }
    }
    return {spans_from_column(gold, std::string::npos, gold_path), spans_from_column(pred, std::string::npos, pred_path)};
}

std::vector<LabelSet> read_label_sets(const std::filesystem::path& path) {
    std::vector<LabelSet> out;
    for_each_jsonl(path, [&](const json& j) { out.push_back(label_list(j)); });
    return out;
}

std::vector<LabelSet> read_label_predictions(const std::filesystem::path& path, double threshold) {
    std::vector<LabelSet> out;
    for_each_jsonl(path, [&](const json& j) {
        if (!j.contains("scores")) {
            out.push_back(label_list(j));
            return;
        }
        LabelSet set{record_id(j), {}};
        for (const auto& [label, score] : j.at("scores").items()) {
            if (score.get<double>() >= threshold) {
                set.labels.insert(label);
            }
        }
        out.push_back(std::move(set));
    });
    return out;
}

std::map<std::string, std::size_t> count_labels(const std::vector<LabelSet>& docs) {
    std::map<std::string, std::size_t> counts;
    for (const auto& doc : docs) {
        for (const auto& label : doc.labels) {
            ++counts[label];
        }
    }
    return counts;
}

std::map<std::string, std::vector<std::string>> read_squad_gold(const std::filesystem::path& path) {
    const auto root = parse_file(path);
    std::map<std::string, std::vector<std::string>> gold;
    try {
        for (const auto& article : root.at("data")) {
            for (const auto& paragraph : article.at("paragraphs")) {
                for (const auto& qa : paragraph.at("qas")) {
                    const auto id = qa.at("id").get<std::string>();
                    std::vector<std::string> texts;
                    for (const auto& answer : qa.at("answers")) {
                        texts.push_back(answer.at("text").get<std::string>());
                    }
                    if (texts.empty()) {
                        throw DataError("question " + id + " has no gold answers");
                    }
                    if (!gold.emplace(id, std::move(texts)).second) {
                        throw DataError("duplicate question id " + id);
                    }
                }
            }
        }
    } catch (const json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
    return gold;
}

std::map<std::string, std::string> read_qa_predictions(const std::filesystem::path& path) {
    const auto root = parse_file(path);
    if (!root.is_object()) {
        throw DataError(path.string() + ": predictions must be a JSON object");
    }
    std::map<std::string, std::string> pred;
    for (const auto& [id, answer] : root.items()) {
        if (!answer.is_string()) {
            throw DataError(path.string() + ": prediction for " + id + " is not a string");
        }
        pred.emplace(id, answer.get<std::string>());
    }
    return pred;
}

std::vector<QaAnswer> join_qa(const std::map<std::string, std::vector<std::string>>& gold,
                              const std::map<std::string, std::string>& pred, std::size_t* missing) {
    std::vector<QaAnswer> out;
    out.reserve(gold.size());
    std::size_t absent = 0;
    for (const auto& [id, texts] : gold) {
        const auto it = pred.find(id);
        if (it == pred.end()) {
            ++absent;
        }
        out.push_back({id, texts, it == pred.end() ? std::string{} : it->second});
    }
    if (missing) {
        *missing = absent;
    }
    return out;
}

}  // namespace medcorpus
