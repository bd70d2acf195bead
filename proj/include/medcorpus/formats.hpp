#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "medcorpus/metrics.hpp"

namespace medcorpus {

// Tab-separated token lines with blank lines between sentences. Lines
// starting with -DOCSTART- are ignored.
using ConllRow = std::vector<std::string>;
using ConllSentence = std::vector<ConllRow>;

std::vector<ConllSentence> read_conll(const std::filesystem::path& path);

struct NerEvalInput {
    std::vector<std::vector<NerSpan>> gold;
    std::vector<std::vector<NerSpan>> pred;
};

// "token<TAB>gold<TAB>pred" per line.
NerEvalInput load_ner_combined(const std::filesystem::path& path);

// Separate files; the last column of each is the tag. Sentences and tokens
// must align.
NerEvalInput load_ner_pair(const std::filesystem::path& gold_path, const std::filesystem::path& pred_path);

// {"id": ..., "labels": [...]} per line.
std::vector<LabelSet> read_label_sets(const std::filesystem::path& path);

// {"id": ..., "scores": {label: score}} per line; labels scoring at least
// `threshold` are predicted. Lines carrying "labels" instead are taken as is.
std::vector<LabelSet> read_label_predictions(const std::filesystem::path& path, double threshold);

// Label frequencies and document count of a training label file.
std::map<std::string, std::size_t> count_labels(const std::vector<LabelSet>& docs);

// question id -> gold answer texts, from a SQuAD-v1 style file.
std::map<std::string, std::vector<std::string>> read_squad_gold(const std::filesystem::path& path);

// {question_id: answer}.
std::map<std::string, std::string> read_qa_predictions(const std::filesystem::path& path);

// Pairs every gold question with its prediction; missing predictions become
// empty answers and are counted in *missing.
std::vector<QaAnswer> join_qa(const std::map<std::string, std::vector<std::string>>& gold,
                              const std::map<std::string, std::string>& pred, std::size_t* missing = nullptr);

}  // namespace medcorpus
