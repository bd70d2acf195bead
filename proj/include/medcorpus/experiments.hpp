#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace medcorpus {

// xorshift64* (Vigna 2016) seeded through one splitmix64 step, so any seed,
// including 0, yields a non-zero state. Constants:
//   splitmix64: +0x9E3779B97F4A7C15, *0xBF58476D1CE4E5B9, *0x94D049BB133111EB
//   xorshift64*: shifts 12, 25, 27; multiplier 0x2545F4914F6CDD1D
class Xorshift64Star {
public:
    explicit Xorshift64Star(std::uint64_t seed);
    std::uint64_t next();
    // Uniform in [0, bound) by rejection; bound must be positive.
    std::uint64_t below(std::uint64_t bound);

private:
    std::uint64_t state_;
};

struct FoldAssignment {
    std::size_t k = 0;
    std::uint64_t seed = 0;
    std::map<std::string, std::size_t> assignment;
    // Members of each fold in dealing order.
    std::vector<std::vector<std::string>> folds;
};

// Sorts the ids, shuffles them with Fisher-Yates driven by Xorshift64Star,
// and deals them round-robin into k folds.
FoldAssignment make_folds(std::vector<std::string> ids, std::size_t k, std::uint64_t seed);

nlohmann::json to_json(const FoldAssignment& folds);

struct AggregateScore {
    double mean = 0.0;
    double std = 0.0;  // sample standard deviation; 0 when n == 1
    std::size_t n = 0;
};

AggregateScore aggregate(const std::vector<double>& scores);

// Fixed-point with `decimals` places; "0.833" becomes ".833" unless
// leading_zero is set.
std::string format_score(double value, int decimals = 3, bool leading_zero = false);

// ".850 ± .071"; the ± part is omitted for a single score.
std::string format_aggregate(const AggregateScore& score, int decimals = 3);

struct StatsRow {
    std::string dataset;
    std::size_t tokens = 0;
    std::size_t documents = 0;

    bool operator==(const StatsRow&) const = default;
};

// Per-source totals in first-seen order. Totals are sums, so adding shards
// in any order gives the same rows (up to row order).
class CorpusStats {
public:
    void add_source(const std::string& dataset);
    void add(const std::string& dataset, std::size_t tokens);
    void merge(const CorpusStats& other);

    const std::vector<StatsRow>& rows() const { return rows_; }
    StatsRow total() const;

    std::string to_markdown() const;
    std::string to_csv() const;

private:
    std::vector<StatsRow> rows_;
    std::map<std::string, std::size_t> index_;
};

// 1700000000 -> "1,700M", 16000 -> "16K", 950 -> "950".
std::string human_magnitude(std::size_t value);

enum class ModelSize { Base, Large };

ModelSize parse_model_size(std::string_view name);
std::string_view to_string(ModelSize size);

struct TaskConfig {
    std::string task;
    ModelSize size = ModelSize::Base;
    std::string learning_rate;  // as written in the hyperparameter table, e.g. "3e-5"
    int batch_size = 0;
    int epochs = 0;

    double learning_rate_value() const;
    // key=value lines.
    std::string to_key_values() const;
};

const std::vector<std::string>& known_tasks();

// Fine-tuning settings per downstream task and model size. Throws
// ConfigError listing the valid tasks for an unknown name.
TaskConfig emit_task_config(std::string_view task, ModelSize size);

}  // namespace medcorpus
