#include "medcorpus/experiments.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <sstream>

#include "medcorpus/error.hpp"

namespace medcorpus {

Xorshift64Star::Xorshift64Star(std::uint64_t seed) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    state_ = z ^ (z >> 31);
    if (state_ == 0) {
        state_ = 0x9E3779B97F4A7C15ULL;
    }
}

std::uint64_t Xorshift64Star::next() {
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 0x2545F4914F6CDD1DULL;
}

std::uint64_t Xorshift64Star::below(std::uint64_t bound) {
    // 2^64 mod bound; values below it would bias the modulo.
    const std::uint64_t threshold = (0 - bound) % bound;
    std::uint64_t x;
    do {
        x = next();
    } while (x < threshold);
    return x % bound;
}

FoldAssignment make_folds(std::vector<std::string> ids, std::size_t k, std::uint64_t seed) {
    if (k < 2) {
        throw ConfigError("k must be at least 2");
    }
    if (k > ids.size()) {
        throw ConfigError("k = " + std::to_string(k) + " exceeds the " + std::to_string(ids.size()) + " ids");
    }
    std::sort(ids.begin(), ids.end());
    if (const auto dup = std::adjacent_find(ids.begin(), ids.end()); dup != ids.end()) {
        throw DataError("duplicate id \"" + *dup + "\"");
    }
    Xorshift64Star rng(seed);
    for (std::size_t i = ids.size() - 1; i > 0; --i) {
        std::swap(ids[i], ids[rng.below(i + 1)]);
    }
    FoldAssignment out;
    out.k = k;
    out.seed = seed;
    out.folds.resize(k);
    for (std::size_t i = 0; i < ids.size(); ++i) {
        out.assignment[ids[i]] = i % k;
        out.folds[i % k].push_back(ids[i]);
    }
    return out;
}

nlohmann::json to_json(const FoldAssignment& folds) {
    return {{"k", folds.k},
            {"seed", folds.seed},
            {"prng", "xorshift64star/splitmix64"},
            {"assignment", folds.assignment},
            {"folds", folds.folds}};
}

AggregateScore aggregate(const std::vector<double>& scores) {
    if (scores.empty()) {
        throw DataError("cannot aggregate an empty score list");
    }
    AggregateScore a;
    a.n = scores.size();
    a.mean = std::accumulate(scores.begin(), scores.end(), 0.0) / static_cast<double>(a.n);
    if (a.n > 1) {
        double ss = 0.0;
        for (const double x : scores) {
            ss += (x - a.mean) * (x - a.mean);
        }
        a.std = std::sqrt(ss / static_cast<double>(a.n - 1));
    }
    return a;
}

std::string format_score(double value, int decimals, bool leading_zero) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    std::string s(buf);
    if (!leading_zero) {
        if (s.starts_with("0.")) {
            s.erase(0, 1);
        } else if (s.starts_with("-0.")) {
            s.erase(1, 1);
        }
    }
    return s;
}

std::string format_aggregate(const AggregateScore& score, int decimals) {
    if (score.n <= 1) {
        return format_score(score.mean, decimals);
    }
    return format_score(score.mean, decimals) + " ± " + format_score(score.std, decimals);
}

void CorpusStats::add_source(const std::string& dataset) {
    if (index_.emplace(dataset, rows_.size()).second) {
        rows_.push_back({dataset, 0, 0});
    }
}

void CorpusStats::add(const std::string& dataset, std::size_t tokens) {
    add_source(dataset);
    auto& row = rows_[index_.at(dataset)];
    row.tokens += tokens;
    ++row.documents;
}

void CorpusStats::merge(const CorpusStats& other) {
    for (const auto& row : other.rows_) {
        add_source(row.dataset);
        auto& mine = rows_[index_.at(row.dataset)];
        mine.tokens += row.tokens;
        mine.documents += row.documents;
    }
}

StatsRow CorpusStats::total() const {
    StatsRow t{"Total", 0, 0};
    for (const auto& row : rows_) {
        t.tokens += row.tokens;
        t.documents += row.documents;
    }
    return t;
}

namespace {

std::string with_commas(std::size_t value) {
    auto digits = std::to_string(value);
    for (std::size_t pos = digits.size(); pos > 3; pos -= 3) {
        digits.insert(pos - 3, ",");
    }
    return digits;
}

}  // namespace

std::string human_magnitude(std::size_t value) {
    const auto scaled = [&](double unit) {
        return static_cast<std::size_t>(std::llround(static_cast<double>(value) / unit));
    };
    if (value >= 1'000'000 || scaled(1e3) >= 1000) {
        return with_commas(scaled(1e6)) + "M";
    }
    if (value >= 1'000) {
        return with_commas(scaled(1e3)) + "K";
    }
    return std::to_string(value);
}

std::string CorpusStats::to_markdown() const {
    std::ostringstream out;
    out << "| Dataset | Tokens | Documents |\n";
    out << "|---|---:|---:|\n";
    for (const auto& row : rows_) {
        out << "| " << row.dataset << " | " << human_magnitude(row.tokens) << " | " << human_magnitude(row.documents)
            << " |\n";
    }
    const auto t = total();
    out << "| " << t.dataset << " | " << human_magnitude(t.tokens) << " | " << human_magnitude(t.documents) << " |\n";
    return out.str();
}

std::string CorpusStats::to_csv() const {
    const auto quote = [](const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) {
            return s;
        }
        std::string q = "\"";
        for (const char c : s) {
            q += c;
            if (c == '"') {
                q += '"';
            }
        }
        return q + "\"";
    };
    std::ostringstream out;
    out << "Dataset,Tokens,Documents\n";
    for (const auto& row : rows_) {
        out << quote(row.dataset) << ',' << row.tokens << ',' << row.documents << '\n';
    }
    const auto t = total();
    out << t.dataset << ',' << t.tokens << ',' << t.documents << '\n';
    return out.str();
}

ModelSize parse_model_size(std::string_view name) {
    if (name == "base") {
        return ModelSize::Base;
    }
    if (name == "large") {
        return ModelSize::Large;
    }
    throw ConfigError("model size must be base or large");
}

std::string_view to_string(ModelSize size) { return size == ModelSize::Base ? "base" : "large"; }

double TaskConfig::learning_rate_value() const { return std::stod(learning_rate); }

std::string TaskConfig::to_key_values() const {
    std::ostringstream out;
    out << "task=" << task << '\n'
        << "size=" << to_string(size) << '\n'
        << "learning_rate=" << learning_rate << '\n'
        << "batch_size=" << batch_size << '\n'
        << "epochs=" << epochs << '\n';
    return out.str();
}

namespace {

struct HyperparameterRow {
    const char* task;
    const char* lr_base;
    const char* lr_large;
    int batch_base;
    int batch_large;
    int epochs;
};

constexpr HyperparameterRow kHyperparameters[] = {
    {"BRONCO", "3e-5", "1e-5", 16, 16, 20},
    {"GGPONC2", "3e-5", "1e-5", 16, 16, 5},
    {"GraSCCo", "3e-5", "1e-5", 16, 16, 20},
    {"CLEF", "4e-5", "1e-5", 16, 32, 20},
    {"RadQA", "3e-5", "1e-5", 16, 16, 10},
};

std::string canonical_key(std::string_view name) {
    std::string key;
    for (const char c : name) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            key += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        }
    }
    if (key == "ggponc20") {
        return "ggponc2";
    }
    if (key == "clefehealth" || key == "clefehealth2019") {
        return "clef";
    }
    return key;
}

}  // namespace

const std::vector<std::string>& known_tasks() {
    static const std::vector<std::string> tasks = [] {
        std::vector<std::string> out;
        for (const auto& row : kHyperparameters) {
            out.emplace_back(row.task);
        }
        return out;
    }();
    return tasks;
}

TaskConfig emit_task_config(std::string_view task, ModelSize size) {
    const auto key = canonical_key(task);
    for (const auto& row : kHyperparameters) {
        if (canonical_key(row.task) != key) {
            continue;
        }
        const bool base = size == ModelSize::Base;
        return {row.task, size, base ? row.lr_base : row.lr_large, base ? row.batch_base : row.batch_large,
                row.epochs};
    }
    std::string valid;
    for (const auto& t : known_tasks()) {
        valid += (valid.empty() ? "" : ", ") + t;
    }
    throw ConfigError("unknown task '" + std::string(task) + "'; valid tasks: " + valid);
}

}  // namespace medcorpus
