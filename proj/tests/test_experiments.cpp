#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "medcorpus/error.hpp"
#include "medcorpus/experiments.hpp"
#include "test_support.hpp"

using namespace medcorpus;

namespace {

std::vector<std::string> ids(const std::string& prefix, std::size_t n, int width) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) {
        auto num = std::to_string(i);
        while (static_cast<int>(num.size()) < width) {
            num = "0" + num;
        }
        out.push_back(prefix + num);
    }
    return out;
}

}  // namespace

TEST_CASE("xorshift64* known answers") {
    Xorshift64Star zero(0);
    CHECK(zero.next() == 0x7bbcb40d550682d0ULL);
    CHECK(zero.next() == 0xde7fe413d00cc9fdULL);
    CHECK(zero.next() == 0xb3c638353c668c91ULL);
    Xorshift64Star answer(42);
    CHECK(answer.next() == 0x31b0ece7c4f697a2ULL);
    CHECK(answer.next() == 0x9008a3b1cb686f03ULL);
    CHECK(answer.next() == 0x7c7173abd97be16fULL);
}

TEST_CASE("below stays in range and covers it") {
    Xorshift64Star rng(9);
    std::vector<int> seen(7, 0);
    for (int i = 0; i < 7000; ++i) {
        const auto v = rng.below(7);
        REQUIRE(v < 7);
        ++seen[v];
    }
    for (const int count : seen) {
        CHECK(count > 800);
        CHECK(count < 1200);
    }
    CHECK(rng.below(1) == 0);
}

TEST_CASE("fold known answers") {
    const auto ten = make_folds(ids("doc", 10, 2), 5, 42);
    CHECK(ten.folds == std::vector<std::vector<std::string>>{
                           {"doc00", "doc09"}, {"doc01", "doc05"}, {"doc06", "doc07"}, {"doc08", "doc04"}, {"doc03", "doc02"}});
    const auto eleven = make_folds(ids("s", 11, 0), 5, 7);
    CHECK(eleven.folds == std::vector<std::vector<std::string>>{
                              {"s9", "s5", "s1"}, {"s6", "s8"}, {"s2", "s3"}, {"s0", "s4"}, {"s7", "s10"}});
    CHECK(eleven.assignment.at("s10") == 4);
}

TEST_CASE("folds partition the ids and ignore input order") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 100; ++trial) {
        const auto n = static_cast<std::size_t>(testing::uniform(rng, 2, 60));
        const auto k = static_cast<std::size_t>(testing::uniform(rng, 2, static_cast<int>(n)));
        const auto seed = rng();
        auto all = ids("x", n, 3);
        const auto folds = make_folds(all, k, seed);
        std::shuffle(all.begin(), all.end(), rng);
        const auto again = make_folds(all, k, seed);
        CHECK(again.folds == folds.folds);
        CHECK(folds.folds.size() == k);
        std::size_t total = 0;
        std::set<std::string> members;
        for (std::size_t f = 0; f < k; ++f) {
            const auto size = folds.folds[f].size();
            CHECK((size == n / k || size == n / k + 1));
            total += size;
            for (const auto& id : folds.folds[f]) {
                members.insert(id);
                CHECK(folds.assignment.at(id) == f);
            }
        }
        CHECK(total == n);
        CHECK(members.size() == n);
    }
}

TEST_CASE("fold errors") {
    CHECK_THROWS_AS(make_folds(ids("a", 3, 0), 1, 0), ConfigError);
    CHECK_THROWS_AS(make_folds(ids("a", 3, 0), 4, 0), ConfigError);
    CHECK_THROWS_AS(make_folds({"a", "b", "a"}, 2, 0), DataError);
    const auto j = to_json(make_folds(ids("a", 4, 0), 2, 3));
    CHECK(j["k"] == 2);
    CHECK(j["seed"] == 3);
    CHECK(j["folds"].size() == 2);
    CHECK(j.contains("prng"));
}

TEST_CASE("aggregate matches a two-pass computation") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> v;
        for (int i = testing::uniform(rng, 1, 10); i > 0; --i) {
            v.push_back(std::uniform_real_distribution<double>(0, 1)(rng));
        }
        const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
        double ss = 0;
        for (const double x : v) {
            ss += (x - mean) * (x - mean);
        }
        const double sd = v.size() < 2 ? 0.0 : std::sqrt(ss / static_cast<double>(v.size() - 1));
        const auto a = aggregate(v);
        CHECK(a.n == v.size());
        CHECK(a.mean == doctest::Approx(mean));
        CHECK(a.std == doctest::Approx(sd));
    }
    CHECK_THROWS_AS(aggregate({}), DataError);
}

TEST_CASE("score formatting") {
    CHECK(format_score(0.8333) == ".833");
    CHECK(format_score(1.0) == "1.000");
    CHECK(format_score(0.8333, 3, true) == "0.833");
    CHECK(format_score(0.5, 1) == ".5");
    CHECK(format_aggregate(aggregate({0.8, 0.9})) == ".850 ± .071");
    CHECK(format_aggregate(aggregate({0.75})) == ".750");
}

TEST_CASE("human magnitudes") {
    CHECK(human_magnitude(1'700'000'000) == "1,700M");
    CHECK(human_magnitude(16'000) == "16K");
    CHECK(human_magnitude(950) == "950");
    CHECK(human_magnitude(0) == "0");
    CHECK(human_magnitude(5'000'000) == "5M");
    CHECK(human_magnitude(999'600) == "1M");
    CHECK(human_magnitude(45'016'000) == "45M");
}

TEST_CASE("corpus statistics table") {
    CorpusStats stats;
    stats.add("German PubMed", 0);
    stats.add_source("PubMed");
    stats.add("MIMIC-III", 695'000'000);
    CorpusStats german;
    for (int i = 0; i < 3; ++i) {
        german.add("German PubMed", 1);
    }
    stats.merge(german);
    REQUIRE(stats.rows().size() == 3);
    CHECK(stats.rows()[0] == StatsRow{"German PubMed", 3, 4});
    CHECK(stats.rows()[1] == StatsRow{"PubMed", 0, 0});
    CHECK(stats.total() == StatsRow{"Total", 695'000'003, 5});
    CHECK(stats.to_csv() ==
          "Dataset,Tokens,Documents\nGerman PubMed,3,4\nPubMed,0,0\nMIMIC-III,695000000,1\nTotal,695000003,5\n");
}

TEST_CASE("merge order does not change per-source totals") {
    std::mt19937_64 rng(21);
    std::vector<CorpusStats> shards(5);
    for (auto& shard : shards) {
        for (int i = testing::uniform(rng, 0, 30); i > 0; --i) {
            shard.add(testing::pick(rng, {"a", "b", "c"}), static_cast<std::size_t>(testing::uniform(rng, 0, 500)));
        }
    }
    auto merged = [&](std::vector<std::size_t> order) {
        CorpusStats all;
        for (const auto i : order) {
            all.merge(shards[i]);
        }
        auto rows = all.rows();
        std::sort(rows.begin(), rows.end(), [](const StatsRow& x, const StatsRow& y) { return x.dataset < y.dataset; });
        return rows;
    };
    std::vector<std::size_t> order{0, 1, 2, 3, 4};
    const auto reference = merged(order);
    while (std::next_permutation(order.begin(), order.end())) {
        CHECK(merged(order) == reference);
    }
}

TEST_CASE("task configurations reproduce the hyperparameter table") {
    struct Row {
        const char* task;
        const char* lr_base;
        const char* lr_large;
        int bs_base;
        int bs_large;
        int epochs;
    };
    const Row table[] = {{"BRONCO", "3e-5", "1e-5", 16, 16, 20},
                         {"GGPONC2", "3e-5", "1e-5", 16, 16, 5},
                         {"GraSCCo", "3e-5", "1e-5", 16, 16, 20},
                         {"CLEF", "4e-5", "1e-5", 16, 32, 20},
                         {"RadQA", "3e-5", "1e-5", 16, 16, 10}};
    for (const auto& row : table) {
        const auto base = emit_task_config(row.task, ModelSize::Base);
        const auto large = emit_task_config(row.task, ModelSize::Large);
        CHECK(base.learning_rate == row.lr_base);
        CHECK(large.learning_rate == row.lr_large);
        CHECK(base.batch_size == row.bs_base);
        CHECK(large.batch_size == row.bs_large);
        CHECK(base.epochs == row.epochs);
        CHECK(large.epochs == row.epochs);
    }
    CHECK(emit_task_config("GGPONC 2.0", ModelSize::Base).task == "GGPONC2");
    CHECK(emit_task_config("clef ehealth", ModelSize::Large).batch_size == 32);
    CHECK(emit_task_config("radqa", ModelSize::Base).learning_rate_value() == doctest::Approx(3e-5));
    CHECK(emit_task_config("CLEF", ModelSize::Base).to_key_values() ==
          "task=CLEF\nsize=base\nlearning_rate=4e-5\nbatch_size=16\nepochs=20\n");
    CHECK_THROWS_WITH_AS(emit_task_config("MedNLI", ModelSize::Base), doctest::Contains("BRONCO"), ConfigError);
    CHECK_THROWS_AS(parse_model_size("xl"), ConfigError);
}
