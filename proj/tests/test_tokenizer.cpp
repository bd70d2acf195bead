#include <doctest.h>

#include <sstream>

#include "medcorpus/error.hpp"
#include "medcorpus/tokenizer.hpp"
#include "medcorpus/utf8.hpp"
#include "test_support.hpp"

using namespace medcorpus;

namespace {

TokenizerKind subword(std::vector<std::string> pieces) {
    return GreedySubwordTokenizer{std::make_shared<const SubwordVocab>(std::move(pieces))};
}

}  // namespace

TEST_CASE("load_vocab assigns line numbers as ids") {
    const auto dir = testing::scratch_dir("vocab");
    const auto vocab = load_vocab(testing::write_file(dir / "v.txt", "[UNK]\nder\ndie\n##n\nsta\n"));
    CHECK(vocab.size() == 5);
    CHECK(vocab.id_of("[UNK]") == 0);
    CHECK(vocab.id_of("sta") == 4);
    CHECK(vocab.id_of("nope") == -1);
}

TEST_CASE("load_vocab rejects duplicates, empty files and empty pieces") {
    const auto dir = testing::scratch_dir("vocab_bad");
    try {
        load_vocab(testing::write_file(dir / "dup.txt", "der\n[UNK]\nder\n"));
        FAIL("expected DataError");
    } catch (const DataError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("lines 1 and 3") != std::string::npos);
    }
    CHECK_THROWS_AS(load_vocab(testing::write_file(dir / "empty.txt", "")), DataError);
    CHECK_THROWS_AS(load_vocab(testing::write_file(dir / "blank.txt", "[UNK]\n\nder\n")), DataError);
    CHECK_THROWS_AS(load_vocab(testing::write_file(dir / "nounk.txt", "der\ndie\n")), DataError);
    CHECK_THROWS_AS(load_vocab(dir / "missing.txt"), DataError);
}

TEST_CASE("count_tokens examples") {
    CHECK(count_tokens("Der Patient ist stabil", WhitespaceTokenizer{}) == 4);
    const auto tk = subword({"der", "patient", "ist", "sta", "##bil", "[UNK]"});
    CHECK(count_tokens("der patient ist stabil", tk) == 5);
    CHECK(wordpiece("stabil", *std::get<GreedySubwordTokenizer>(tk).vocab) ==
          std::vector<std::string>{"sta", "##bil"});
    CHECK(count_tokens("", WhitespaceTokenizer{}) == 0);
    CHECK(count_tokens("", tk) == 0);
    CHECK(count_tokens("   \n\t", tk) == 0);
}

TEST_CASE("greedy subword matching takes the longest piece first") {
    const auto tk = subword({"sta", "stab", "##il", "##bil", "##i", "##l", "[UNK]"});
    const auto& vocab = *std::get<GreedySubwordTokenizer>(tk).vocab;
    CHECK(wordpiece("stabil", vocab) == std::vector<std::string>{"stab", "##il"});
    CHECK(count_tokens("stabil", tk) == 2);
}

TEST_CASE("a word with an unmatched position counts as one unknown token") {
    const auto tk = subword({"der", "sta", "[UNK]"});
    CHECK(count_tokens("stabil", tk) == 1);
    CHECK(count_tokens("xyz der", tk) == 2);
    CHECK(wordpiece("stabil", *std::get<GreedySubwordTokenizer>(tk).vocab) == std::vector<std::string>{"[UNK]"});
}

TEST_CASE("vocab matching is case-sensitive") {
    const auto tk = subword({"der", "[UNK]"});
    CHECK(wordpiece("Der", *std::get<GreedySubwordTokenizer>(tk).vocab) == std::vector<std::string>{"[UNK]"});
}

TEST_CASE("subword cuts fall on codepoint boundaries") {
    const auto tk = subword({"gr", "##ö", "##ße", "[UNK]"});
    CHECK(wordpiece("größe", *std::get<GreedySubwordTokenizer>(tk).vocab) ==
          std::vector<std::string>{"gr", "##ö", "##ße"});
}

TEST_CASE("whitespace counting equals the split-on-whitespace list length") {
    std::mt19937_64 rng(77);
    const std::vector<std::string> alphabet{"a", "b", "7", ".", " ", " ", "\t", "\n", "\r", "\v", "\f", "x"};
    for (int i = 0; i < 1000; ++i) {
        std::string text;
        for (int c = testing::uniform(rng, 0, 50); c > 0; --c) {
            text += testing::pick(rng, alphabet);
        }
        std::istringstream ss(text);
        std::size_t expected = 0;
        std::string w;
        while (ss >> w) {
            ++expected;
        }
        CHECK(count_tokens(text, WhitespaceTokenizer{}) == expected);
    }
}

TEST_CASE("token counts are additive over whitespace joins and bounded per word") {
    const auto tk = subword({"[UNK]", "a", "b", "ab", "ba", "##a", "##b", "##ab", "c", "##ä", "ä"});
    std::mt19937_64 rng(3);
    const std::vector<std::string> letters{"a", "b", "c", "ä", "d"};
    auto random_text = [&](int max_words) {
        std::string text;
        for (int w = testing::uniform(rng, 0, max_words); w > 0; --w) {
            if (!text.empty()) {
                text += testing::pick(rng, {" ", "  ", "\n"});
            }
            for (int c = testing::uniform(rng, 1, 7); c > 0; --c) {
                text += testing::pick(rng, letters);
            }
        }
        return text;
    };
    for (int i = 0; i < 500; ++i) {
        const auto a = random_text(6);
        const auto b = random_text(6);
        for (const TokenizerKind& kind : {TokenizerKind{WhitespaceTokenizer{}}, tk}) {
            CHECK(count_tokens(a + " " + b, kind) == count_tokens(a, kind) + count_tokens(b, kind));
            CHECK(count_tokens(a, kind) == count_tokens(a, kind));
        }
        for (const auto word : utf8::split_words(a)) {
            const auto n = count_tokens(word, tk);
            CHECK(n >= 1);
            CHECK(n <= utf8::codepoint_count(word));
        }
    }
}

TEST_CASE("tokenizer spec parsing") {
    CHECK(std::holds_alternative<WhitespaceTokenizer>(parse_tokenizer_spec("whitespace")));
    const auto dir = testing::scratch_dir("tok_spec");
    testing::write_file(dir / "v.txt", "[UNK]\nder\n");
    const auto tk = parse_tokenizer_spec("subword:" + (dir / "v.txt").string());
    REQUIRE(std::holds_alternative<GreedySubwordTokenizer>(tk));
    CHECK(std::get<GreedySubwordTokenizer>(tk).vocab->size() == 2);
    CHECK_THROWS_AS(parse_tokenizer_spec("bpe"), ConfigError);
    CHECK_THROWS_AS(parse_tokenizer_spec("subword:"), ConfigError);
}
