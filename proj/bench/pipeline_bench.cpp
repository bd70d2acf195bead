#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <omp.h>

#include "medcorpus/pipeline.hpp"

using namespace medcorpus;

namespace {

std::vector<Document> make_corpus(std::size_t n, std::uint64_t seed) {
    static const std::vector<std::string> words{
        "der",    "Patient", "wurde", "mit",   "akuter", "Dyspnoe", "aufgenommen", "Therapie", "stabil",
        "38.5",   "mmol/l",  "z.B.",  "Dr.",   "nach",   "Kontrolle", "unauffällig", "Übelkeit", "Größe",
        "140",    "erneut",  "ohne",  "Befund", "geplant", "Verlauf"};
    std::mt19937_64 rng(seed);
    auto pick = [&](std::size_t bound) { return std::uniform_int_distribution<std::size_t>(0, bound - 1)(rng); };
    std::vector<Document> docs;
    docs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::string text;
        for (std::size_t p = 1 + pick(5); p > 0; --p) {
            if (!text.empty()) {
                text += "\n\n";
            }
            for (std::size_t s = 1 + pick(8); s > 0; --s) {
                text += "Befund";
                for (std::size_t w = 2 + pick(30); w > 0; --w) {
                    text += ' ';
                    text += words[pick(words.size())];
                }
                text += ". ";
            }
            if (pick(5) == 0) {
                text += "\n12 | 14 | 99 | 7.5";
            }
        }
        docs.push_back({"doc" + std::to_string(i), "bench", std::move(text), {}});
    }
    return docs;
}

double best_of(int reps, const std::function<void()>& body) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto start = std::chrono::steady_clock::now();
        body();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    }
    return best;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Serial vs OpenMP pipeline kernels"};
    std::size_t documents = 20'000;
    int reps = 3;
    std::vector<int> workers{1, 2, 4, 8};
    std::size_t max_tokens = 128;
    app.add_option("--docs", documents, "Synthetic documents")->capture_default_str();
    app.add_option("--reps", reps, "Repetitions; the best time is reported")->capture_default_str();
    app.add_option("--workers", workers, "Worker counts for the OpenMP kernels")->capture_default_str();
    app.add_option("--max-tokens", max_tokens, "Segment budget")->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    const auto docs = make_corpus(documents, 7);
    std::vector<std::string> texts;
    texts.reserve(docs.size());
    std::size_t bytes = 0;
    for (const auto& d : docs) {
        texts.push_back(d.text);
        bytes += d.text.size();
    }
    const FilterConfig filter_cfg;
    SegmenterConfig seg_cfg;
    seg_cfg.max_tokens = max_tokens;
    const TokenizerKind tokenizer = WhitespaceTokenizer{};

    std::printf("corpus: %zu documents, %.1f MB; omp_get_max_threads() = %d; best of %d\n\n", docs.size(),
                static_cast<double>(bytes) / 1e6, omp_get_max_threads(), reps);
    std::printf("%-14s %-10s %10s %10s %9s %s\n", "kernel", "variant", "seconds", "MB/s", "speedup", "same");

    struct Kernel {
        const char* name;
        std::function<void()> serial;
        std::function<bool(int)> parallel;  // runs once, returns equality with the serial result
        std::function<void(int)> parallel_timed;
    };
    const auto filtered_ref = serial::filter_documents(docs, filter_cfg);
    const auto segmented_ref = serial::segment_documents(docs, seg_cfg);
    const auto counts_ref = serial::count_tokens(texts, tokenizer);
    const std::vector<Kernel> kernels{
        {"filter", [&] { serial::filter_documents(docs, filter_cfg); },
         [&](int w) { return parallel::filter_documents(docs, filter_cfg, w) == filtered_ref; },
         [&](int w) { parallel::filter_documents(docs, filter_cfg, w); }},
        {"segment", [&] { serial::segment_documents(docs, seg_cfg); },
         [&](int w) { return parallel::segment_documents(docs, seg_cfg, w) == segmented_ref; },
         [&](int w) { parallel::segment_documents(docs, seg_cfg, w); }},
        {"count_tokens", [&] { serial::count_tokens(texts, tokenizer); },
         [&](int w) { return parallel::count_tokens(texts, tokenizer, w) == counts_ref; },
         [&](int w) { parallel::count_tokens(texts, tokenizer, w); }},
    };
    const double mb = static_cast<double>(bytes) / 1e6;
    bool all_same = true;
    for (const auto& k : kernels) {
        const double base = best_of(reps, k.serial);
        std::printf("%-14s %-10s %10.4f %10.1f %9s %s\n", k.name, "serial", base, mb / base, "1.00x", "-");
        for (const int w : workers) {
            const bool same = k.parallel(w);
            all_same = all_same && same;
            const double t = best_of(reps, [&] { k.parallel_timed(w); });
            char label[32];
            std::snprintf(label, sizeof label, "omp x%d", w);
            std::printf("%-14s %-10s %10.4f %10.1f %8.2fx %s\n", k.name, label, t, mb / t, base / t,
                        same ? "yes" : "NO");
        }
    }
    return all_same ? 0 : 1;
}
