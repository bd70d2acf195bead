#include <omp.h>

#include <exception>
#include <mutex>

#include "medcorpus/pipeline.hpp"

namespace medcorpus::parallel {

namespace {

int resolve_workers(int workers) { return workers < 1 ? omp_get_max_threads() : workers; }

// Runs body(i) for i in [0, n) on `workers` threads. The first exception
// thrown by any iteration is rethrown after the loop.
template <typename Body>
void for_each_index(std::size_t n, int workers, Body&& body) {
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 32) num_threads(resolve_workers(workers))
    for (long long i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) {
                failure = std::current_exception();
            }
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

}  // namespace

std::vector<FilteredDocument> filter_documents(std::span<const Document> docs, const FilterConfig& cfg,
                                               int workers) {
    cfg.validate();
    std::vector<FilteredDocument> out(docs.size());
    for_each_index(docs.size(), workers, [&](std::size_t i) { out[i] = filter_document(docs[i], cfg); });
    return out;
}

std::vector<std::vector<Segment>> segment_documents(std::span<const Document> docs, const SegmenterConfig& cfg,
                                                    int workers) {
    cfg.validate();
    std::vector<std::vector<Segment>> out(docs.size());
    for_each_index(docs.size(), workers, [&](std::size_t i) { out[i] = segment_document(docs[i], cfg); });
    return out;
}

std::vector<std::size_t> count_tokens(std::span<const std::string> texts, const TokenizerKind& tk, int workers) {
    std::vector<std::size_t> out(texts.size());
    for_each_index(texts.size(), workers,
                   [&](std::size_t i) { out[i] = medcorpus::count_tokens(texts[i], tk); });
    return out;
}

}  // namespace medcorpus::parallel
