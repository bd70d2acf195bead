#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "medcorpus/corpus.hpp"

namespace medcorpus {

struct TranslationRequest {
    std::vector<std::string> segment_ids;
    std::vector<std::string> texts;
    std::string src_lang = "en";
    std::string tgt_lang = "de";
};

struct TranslatedSegment {
    std::string segment_id;
    std::string source_text;
    std::string translated_text;
    std::string backend_name;
    int attempt_count = 1;

    bool operator==(const TranslatedSegment&) const = default;
};

// A failed batch attempt. Backends throw this (or any std::exception).
class BackendError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class TranslationBackend {
public:
    virtual ~TranslationBackend() = default;
    virtual std::string name() const = 0;
    // Must be safe to call concurrently. Returns one translation per input
    // text, in order.
    virtual std::vector<std::string> translate(const TranslationRequest& request) = 0;
};

// "<doc_id>#<index>"; unique because the index never contains '#'.
std::string segment_id(const Segment& seg);

// Consecutive slices of batch_size segments; only the last may be short.
std::vector<TranslationRequest> plan_batches(std::span<const Segment> segments, std::size_t batch_size,
                                             const std::string& src_lang = "en",
                                             const std::string& tgt_lang = "de");

struct RetryPolicy {
    int max_retries = 3;
    std::chrono::milliseconds initial_backoff{200};
    double multiplier = 2.0;
    std::chrono::milliseconds max_backoff{30'000};
};

// Delay before retry number `retry` (1-based): initial * multiplier^(retry-1),
// capped at max_backoff.
std::chrono::milliseconds backoff_delay(const RetryPolicy& policy, int retry);

struct TranslateOptions {
    RetryPolicy retry;
    std::size_t max_in_flight = 4;
    // Injected for tests; defaults to std::this_thread::sleep_for.
    std::function<void(std::chrono::milliseconds)> sleep;
};

struct BatchFailure {
    std::size_t batch_index = 0;
    std::vector<std::string> segment_ids;
    int attempts = 0;
    std::string last_error;
};

struct TranslationRun {
    // In request order, regardless of completion order.
    std::vector<TranslatedSegment> translated;
    std::vector<BatchFailure> failures;
};

// Runs at most max_in_flight batches concurrently. A batch is attempted up to
// max_retries + 1 times; a non-matching response length or an empty
// translation counts as a failed attempt. Exhausted batches are reported in
// failures and never abort the run.
TranslationRun translate_all(const std::vector<TranslationRequest>& requests, TranslationBackend& backend,
                             const TranslateOptions& options = {});

nlohmann::json failure_manifest(const TranslationRun& run);

// Joins each document's translated segment texts with '\n' in segment order.
// Documents appear in first-appearance order of `originals`. Throws DataError
// naming the first segment without a translation, or a duplicated one.
std::vector<Document> reassemble(std::span<const TranslatedSegment> translated, std::span<const Segment> originals);

// Offline backends.
class EchoBackend : public TranslationBackend {
public:
    std::string name() const override { return "mock-echo"; }
    std::vector<std::string> translate(const TranslationRequest& request) override;
    std::size_t calls() const { return calls_.load(); }

private:
    std::atomic<std::size_t> calls_{0};
};

// Fails the first `failures_per_batch` calls for every distinct batch, then
// echoes. A negative value fails forever.
class ScriptedFaultBackend : public TranslationBackend {
public:
    explicit ScriptedFaultBackend(int failures_per_batch) : failures_per_batch_(failures_per_batch) {}
    std::string name() const override { return "mock-scripted"; }
    std::vector<std::string> translate(const TranslationRequest& request) override;
    std::size_t calls() const { return calls_.load(); }

private:
    int failures_per_batch_;
    std::mutex mutex_;
    std::map<std::string, int> seen_;
    std::atomic<std::size_t> calls_{0};
};

// Echoes after a seeded random delay so batches complete out of order.
class PermutingBackend : public TranslationBackend {
public:
    PermutingBackend(std::uint64_t seed, std::chrono::microseconds max_delay)
        : rng_(seed), max_delay_(max_delay) {}
    std::string name() const override { return "mock-permuting"; }
    std::vector<std::string> translate(const TranslationRequest& request) override;
    // Batch first-segment ids in the order their calls returned.
    std::vector<std::string> completion_order() const;

private:
    mutable std::mutex mutex_;
    std::mt19937_64 rng_;
    std::chrono::microseconds max_delay_;
    std::vector<std::string> completed_;
};

// POST {base_url}/translate with {"texts": [...], "src": ..., "tgt": ...};
// expects 200 and {"translations": [...]} of equal length.
class HttpBackend : public TranslationBackend {
public:
    explicit HttpBackend(std::string base_url, std::chrono::seconds timeout = std::chrono::seconds(120));
    std::string name() const override { return "http"; }
    std::vector<std::string> translate(const TranslationRequest& request) override;

private:
    std::string origin_;  // scheme://host[:port]
    std::string path_;    // prefix + "/translate"
    std::chrono::seconds timeout_;
};

}  // namespace medcorpus
