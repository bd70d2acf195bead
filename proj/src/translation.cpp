#include "medcorpus/translation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <optional>
#include <thread>
#include <unordered_map>
#include <variant>

#include "medcorpus/error.hpp"

namespace medcorpus {

std::string segment_id(const Segment& seg) { return seg.doc_id + "#" + std::to_string(seg.index); }

std::vector<TranslationRequest> plan_batches(std::span<const Segment> segments, std::size_t batch_size,
                                             const std::string& src_lang, const std::string& tgt_lang) {
    if (batch_size < 1) {
        throw ConfigError("batch_size must be at least 1");
    }
    std::vector<TranslationRequest> batches;
    for (std::size_t i = 0; i < segments.size(); i += batch_size) {
        TranslationRequest req;
        req.src_lang = src_lang;
        req.tgt_lang = tgt_lang;
        const std::size_t end = std::min(segments.size(), i + batch_size);
        for (std::size_t j = i; j < end; ++j) {
            req.segment_ids.push_back(segment_id(segments[j]));
            req.texts.push_back(segments[j].text);
        }
        batches.push_back(std::move(req));
    }
    return batches;
}

std::chrono::milliseconds backoff_delay(const RetryPolicy& policy, int retry) {
    if (retry < 1) {
        return std::chrono::milliseconds(0);
    }
    const double base = static_cast<double>(policy.initial_backoff.count());
    const double delay = base * std::pow(policy.multiplier, retry - 1);
    const double cap = static_cast<double>(policy.max_backoff.count());
    return std::chrono::milliseconds(static_cast<long long>(std::min(delay, cap)));
}

namespace {

using BatchOutcome = std::variant<std::monostate, std::vector<TranslatedSegment>, BatchFailure>;

BatchOutcome run_batch(std::size_t index, const TranslationRequest& req, TranslationBackend& backend,
                       const TranslateOptions& options) {
    const int max_attempts = std::max(0, options.retry.max_retries) + 1;
    std::string last_error;
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        if (attempt > 1) {
            const auto delay = backoff_delay(options.retry, attempt - 1);
            if (options.sleep) {
                options.sleep(delay);
            } else if (delay.count() > 0) {
                std::this_thread::sleep_for(delay);
            }
        }
        try {
            auto translations = backend.translate(req);
            if (translations.size() != req.texts.size()) {
                throw BackendError("response has " + std::to_string(translations.size()) + " translations for " +
                                   std::to_string(req.texts.size()) + " texts");
            }
            const auto empty = std::find(translations.begin(), translations.end(), std::string{});
            if (empty != translations.end()) {
                throw BackendError("empty translation for " +
                                   req.segment_ids[static_cast<std::size_t>(empty - translations.begin())]);
            }
            std::vector<TranslatedSegment> out;
            out.reserve(req.texts.size());
            const auto backend_name = backend.name();
            for (std::size_t i = 0; i < req.texts.size(); ++i) {
                out.push_back({req.segment_ids[i], req.texts[i], std::move(translations[i]), backend_name, attempt});
            }
            return out;
        } catch (const std::exception& e) {
            last_error = e.what();
        }
    }
    return BatchFailure{index, req.segment_ids, max_attempts, last_error};
}

}  // namespace

TranslationRun translate_all(const std::vector<TranslationRequest>& requests, TranslationBackend& backend,
                             const TranslateOptions& options) {
    if (options.max_in_flight < 1) {
        throw ConfigError("max_in_flight must be at least 1");
    }
    std::vector<BatchOutcome> outcomes(requests.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < requests.size(); i = next.fetch_add(1)) {
            outcomes[i] = run_batch(i, requests[i], backend, options);
        }
    };
    const std::size_t threads = std::min(options.max_in_flight, requests.size());
    {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }

    TranslationRun run;
    for (auto& outcome : outcomes) {
        if (auto* ok = std::get_if<std::vector<TranslatedSegment>>(&outcome)) {
            run.translated.insert(run.translated.end(), std::make_move_iterator(ok->begin()),
                                  std::make_move_iterator(ok->end()));
        } else if (auto* failed = std::get_if<BatchFailure>(&outcome)) {
            run.failures.push_back(std::move(*failed));
        }
    }
    return run;
}

nlohmann::json failure_manifest(const TranslationRun& run) {
    nlohmann::json batches = nlohmann::json::array();
    std::size_t segments = 0;
    for (const auto& f : run.failures) {
        batches.push_back({{"batch_index", f.batch_index},
                           {"segment_ids", f.segment_ids},
                           {"attempts", f.attempts},
                           {"last_error", f.last_error}});
        segments += f.segment_ids.size();
    }
    return {{"failed_batches", run.failures.size()},
            {"failed_segments", segments},
            {"translated_segments", run.translated.size()},
            {"batches", batches}};
}

std::vector<Document> reassemble(std::span<const TranslatedSegment> translated, std::span<const Segment> originals) {
    std::unordered_map<std::string, const TranslatedSegment*> by_id;
    by_id.reserve(translated.size());
    for (const auto& t : translated) {
        if (!by_id.emplace(t.segment_id, &t).second) {
            throw DataError("segment " + t.segment_id + " translated more than once");
        }
    }

    std::vector<Document> docs;
    std::unordered_map<std::string, std::size_t> doc_slot;
    std::vector<std::vector<const Segment*>> members;
    for (const auto& seg : originals) {
        auto [it, inserted] = doc_slot.emplace(seg.doc_id, docs.size());
        if (inserted) {
            Document doc;
            doc.id = seg.doc_id;
            doc.source = seg.source;
            doc.meta["translated"] = "true";
            docs.push_back(std::move(doc));
            members.emplace_back();
        }
        members[it->second].push_back(&seg);
    }
    for (std::size_t d = 0; d < docs.size(); ++d) {
        auto& segs = members[d];
        std::stable_sort(segs.begin(), segs.end(), [](const Segment* a, const Segment* b) { return a->index < b->index; });
        for (const auto* seg : segs) {
            const auto id = segment_id(*seg);
            const auto found = by_id.find(id);
            if (found == by_id.end()) {
                throw DataError("missing translation for segment " + id);
            }
            if (!docs[d].text.empty()) {
                docs[d].text += '\n';
            }
            docs[d].text += found->second->translated_text;
        }
    }
    return docs;
}

}  // namespace medcorpus
