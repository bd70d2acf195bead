#include <numeric>
#include <thread>

#include "medcorpus/translation.hpp"

namespace medcorpus {

std::vector<std::string> EchoBackend::translate(const TranslationRequest& request) {
    ++calls_;
    return request.texts;
}

std::vector<std::string> ScriptedFaultBackend::translate(const TranslationRequest& request) {
    ++calls_;
    const auto key = std::accumulate(request.segment_ids.begin(), request.segment_ids.end(), std::string{},
                                     [](std::string acc, const std::string& id) { return std::move(acc) + id + '\x1f'; });
    int call = 0;
    {
        std::lock_guard lock(mutex_);
        call = ++seen_[key];
    }
    if (failures_per_batch_ < 0 || call <= failures_per_batch_) {
        throw BackendError("scripted failure " + std::to_string(call));
    }
    return request.texts;
}

std::vector<std::string> PermutingBackend::translate(const TranslationRequest& request) {
    std::chrono::microseconds delay{0};
    {
        std::lock_guard lock(mutex_);
        if (max_delay_.count() > 0) {
            std::uniform_int_distribution<long long> dist(0, max_delay_.count());
            delay = std::chrono::microseconds(dist(rng_));
        }
    }
    std::this_thread::sleep_for(delay);
    {
        std::lock_guard lock(mutex_);
        completed_.push_back(request.segment_ids.empty() ? std::string{} : request.segment_ids.front());
    }
    return request.texts;
}

std::vector<std::string> PermutingBackend::completion_order() const {
    std::lock_guard lock(mutex_);
    return completed_;
}

}  // namespace medcorpus
