#include <httplib.h>

#include "medcorpus/error.hpp"
#include "medcorpus/translation.hpp"

namespace medcorpus {

HttpBackend::HttpBackend(std::string base_url, std::chrono::seconds timeout) : timeout_(timeout) {
    while (!base_url.empty() && base_url.back() == '/') {
        base_url.pop_back();
    }
    const auto scheme_end = base_url.find("://");
    if (scheme_end == std::string::npos || scheme_end == 0) {
        throw ConfigError("translation backend URL must look like http://host[:port][/prefix], got '" + base_url + "'");
    }
    const auto path_start = base_url.find('/', scheme_end + 3);
    origin_ = base_url.substr(0, path_start);
    path_ = (path_start == std::string::npos ? std::string{} : base_url.substr(path_start)) + "/translate";
}

std::vector<std::string> HttpBackend::translate(const TranslationRequest& request) {
    httplib::Client client(origin_);
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    client.set_write_timeout(timeout_);

    const nlohmann::json body{{"texts", request.texts}, {"src", request.src_lang}, {"tgt", request.tgt_lang}};
    const auto res = client.Post(path_, body.dump(), "application/json");
    if (!res) {
        throw BackendError("POST " + origin_ + path_ + " failed: " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
        throw BackendError("POST " + origin_ + path_ + " returned HTTP " + std::to_string(res->status));
    }
    nlohmann::json reply;
    try {
        reply = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
        throw BackendError(std::string("unparseable response: ") + e.what());
    }
    const auto translations = reply.find("translations");
    if (translations == reply.end() || !translations->is_array()) {
        throw BackendError("response lacks a \"translations\" array");
    }
    std::vector<std::string> out;
    out.reserve(translations->size());
    for (const auto& t : *translations) {
        if (!t.is_string()) {
            throw BackendError("non-string translation in response");
        }
        out.push_back(t.get<std::string>());
    }
    if (out.size() != request.texts.size()) {
        throw BackendError("response has " + std::to_string(out.size()) + " translations for " +
                           std::to_string(request.texts.size()) + " texts");
    }
    return out;
}

}  // namespace medcorpus
