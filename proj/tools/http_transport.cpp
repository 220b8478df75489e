#include "http_transport.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "favi/errors.hpp"

namespace favi::tools {

HttpJudgeTransport::HttpJudgeTransport(HttpJudgeOptions options)
    : options_(std::move(options)) {
    if (options_.base_url.empty()) {
        throw InvalidInput("live judging needs a base URL");
    }
}

JudgeResponse HttpJudgeTransport::complete(const JudgePrompts& prompts) {
    httplib::Client client(options_.base_url);
    client.set_connection_timeout(options_.timeout_seconds);
    client.set_read_timeout(options_.timeout_seconds);
    if (!options_.api_key.empty()) {
        client.set_bearer_token_auth(options_.api_key);
    }

    const nlohmann::json request =
        build_provider_request(options_.model, prompts, options_.temperature);
    auto result = client.Post(options_.path, request.dump(), "application/json");
    if (!result) {
        throw TransportError("request to " + options_.base_url + " failed: " +
                             httplib::to_string(result.error()));
    }
    if (result->status < 200 || result->status >= 300) {
        throw TransportError("provider returned HTTP " + std::to_string(result->status));
    }
    nlohmann::json body;
    try {
        body = nlohmann::json::parse(result->body);
    } catch (const nlohmann::json::exception& e) {
        throw TransportError(std::string("provider returned malformed JSON: ") + e.what());
    }
    return parse_provider_envelope(body);
}

}  // namespace favi::tools
