#include "favi/judge.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>
#include <utility>

#include "favi/errors.hpp"

namespace favi {

namespace {

void replace_placeholder(std::string& text, std::string_view placeholder,
                         const std::string& value) {
    const std::size_t pos = text.find(placeholder);
    if (pos != std::string::npos) {
        text.replace(pos, placeholder.size(), value);
    }
}

std::string_view trim(std::string_view text) {
    const auto is_space = [](char c) {
        return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
    };
    while (!text.empty() && is_space(text.front())) {
        text.remove_prefix(1);
    }
    while (!text.empty() && is_space(text.back())) {
        text.remove_suffix(1);
    }
    return text;
}

}  // namespace

JudgePrompts build_prompts(const JudgeRequest& request) {
    if (request.source_text.empty() || request.candidate_a.empty() ||
        request.candidate_b.empty()) {
        throw InvalidInput("judge request texts must be non-empty (item '" + request.item_id +
                           "')");
    }
    // Substituted back to front so user text containing a placeholder
    // token cannot capture a later substitution.
    std::string user_prompt{kJudgeUserPromptTemplate};
    replace_placeholder(user_prompt, "{hyp_b}", request.candidate_b);
    replace_placeholder(user_prompt, "{hyp_a}", request.candidate_a);
    replace_placeholder(user_prompt, "{source}", request.source_text);
    return {std::string{kJudgeSystemPrompt}, std::move(user_prompt)};
}

RatingLabel parse_preference(const JudgeResponse& response) {
    const std::string_view preference = trim(response.preference_raw);
    if (preference == "Candidate A") {
        return RatingLabel::Plus;
    }
    if (preference == "Candidate B") {
        return RatingLabel::Minus;
    }
    if (preference == "No Preference" || preference.empty()) {
        return RatingLabel::Equal;
    }
    throw UnparseableResponse(response.preference_raw);
}

RatingsByPairItem symmetrize(const RatingsByPairItem& ratings) {
    RatingsByPairItem out;
    for (const auto& [key, label] : ratings) {
        if (key.first == key.second) {
            throw InvalidInput("rating key names the same system twice: '" + key.first + "'");
        }
        if (key.first < key.second) {
            out[key] = label;
            out[PairItemKey{key.second, key.first, key.item_id}] = invert(label);
        }
    }
    // Reverse-ordered inputs must have a canonical counterpart; their
    // own label is discarded in favor of the inverted canonical one.
    for (const auto& [key, label] : ratings) {
        if (key.first > key.second &&
            !out.contains(PairItemKey{key.second, key.first, key.item_id})) {
            throw MissingScore(key.item_id, key.second + "|" + key.first);
        }
    }
    return out;
}

std::string cache_key(const JudgePrompts& prompts) {
    // FNV-1a over (system prompt, separator, user prompt).
    std::uint64_t hash = 1469598103934665603ULL;
    const auto mix = [&hash](std::string_view text) {
        for (unsigned char c : text) {
            hash ^= c;
            hash *= 1099511628211ULL;
        }
    };
    mix(prompts.system_prompt);
    mix(std::string_view{"\x1f", 1});
    mix(prompts.user_prompt);
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[hash & 0xF];
        hash >>= 4;
    }
    return out;
}

ReplayCache::ReplayCache(std::filesystem::path directory) : directory_(std::move(directory)) {
    std::filesystem::create_directories(directory_);
}

std::optional<JudgeResponse> ReplayCache::lookup(const JudgePrompts& prompts) const {
    const std::filesystem::path path = directory_ / (cache_key(prompts) + ".json");
    std::ifstream in(path);
    if (!in) {
        return std::nullopt;
    }
    nlohmann::json doc;
    try {
        in >> doc;
        JudgeResponse response;
        response.preference_raw = doc.at("preference").get<std::string>();
        response.feedback_a = doc.value("feedback_a", "");
        response.feedback_b = doc.value("feedback_b", "");
        response.explanation = doc.value("explanation", "");
        return response;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path.string(), 0, std::string("bad cache document: ") + e.what());
    }
}

void ReplayCache::store(const JudgePrompts& prompts, const JudgeResponse& response) const {
    const std::string key = cache_key(prompts);
    nlohmann::json doc{
        {"request", {{"system_prompt", prompts.system_prompt}, {"user_prompt", prompts.user_prompt}}},
        {"preference", response.preference_raw},
        {"feedback_a", response.feedback_a},
        {"feedback_b", response.feedback_b},
        {"explanation", response.explanation},
    };
    const std::filesystem::path final_path = directory_ / (key + ".json");
    const std::filesystem::path temp_path = directory_ / (key + ".tmp");
    {
        std::ofstream out(temp_path, std::ios::trunc);
        if (!out) {
            throw TransportError("cannot write cache file " + temp_path.string());
        }
        out << doc.dump(2) << "\n";
    }
    std::filesystem::rename(temp_path, final_path);
}

CachingTransport::CachingTransport(ReplayCache cache, std::unique_ptr<JudgeTransport> live)
    : cache_(std::move(cache)), live_(std::move(live)) {}

JudgeResponse CachingTransport::complete(const JudgePrompts& prompts) {
    if (auto cached = cache_.lookup(prompts)) {
        return *cached;
    }
    if (!live_) {
        throw TransportError("cache miss with no live transport configured");
    }
    JudgeResponse response = live_->complete(prompts);
    cache_.store(prompts, response);
    return response;
}

std::vector<RatingLabel> judge_pair_over_testset(JudgeTransport& transport,
                                                 const std::vector<JudgeRequest>& requests) {
    std::vector<RatingLabel> labels;
    labels.reserve(requests.size());
    for (const JudgeRequest& request : requests) {
        const JudgePrompts prompts = build_prompts(request);
        JudgeResponse response;
        try {
            response = transport.complete(prompts);
        } catch (const TransportError& e) {
            throw TransportError(request.item_id, e.what());
        }
        try {
            labels.push_back(parse_preference(response));
        } catch (const UnparseableResponse& e) {
            throw UnparseableResponse(request.item_id, e.raw());
        }
    }
    return labels;
}

nlohmann::json build_provider_request(const std::string& model, const JudgePrompts& prompts,
                                      std::optional<double> temperature) {
    nlohmann::json request{
        {"model", model},
        {"messages",
         {{{"role", "system"}, {"content", prompts.system_prompt}},
          {{"role", "user"}, {"content", prompts.user_prompt}}}},
        {"functions",
         {{{"name", "submit_preference"},
           {"description", "Submit the preference rating with feedback for both candidates."},
           {"parameters",
            {{"type", "object"},
             {"properties",
              {{"preference",
                {{"type", "string"},
                 {"enum", {"Candidate A", "Candidate B", "No Preference"}}}},
               {"feedback_a", {{"type", "string"}}},
               {"feedback_b", {{"type", "string"}}},
               {"explanation", {{"type", "string"}}}}},
             {"required", {"preference", "feedback_a", "feedback_b", "explanation"}}}}}}},
        {"function_call", {{"name", "submit_preference"}}},
    };
    if (temperature) {
        request["temperature"] = *temperature;
    }
    return request;
}

JudgeResponse parse_provider_envelope(const nlohmann::json& body) {
    try {
        const nlohmann::json& message = body.at("choices").at(0).at("message");
        std::string arguments;
        if (message.contains("function_call")) {
            arguments = message.at("function_call").at("arguments").get<std::string>();
        } else if (message.contains("tool_calls")) {
            arguments = message.at("tool_calls").at(0).at("function").at("arguments")
                            .get<std::string>();
        } else {
            throw UnparseableResponse("no function call in provider response");
        }
        const nlohmann::json fields = nlohmann::json::parse(arguments);
        JudgeResponse response;
        response.preference_raw = fields.value("preference", "");
        response.feedback_a = fields.value("feedback_a", "");
        response.feedback_b = fields.value("feedback_b", "");
        response.explanation = fields.value("explanation", "");
        return response;
    } catch (const nlohmann::json::exception& e) {
        throw UnparseableResponse(std::string("malformed provider envelope: ") + e.what());
    }
}

}  // namespace favi
