#pragma once

#include <optional>
#include <string>

#include "favi/judge.hpp"

namespace favi::tools {

struct HttpJudgeOptions {
    std::string base_url;  // e.g. https://api.openai.com
    std::string path = "/v1/chat/completions";
    std::string model = "gpt-3.5-turbo-0613";
    std::string api_key;                  // sent as a bearer token when non-empty
    std::optional<double> temperature;    // provider default when unset
    int timeout_seconds = 120;
};

/// Judge backend over an OpenAI-style chat completion endpoint with a
/// forced function call. One request per judged item, no retries.
class HttpJudgeTransport : public JudgeTransport {
public:
    explicit HttpJudgeTransport(HttpJudgeOptions options);

    JudgeResponse complete(const JudgePrompts& prompts) override;

private:
    HttpJudgeOptions options_;
};

}  // namespace favi::tools
