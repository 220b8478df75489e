#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "favi/prefs.hpp"

namespace favi {

/// Instruction text sent once per conversation.
inline constexpr std::string_view kJudgeSystemPrompt =
    "You act as an expert translator giving detailed feedback about candidate translations "
    "provided by users. Consider in particular the spelling, grammar, accuracy, and fluency of "
    "different translations. Make sure you give detailed information why one translation might "
    "be better than another.";

/// Per-item template; {source}, {hyp_a} and {hyp_b} are replaced with
/// the concrete texts.
inline constexpr std::string_view kJudgeUserPromptTemplate =
    "Please give feedback for the following translations:\n"
    "\n"
    "Original Sentence:\n"
    "{source}\n"
    "\n"
    "Candidate A:\n"
    "{hyp_a}\n"
    "\n"
    "Candidate B:\n"
    "{hyp_b}";

/// One pairwise comparison to put in front of the judge model.
/// candidate_a comes from pair.first, candidate_b from pair.second.
struct JudgeRequest {
    std::string item_id;
    SystemPair pair;
    std::string source_text;
    std::string candidate_a;
    std::string candidate_b;
};

struct JudgePrompts {
    std::string system_prompt;
    std::string user_prompt;

    bool operator==(const JudgePrompts&) const = default;
};

JudgePrompts build_prompts(const JudgeRequest& request);

/// Structured judge output. Feedback and explanation ride along for
/// the cache but are never used for scoring.
struct JudgeResponse {
    std::string preference_raw;
    std::string feedback_a;
    std::string feedback_b;
    std::string explanation;

    bool operator==(const JudgeResponse&) const = default;
};

/// Maps the structured preference string to a label after trimming
/// surrounding whitespace. An empty preference counts as no
/// preference; anything else raises.
RatingLabel parse_preference(const JudgeResponse& response);

struct PairItemKey {
    std::string first;
    std::string second;
    std::string item_id;

    auto operator<=>(const PairItemKey&) const = default;
};

using RatingsByPairItem = std::map<PairItemKey, RatingLabel>;

/// Completes ratings so that both orderings of every pair are present:
/// the lexicographically-first ordering is the source of truth and the
/// reverse ordering carries the inverted label. Idempotent.
RatingsByPairItem symmetrize(const RatingsByPairItem& ratings);

/// Single-call judge backend: prompts in, structured response out.
class JudgeTransport {
public:
    virtual ~JudgeTransport() = default;
    virtual JudgeResponse complete(const JudgePrompts& prompts) = 0;
};

/// Stable content key for a prompt pair (FNV-1a 64-bit, hex).
std::string cache_key(const JudgePrompts& prompts);

/// Directory of one JSON document per judged request, named by
/// cache_key. Writes go through a temp file and a rename so a reader
/// never sees a partial document.
class ReplayCache {
public:
    explicit ReplayCache(std::filesystem::path directory);

    const std::filesystem::path& directory() const noexcept { return directory_; }

    std::optional<JudgeResponse> lookup(const JudgePrompts& prompts) const;
    void store(const JudgePrompts& prompts, const JudgeResponse& response) const;

private:
    std::filesystem::path directory_;
};

/// Serves responses from the cache and optionally fills misses from a
/// live transport, persisting every live response before returning it.
class CachingTransport : public JudgeTransport {
public:
    explicit CachingTransport(ReplayCache cache, std::unique_ptr<JudgeTransport> live = nullptr);

    JudgeResponse complete(const JudgePrompts& prompts) override;

private:
    ReplayCache cache_;
    std::unique_ptr<JudgeTransport> live_;
};

/// Judges every request in order and parses the preferences. Errors
/// carry the item id of the request that failed.
std::vector<RatingLabel> judge_pair_over_testset(JudgeTransport& transport,
                                                 const std::vector<JudgeRequest>& requests);

/// Chat-completion request body with a forced function call that
/// returns the structured rating.
nlohmann::json build_provider_request(const std::string& model, const JudgePrompts& prompts,
                                      std::optional<double> temperature = std::nullopt);

/// Extracts the structured rating from a chat-completion response
/// body; understands both function_call and tool_calls envelopes.
JudgeResponse parse_provider_envelope(const nlohmann::json& body);

}  // namespace favi
