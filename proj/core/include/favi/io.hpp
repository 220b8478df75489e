#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "favi/derive.hpp"
#include "favi/judge.hpp"
#include "favi/prefs.hpp"

namespace favi {

enum class TableFormat { Csv, Jsonl };

std::optional<TableFormat> table_format_from_string(std::string_view name) noexcept;

struct LoadOptions {
    /// Fold rows given in the reversed system order into the
    /// lexicographically-first orientation (inverting their labels)
    /// instead of rejecting mixed orderings.
    bool symmetrize_orderings = false;
};

/// Reads rows of (item_id, system_a, system_b, human, metric) and
/// groups them into one setting per ordered pair, sorted by pair.
/// Label tokens are "+", "=", "-".
std::vector<EvaluationSetting> read_preferences(std::istream& in, TableFormat format,
                                                const LoadOptions& options,
                                                const std::string& source_name);
std::vector<EvaluationSetting> load_preferences(const std::filesystem::path& path,
                                                TableFormat format, const LoadOptions& options = {});

void write_preferences(std::ostream& out, std::span<const EvaluationSetting> settings,
                       TableFormat format);
void save_preferences(const std::filesystem::path& path,
                      std::span<const EvaluationSetting> settings, TableFormat format);

/// Reads rows of (item_id, system_id, rater_id?, score); multi-rater
/// scores are averaged per (item, system) before storage.
ScalarRatingTable read_scalars(std::istream& in, TableFormat format,
                               const std::string& source_name);
ScalarRatingTable load_scalars(const std::filesystem::path& path, TableFormat format);

/// Human-only preference labels for one ordered pair, the input side
/// for deriving metric labels from scalar scores.
struct HumanLabels {
    SystemPair pair;
    std::vector<std::pair<std::string, RatingLabel>> items;
};

/// Reads rows of (item_id, system_a, system_b, human).
std::vector<HumanLabels> read_human_labels(std::istream& in, TableFormat format,
                                           const LoadOptions& options,
                                           const std::string& source_name);
std::vector<HumanLabels> load_human_labels(const std::filesystem::path& path, TableFormat format,
                                           const LoadOptions& options = {});

/// One judge task plus the human label it will be paired with.
struct JudgeItemRow {
    JudgeRequest request;
    RatingLabel human;
};

/// Reads JSONL rows of (item_id, system_a, system_b, source,
/// candidate_a, candidate_b, human).
std::vector<JudgeItemRow> read_judge_requests(std::istream& in, const std::string& source_name);
std::vector<JudgeItemRow> load_judge_requests(const std::filesystem::path& path);

}  // namespace favi
