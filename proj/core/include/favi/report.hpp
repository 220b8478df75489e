#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "favi/derive.hpp"
#include "favi/io.hpp"
#include "favi/prefs.hpp"
#include "favi/ranking.hpp"

namespace favi {

inline constexpr int kReportSchemaVersion = 1;

/// How metric labels are produced when the input is scalar scores.
struct MarginsPolicy {
    enum class Kind { Plain, Fixed, Optimize };

    Kind kind = Kind::Plain;
    MarginPair fixed;  // used when kind == Fixed
    MarginObjective objective = MarginObjective::CountTrace;  // used when kind == Optimize
};

struct ReportConfig {
    /// Either a preferences file...
    std::filesystem::path preferences;
    /// ...or scalar scores plus human labels to derive from.
    std::filesystem::path scalar_scores;
    std::filesystem::path human_labels;

    TableFormat format = TableFormat::Csv;
    LoadOptions load;
    double alpha = 0.05;
    MarginsPolicy margins;

    /// When set, human.gv and metric.gv are written there.
    std::optional<std::filesystem::path> dot_dir;
};

struct ReportInputs {
    std::vector<EvaluationSetting> settings;  // sorted by pair
    /// Margins used per ordered pair; only filled when deriving.
    std::map<std::pair<std::string, std::string>, MarginPair> margins;
    bool derived = false;
};

ReportInputs load_report_inputs(const ReportConfig& config);

/// Per-pair metrics: confusion matrix, outcomes, favoritism score
/// (null plus no_errors flag when the metric made no errors), sample
/// accuracy and sign agreement. Sorted by pair.
nlohmann::json pair_metrics_json(const std::vector<EvaluationSetting>& settings);

/// Cross-pair aggregates: per-system favoritism summaries, absolute
/// mean and standard deviation, system sign accuracy (when every pair
/// is present) and rank correlations of |score| against the two
/// accuracies.
nlohmann::json aggregates_json(const std::vector<EvaluationSetting>& settings);

struct DagPair {
    RankingGraph human;
    RankingGraph metric;
};

/// Significance-tested ranking DAGs from the human and the metric
/// outcomes, with transitive edges omitted.
DagPair build_ranking_dags(const std::vector<EvaluationSetting>& settings, double alpha);

/// Full report document over already-loaded settings.
nlohmann::json build_report(const std::vector<EvaluationSetting>& settings, double alpha);

/// Loads inputs per config, builds the full report and writes the DOT
/// files when requested. Byte-deterministic for equal inputs and
/// config once serialized with to_deterministic_json.
nlohmann::json run_report(const ReportConfig& config);

/// Serializes with sorted keys, two-space indentation and floating
/// point values at 12 significant digits. Equal documents produce
/// identical bytes.
std::string to_deterministic_json(const nlohmann::json& document);

}  // namespace favi
