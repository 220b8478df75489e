#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "favi/prefs.hpp"

namespace favi {

struct Quartiles {
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;

    bool operator==(const Quartiles&) const = default;
};

/// Five-number summary by linear interpolation on sorted values.
Quartiles quartiles_of(std::span<const double> values);

/// Favoritism values oriented toward one system: positive means the
/// system was favored in that pair. `skipped` counts the pairs whose
/// score is undefined because the metric made no errors.
struct SystemFaviSummary {
    std::string system;
    std::vector<double> values;  // sorted ascending
    std::optional<Quartiles> quartiles;
    std::size_t skipped = 0;
};

/// One summary per system mentioned in the settings, sorted by system
/// id. A pair (a, b) with score v contributes v to a and -v to b.
std::vector<SystemFaviSummary> per_system_favi(const std::vector<EvaluationSetting>& settings);

/// Spearman rank correlation with average ranks for ties. Empty when
/// either rank vector has zero variance.
std::optional<double> spearman_rho(std::span<const double> x, std::span<const double> y);

/// Nominal-level Krippendorff alpha for two ratings per unit, via the
/// coincidence matrix. Empty when the expected disagreement is zero
/// (every rating identical).
std::optional<double> krippendorff_alpha_nominal(
    const std::vector<std::pair<RatingLabel, RatingLabel>>& pairs);

/// Agreement between a rating run and its order-flipped rerun. The
/// rerun labels are inverted into the original orientation before
/// comparing.
struct ReversalConsistency {
    ConfusionMatrix confusion;  // rows: original run, columns: inverted rerun
    double accuracy = 0.0;
    std::optional<double> alpha;
};

ReversalConsistency reversal_consistency(
    const std::vector<std::pair<std::string, RatingLabel>>& original,
    const std::vector<std::pair<std::string, RatingLabel>>& reversed_run);

}  // namespace favi
