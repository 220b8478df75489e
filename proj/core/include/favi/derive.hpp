#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "favi/prefs.hpp"

namespace favi {

/// Draw band around score ties: a score difference in
/// [-eps_right, eps_left] is rated as a draw. (0, 0) is the plain
/// strict comparison.
class MarginPair {
public:
    MarginPair() = default;
    MarginPair(double eps_left, double eps_right);

    double eps_left() const noexcept { return eps_left_; }
    double eps_right() const noexcept { return eps_right_; }

    bool operator==(const MarginPair&) const = default;

private:
    double eps_left_ = 0.0;
    double eps_right_ = 0.0;
};

/// Per (item, system) scalar scores; higher is better.
class ScalarRatingTable {
public:
    void insert(std::string item_id, std::string system_id, double score);

    std::optional<double> find(const std::string& item_id, const std::string& system_id) const;
    double at(const std::string& item_id, const std::string& system_id) const;

    std::size_t size() const noexcept { return entries_.size(); }
    std::vector<std::string> systems() const;
    std::vector<std::string> items() const;

private:
    std::map<std::pair<std::string, std::string>, double> entries_;
};

/// Preference of the first score over the second, with exact equality
/// as the draw case.
RatingLabel derive_preference(double score_a, double score_b);

/// Preference with a draw band: Plus when a > b + eps_left, Minus when
/// a < b - eps_right, Equal otherwise.
RatingLabel derive_preference_margin(double score_a, double score_b, const MarginPair& margins);

/// What the margin search maximizes: raw diagonal counts of the
/// human-vs-derived confusion matrix, or the diagonal of its
/// column-normalized mixture matrix.
enum class MarginObjective { CountTrace, MixtureTrace };

/// Candidate draw margins for a set of observed score pairs: the
/// magnitudes of midpoints between consecutive distinct differences,
/// zero, and one value beyond the largest magnitude. Sorted ascending
/// and deduplicated. The derived labels are piecewise constant in each
/// margin, so this grid reaches every achievable labeling.
std::vector<double> margin_candidates(std::span<const std::pair<double, double>> scores);

/// Searches the candidate grid for the margins maximizing the chosen
/// diagonal, breaking ties toward the smallest (eps_left, eps_right)
/// lexicographically.
MarginPair optimize_margins(std::span<const RatingLabel> human,
                            std::span<const std::pair<double, double>> scores,
                            MarginObjective objective = MarginObjective::CountTrace);

/// Builds the evaluation setting whose metric labels are derived from
/// the scalar table for the given pair, one item per human label.
EvaluationSetting derive_setting(const ScalarRatingTable& table, const SystemPair& pair,
                                 const std::vector<std::pair<std::string, RatingLabel>>& human,
                                 const MarginPair& margins = {});

}  // namespace favi
