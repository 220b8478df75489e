#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "favi/prefs.hpp"

namespace favi {

/// Directed error cost weights, indexed [human][metric] in (+, =, -)
/// order. The magnitude of an entry is how much that mistake moves the
/// outcome margin; the sign is the direction of the favoritism
/// (positive toward the first system).
inline constexpr std::array<std::array<int, 3>, 3> kErrorCost{{
    {0, -1, -2},
    {1, 0, -1},
    {2, 1, 0},
}};

constexpr int error_cost(RatingLabel human, RatingLabel metric) noexcept {
    return kErrorCost[label_index(human)][label_index(metric)];
}

/// Favoritism score together with the exact integers behind it.
/// `value` is absent exactly when there are no errors; when present it
/// equals margin_delta / total_error.
struct FaviResult {
    std::optional<double> value;
    std::int64_t total_error = 0;
    std::int64_t margin_delta = 0;

    bool absent() const noexcept { return !value.has_value(); }
};

/// Expected directed error cost over the errors of the matrix.
/// Positive favors the first system of the pair, negative the second.
FaviResult favi_score(const ConfusionMatrix& matrix);
FaviResult favi_score(const EvaluationSetting& setting);

/// The same score through the outcome margins:
/// (margin(metric) - margin(human)) / total_error.
FaviResult favi_score_margin_form(const ConfusionMatrix& matrix);
FaviResult favi_score_margin_form(const EvaluationSetting& setting);

/// Fraction of items where metric and human agree.
double sample_sign_accuracy(const ConfusionMatrix& matrix);

/// 1 when the human and metric outcome margins have the same
/// three-valued sign (-1, 0, +1), else 0.
int system_sign_agreement(const ConfusionMatrix& matrix) noexcept;

/// Mean sign agreement over a collection holding exactly one setting
/// per unordered pair of the systems it mentions.
double system_sign_accuracy(const std::vector<EvaluationSetting>& settings);

}  // namespace favi
