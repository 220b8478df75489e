#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "favi/errors.hpp"

namespace favi {

/// Three-way preference of the first system of a pair over the second.
enum class RatingLabel : std::uint8_t { Plus = 0, Equal = 1, Minus = 2 };

inline constexpr std::size_t kLabelCount = 3;

/// Fixed global label order, used for every matrix index and for
/// serialization.
inline constexpr std::array<RatingLabel, kLabelCount> kLabelOrder{
    RatingLabel::Plus, RatingLabel::Equal, RatingLabel::Minus};

constexpr std::size_t label_index(RatingLabel label) noexcept {
    return static_cast<std::size_t>(label);
}

/// Swaps the roles of the two systems in a label. Involution: Plus and
/// Minus exchange, Equal is fixed.
constexpr RatingLabel invert(RatingLabel label) noexcept {
    return static_cast<RatingLabel>(2 - static_cast<int>(label));
}

char label_token(RatingLabel label) noexcept;
std::optional<RatingLabel> label_from_token(std::string_view token) noexcept;

/// Ordered pair of distinct system identifiers.
class SystemPair {
public:
    SystemPair(std::string first, std::string second);

    const std::string& first() const noexcept { return first_; }
    const std::string& second() const noexcept { return second_; }

    SystemPair swapped() const { return {second_, first_}; }

    /// True when the pair is in lexicographically-first orientation.
    bool is_canonical() const noexcept { return first_ < second_; }

    auto operator<=>(const SystemPair&) const = default;

private:
    std::string first_;
    std::string second_;
};

/// 3x3 label count matrix; rows are human labels, columns are metric
/// labels, both in (+, =, -) order.
class ConfusionMatrix {
public:
    using Counts = std::array<std::array<std::int64_t, 3>, 3>;

    ConfusionMatrix() = default;
    explicit ConfusionMatrix(const Counts& counts);

    std::int64_t count(RatingLabel human, RatingLabel metric) const noexcept {
        return counts_[label_index(human)][label_index(metric)];
    }
    const Counts& counts() const noexcept { return counts_; }

    std::int64_t total() const noexcept;
    std::int64_t trace() const noexcept;

    /// Reverses both row and column order. This is the confusion matrix
    /// of the same data viewed with the systems swapped.
    ConfusionMatrix rotated180() const noexcept;

    ConfusionMatrix& add(RatingLabel human, RatingLabel metric, std::int64_t n = 1);

    bool operator==(const ConfusionMatrix&) const = default;

private:
    Counts counts_{};
};

/// Label counts under a single rating source.
class Outcome {
public:
    Outcome() = default;
    Outcome(std::int64_t plus, std::int64_t equal, std::int64_t minus);

    std::int64_t plus() const noexcept { return plus_; }
    std::int64_t equal() const noexcept { return equal_; }
    std::int64_t minus() const noexcept { return minus_; }
    std::int64_t total() const noexcept { return plus_ + equal_ + minus_; }

    bool operator==(const Outcome&) const = default;

private:
    std::int64_t plus_ = 0;
    std::int64_t equal_ = 0;
    std::int64_t minus_ = 0;
};

/// Wins minus losses for the first system.
inline std::int64_t margin(const Outcome& outcome) noexcept {
    return outcome.plus() - outcome.minus();
}

struct RatedItem {
    std::string item_id;
    RatingLabel human;
    RatingLabel metric;

    bool operator==(const RatedItem&) const = default;
};

/// Paired human and metric ratings for one ordered system pair over a
/// test set. Immutable after construction; item ids are unique and the
/// item list is never empty.
class EvaluationSetting {
public:
    EvaluationSetting(SystemPair pair, std::vector<RatedItem> items);

    /// Expands an aggregate matrix into a synthetic setting with
    /// generated item ids, one item per count, in row-major (+, =, -)
    /// label order.
    static EvaluationSetting from_confusion(const SystemPair& pair, const ConfusionMatrix& matrix);

    const SystemPair& pair() const noexcept { return pair_; }
    const std::vector<RatedItem>& items() const noexcept { return items_; }
    std::size_t size() const noexcept { return items_.size(); }

    bool operator==(const EvaluationSetting&) const = default;

private:
    SystemPair pair_;
    std::vector<RatedItem> items_;
};

ConfusionMatrix confusion_from_setting(const EvaluationSetting& setting);

/// Outcome under the human ratings (row sums of the confusion matrix).
Outcome human_outcome(const EvaluationSetting& setting);
/// Outcome under the metric ratings (column sums of the confusion matrix).
Outcome metric_outcome(const EvaluationSetting& setting);

Outcome human_outcome(const ConfusionMatrix& matrix);
Outcome metric_outcome(const ConfusionMatrix& matrix);

/// Number of items where metric and human disagree: the off-diagonal sum.
std::int64_t total_error(const ConfusionMatrix& matrix) noexcept;

/// The same test set viewed with the system order reversed: the pair is
/// swapped and every human and metric label inverted.
EvaluationSetting swap_systems(const EvaluationSetting& setting);

}  // namespace favi
