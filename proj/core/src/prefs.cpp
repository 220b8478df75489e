#include "favi/prefs.hpp"

#include <algorithm>
#include <unordered_set>
#include <utility>

namespace favi {

char label_token(RatingLabel label) noexcept {
    switch (label) {
        case RatingLabel::Plus:
            return '+';
        case RatingLabel::Equal:
            return '=';
        case RatingLabel::Minus:
            return '-';
    }
    return '?';
}

std::optional<RatingLabel> label_from_token(std::string_view token) noexcept {
    if (token == "+") {
        return RatingLabel::Plus;
    }
    if (token == "=") {
        return RatingLabel::Equal;
    }
    if (token == "-") {
        return RatingLabel::Minus;
    }
    return std::nullopt;
}

SystemPair::SystemPair(std::string first, std::string second)
    : first_(std::move(first)), second_(std::move(second)) {
    if (first_ == second_) {
        throw InvalidInput("system pair must name two distinct systems, got '" + first_ +
                           "' twice");
    }
}

ConfusionMatrix::ConfusionMatrix(const Counts& counts) : counts_(counts) {
    for (const auto& row : counts_) {
        for (std::int64_t cell : row) {
            if (cell < 0) {
                throw InvalidInput("confusion matrix counts must be non-negative");
            }
        }
    }
}

std::int64_t ConfusionMatrix::total() const noexcept {
    std::int64_t sum = 0;
    for (const auto& row : counts_) {
        for (std::int64_t cell : row) {
            sum += cell;
        }
    }
    return sum;
}

std::int64_t ConfusionMatrix::trace() const noexcept {
    return counts_[0][0] + counts_[1][1] + counts_[2][2];
}

ConfusionMatrix ConfusionMatrix::rotated180() const noexcept {
    ConfusionMatrix out;
    for (std::size_t r = 0; r < kLabelCount; ++r) {
        for (std::size_t c = 0; c < kLabelCount; ++c) {
            out.counts_[r][c] = counts_[kLabelCount - 1 - r][kLabelCount - 1 - c];
        }
    }
    return out;
}

ConfusionMatrix& ConfusionMatrix::add(RatingLabel human, RatingLabel metric, std::int64_t n) {
    std::int64_t& cell = counts_[label_index(human)][label_index(metric)];
    if (cell + n < 0) {
        throw InvalidInput("confusion matrix counts must be non-negative");
    }
    cell += n;
    return *this;
}

Outcome::Outcome(std::int64_t plus, std::int64_t equal, std::int64_t minus)
    : plus_(plus), equal_(equal), minus_(minus) {
    if (plus_ < 0 || equal_ < 0 || minus_ < 0) {
        throw InvalidInput("outcome counts must be non-negative");
    }
}

EvaluationSetting::EvaluationSetting(SystemPair pair, std::vector<RatedItem> items)
    : pair_(std::move(pair)), items_(std::move(items)) {
    if (items_.empty()) {
        throw EmptySetting("evaluation setting for pair (" + pair_.first() + ", " +
                           pair_.second() + ") has no items");
    }
    std::unordered_set<std::string_view> seen;
    seen.reserve(items_.size());
    for (const RatedItem& item : items_) {
        if (!seen.insert(item.item_id).second) {
            throw InvalidInput("duplicate item id '" + item.item_id + "' in setting for pair (" +
                               pair_.first() + ", " + pair_.second() + ")");
        }
    }
}

EvaluationSetting EvaluationSetting::from_confusion(const SystemPair& pair,
                                                    const ConfusionMatrix& matrix) {
    std::vector<RatedItem> items;
    items.reserve(static_cast<std::size_t>(matrix.total()));
    std::int64_t next_id = 0;
    for (RatingLabel human : kLabelOrder) {
        for (RatingLabel metric : kLabelOrder) {
            for (std::int64_t k = 0; k < matrix.count(human, metric); ++k) {
                items.push_back({"i" + std::to_string(next_id++), human, metric});
            }
        }
    }
    return {pair, std::move(items)};
}

ConfusionMatrix confusion_from_setting(const EvaluationSetting& setting) {
    ConfusionMatrix matrix;
    for (const RatedItem& item : setting.items()) {
        matrix.add(item.human, item.metric);
    }
    return matrix;
}

Outcome human_outcome(const EvaluationSetting& setting) {
    std::array<std::int64_t, 3> counts{};
    for (const RatedItem& item : setting.items()) {
        ++counts[label_index(item.human)];
    }
    return {counts[0], counts[1], counts[2]};
}

Outcome metric_outcome(const EvaluationSetting& setting) {
    std::array<std::int64_t, 3> counts{};
    for (const RatedItem& item : setting.items()) {
        ++counts[label_index(item.metric)];
    }
    return {counts[0], counts[1], counts[2]};
}

Outcome human_outcome(const ConfusionMatrix& matrix) {
    const auto& c = matrix.counts();
    return {c[0][0] + c[0][1] + c[0][2], c[1][0] + c[1][1] + c[1][2],
            c[2][0] + c[2][1] + c[2][2]};
}

Outcome metric_outcome(const ConfusionMatrix& matrix) {
    const auto& c = matrix.counts();
    return {c[0][0] + c[1][0] + c[2][0], c[0][1] + c[1][1] + c[2][1],
            c[0][2] + c[1][2] + c[2][2]};
}

std::int64_t total_error(const ConfusionMatrix& matrix) noexcept {
    return matrix.total() - matrix.trace();
}

EvaluationSetting swap_systems(const EvaluationSetting& setting) {
    std::vector<RatedItem> swapped;
    swapped.reserve(setting.size());
    for (const RatedItem& item : setting.items()) {
        swapped.push_back({item.item_id, invert(item.human), invert(item.metric)});
    }
    return {setting.pair().swapped(), std::move(swapped)};
}

}  // namespace favi
