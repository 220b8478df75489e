#include "favi/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>

#include "favi/scores.hpp"

namespace favi {

namespace {

void require_finite(std::span<const double> values) {
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw InvalidInput("statistics inputs must be finite");
        }
    }
}

}  // namespace

Quartiles quartiles_of(std::span<const double> values) {
    if (values.empty()) {
        throw InvalidInput("quartiles of an empty list are undefined");
    }
    require_finite(values);
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const auto at = [&](double q) {
        if (sorted.size() == 1) {
            return sorted.front();
        }
        const double pos = q * static_cast<double>(sorted.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(pos);
        const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
        return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
    };
    return {sorted.front(), at(0.25), at(0.5), at(0.75), sorted.back()};
}

std::vector<SystemFaviSummary> per_system_favi(const std::vector<EvaluationSetting>& settings) {
    std::map<std::string, SystemFaviSummary> by_system;
    const auto slot = [&](const std::string& id) -> SystemFaviSummary& {
        auto [it, inserted] = by_system.try_emplace(id);
        if (inserted) {
            it->second.system = id;
        }
        return it->second;
    };

    for (const EvaluationSetting& setting : settings) {
        SystemFaviSummary& first = slot(setting.pair().first());
        SystemFaviSummary& second = slot(setting.pair().second());
        const FaviResult favi = favi_score(setting);
        if (favi.absent()) {
            ++first.skipped;
            ++second.skipped;
        } else {
            first.values.push_back(*favi.value);
            second.values.push_back(-*favi.value);
        }
    }

    std::vector<SystemFaviSummary> out;
    out.reserve(by_system.size());
    for (auto& [id, summary] : by_system) {
        std::sort(summary.values.begin(), summary.values.end());
        if (!summary.values.empty()) {
            summary.quartiles = quartiles_of(summary.values);
        }
        out.push_back(std::move(summary));
    }
    return out;
}

namespace {

std::vector<double> average_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) {
        order[i] = i;
    }
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) {
            ++j;
        }
        const double shared = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) {
            ranks[order[k]] = shared;
        }
        i = j + 1;
    }
    return ranks;
}

}  // namespace

std::optional<double> spearman_rho(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw InvalidInput("correlation inputs must have equal length");
    }
    if (x.size() < 2) {
        throw InvalidInput("correlation needs at least two observations");
    }
    require_finite(x);
    require_finite(y);
    const std::vector<double> rx = average_ranks(x);
    const std::vector<double> ry = average_ranks(y);
    const double n = static_cast<double>(x.size());
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mean_x += rx[i];
        mean_y += ry[i];
    }
    mean_x /= n;
    mean_y /= n;
    double covariance = 0.0;
    double var_x = 0.0;
    double var_y = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = rx[i] - mean_x;
        const double dy = ry[i] - mean_y;
        covariance += dx * dy;
        var_x += dx * dx;
        var_y += dy * dy;
    }
    if (var_x == 0.0 || var_y == 0.0) {
        return std::nullopt;
    }
    return covariance / std::sqrt(var_x * var_y);
}

std::optional<double> krippendorff_alpha_nominal(
    const std::vector<std::pair<RatingLabel, RatingLabel>>& pairs) {
    if (pairs.size() < 2) {
        throw InvalidInput("reliability needs at least two units");
    }
    // Coincidence counts: each unit contributes both ordered label
    // pairs, one per rater permutation.
    std::array<std::array<std::int64_t, 3>, 3> coincidence{};
    for (const auto& [a, b] : pairs) {
        ++coincidence[label_index(a)][label_index(b)];
        ++coincidence[label_index(b)][label_index(a)];
    }
    std::array<std::int64_t, 3> totals{};
    std::int64_t observed_disagreement = 0;
    for (std::size_t v = 0; v < kLabelCount; ++v) {
        for (std::size_t w = 0; w < kLabelCount; ++w) {
            totals[v] += coincidence[v][w];
            if (v != w) {
                observed_disagreement += coincidence[v][w];
            }
        }
    }
    const std::int64_t n = totals[0] + totals[1] + totals[2];
    std::int64_t expected_pairs = 0;
    for (std::size_t v = 0; v < kLabelCount; ++v) {
        for (std::size_t w = 0; w < kLabelCount; ++w) {
            if (v != w) {
                expected_pairs += totals[v] * totals[w];
            }
        }
    }
    if (expected_pairs == 0) {
        return std::nullopt;
    }
    const double d_observed = static_cast<double>(observed_disagreement) / static_cast<double>(n);
    const double d_expected = static_cast<double>(expected_pairs) /
                              static_cast<double>(n * (n - 1));
    return 1.0 - d_observed / d_expected;
}

ReversalConsistency reversal_consistency(
    const std::vector<std::pair<std::string, RatingLabel>>& original,
    const std::vector<std::pair<std::string, RatingLabel>>& reversed_run) {
    if (original.size() != reversed_run.size()) {
        throw InvalidInput("original and reversed runs must cover the same items");
    }
    if (original.empty()) {
        throw InvalidInput("reversal consistency of empty runs is undefined");
    }
    std::map<std::string, RatingLabel> reversed_by_item;
    for (const auto& [item, label] : reversed_run) {
        if (!reversed_by_item.emplace(item, label).second) {
            throw InvalidInput("duplicate item '" + item + "' in reversed run");
        }
    }

    ConfusionMatrix confusion;
    std::vector<std::pair<RatingLabel, RatingLabel>> aligned;
    aligned.reserve(original.size());
    for (const auto& [item, label] : original) {
        auto it = reversed_by_item.find(item);
        if (it == reversed_by_item.end()) {
            throw InvalidInput("item '" + item + "' missing from reversed run");
        }
        const RatingLabel flipped = invert(it->second);
        confusion.add(label, flipped);
        aligned.emplace_back(label, flipped);
    }

    ReversalConsistency result;
    result.confusion = confusion;
    result.accuracy =
        static_cast<double>(confusion.trace()) / static_cast<double>(confusion.total());
    result.alpha = aligned.size() >= 2 ? krippendorff_alpha_nominal(aligned) : std::nullopt;
    return result;
}

}  // namespace favi
