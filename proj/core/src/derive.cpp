#include "favi/derive.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "favi/rational.hpp"

namespace favi {

namespace {

void check_finite(double score) {
    if (!std::isfinite(score)) {
        throw InvalidScore("scores must be finite");
    }
}

}  // namespace

MarginPair::MarginPair(double eps_left, double eps_right)
    : eps_left_(eps_left), eps_right_(eps_right) {
    if (!std::isfinite(eps_left_) || !std::isfinite(eps_right_) || eps_left_ < 0.0 ||
        eps_right_ < 0.0) {
        throw InvalidInput("margins must be finite and non-negative");
    }
}

void ScalarRatingTable::insert(std::string item_id, std::string system_id, double score) {
    check_finite(score);
    auto key = std::make_pair(std::move(item_id), std::move(system_id));
    if (!entries_.emplace(std::move(key), score).second) {
        throw InvalidInput("duplicate scalar score for an (item, system) key");
    }
}

std::optional<double> ScalarRatingTable::find(const std::string& item_id,
                                              const std::string& system_id) const {
    auto it = entries_.find({item_id, system_id});
    if (it == entries_.end()) {
        return std::nullopt;
    }
    return it->second;
}

double ScalarRatingTable::at(const std::string& item_id, const std::string& system_id) const {
    auto found = find(item_id, system_id);
    if (!found) {
        throw MissingScore(item_id, system_id);
    }
    return *found;
}

std::vector<std::string> ScalarRatingTable::systems() const {
    std::set<std::string> out;
    for (const auto& [key, score] : entries_) {
        out.insert(key.second);
    }
    return {out.begin(), out.end()};
}

std::vector<std::string> ScalarRatingTable::items() const {
    std::set<std::string> out;
    for (const auto& [key, score] : entries_) {
        out.insert(key.first);
    }
    return {out.begin(), out.end()};
}

RatingLabel derive_preference(double score_a, double score_b) {
    check_finite(score_a);
    check_finite(score_b);
    if (score_a > score_b) {
        return RatingLabel::Plus;
    }
    if (score_a < score_b) {
        return RatingLabel::Minus;
    }
    return RatingLabel::Equal;
}

RatingLabel derive_preference_margin(double score_a, double score_b, const MarginPair& margins) {
    check_finite(score_a);
    check_finite(score_b);
    if (score_a > score_b + margins.eps_left()) {
        return RatingLabel::Plus;
    }
    if (score_a < score_b - margins.eps_right()) {
        return RatingLabel::Minus;
    }
    return RatingLabel::Equal;
}

std::vector<double> margin_candidates(std::span<const std::pair<double, double>> scores) {
    std::set<double> diffs;
    double max_abs = 0.0;
    for (const auto& [a, b] : scores) {
        check_finite(a);
        check_finite(b);
        const double d = a - b;
        diffs.insert(d);
        max_abs = std::max(max_abs, std::abs(d));
    }

    std::set<double> candidates{0.0, max_abs + 1.0};
    for (auto it = diffs.begin(); it != diffs.end(); ++it) {
        auto next = std::next(it);
        if (next != diffs.end()) {
            candidates.insert(std::abs((*it + *next) / 2.0));
        }
    }
    return {candidates.begin(), candidates.end()};
}

namespace {

// Matches split by the human label so the two margins can be chosen
// independently: Plus matches depend only on eps_left, Minus matches
// only on eps_right, and Equal matches split over the contiguous band
// [-eps_right, eps_left].
struct MatchProfile {
    std::int64_t plus = 0;      // human Plus items with diff > eps_left
    std::int64_t minus = 0;     // human Minus items with diff < -eps_right
    std::int64_t equal_le = 0;  // human Equal items with diff <= eps_left
    std::int64_t equal_lt = 0;  // human Equal items with diff < -eps_right
};

MatchProfile profile_for(std::span<const RatingLabel> human,
                         std::span<const std::pair<double, double>> scores, double eps_left,
                         double eps_right) {
    MatchProfile p;
    for (std::size_t i = 0; i < human.size(); ++i) {
        const double d = scores[i].first - scores[i].second;
        switch (human[i]) {
            case RatingLabel::Plus:
                p.plus += d > eps_left;
                break;
            case RatingLabel::Minus:
                p.minus += d < -eps_right;
                break;
            case RatingLabel::Equal:
                p.equal_le += d <= eps_left;
                p.equal_lt += d < -eps_right;
                break;
        }
    }
    return p;
}

}  // namespace

MarginPair optimize_margins(std::span<const RatingLabel> human,
                            std::span<const std::pair<double, double>> scores,
                            MarginObjective objective) {
    if (human.size() != scores.size()) {
        throw InvalidInput("human labels and score pairs must be aligned");
    }
    if (human.empty()) {
        throw EmptySetting("margin optimization needs at least one item");
    }

    std::array<std::int64_t, 3> human_counts{};
    for (RatingLabel label : human) {
        ++human_counts[label_index(label)];
    }
    const auto weight = [&](RatingLabel label) -> Rational {
        const std::int64_t count = human_counts[label_index(label)];
        if (objective == MarginObjective::CountTrace) {
            return Rational(1);
        }
        return count > 0 ? Rational(1, count) : Rational(0);
    };
    const Rational w_plus = weight(RatingLabel::Plus);
    const Rational w_equal = weight(RatingLabel::Equal);
    const Rational w_minus = weight(RatingLabel::Minus);

    // The objective decomposes into a part that depends only on
    // eps_left and one that depends only on eps_right, so each margin
    // is maximized on its own. Scanning candidates in ascending order
    // with strict improvement gives the smallest optimum, which is
    // also the lexicographically smallest pair overall.
    const std::vector<double> candidates = margin_candidates(scores);

    double best_left = candidates.front();
    double best_right = candidates.front();
    Rational best_left_value(-1);
    Rational best_right_value(-1);
    for (double eps : candidates) {
        const MatchProfile p = profile_for(human, scores, eps, eps);
        const Rational left_value = w_plus * Rational(p.plus) + w_equal * Rational(p.equal_le);
        const Rational right_value =
            w_minus * Rational(p.minus) - w_equal * Rational(p.equal_lt);
        if (left_value > best_left_value) {
            best_left_value = left_value;
            best_left = eps;
        }
        if (right_value > best_right_value) {
            best_right_value = right_value;
            best_right = eps;
        }
    }
    return {best_left, best_right};
}

EvaluationSetting derive_setting(const ScalarRatingTable& table, const SystemPair& pair,
                                 const std::vector<std::pair<std::string, RatingLabel>>& human,
                                 const MarginPair& margins) {
    if (human.empty()) {
        throw EmptySetting("no human labels for pair (" + pair.first() + ", " + pair.second() +
                           ")");
    }
    std::vector<RatedItem> items;
    items.reserve(human.size());
    for (const auto& [item_id, human_label] : human) {
        const double score_a = table.at(item_id, pair.first());
        const double score_b = table.at(item_id, pair.second());
        items.push_back({item_id, human_label,
                         derive_preference_margin(score_a, score_b, margins)});
    }
    return {pair, std::move(items)};
}

}  // namespace favi
