#include "favi/scores.hpp"

#include <map>
#include <set>
#include <string>
#include <utility>

namespace favi {

namespace {

FaviResult make_result(std::int64_t numerator, std::int64_t errors) {
    FaviResult result;
    result.total_error = errors;
    result.margin_delta = numerator;
    if (errors > 0) {
        result.value = static_cast<double>(numerator) / static_cast<double>(errors);
    }
    return result;
}

int sign_of(std::int64_t v) noexcept { return (v > 0) - (v < 0); }

}  // namespace

FaviResult favi_score(const ConfusionMatrix& matrix) {
    std::int64_t numerator = 0;
    for (RatingLabel human : kLabelOrder) {
        for (RatingLabel metric : kLabelOrder) {
            numerator += error_cost(human, metric) * matrix.count(human, metric);
        }
    }
    return make_result(numerator, total_error(matrix));
}

FaviResult favi_score(const EvaluationSetting& setting) {
    return favi_score(confusion_from_setting(setting));
}

FaviResult favi_score_margin_form(const ConfusionMatrix& matrix) {
    const std::int64_t delta = margin(metric_outcome(matrix)) - margin(human_outcome(matrix));
    return make_result(delta, total_error(matrix));
}

FaviResult favi_score_margin_form(const EvaluationSetting& setting) {
    // Counted straight off the items so this stays an independent route
    // from the cost-matrix form.
    std::int64_t human_margin = 0;
    std::int64_t metric_margin = 0;
    std::int64_t errors = 0;
    for (const RatedItem& item : setting.items()) {
        human_margin += (item.human == RatingLabel::Plus) - (item.human == RatingLabel::Minus);
        metric_margin += (item.metric == RatingLabel::Plus) - (item.metric == RatingLabel::Minus);
        errors += item.human != item.metric;
    }
    return make_result(metric_margin - human_margin, errors);
}

double sample_sign_accuracy(const ConfusionMatrix& matrix) {
    const std::int64_t total = matrix.total();
    if (total == 0) {
        throw EmptySetting("sample sign accuracy of an empty matrix is undefined");
    }
    return static_cast<double>(matrix.trace()) / static_cast<double>(total);
}

int system_sign_agreement(const ConfusionMatrix& matrix) noexcept {
    return sign_of(margin(human_outcome(matrix))) == sign_of(margin(metric_outcome(matrix))) ? 1
                                                                                             : 0;
}

double system_sign_accuracy(const std::vector<EvaluationSetting>& settings) {
    if (settings.empty()) {
        throw InvalidInput("system sign accuracy needs at least one setting");
    }

    std::set<std::string> systems;
    std::map<std::pair<std::string, std::string>, int> seen;
    std::int64_t agreements = 0;
    for (const EvaluationSetting& setting : settings) {
        const SystemPair& pair = setting.pair();
        systems.insert(pair.first());
        systems.insert(pair.second());
        auto key = pair.is_canonical() ? std::make_pair(pair.first(), pair.second())
                                       : std::make_pair(pair.second(), pair.first());
        if (++seen[key] > 1) {
            throw InconsistentPairSet("pair (" + key.first + ", " + key.second +
                                      ") appears more than once");
        }
        agreements += system_sign_agreement(confusion_from_setting(setting));
    }

    const std::size_t n = systems.size();
    const std::size_t expected = n * (n - 1) / 2;
    if (seen.size() != expected) {
        throw InconsistentPairSet("expected " + std::to_string(expected) + " system pairs, got " +
                                  std::to_string(seen.size()));
    }
    return static_cast<double>(agreements) / static_cast<double>(expected);
}

}  // namespace favi
