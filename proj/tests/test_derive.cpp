#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "favi/derive.hpp"
#include "favi/rational.hpp"
#include "support/generators.hpp"

using namespace favi;

namespace {

using ScorePairs = std::vector<std::pair<double, double>>;

std::int64_t count_trace(const std::vector<RatingLabel>& human, const ScorePairs& scores,
                         const MarginPair& margins) {
    std::int64_t matches = 0;
    for (std::size_t i = 0; i < human.size(); ++i) {
        matches += derive_preference_margin(scores[i].first, scores[i].second, margins) ==
                   human[i];
    }
    return matches;
}

Rational mixture_trace(const std::vector<RatingLabel>& human, const ScorePairs& scores,
                       const MarginPair& margins) {
    std::array<std::int64_t, 3> matches{};
    std::array<std::int64_t, 3> totals{};
    for (std::size_t i = 0; i < human.size(); ++i) {
        ++totals[label_index(human[i])];
        matches[label_index(human[i])] +=
            derive_preference_margin(scores[i].first, scores[i].second, margins) == human[i];
    }
    Rational out(0);
    for (std::size_t c = 0; c < 3; ++c) {
        if (totals[c] > 0) {
            out += Rational(matches[c], totals[c]);
        }
    }
    return out;
}

/// Brute force over the full candidate grid, first-found maximum while
/// scanning (eps_left, eps_right) in ascending lexicographic order.
MarginPair grid_oracle(const std::vector<RatingLabel>& human, const ScorePairs& scores,
                       MarginObjective objective) {
    const std::vector<double> candidates = margin_candidates(scores);
    MarginPair best;
    Rational best_value(-1);
    for (double eps_left : candidates) {
        for (double eps_right : candidates) {
            const MarginPair margins(eps_left, eps_right);
            const Rational value = objective == MarginObjective::CountTrace
                                       ? Rational(count_trace(human, scores, margins))
                                       : mixture_trace(human, scores, margins);
            if (value > best_value) {
                best_value = value;
                best = margins;
            }
        }
    }
    return best;
}

ScorePairs pairs_from_diffs(const std::vector<double>& diffs) {
    ScorePairs out;
    out.reserve(diffs.size());
    for (double d : diffs) {
        out.emplace_back(d, 0.0);
    }
    return out;
}

}  // namespace

TEST_CASE("plain derivation compares scores strictly") {
    CHECK(derive_preference(0.9, 0.3) == RatingLabel::Plus);
    CHECK(derive_preference(0.5, 0.5) == RatingLabel::Equal);
    CHECK(derive_preference(-1.0, 2.0) == RatingLabel::Minus);
    CHECK_THROWS_AS(derive_preference(std::numeric_limits<double>::quiet_NaN(), 0.0),
                    InvalidScore);
    CHECK_THROWS_AS(derive_preference(0.0, std::numeric_limits<double>::infinity()),
                    InvalidScore);
}

TEST_CASE("margin derivation opens a draw band") {
    CHECK(derive_preference_margin(1.0, 0.95, MarginPair(0.1, 0.1)) == RatingLabel::Equal);
    CHECK(derive_preference_margin(1.0, 0.95, MarginPair(0.0, 0.0)) == RatingLabel::Plus);
    CHECK(derive_preference_margin(0.5, 0.7, MarginPair(0.3, 0.1)) == RatingLabel::Minus);
    CHECK_THROWS_AS(MarginPair(-0.1, 0.0), InvalidInput);
    CHECK_THROWS_AS(MarginPair(0.0, std::numeric_limits<double>::infinity()), InvalidInput);
}

TEST_CASE("zero margins reduce to the plain derivation") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> dist(-5.0, 5.0);
    for (int iter = 0; iter < 2000; ++iter) {
        const double a = dist(rng);
        const double b = iter % 7 == 0 ? a : dist(rng);
        CHECK(derive_preference_margin(a, b, MarginPair()) == derive_preference(a, b));
    }
}

TEST_CASE("derivation is antisymmetric") {
    std::mt19937_64 rng(100);
    std::uniform_real_distribution<double> dist(-5.0, 5.0);
    std::uniform_real_distribution<double> eps_dist(0.0, 2.0);
    for (int iter = 0; iter < 2000; ++iter) {
        const double a = dist(rng);
        const double b = iter % 5 == 0 ? a : dist(rng);
        CHECK(derive_preference(a, b) == invert(derive_preference(b, a)));
        // With equal margins the band itself is symmetric.
        const double eps = eps_dist(rng);
        const MarginPair margins(eps, eps);
        CHECK(derive_preference_margin(a, b, margins) ==
              invert(derive_preference_margin(b, a, margins)));
    }
}

TEST_CASE("candidate margins bracket every distinct labeling") {
    const ScorePairs scores = pairs_from_diffs({-0.2, 0.1, 0.3});
    const std::vector<double> candidates = margin_candidates(scores);
    CHECK(candidates.front() == 0.0);
    CHECK(candidates.back() > 0.3);
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        CHECK(candidates[i - 1] < candidates[i]);
        CHECK(candidates[i] >= 0.0);
    }
}

TEST_CASE("an all-draw reference forces a full band") {
    const ScorePairs scores = pairs_from_diffs({-0.2, 0.1, 0.3});
    const std::vector<RatingLabel> human(3, RatingLabel::Equal);
    const MarginPair margins = optimize_margins(human, scores);
    for (std::size_t i = 0; i < scores.size(); ++i) {
        CHECK(derive_preference_margin(scores[i].first, scores[i].second, margins) ==
              RatingLabel::Equal);
    }
    CHECK(count_trace(human, scores, margins) == 3);
}

TEST_CASE("labels already recoverable at zero margins keep them") {
    const ScorePairs scores = pairs_from_diffs({0.4, 0.0, -0.3, 0.2});
    const std::vector<RatingLabel> human{RatingLabel::Plus, RatingLabel::Equal,
                                         RatingLabel::Minus, RatingLabel::Plus};
    CHECK(optimize_margins(human, scores) == MarginPair(0.0, 0.0));
}

TEST_CASE("six item instance matches the grid oracle") {
    const ScorePairs scores = pairs_from_diffs({0.5, 0.15, 0.05, -0.05, -0.3, 0.0});
    const std::vector<RatingLabel> human{RatingLabel::Plus,  RatingLabel::Equal,
                                         RatingLabel::Plus,  RatingLabel::Equal,
                                         RatingLabel::Minus, RatingLabel::Equal};
    const MarginPair expected = grid_oracle(human, scores, MarginObjective::CountTrace);
    CHECK(optimize_margins(human, scores) == expected);
}

TEST_CASE("margin search agrees with the oracle on random instances") {
    std::mt19937_64 rng(7777);
    std::uniform_int_distribution<std::size_t> size_dist(1, 12);
    std::uniform_real_distribution<double> score_dist(-1.0, 1.0);
    std::uniform_int_distribution<int> coarse(0, 4);
    for (int iter = 0; iter < 150; ++iter) {
        const std::size_t n = size_dist(rng);
        ScorePairs scores;
        std::vector<RatingLabel> human;
        for (std::size_t i = 0; i < n; ++i) {
            // Coarse scores make coinciding differences and ties common.
            scores.emplace_back(coarse(rng) * 0.25, coarse(rng) * 0.25);
            human.push_back(testgen::random_label(rng));
        }
        for (MarginObjective objective :
             {MarginObjective::CountTrace, MarginObjective::MixtureTrace}) {
            const MarginPair expected = grid_oracle(human, scores, objective);
            const MarginPair actual = optimize_margins(human, scores, objective);
            CHECK(actual == expected);
        }
        // Never worse than the plain derivation.
        const MarginPair optimum = optimize_margins(human, scores);
        CHECK(count_trace(human, scores, optimum) >=
              count_trace(human, scores, MarginPair()));
        (void)score_dist;
    }
}

TEST_CASE("margin search input contract") {
    CHECK_THROWS_AS(optimize_margins({}, {}), EmptySetting);
    const std::vector<RatingLabel> human{RatingLabel::Plus};
    const ScorePairs scores;
    CHECK_THROWS_AS(optimize_margins(human, scores), InvalidInput);
}

TEST_CASE("scalar rating tables") {
    ScalarRatingTable table;
    table.insert("i1", "a", 0.9);
    table.insert("i1", "b", 0.3);
    CHECK(table.at("i1", "a") == 0.9);
    CHECK_FALSE(table.find("i2", "a").has_value());
    CHECK_THROWS_AS(table.at("i2", "a"), MissingScore);
    CHECK_THROWS_AS(table.insert("i1", "a", 1.0), InvalidInput);
    CHECK_THROWS_AS(table.insert("i3", "a", std::numeric_limits<double>::quiet_NaN()),
                    InvalidScore);
    CHECK(table.systems() == std::vector<std::string>{"a", "b"});
    CHECK(table.items() == std::vector<std::string>{"i1"});
}

TEST_CASE("deriving a setting from a table") {
    ScalarRatingTable table;
    table.insert("i1", "a", 0.9);
    table.insert("i1", "b", 0.3);
    table.insert("i2", "a", 0.5);
    table.insert("i2", "b", 0.5);
    table.insert("i3", "a", 0.1);
    table.insert("i3", "b", 0.4);

    const std::vector<std::pair<std::string, RatingLabel>> human{
        {"i1", RatingLabel::Plus}, {"i2", RatingLabel::Plus}, {"i3", RatingLabel::Minus}};
    const EvaluationSetting setting = derive_setting(table, SystemPair("a", "b"), human);

    const ConfusionMatrix matrix = confusion_from_setting(setting);
    CHECK(matrix.count(RatingLabel::Plus, RatingLabel::Plus) == 1);
    CHECK(matrix.count(RatingLabel::Plus, RatingLabel::Equal) == 1);
    CHECK(matrix.count(RatingLabel::Minus, RatingLabel::Minus) == 1);
    CHECK(matrix.total() == 3);

    CHECK_THROWS_AS(derive_setting(table, SystemPair("a", "b"), {}), EmptySetting);
    CHECK_THROWS_AS(
        derive_setting(table, SystemPair("a", "c"), human),
        MissingScore);
    CHECK_THROWS_AS(SystemPair("a", "a"), InvalidInput);
}
