#pragma once

#include <array>

#include "favi/prefs.hpp"
#include "favi/rational.hpp"

namespace favi {

/// Column-stochastic matrix of metric-label probabilities conditioned
/// on the human label: entry (m, h) is P(metric = m | human = h).
/// Rows and columns both use the (+, =, -) order. Entries are exact
/// rationals so the law-of-total-probability identity holds exactly.
class MixtureMatrix {
public:
    using Cells = std::array<std::array<Rational, 3>, 3>;

    explicit MixtureMatrix(const Cells& cells);

    static MixtureMatrix identity();

    const Rational& at(RatingLabel metric, RatingLabel human) const noexcept {
        return cells_[label_index(metric)][label_index(human)];
    }
    double value(RatingLabel metric, RatingLabel human) const noexcept {
        return at(metric, human).to_double();
    }

    bool operator==(const MixtureMatrix&) const = default;

private:
    Cells cells_;
};

/// Outcome as an exact probability distribution over (+, =, -).
class ProbOutcome {
public:
    ProbOutcome(Rational plus, Rational equal, Rational minus);

    static ProbOutcome from_outcome(const Outcome& outcome);

    const Rational& at(RatingLabel label) const noexcept { return p_[label_index(label)]; }
    double value(RatingLabel label) const noexcept { return at(label).to_double(); }

    bool operator==(const ProbOutcome&) const = default;

private:
    std::array<Rational, 3> p_;
};

/// Conditional metric-label distribution estimated from counts:
/// transpose the confusion matrix and normalize each human column.
/// Every human label must occur at least once.
MixtureMatrix mixture_from_confusion(const ConfusionMatrix& matrix);

/// Law-of-total-probability push-forward of a human outcome
/// distribution through the mixture matrix.
ProbOutcome predicted_distribution(const MixtureMatrix& mu, const ProbOutcome& p);

/// Probability mass of errors drifting toward the first system
/// (upper error triangle of the mixture matrix) and toward the second
/// (lower triangle), weighted by severity.
struct FavorVectors {
    std::array<Rational, 3> toward_first;
    std::array<Rational, 3> toward_second;
};
FavorVectors favor_vectors(const MixtureMatrix& mu, const ProbOutcome& p);

/// Probability-scale favoritism score: half the difference between the
/// favor-vector masses, computed from the expanded per-label form.
Rational legacy_fa_phi_exact(const MixtureMatrix& mu, const ProbOutcome& p);
double legacy_fa_phi(const MixtureMatrix& mu, const ProbOutcome& p);

/// True when the predicted outcome equals the human outcome with the
/// draw mass redistributed evenly over wins and losses, within tol per
/// component.
bool fair_equal_distribution_check(const MixtureMatrix& mu, const ProbOutcome& p, double tol);

}  // namespace favi
