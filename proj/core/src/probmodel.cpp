#include "favi/probmodel.hpp"

#include <string>

namespace favi {

namespace {

const Rational kZero(0);
const Rational kOne(1);

void check_unit_interval(const Rational& v, const char* what) {
    if (v < kZero || v > kOne) {
        throw InvalidInput(std::string(what) + " outside [0, 1]: " + v.str());
    }
}

}  // namespace

MixtureMatrix::MixtureMatrix(const Cells& cells) : cells_(cells) {
    for (RatingLabel human : kLabelOrder) {
        Rational column_sum(0);
        for (RatingLabel metric : kLabelOrder) {
            const Rational& cell = cells_[label_index(metric)][label_index(human)];
            check_unit_interval(cell, "mixture matrix entry");
            column_sum += cell;
        }
        if (column_sum != kOne) {
            throw InvalidInput("mixture matrix column for human label '" +
                               std::string(1, label_token(human)) +
                               "' sums to " + column_sum.str() + ", expected 1");
        }
    }
}

MixtureMatrix MixtureMatrix::identity() {
    Cells cells{};
    for (std::size_t i = 0; i < kLabelCount; ++i) {
        cells[i][i] = Rational(1);
    }
    return MixtureMatrix(cells);
}

ProbOutcome::ProbOutcome(Rational plus, Rational equal, Rational minus)
    : p_{plus, equal, minus} {
    Rational sum(0);
    for (const Rational& v : p_) {
        check_unit_interval(v, "outcome probability");
        sum += v;
    }
    if (sum != kOne) {
        throw InvalidInput("outcome probabilities sum to " + sum.str() + ", expected 1");
    }
}

ProbOutcome ProbOutcome::from_outcome(const Outcome& outcome) {
    const std::int64_t total = outcome.total();
    if (total == 0) {
        throw EmptySetting("cannot normalize an empty outcome");
    }
    return {Rational(outcome.plus(), total), Rational(outcome.equal(), total),
            Rational(outcome.minus(), total)};
}

MixtureMatrix mixture_from_confusion(const ConfusionMatrix& matrix) {
    const Outcome marginals = human_outcome(matrix);
    const std::array<std::int64_t, 3> row_sums{marginals.plus(), marginals.equal(),
                                               marginals.minus()};
    for (RatingLabel human : kLabelOrder) {
        if (row_sums[label_index(human)] == 0) {
            throw DegenerateMarginal(std::string(1, label_token(human)));
        }
    }
    MixtureMatrix::Cells cells{};
    for (RatingLabel human : kLabelOrder) {
        for (RatingLabel metric : kLabelOrder) {
            cells[label_index(metric)][label_index(human)] =
                Rational(matrix.count(human, metric), row_sums[label_index(human)]);
        }
    }
    return MixtureMatrix(cells);
}

ProbOutcome predicted_distribution(const MixtureMatrix& mu, const ProbOutcome& p) {
    std::array<Rational, 3> predicted{};
    for (RatingLabel metric : kLabelOrder) {
        Rational sum(0);
        for (RatingLabel human : kLabelOrder) {
            sum += mu.at(metric, human) * p.at(human);
        }
        predicted[label_index(metric)] = sum;
    }
    return {predicted[0], predicted[1], predicted[2]};
}

FavorVectors favor_vectors(const MixtureMatrix& mu, const ProbOutcome& p) {
    using L = RatingLabel;
    const Rational two(2);
    FavorVectors f;
    f.toward_first = {
        p.at(L::Equal) * mu.at(L::Plus, L::Equal) + two * p.at(L::Minus) * mu.at(L::Plus, L::Minus),
        p.at(L::Minus) * mu.at(L::Equal, L::Minus),
        kZero,
    };
    f.toward_second = {
        kZero,
        p.at(L::Plus) * mu.at(L::Equal, L::Plus),
        two * p.at(L::Plus) * mu.at(L::Minus, L::Plus) + p.at(L::Equal) * mu.at(L::Minus, L::Equal),
    };
    return f;
}

Rational legacy_fa_phi_exact(const MixtureMatrix& mu, const ProbOutcome& p) {
    using L = RatingLabel;
    const Rational two(2);
    const Rational plus_term =
        p.at(L::Plus) * (-mu.at(L::Equal, L::Plus) - two * mu.at(L::Minus, L::Plus));
    const Rational equal_term =
        p.at(L::Equal) * (mu.at(L::Plus, L::Equal) - mu.at(L::Minus, L::Equal));
    const Rational minus_term =
        p.at(L::Minus) * (two * mu.at(L::Plus, L::Minus) + mu.at(L::Equal, L::Minus));
    return (plus_term + equal_term + minus_term) / two;
}

double legacy_fa_phi(const MixtureMatrix& mu, const ProbOutcome& p) {
    return legacy_fa_phi_exact(mu, p).to_double();
}

bool fair_equal_distribution_check(const MixtureMatrix& mu, const ProbOutcome& p, double tol) {
    using L = RatingLabel;
    const ProbOutcome predicted = predicted_distribution(mu, p);
    const Rational half_draw_shift =
        (p.at(L::Equal) - predicted.at(L::Equal)) / Rational(2);
    const Rational plus_residual =
        predicted.at(L::Plus) - (p.at(L::Plus) + half_draw_shift);
    const Rational minus_residual =
        predicted.at(L::Minus) - (p.at(L::Minus) + half_draw_shift);
    return plus_residual.abs().to_double() <= tol && minus_residual.abs().to_double() <= tol;
}

}  // namespace favi
