#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "favi/derive.hpp"
#include "favi/probmodel.hpp"
#include "favi/ranking.hpp"
#include "favi/report.hpp"
#include "favi/scores.hpp"

namespace {

using namespace favi;

ConfusionMatrix random_confusion(std::mt19937_64& rng, std::int64_t max_entry) {
    std::uniform_int_distribution<std::int64_t> dist(0, max_entry);
    ConfusionMatrix::Counts counts{};
    for (auto& row : counts) {
        for (auto& cell : row) {
            cell = dist(rng);
        }
    }
    counts[0][1] += 1;  // keep at least one error
    return ConfusionMatrix(counts);
}

void BM_FaviScore(benchmark::State& state) {
    std::mt19937_64 rng(7);
    std::vector<ConfusionMatrix> matrices;
    for (int i = 0; i < 1024; ++i) {
        matrices.push_back(random_confusion(rng, 10000));
    }
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(favi_score(matrices[i++ & 1023]));
    }
}
BENCHMARK(BM_FaviScore);

void BM_MixturePushForward(benchmark::State& state) {
    std::mt19937_64 rng(11);
    const ConfusionMatrix matrix = random_confusion(rng, 10000);
    const MixtureMatrix mu = mixture_from_confusion(matrix);
    const ProbOutcome p = ProbOutcome::from_outcome(human_outcome(matrix));
    for (auto _ : state) {
        benchmark::DoNotOptimize(predicted_distribution(mu, p));
    }
}
BENCHMARK(BM_MixturePushForward);

void BM_SignTest(benchmark::State& state) {
    const std::int64_t n = state.range(0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sign_test(n / 2 + n / 8, n / 2 - n / 8));
    }
}
BENCHMARK(BM_SignTest)->Arg(20)->Arg(120)->Arg(1000)->Arg(100000);

void BM_TransitiveReduction(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    std::set<std::string> nodes;
    std::set<RankingEdge> edges;
    for (std::size_t a = 0; a < n; ++a) {
        nodes.insert("n" + std::to_string(a));
        for (std::size_t b = a + 1; b < n; ++b) {
            if ((a + b) % 3 != 0) {
                edges.insert({"n" + std::to_string(a), "n" + std::to_string(b)});
            }
        }
    }
    const RankingGraph graph(nodes, edges, 0.05);
    for (auto _ : state) {
        benchmark::DoNotOptimize(omit_transitive_edges(graph));
    }
}
BENCHMARK(BM_TransitiveReduction)->Arg(8)->Arg(16)->Arg(32);

void BM_MarginSearch(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> score(0.0, 1.0);
    std::uniform_int_distribution<int> label(0, 2);
    std::vector<RatingLabel> human;
    std::vector<std::pair<double, double>> scores;
    for (std::size_t i = 0; i < n; ++i) {
        human.push_back(kLabelOrder[static_cast<std::size_t>(label(rng))]);
        scores.emplace_back(score(rng), score(rng));
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(optimize_margins(human, scores));
    }
}
BENCHMARK(BM_MarginSearch)->Arg(50)->Arg(500)->Arg(1315);

void BM_BuildReport(benchmark::State& state) {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<std::int64_t> jitter(0, 5);
    std::vector<EvaluationSetting> settings;
    const int systems = 6;
    for (int a = 0; a < systems; ++a) {
        for (int b = a + 1; b < systems; ++b) {
            // Lower-indexed systems win decisively, so the ranking
            // stays a consistent (acyclic) tournament.
            ConfusionMatrix::Counts counts{{{40, 3, 2}, {4, 10, 3}, {1, 2, 8}}};
            for (std::size_t r = 0; r < 3; ++r) {
                for (std::size_t c = 0; c < 3; ++c) {
                    if (r != c) {
                        counts[r][c] += jitter(rng);
                    }
                }
            }
            settings.push_back(EvaluationSetting::from_confusion(
                SystemPair("s" + std::to_string(a), "s" + std::to_string(b)),
                ConfusionMatrix(counts)));
        }
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(to_deterministic_json(build_report(settings, 0.05)));
    }
}
BENCHMARK(BM_BuildReport);

}  // namespace

BENCHMARK_MAIN();
