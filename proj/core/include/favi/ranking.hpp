#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "favi/prefs.hpp"

namespace favi {

/// Exact two-sided sign test for wins and losses against a fair coin;
/// draws are excluded by the caller. Returns min(1, 2 * P[X >= k]) for
/// X ~ Binomial(wins + losses, 1/2) and k the larger of the two counts.
/// Zero trials give p = 1.
double sign_test(std::int64_t d_plus, std::int64_t d_minus);

struct RankingEdge {
    std::string winner;
    std::string loser;

    auto operator<=>(const RankingEdge&) const = default;
};

/// Win/loss relation over a set of systems at a significance level.
/// Construction rejects self edges, edges over unknown nodes, more
/// than one edge per unordered pair, and cycles.
class RankingGraph {
public:
    RankingGraph(std::set<std::string> nodes, std::set<RankingEdge> edges, double alpha);

    const std::set<std::string>& nodes() const noexcept { return nodes_; }
    const std::set<RankingEdge>& edges() const noexcept { return edges_; }
    double alpha() const noexcept { return alpha_; }

    bool operator==(const RankingGraph&) const = default;

private:
    std::set<std::string> nodes_;
    std::set<RankingEdge> edges_;
    double alpha_;
};

/// One edge per system pair whose sign test clears the significance
/// level, directed toward the majority winner. The outcome collection
/// must hold exactly one outcome per unordered pair of the systems it
/// mentions.
RankingGraph build_dag(const std::vector<std::pair<SystemPair, Outcome>>& outcomes, double alpha);

/// Transitive reduction: drops every edge also implied by a longer
/// path. Reachability is unchanged; for a DAG the result is unique.
RankingGraph omit_transitive_edges(const RankingGraph& graph);

/// Graphviz digraph text: nodes sorted, then edges sorted by (source,
/// target), two-space indentation, LF endings. Equal graphs render to
/// identical bytes.
std::string render_dot(const RankingGraph& graph);

}  // namespace favi
