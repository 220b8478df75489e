#include "favi/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>

namespace favi {

namespace {

// Exact binomial tail for n up to this bound: C(n, n/2) must fit in
// unsigned __int128 next to a factor of n.
constexpr std::int64_t kExactTailLimit = 120;

double exact_two_sided_tail(std::int64_t n, std::int64_t k) {
    using U = unsigned __int128;
    // C(n, k) by the multiplicative formula; every intermediate
    // division is exact.
    U binom = 1;
    for (std::int64_t i = 1; i <= n - k; ++i) {
        binom = binom * static_cast<U>(k + i) / static_cast<U>(i);
    }
    U tail = 0;
    for (std::int64_t j = k; j <= n; ++j) {
        tail += binom;
        if (j < n) {
            binom = binom * static_cast<U>(n - j) / static_cast<U>(j + 1);
        }
    }
    const long double p =
        2.0L * static_cast<long double>(tail) / static_cast<long double>(U(1) << n);
    return static_cast<double>(std::min(1.0L, p));
}

double lgamma_two_sided_tail(std::int64_t n, std::int64_t k) {
    const double log_half_n = static_cast<double>(n) * std::log(0.5);
    double log_term = std::lgamma(static_cast<double>(n) + 1.0) -
                      std::lgamma(static_cast<double>(k) + 1.0) -
                      std::lgamma(static_cast<double>(n - k) + 1.0) + log_half_n;
    double tail = 0.0;
    double term = std::exp(log_term);
    for (std::int64_t j = k; j <= n; ++j) {
        tail += term;
        term *= static_cast<double>(n - j) / static_cast<double>(j + 1);
    }
    return std::min(1.0, 2.0 * tail);
}

}  // namespace

double sign_test(std::int64_t d_plus, std::int64_t d_minus) {
    if (d_plus < 0 || d_minus < 0) {
        throw InvalidInput("sign test counts must be non-negative");
    }
    const std::int64_t n = d_plus + d_minus;
    if (n == 0) {
        return 1.0;
    }
    const std::int64_t k = std::max(d_plus, d_minus);
    if (n <= kExactTailLimit) {
        return exact_two_sided_tail(n, k);
    }
    return lgamma_two_sided_tail(n, k);
}

RankingGraph::RankingGraph(std::set<std::string> nodes, std::set<RankingEdge> edges, double alpha)
    : nodes_(std::move(nodes)), edges_(std::move(edges)), alpha_(alpha) {
    std::set<std::pair<std::string, std::string>> unordered;
    std::map<std::string, std::vector<std::string>> successors;
    std::map<std::string, std::size_t> indegree;
    for (const std::string& node : nodes_) {
        indegree[node] = 0;
    }
    for (const RankingEdge& edge : edges_) {
        if (edge.winner == edge.loser) {
            throw InvalidInput("self edge on '" + edge.winner + "'");
        }
        if (!nodes_.contains(edge.winner) || !nodes_.contains(edge.loser)) {
            throw InvalidInput("edge (" + edge.winner + ", " + edge.loser +
                               ") references an unknown node");
        }
        auto key = std::minmax(edge.winner, edge.loser);
        if (!unordered.insert(key).second) {
            throw InvalidInput("more than one edge between '" + key.first + "' and '" +
                               key.second + "'");
        }
        successors[edge.winner].push_back(edge.loser);
        ++indegree[edge.loser];
    }

    // Kahn's algorithm; leftover nodes mean a cycle.
    std::queue<std::string> ready;
    for (const auto& [node, degree] : indegree) {
        if (degree == 0) {
            ready.push(node);
        }
    }
    std::size_t emitted = 0;
    while (!ready.empty()) {
        std::string node = std::move(ready.front());
        ready.pop();
        ++emitted;
        for (const std::string& next : successors[node]) {
            if (--indegree[next] == 0) {
                ready.push(next);
            }
        }
    }
    if (emitted != nodes_.size()) {
        throw CyclicGraph("ranking relation contains a cycle");
    }
}

RankingGraph build_dag(const std::vector<std::pair<SystemPair, Outcome>>& outcomes, double alpha) {
    if (!(alpha > 0.0) || !(alpha < 1.0)) {
        throw InvalidInput("alpha must lie strictly between 0 and 1");
    }
    std::set<std::string> systems;
    std::set<std::pair<std::string, std::string>> seen;
    std::set<RankingEdge> edges;
    for (const auto& [pair, outcome] : outcomes) {
        systems.insert(pair.first());
        systems.insert(pair.second());
        auto key = std::minmax(pair.first(), pair.second());
        if (!seen.insert(key).second) {
            throw InconsistentPairSet("pair (" + key.first + ", " + key.second +
                                      ") appears more than once");
        }
        if (sign_test(outcome.plus(), outcome.minus()) < alpha) {
            // A tie has p = 1, so a significant pair always has a
            // strict majority winner.
            if (outcome.plus() > outcome.minus()) {
                edges.insert({pair.first(), pair.second()});
            } else {
                edges.insert({pair.second(), pair.first()});
            }
        }
    }
    const std::size_t n = systems.size();
    if (seen.size() != n * (n - 1) / 2) {
        throw InconsistentPairSet("expected " + std::to_string(n * (n - 1) / 2) +
                                  " system pairs, got " + std::to_string(seen.size()));
    }
    return {std::move(systems), std::move(edges), alpha};
}

namespace {

bool reachable(const std::map<std::string, std::set<std::string>>& successors,
               const std::string& from, const std::string& to) {
    std::vector<const std::string*> stack{&from};
    std::set<std::string> visited{from};
    while (!stack.empty()) {
        const std::string& node = *stack.back();
        stack.pop_back();
        auto it = successors.find(node);
        if (it == successors.end()) {
            continue;
        }
        for (const std::string& next : it->second) {
            if (next == to) {
                return true;
            }
            if (visited.insert(next).second) {
                stack.push_back(&next);
            }
        }
    }
    return false;
}

}  // namespace

RankingGraph omit_transitive_edges(const RankingGraph& graph) {
    std::map<std::string, std::set<std::string>> successors;
    for (const RankingEdge& edge : graph.edges()) {
        successors[edge.winner].insert(edge.loser);
    }
    // In a DAG an edge is redundant exactly when some other path
    // connects its endpoints, so all redundant edges can be checked
    // against the original graph and dropped together.
    std::set<RankingEdge> kept;
    for (const RankingEdge& edge : graph.edges()) {
        bool redundant = false;
        for (const std::string& mid : successors[edge.winner]) {
            if (mid != edge.loser && reachable(successors, mid, edge.loser)) {
                redundant = true;
                break;
            }
        }
        if (!redundant) {
            kept.insert(edge);
        }
    }
    return {graph.nodes(), std::move(kept), graph.alpha()};
}

namespace {

std::string quote_id(const std::string& id) {
    std::string out = "\"";
    for (char c : id) {
        if (c == '"' || c == '\\') {
            out.push_back('\\');
        }
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace

std::string render_dot(const RankingGraph& graph) {
    std::string out = "digraph {\n";
    for (const std::string& node : graph.nodes()) {
        out += "  " + quote_id(node) + ";\n";
    }
    for (const RankingEdge& edge : graph.edges()) {
        out += "  " + quote_id(edge.winner) + " -> " + quote_id(edge.loser) + ";\n";
    }
    out += "}\n";
    return out;
}

}  // namespace favi
