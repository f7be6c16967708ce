#pragma once

// Similarity graphs derived from a similarity matrix, and sweeps of the
// perspective-weight simplex that group weight points by the graph they yield.

#include "cnet/similarity.hpp"

#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace cnet {

enum class RuleKind { maximal, knn, threshold };

struct GraphRule {
    RuleKind kind = RuleKind::maximal;
    std::size_t neighbors = 1;  // knn only
    Rational threshold;         // threshold only

    static GraphRule maximal() { return {}; }
    static GraphRule knn(std::size_t n) { return {RuleKind::knn, n, Rational(0)}; }
    static GraphRule at_least(Rational t) { return {RuleKind::threshold, 1, std::move(t)}; }

    // "maximal", "knn:<n>", "threshold:<t>"
    static GraphRule parse(const std::string& text);
    std::string to_string() const;

    friend bool operator==(const GraphRule&, const GraphRule&) = default;
};

// Which endpoint(s) picked the edge under a nearest-neighbour rule. Always
// none for threshold graphs.
enum class ChosenBy { none, first, second, both };

const char* to_string(ChosenBy chosen_by);

// Unordered pair stored with first < second.
using EdgeKey = std::pair<std::string, std::string>;
using EdgeSet = std::set<EdgeKey>;

EdgeKey make_edge_key(const std::string& a, const std::string& b);

struct GraphEdge {
    std::string first;
    std::string second;
    Rational score;
    ChosenBy chosen_by = ChosenBy::none;
};

class SimilarityGraph {
public:
    SimilarityGraph(std::vector<NodeInfo> nodes, std::vector<GraphEdge> edges, GraphRule rule,
                    WeightVector weights, SimilarityFormula formula);

    const std::vector<NodeInfo>& nodes() const { return nodes_; }
    // Sorted by (first, second).
    const std::vector<GraphEdge>& edges() const { return edges_; }
    const GraphRule& rule() const { return rule_; }
    const WeightVector& weights() const { return weights_; }
    SimilarityFormula formula() const { return formula_; }

    EdgeSet edge_set() const;
    std::size_t degree(const std::string& id) const;

private:
    std::vector<NodeInfo> nodes_;
    std::vector<GraphEdge> edges_;
    GraphRule rule_;
    WeightVector weights_;
    SimilarityFormula formula_;
};

// Each artifact connects to every artifact achieving its row maximum
// (off-diagonal). Throws DataError on an asymmetric matrix.
SimilarityGraph maximal_similarity_graph(const SimilarityMatrix& matrix);

// Each artifact connects to its n best neighbours; candidates tied with the
// n-th best are all kept. Requires 1 <= n <= size-1 (ConfigError).
SimilarityGraph knn_graph(const SimilarityMatrix& matrix, std::size_t n);

// Every pair with score >= t. Requires t >= 0 (ConfigError).
SimilarityGraph threshold_graph(const SimilarityMatrix& matrix, const Rational& t);

SimilarityGraph build_graph(const SimilarityMatrix& matrix, const GraphRule& rule);

struct EdgeDiff {
    EdgeSet added;     // in g2 only
    EdgeSet removed;   // in g1 only
    EdgeSet retained;  // in both
};

// Throws DataError when the graphs are over different node sets.
EdgeDiff compare_graphs(const SimilarityGraph& g1, const SimilarityGraph& g2);

// Every weight vector whose entries are multiples of step and sum to 1, in
// lexicographic order. step must divide 1 (ConfigError otherwise).
std::vector<WeightVector> simplex_grid(std::size_t dimensions, const Rational& step);

struct WeightRegion {
    // Indices into SweepReport::points.
    std::vector<std::size_t> points;
    EdgeSet edges;
};

struct SweepPoint {
    WeightVector weights;
    std::size_t region = 0;
};

struct SweepReport {
    Rational grid_step;
    GraphRule rule;
    SimilarityFormula formula = SimilarityFormula::weighted_overlap_fraction;
    std::vector<std::string> perspective_ids;
    std::vector<SweepPoint> points;
    // Numbered in order of first appearance on the grid.
    std::vector<WeightRegion> regions;
    EdgeSet stable_edges;
};

// Evaluates the graph at every grid point, groups points by exact edge-set
// equality and intersects all edge sets. Requires at least two perspectives.
SweepReport sweep(const ComparisonTable& table, const Rational& step, const GraphRule& rule,
                  SimilarityFormula formula = SimilarityFormula::weighted_overlap_fraction);

SweepReport sweep(const PerspectiveSet& perspectives, const std::vector<Artifact>& artifacts,
                  const Rational& step, const GraphRule& rule,
                  SimilarityFormula formula = SimilarityFormula::weighted_overlap_fraction);

} // namespace cnet
