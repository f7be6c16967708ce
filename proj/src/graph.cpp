#include "cnet/graph.hpp"

#include "cnet/errors.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace cnet {

namespace {

constexpr std::size_t max_grid_points = 1'000'000;

void check_matrix(const SimilarityMatrix& m) {
    if (m.size() < 2) throw ConfigError("a similarity graph needs at least two artifacts");
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = i + 1; j < m.size(); ++j) {
            if (m.at(i, j) != m.at(j, i))
                throw DataError("similarity matrix is not symmetric at (" + m.nodes()[i].id + ", " +
                                m.nodes()[j].id + ")");
        }
    }
}

// Accumulates directed choices "i picks j" and collapses them to undirected edges.
class EdgeCollector {
public:
    explicit EdgeCollector(const SimilarityMatrix& m) : m_(m) {}

    void choose(std::size_t from, std::size_t to) {
        const std::string& a = m_.nodes()[from].id;
        const std::string& b = m_.nodes()[to].id;
        auto [it, inserted] = edges_.try_emplace(make_edge_key(a, b));
        GraphEdge& e = it->second;
        if (inserted) {
            e.first = it->first.first;
            e.second = it->first.second;
            e.score = m_.at(from, to);
        }
        ChosenBy side = a == e.first ? ChosenBy::first : ChosenBy::second;
        if (e.chosen_by == ChosenBy::none)
            e.chosen_by = side;
        else if (e.chosen_by != side)
            e.chosen_by = ChosenBy::both;
    }

    void connect(std::size_t i, std::size_t j) {
        GraphEdge e;
        auto key = make_edge_key(m_.nodes()[i].id, m_.nodes()[j].id);
        e.first = key.first;
        e.second = key.second;
        e.score = m_.at(i, j);
        edges_.emplace(std::move(key), std::move(e));
    }

    SimilarityGraph finish(GraphRule rule) {
        std::vector<GraphEdge> edges;
        edges.reserve(edges_.size());
        for (auto& [key, e] : edges_) edges.push_back(std::move(e));
        return SimilarityGraph(m_.nodes(), std::move(edges), std::move(rule), m_.weights(), m_.formula());
    }

private:
    const SimilarityMatrix& m_;
    std::map<EdgeKey, GraphEdge> edges_;
};

std::vector<std::size_t> ranked_neighbors(const SimilarityMatrix& m, std::size_t i) {
    std::vector<std::size_t> order;
    for (std::size_t j = 0; j < m.size(); ++j) {
        if (j != i) order.push_back(j);
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return m.at(i, x) > m.at(i, y); });
    return order;
}

void compositions(std::size_t parts, long remaining, std::vector<long>& prefix,
                  std::vector<std::vector<long>>& out) {
    if (parts == 1) {
        prefix.push_back(remaining);
        out.push_back(prefix);
        prefix.pop_back();
        return;
    }
    for (long k = 0; k <= remaining; ++k) {
        prefix.push_back(k);
        compositions(parts - 1, remaining - k, prefix, out);
        prefix.pop_back();
    }
}

// Number of compositions of `total` into `parts` nonnegative parts, saturating.
std::size_t grid_size(std::size_t parts, long total) {
    // C(total + parts - 1, parts - 1)
    long double c = 1;
    for (std::size_t k = 1; k < parts; ++k) {
        c = c * static_cast<long double>(total + static_cast<long>(k)) / static_cast<long double>(k);
        if (c > static_cast<long double>(max_grid_points)) return max_grid_points + 1;
    }
    return static_cast<std::size_t>(c + 0.5L);
}

} // namespace

GraphRule GraphRule::parse(const std::string& text) {
    if (text == "maximal") return maximal();
    auto colon = text.find(':');
    std::string head = text.substr(0, colon);
    std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (head == "knn") {
        if (arg.empty() || arg.find_first_not_of("0123456789") != std::string::npos)
            throw ConfigError("knn rule needs a positive integer, as in knn:2");
        std::size_t n = std::stoul(arg);
        if (n == 0) throw ConfigError("knn rule needs n >= 1");
        return knn(n);
    }
    if (head == "threshold") {
        if (arg.empty()) throw ConfigError("threshold rule needs a value, as in threshold:0.5");
        Rational t = parse_rational(arg);
        if (t < 0) throw ConfigError("threshold must be nonnegative");
        return at_least(t);
    }
    throw ConfigError("unknown graph rule '" + text + "' (expected maximal, knn:<n> or threshold:<t>)");
}

std::string GraphRule::to_string() const {
    switch (kind) {
    case RuleKind::maximal: return "maximal";
    case RuleKind::knn: return "knn:" + std::to_string(neighbors);
    case RuleKind::threshold: return "threshold:" + to_fraction_string(threshold);
    }
    return "unknown";
}

const char* to_string(ChosenBy chosen_by) {
    switch (chosen_by) {
    case ChosenBy::none: return "none";
    case ChosenBy::first: return "first";
    case ChosenBy::second: return "second";
    case ChosenBy::both: return "both";
    }
    return "none";
}

EdgeKey make_edge_key(const std::string& a, const std::string& b) {
    return a < b ? EdgeKey{a, b} : EdgeKey{b, a};
}

SimilarityGraph::SimilarityGraph(std::vector<NodeInfo> nodes, std::vector<GraphEdge> edges, GraphRule rule,
                                 WeightVector weights, SimilarityFormula formula)
    : nodes_(std::move(nodes)), edges_(std::move(edges)), rule_(std::move(rule)),
      weights_(std::move(weights)), formula_(formula) {
    for (auto& e : edges_) {
        if (e.first == e.second) throw DataError("self-loop on " + e.first);
        if (e.second < e.first) {
            std::swap(e.first, e.second);
            if (e.chosen_by == ChosenBy::first)
                e.chosen_by = ChosenBy::second;
            else if (e.chosen_by == ChosenBy::second)
                e.chosen_by = ChosenBy::first;
        }
    }
    std::sort(edges_.begin(), edges_.end(), [](const GraphEdge& x, const GraphEdge& y) {
        return std::tie(x.first, x.second) < std::tie(y.first, y.second);
    });
}

EdgeSet SimilarityGraph::edge_set() const {
    EdgeSet out;
    for (const auto& e : edges_) out.emplace(e.first, e.second);
    return out;
}

std::size_t SimilarityGraph::degree(const std::string& id) const {
    return static_cast<std::size_t>(std::count_if(edges_.begin(), edges_.end(), [&](const GraphEdge& e) {
        return e.first == id || e.second == id;
    }));
}

SimilarityGraph maximal_similarity_graph(const SimilarityMatrix& m) {
    check_matrix(m);
    EdgeCollector edges(m);
    for (std::size_t i = 0; i < m.size(); ++i) {
        std::size_t best = i == 0 ? 1 : 0;
        for (std::size_t j = 0; j < m.size(); ++j) {
            if (j != i && m.at(i, j) > m.at(i, best)) best = j;
        }
        for (std::size_t j = 0; j < m.size(); ++j) {
            if (j != i && m.at(i, j) == m.at(i, best)) edges.choose(i, j);
        }
    }
    return edges.finish(GraphRule::maximal());
}

SimilarityGraph knn_graph(const SimilarityMatrix& m, std::size_t n) {
    check_matrix(m);
    if (n < 1 || n > m.size() - 1)
        throw ConfigError("knn needs 1 <= n <= " + std::to_string(m.size() - 1) + ", got " + std::to_string(n));
    EdgeCollector edges(m);
    for (std::size_t i = 0; i < m.size(); ++i) {
        auto order = ranked_neighbors(m, i);
        const Rational& cutoff = m.at(i, order[n - 1]);
        for (std::size_t j : order) {
            if (m.at(i, j) < cutoff) break;
            edges.choose(i, j);
        }
    }
    // n = 1 is the maximal graph and is labeled as such.
    return edges.finish(n == 1 ? GraphRule::maximal() : GraphRule::knn(n));
}

SimilarityGraph threshold_graph(const SimilarityMatrix& m, const Rational& t) {
    check_matrix(m);
    if (t < 0) throw ConfigError("threshold must be nonnegative");
    EdgeCollector edges(m);
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = i + 1; j < m.size(); ++j) {
            if (m.at(i, j) >= t) edges.connect(i, j);
        }
    }
    return edges.finish(GraphRule::at_least(t));
}

SimilarityGraph build_graph(const SimilarityMatrix& matrix, const GraphRule& rule) {
    switch (rule.kind) {
    case RuleKind::maximal: return maximal_similarity_graph(matrix);
    case RuleKind::knn: return knn_graph(matrix, rule.neighbors);
    case RuleKind::threshold: return threshold_graph(matrix, rule.threshold);
    }
    throw ConfigError("unknown graph rule");
}

EdgeDiff compare_graphs(const SimilarityGraph& g1, const SimilarityGraph& g2) {
    std::set<std::string> ids1, ids2;
    for (const auto& n : g1.nodes()) ids1.insert(n.id);
    for (const auto& n : g2.nodes()) ids2.insert(n.id);
    if (ids1 != ids2) throw DataError("graphs are over different node sets");

    EdgeSet e1 = g1.edge_set();
    EdgeSet e2 = g2.edge_set();
    EdgeDiff diff;
    std::set_difference(e2.begin(), e2.end(), e1.begin(), e1.end(), std::inserter(diff.added, diff.added.end()));
    std::set_difference(e1.begin(), e1.end(), e2.begin(), e2.end(),
                        std::inserter(diff.removed, diff.removed.end()));
    std::set_intersection(e1.begin(), e1.end(), e2.begin(), e2.end(),
                          std::inserter(diff.retained, diff.retained.end()));
    return diff;
}

std::vector<WeightVector> simplex_grid(std::size_t dimensions, const Rational& step) {
    if (dimensions == 0) throw ConfigError("grid needs at least one dimension");
    if (step <= 0 || step > 1) throw ConfigError("grid step must lie in (0, 1]");
    Rational divisions = 1 / step;
    if (boost::multiprecision::denominator(divisions) != 1)
        throw ConfigError("grid step " + to_fraction_string(step) + " does not divide 1");
    auto total = boost::multiprecision::numerator(divisions);
    if (total > 1'000'000) throw ConfigError("grid step is too fine");
    long m = total.convert_to<long>();
    if (grid_size(dimensions, m) > max_grid_points) throw ConfigError("weight grid is too large");

    std::vector<std::vector<long>> counts;
    std::vector<long> prefix;
    compositions(dimensions, m, prefix, counts);

    std::vector<WeightVector> grid;
    grid.reserve(counts.size());
    for (const auto& c : counts) {
        std::vector<Rational> w;
        w.reserve(c.size());
        for (long k : c) w.push_back(Rational(k) * step);
        grid.push_back(WeightVector::raw(std::move(w)));
    }
    return grid;
}

SweepReport sweep(const ComparisonTable& table, const Rational& step, const GraphRule& rule,
                  SimilarityFormula formula) {
    const std::size_t dims = table.perspectives().size();
    if (dims < 2) throw ConfigError("a sweep needs at least two perspectives");

    SweepReport report;
    report.grid_step = step;
    report.rule = rule;
    report.formula = formula;
    for (const auto& p : table.perspectives()) report.perspective_ids.push_back(p.id);

    std::map<EdgeSet, std::size_t> region_of;
    bool first = true;
    for (auto& w : simplex_grid(dims, step)) {
        EdgeSet edges = build_graph(table.matrix(w, formula), rule).edge_set();
        if (first) {
            report.stable_edges = edges;
            first = false;
        } else {
            EdgeSet kept;
            std::set_intersection(report.stable_edges.begin(), report.stable_edges.end(), edges.begin(),
                                  edges.end(), std::inserter(kept, kept.end()));
            report.stable_edges = std::move(kept);
        }
        auto [it, inserted] = region_of.try_emplace(edges, report.regions.size());
        if (inserted) report.regions.push_back({{}, std::move(edges)});
        report.regions[it->second].points.push_back(report.points.size());
        report.points.push_back({std::move(w), it->second});
    }
    return report;
}

SweepReport sweep(const PerspectiveSet& perspectives, const std::vector<Artifact>& artifacts,
                  const Rational& step, const GraphRule& rule, SimilarityFormula formula) {
    return sweep(ComparisonTable(perspectives, artifacts), step, rule, formula);
}

} // namespace cnet
