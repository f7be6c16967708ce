#pragma once

// Graph documents (DOT, GraphML, JSON), matrix CSV and sweep report JSON.

#include "cnet/graph.hpp"
#include "cnet/similarity.hpp"

#include <json.hpp>

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace cnet {

enum class GraphFormat { dot, graphml, json };

GraphFormat parse_graph_format(const std::string& text);

// Group label -> node shape. The defaults follow the usual legend for the
// Baltic psaltery groups: Slavic circle, Finnic hexagon, Baltic square, with
// the ethnolinguistic codes mapped to their family. Groups not in the table
// get shapes from a fixed fallback list, starting with ellipse, assigned in
// sorted group order.
class ShapeTable {
public:
    static ShapeTable defaults();

    void set(const std::string& group, const std::string& shape) { shapes_[group] = shape; }
    std::map<std::string, std::string> resolve(const std::vector<NodeInfo>& nodes) const;

private:
    std::map<std::string, std::string> shapes_;
};

struct ExportStyle {
    ShapeTable shapes = ShapeTable::defaults();
    // Nodes whose era is listed here are drawn filled.
    std::set<std::string> shaded_eras{"archaeological"};
};

std::string export_graph(const SimilarityGraph& graph, GraphFormat format, const ExportStyle& style = {});

// {nodes:[{id,group,era}], edges:[{a,b,score,chosen_by}], rule, weights, formula}
nlohmann::json graph_to_json(const SimilarityGraph& graph);

// Header row "id,<ids...>", then one row per artifact. Values are written with
// 17 significant digits; ids containing commas, quotes or newlines are quoted.
std::string export_matrix(const SimilarityMatrix& matrix);

struct ParsedMatrix {
    std::vector<std::string> ids;
    std::vector<double> values;

    double at(std::size_t i, std::size_t j) const { return values[i * ids.size() + j]; }
};

// Throws DataError on ragged rows or row labels that do not match the header.
ParsedMatrix parse_matrix_csv(std::string_view text);

nlohmann::json matrix_to_json(const SimilarityMatrix& matrix);

nlohmann::json weights_to_json(const WeightVector& weights);

nlohmann::json sweep_to_json(const SweepReport& report);
std::string export_sweep(const SweepReport& report);

} // namespace cnet
