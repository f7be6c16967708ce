#include "cnet/export.hpp"

#include "cnet/errors.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace cnet {

namespace {

using nlohmann::json;

const std::vector<std::string>& fallback_shapes() {
    static const std::vector<std::string> shapes{"ellipse", "box", "diamond", "triangle", "octagon",
                                                 "invtriangle", "pentagon", "septagon", "trapezium",
                                                 "parallelogram", "house", "doubleoctagon"};
    return shapes;
}

std::string dot_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    return out + "\"";
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string number_17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Shortest decimal that round-trips the double.
std::string number_short(double v) {
    return json(v).dump();
}

std::string weights_text(const WeightVector& w) {
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) out += ",";
        out += number_short(to_double(w[i]));
    }
    return out;
}

std::string export_dot(const SimilarityGraph& g, const ExportStyle& style) {
    auto shapes = style.shapes.resolve(g.nodes());
    std::ostringstream out;
    out << "graph similarity {\n";
    out << "  graph [rule=" << dot_quote(g.rule().to_string()) << ", formula=" << dot_quote(to_string(g.formula()))
        << ", weights=" << dot_quote(weights_text(g.weights())) << "];\n";
    for (const auto& n : g.nodes()) {
        out << "  " << dot_quote(n.id) << " [label=" << dot_quote(n.id) << ", shape=" << shapes.at(n.group);
        if (style.shaded_eras.count(n.era)) out << ", style=filled, fillcolor=\"gray70\"";
        out << ", group=" << dot_quote(n.group) << ", era=" << dot_quote(n.era) << "];\n";
    }
    for (const auto& e : g.edges()) {
        out << "  " << dot_quote(e.first) << " -- " << dot_quote(e.second) << " [label=\""
            << format_fixed(e.score, 4) << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

std::string export_graphml(const SimilarityGraph& g, const ExportStyle& style) {
    auto shapes = style.shapes.resolve(g.nodes());
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
        << "  <key id=\"rule\" for=\"graph\" attr.name=\"rule\" attr.type=\"string\"/>\n"
        << "  <key id=\"formula\" for=\"graph\" attr.name=\"formula\" attr.type=\"string\"/>\n"
        << "  <key id=\"weights\" for=\"graph\" attr.name=\"weights\" attr.type=\"string\"/>\n"
        << "  <key id=\"group\" for=\"node\" attr.name=\"group\" attr.type=\"string\"/>\n"
        << "  <key id=\"era\" for=\"node\" attr.name=\"era\" attr.type=\"string\"/>\n"
        << "  <key id=\"shape\" for=\"node\" attr.name=\"shape\" attr.type=\"string\"/>\n"
        << "  <key id=\"shaded\" for=\"node\" attr.name=\"shaded\" attr.type=\"boolean\"/>\n"
        << "  <key id=\"score\" for=\"edge\" attr.name=\"score\" attr.type=\"double\"/>\n"
        << "  <key id=\"label\" for=\"edge\" attr.name=\"label\" attr.type=\"string\"/>\n"
        << "  <graph id=\"similarity\" edgedefault=\"undirected\">\n"
        << "    <data key=\"rule\">" << xml_escape(g.rule().to_string()) << "</data>\n"
        << "    <data key=\"formula\">" << xml_escape(to_string(g.formula())) << "</data>\n"
        << "    <data key=\"weights\">" << xml_escape(weights_text(g.weights())) << "</data>\n";
    for (const auto& n : g.nodes()) {
        out << "    <node id=\"" << xml_escape(n.id) << "\">"
            << "<data key=\"group\">" << xml_escape(n.group) << "</data>"
            << "<data key=\"era\">" << xml_escape(n.era) << "</data>"
            << "<data key=\"shape\">" << xml_escape(shapes.at(n.group)) << "</data>"
            << "<data key=\"shaded\">" << (style.shaded_eras.count(n.era) ? "true" : "false") << "</data>"
            << "</node>\n";
    }
    std::size_t index = 0;
    for (const auto& e : g.edges()) {
        out << "    <edge id=\"e" << index++ << "\" source=\"" << xml_escape(e.first) << "\" target=\""
            << xml_escape(e.second) << "\">"
            << "<data key=\"score\">" << number_17(to_double(e.score)) << "</data>"
            << "<data key=\"label\">" << format_fixed(e.score, 4) << "</data>"
            << "</edge>\n";
    }
    out << "  </graph>\n</graphml>\n";
    return out.str();
}

// Splits one CSV record starting at pos; advances pos past the line break.
std::vector<std::string> csv_record(std::string_view text, std::size_t& pos, std::size_t line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    bool was_quoted = false;
    for (; pos < text.size(); ++pos) {
        char c = text[pos];
        if (quoted) {
            if (c == '"') {
                if (pos + 1 < text.size() && text[pos + 1] == '"') {
                    field += '"';
                    ++pos;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"' && field.empty() && !was_quoted) {
            quoted = was_quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
            was_quoted = false;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && pos + 1 < text.size() && text[pos + 1] == '\n') ++pos;
            ++pos;
            break;
        } else {
            field += c;
        }
    }
    if (quoted) throw DataError("unterminated quoted field on line " + std::to_string(line));
    fields.push_back(std::move(field));
    return fields;
}

} // namespace

GraphFormat parse_graph_format(const std::string& text) {
    if (text == "dot") return GraphFormat::dot;
    if (text == "graphml") return GraphFormat::graphml;
    if (text == "json") return GraphFormat::json;
    throw ConfigError("unknown graph format '" + text + "' (expected dot, graphml or json)");
}

ShapeTable ShapeTable::defaults() {
    ShapeTable t;
    for (const char* g : {"Slavic", "RUS", "NVG"}) t.set(g, "circle");
    for (const char* g : {"Finnic", "EST", "FIN"}) t.set(g, "hexagon");
    for (const char* g : {"Baltic", "LAT", "LIT"}) t.set(g, "square");
    return t;
}

std::map<std::string, std::string> ShapeTable::resolve(const std::vector<NodeInfo>& nodes) const {
    std::map<std::string, std::string> out;
    std::set<std::string> unknown;
    for (const auto& n : nodes) {
        auto it = shapes_.find(n.group);
        if (it != shapes_.end())
            out[n.group] = it->second;
        else
            unknown.insert(n.group);
    }
    std::size_t k = 0;
    for (const auto& g : unknown) out[g] = fallback_shapes()[k++ % fallback_shapes().size()];
    return out;
}

std::string export_graph(const SimilarityGraph& graph, GraphFormat format, const ExportStyle& style) {
    switch (format) {
    case GraphFormat::dot: return export_dot(graph, style);
    case GraphFormat::graphml: return export_graphml(graph, style);
    case GraphFormat::json: return graph_to_json(graph).dump(2) + "\n";
    }
    throw ConfigError("unknown graph format");
}

json weights_to_json(const WeightVector& weights) {
    json out = json::array();
    for (const auto& w : weights.values()) out.push_back(to_double(w));
    return out;
}

json graph_to_json(const SimilarityGraph& g) {
    json nodes = json::array();
    for (const auto& n : g.nodes()) nodes.push_back({{"id", n.id}, {"group", n.group}, {"era", n.era}});
    json edges = json::array();
    for (const auto& e : g.edges())
        edges.push_back({{"a", e.first},
                         {"b", e.second},
                         {"score", to_double(e.score)},
                         {"chosen_by", to_string(e.chosen_by)}});
    return {{"nodes", std::move(nodes)},
            {"edges", std::move(edges)},
            {"rule", g.rule().to_string()},
            {"weights", weights_to_json(g.weights())},
            {"formula", to_string(g.formula())}};
}

std::string export_matrix(const SimilarityMatrix& m) {
    std::string out = "id";
    for (const auto& n : m.nodes()) out += "," + csv_field(n.id);
    out += "\n";
    for (std::size_t i = 0; i < m.size(); ++i) {
        out += csv_field(m.nodes()[i].id);
        for (std::size_t j = 0; j < m.size(); ++j) out += "," + number_17(to_double(m.at(i, j)));
        out += "\n";
    }
    return out;
}

ParsedMatrix parse_matrix_csv(std::string_view text) {
    ParsedMatrix out;
    std::size_t pos = 0;
    std::size_t line = 1;
    auto header = csv_record(text, pos, line);
    if (header.empty() || header.size() < 2) throw DataError("matrix CSV header has no ids");
    out.ids.assign(header.begin() + 1, header.end());
    const std::size_t n = out.ids.size();
    while (pos < text.size()) {
        ++line;
        auto row = csv_record(text, pos, line);
        if (row.size() == 1 && row[0].empty()) continue;
        if (row.size() != n + 1)
            throw DataError("matrix CSV line " + std::to_string(line) + " has " + std::to_string(row.size()) +
                            " fields, expected " + std::to_string(n + 1));
        std::size_t r = out.values.size() / n;
        if (r >= n || row[0] != out.ids[r])
            throw DataError("matrix CSV line " + std::to_string(line) + " is labeled '" + row[0] +
                            "', expected '" + (r < n ? out.ids[r] : std::string("<end>")) + "'");
        for (std::size_t j = 1; j <= n; ++j) {
            char* end = nullptr;
            double v = std::strtod(row[j].c_str(), &end);
            if (row[j].empty() || *end != '\0')
                throw DataError("matrix CSV line " + std::to_string(line) + ": bad number '" + row[j] + "'");
            out.values.push_back(v);
        }
    }
    if (out.values.size() != n * n) throw DataError("matrix CSV is not square");
    return out;
}

json matrix_to_json(const SimilarityMatrix& m) {
    json ids = json::array();
    for (const auto& n : m.nodes()) ids.push_back(n.id);
    json rows = json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.size(); ++j) row.push_back(to_double(m.at(i, j)));
        rows.push_back(std::move(row));
    }
    return {{"ids", std::move(ids)},
            {"values", std::move(rows)},
            {"weights", weights_to_json(m.weights())},
            {"formula", to_string(m.formula())}};
}

json sweep_to_json(const SweepReport& r) {
    auto edge_list = [](const EdgeSet& edges) {
        json out = json::array();
        for (const auto& [a, b] : edges) out.push_back({a, b});
        return out;
    };
    json points = json::array();
    for (const auto& p : r.points) points.push_back({{"weights", weights_to_json(p.weights)}, {"region", p.region}});
    json regions = json::array();
    for (std::size_t i = 0; i < r.regions.size(); ++i)
        regions.push_back({{"id", i}, {"points", r.regions[i].points}, {"edges", edge_list(r.regions[i].edges)}});
    return {{"grid_step", to_double(r.grid_step)},
            {"grid_step_exact", to_fraction_string(r.grid_step)},
            {"rule", r.rule.to_string()},
            {"formula", to_string(r.formula)},
            {"perspectives", r.perspective_ids},
            {"point_count", r.points.size()},
            {"region_count", r.regions.size()},
            {"points", std::move(points)},
            {"regions", std::move(regions)},
            {"stable_edges", edge_list(r.stable_edges)}};
}

std::string export_sweep(const SweepReport& report) {
    return sweep_to_json(report).dump(2) + "\n";
}

} // namespace cnet
