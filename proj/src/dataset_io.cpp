#include "cnet/dataset_io.hpp"

#include "cnet/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace cnet {

namespace {

using nlohmann::json;

// Line and column (1-based) of a byte offset.
std::pair<std::size_t, std::size_t> locate(std::string_view text, std::size_t offset) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
    throw ParseError(where + ": " + what, 0, 0);
}

const json& member(const json& object, const char* key, const std::string& where) {
    if (!object.is_object()) schema_error(where, "expected an object");
    auto it = object.find(key);
    if (it == object.end()) schema_error(where, std::string("missing \"") + key + "\"");
    return *it;
}

std::string string_member(const json& object, const char* key, const std::string& where,
                          const std::string* fallback = nullptr) {
    if (fallback && !object.contains(key)) return *fallback;
    const json& v = member(object, key, where);
    if (!v.is_string()) schema_error(where + "." + key, "expected a string");
    return v.get<std::string>();
}

std::set<std::string> string_set(const json& object, const char* key, const std::string& where,
                                 bool optional) {
    std::set<std::string> out;
    if (optional && !object.contains(key)) return out;
    const json& v = member(object, key, where);
    if (!v.is_array()) schema_error(where + "." + key, "expected an array of strings");
    for (const auto& item : v) {
        if (!item.is_string()) schema_error(where + "." + key, "expected an array of strings");
        out.insert(item.get<std::string>());
    }
    return out;
}

const json& array_member(const json& object, const char* key, const std::string& where) {
    const json& v = member(object, key, where);
    if (!v.is_array()) schema_error(where + "." + key, "expected an array");
    return v;
}

template <class T>
void check_unique(const std::vector<T>& items, const char* category) {
    std::set<std::string> seen;
    for (const auto& item : items) {
        if (!seen.insert(item.id).second)
            throw DuplicateIdError(std::string("duplicate ") + category + " id " + item.id, item.id);
    }
}

template <class T>
void sort_by_id(std::vector<T>& items) {
    std::stable_sort(items.begin(), items.end(), [](const T& a, const T& b) { return a.id < b.id; });
}

json to_json(const std::set<std::string>& items) {
    json out = json::array();
    for (const auto& s : items) out.push_back(s);
    return out;
}

} // namespace

Dataset canonicalize(Dataset d) {
    std::vector<AttributeNode> nodes = d.structure.nodes();
    sort_by_id(nodes);
    std::vector<Edge> edges(d.structure.edges().begin(), d.structure.edges().end());
    d.structure = ConceptualStructure(std::move(nodes), std::move(edges));
    sort_by_id(d.artifacts);
    sort_by_id(d.perspectives);
    return d;
}

Dataset parse_dataset(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        auto [line, column] = locate(text, e.byte == 0 ? 0 : e.byte - 1);
        throw ParseError("parse error at line " + std::to_string(line) + ", column " + std::to_string(column) +
                             ": " + e.what(),
                         line, column);
    }
    if (!doc.is_object()) schema_error("document", "expected an object");

    if (doc.contains("format") && doc["format"] != dataset_format_name)
        schema_error("format", std::string("expected \"") + dataset_format_name + "\"");
    std::string version = string_member(doc, "version", "document");
    if (version != dataset_format_version)
        schema_error("version", "unsupported dataset version \"" + version + "\" (expected \"" +
                                    dataset_format_version + "\")");

    Dataset d;
    if (doc.contains("metadata")) {
        const json& meta = doc["metadata"];
        if (!meta.is_object()) schema_error("metadata", "expected an object of strings");
        for (auto it = meta.begin(); it != meta.end(); ++it) {
            if (!it->is_string()) schema_error("metadata." + it.key(), "expected a string");
            d.metadata[it.key()] = it->get<std::string>();
        }
    }

    const json& structure = member(doc, "structure", "document");
    std::vector<AttributeNode> nodes;
    const json& node_list = array_member(structure, "nodes", "structure");
    for (std::size_t i = 0; i < node_list.size(); ++i) {
        const json& n = node_list[i];
        std::string where = "structure.nodes[" + std::to_string(i) + "]";
        AttributeNode node;
        node.id = string_member(n, "id", where);
        node.label = string_member(n, "label", where, &node.id);
        static const std::string default_kind = "attribute";
        try {
            node.kind = parse_node_kind(string_member(n, "kind", where, &default_kind));
        } catch (const ParseError&) {
            throw;
        } catch (const DataError& e) {
            schema_error(where, e.what());
        }
        node.tags = string_set(n, "tags", where, true);
        nodes.push_back(std::move(node));
    }
    std::vector<Edge> edges;
    if (structure.contains("edges")) {
        const json& edge_list = array_member(structure, "edges", "structure");
        for (std::size_t i = 0; i < edge_list.size(); ++i) {
            std::string where = "structure.edges[" + std::to_string(i) + "]";
            edges.push_back({string_member(edge_list[i], "parent", where),
                             string_member(edge_list[i], "child", where)});
        }
    }
    d.structure = ConceptualStructure(std::move(nodes), std::move(edges));

    static const std::string empty;
    const json& artifacts = array_member(doc, "artifacts", "document");
    for (std::size_t i = 0; i < artifacts.size(); ++i) {
        std::string where = "artifacts[" + std::to_string(i) + "]";
        Artifact a;
        a.id = string_member(artifacts[i], "id", where);
        a.group = string_member(artifacts[i], "group", where, &empty);
        a.era = string_member(artifacts[i], "era", where, &empty);
        a.attributes = string_set(artifacts[i], "attributes", where, false);
        d.artifacts.push_back(std::move(a));
    }

    const json& perspectives = array_member(doc, "perspectives", "document");
    for (std::size_t i = 0; i < perspectives.size(); ++i) {
        std::string where = "perspectives[" + std::to_string(i) + "]";
        Perspective p;
        p.id = string_member(perspectives[i], "id", where);
        p.name = string_member(perspectives[i], "name", where, &p.id);
        p.attributes = string_set(perspectives[i], "attributes", where, false);
        d.perspectives.push_back(std::move(p));
    }
    return d;
}

ValidationReport validate_dataset(const Dataset& d) {
    ValidationReport report = validate_structure(d.structure);
    auto append = [&](ValidationReport r) {
        for (auto& v : r.violations) report.violations.push_back(std::move(v));
    };

    auto duplicates = [&](const auto& items, const char* category) {
        std::map<std::string, int> counts;
        for (const auto& item : items) ++counts[item.id];
        for (const auto& [id, count] : counts) {
            if (count > 1)
                report.violations.push_back(
                    {ViolationKind::duplicate_id, {id}, std::string("duplicate ") + category + " id " + id});
        }
    };
    duplicates(d.artifacts, "artifact");
    duplicates(d.perspectives, "perspective");

    for (const auto& a : d.artifacts) append(validate_artifact(a, d.structure));
    for (const auto& p : d.perspectives) append(validate_perspective(p, d.structure));
    return report;
}

Dataset load_dataset(std::string_view text) {
    Dataset d = parse_dataset(text);
    check_unique(d.structure.nodes(), "node");
    check_unique(d.artifacts, "artifact");
    check_unique(d.perspectives, "perspective");

    ValidationReport structure_report = validate_structure(d.structure);
    if (!structure_report.valid()) {
        const Violation& v = structure_report.violations.front();
        throw ValidationError("invalid structure: " + v.message, v.entities.empty() ? "" : v.entities.front());
    }
    for (const auto& a : d.artifacts) {
        auto r = validate_artifact(a, d.structure);
        if (!r.valid()) throw ValidationError(r.violations.front().message, a.id);
    }
    for (const auto& p : d.perspectives) {
        auto r = validate_perspective(p, d.structure);
        if (!r.valid()) throw ValidationError(r.violations.front().message, p.id);
    }
    return canonicalize(std::move(d));
}

Dataset load_dataset_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw IoError("cannot read " + path);
    return load_dataset(buffer.str());
}

std::string save_dataset(const Dataset& input) {
    Dataset d = canonicalize(input);
    json doc;
    doc["format"] = dataset_format_name;
    doc["version"] = dataset_format_version;
    if (!d.metadata.empty()) doc["metadata"] = d.metadata;

    json nodes = json::array();
    for (const auto& n : d.structure.nodes()) {
        json node{{"id", n.id}, {"label", n.label}, {"kind", to_string(n.kind)}};
        if (!n.tags.empty()) node["tags"] = to_json(n.tags);
        nodes.push_back(std::move(node));
    }
    json edges = json::array();
    for (const auto& e : d.structure.edges()) edges.push_back({{"parent", e.parent}, {"child", e.child}});
    doc["structure"] = {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};

    json artifacts = json::array();
    for (const auto& a : d.artifacts)
        artifacts.push_back(
            {{"id", a.id}, {"group", a.group}, {"era", a.era}, {"attributes", to_json(a.attributes)}});
    doc["artifacts"] = std::move(artifacts);

    json perspectives = json::array();
    for (const auto& p : d.perspectives)
        perspectives.push_back({{"id", p.id}, {"name", p.name}, {"attributes", to_json(p.attributes)}});
    doc["perspectives"] = std::move(perspectives);

    return doc.dump(2) + "\n";
}

ComparisonTable comparison_table(const Dataset& d, Closure closure) {
    return ComparisonTable::build(d.structure, d.artifacts, d.perspectives, closure);
}

std::string dataset_digest(const Dataset& d) {
    // FNV-1a, 64 bit.
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : save_dataset(d)) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace cnet
