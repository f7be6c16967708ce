#pragma once

// Conceptual structure, artifacts and perspectives.
//
// A conceptual structure is a reticulated hierarchy: a DAG of concept and
// attribute nodes with parent->child edges running from coarser to finer
// descriptive resolution. An artifact is a sub-network of it, stored as the
// set of attribute nodes it explicitly carries. A perspective is a named
// subset of attributes through which two artifacts are compared.

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace cnet {

using NodeId = std::string;
using AttributeSet = std::set<NodeId>;

enum class NodeKind { concept_node, attribute };

const char* to_string(NodeKind kind);
NodeKind parse_node_kind(const std::string& text);

struct AttributeNode {
    NodeId id;
    std::string label;
    NodeKind kind = NodeKind::attribute;
    std::set<std::string> tags;

    friend bool operator==(const AttributeNode&, const AttributeNode&) = default;
};

struct Edge {
    NodeId parent;
    NodeId child;

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Immutable once built. Holds whatever it was given, including invalid
// content, so that validate_structure can report on it.
class ConceptualStructure {
public:
    ConceptualStructure() = default;
    ConceptualStructure(std::vector<AttributeNode> nodes, std::vector<Edge> edges);

    const std::vector<AttributeNode>& nodes() const { return nodes_; }
    const std::set<Edge>& edges() const { return edges_; }

    bool contains(const NodeId& id) const { return index_.count(id) != 0; }
    // First node declared with this id, or nullptr.
    const AttributeNode* find(const NodeId& id) const;
    const std::vector<NodeId>& parents(const NodeId& id) const;
    const std::vector<NodeId>& children(const NodeId& id) const;

    // Every kind=attribute node id.
    AttributeSet attribute_ids() const;

    friend bool operator==(const ConceptualStructure& a, const ConceptualStructure& b) {
        return a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
    }

private:
    std::vector<AttributeNode> nodes_;
    std::set<Edge> edges_;
    std::map<NodeId, std::size_t> index_;
    std::map<NodeId, std::vector<NodeId>> parents_;
    std::map<NodeId, std::vector<NodeId>> children_;
};

struct Artifact {
    std::string id;
    std::string group;
    std::string era;
    AttributeSet attributes;

    friend bool operator==(const Artifact&, const Artifact&) = default;
};

struct Perspective {
    std::string id;
    std::string name;
    AttributeSet attributes;

    friend bool operator==(const Perspective&, const Perspective&) = default;
};

enum class ViolationKind {
    duplicate_id,
    dangling_edge,
    cycle,
    no_root,
    unknown_attribute,
    concept_member,
    empty_set,
};

struct Violation {
    ViolationKind kind;
    // Ids of the nodes, artifacts or perspectives involved.
    std::vector<std::string> entities;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool valid() const { return violations.empty(); }
    std::string to_string() const;
};

ValidationReport validate_structure(const ConceptualStructure& structure);
ValidationReport validate_artifact(const Artifact& artifact, const ConceptualStructure& structure);
ValidationReport validate_perspective(const Perspective& perspective,
                                      const ConceptualStructure& structure);

enum class Closure { none, ancestors };

const char* to_string(Closure closure);
Closure parse_closure(const std::string& text);

// With Closure::ancestors the explicit set is extended by every ancestor
// reachable along reversed edges, skipping concept nodes (they never count).
// Each node is visited at most once per call. Throws DataError on an id the
// structure does not know.
AttributeSet effective_attributes(const Artifact& artifact, const ConceptualStructure& structure,
                                  Closure closure = Closure::none);
AttributeSet close_over_ancestors(const AttributeSet& attributes,
                                  const ConceptualStructure& structure);

AttributeSet restrict(const AttributeSet& attributes, const Perspective& perspective);
AttributeSet restrict(const AttributeSet& attributes, const AttributeSet& filter);

} // namespace cnet
