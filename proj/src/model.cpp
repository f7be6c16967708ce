#include "cnet/model.hpp"

#include "cnet/errors.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace cnet {

namespace {

const std::vector<NodeId>& empty_ids() {
    static const std::vector<NodeId> empty;
    return empty;
}

std::string join(const std::vector<std::string>& items, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += sep;
        out += items[i];
    }
    return out;
}

// Strongly connected components that contain a cycle (size > 1, or a
// self-loop). Iterative Kosaraju so long chains cannot blow the stack.
std::vector<std::vector<NodeId>> cyclic_components(const ConceptualStructure& s) {
    std::vector<NodeId> order;
    std::set<NodeId> seen;
    for (const auto& start : s.nodes()) {
        if (seen.count(start.id)) continue;
        // (node, next child index)
        std::vector<std::pair<NodeId, std::size_t>> stack{{start.id, 0}};
        seen.insert(start.id);
        while (!stack.empty()) {
            auto& [node, next] = stack.back();
            const auto& kids = s.children(node);
            if (next < kids.size()) {
                const NodeId& child = kids[next++];
                if (s.contains(child) && seen.insert(child).second) stack.emplace_back(child, 0);
            } else {
                order.push_back(node);
                stack.pop_back();
            }
        }
    }

    std::vector<std::vector<NodeId>> cycles;
    std::set<NodeId> assigned;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        if (assigned.count(*it)) continue;
        std::vector<NodeId> component;
        std::vector<NodeId> stack{*it};
        assigned.insert(*it);
        while (!stack.empty()) {
            NodeId node = stack.back();
            stack.pop_back();
            component.push_back(node);
            for (const auto& parent : s.parents(node)) {
                if (s.contains(parent) && assigned.insert(parent).second) stack.push_back(parent);
            }
        }
        bool self_loop = component.size() == 1 && s.edges().count(Edge{component[0], component[0]});
        if (component.size() > 1 || self_loop) {
            std::sort(component.begin(), component.end());
            cycles.push_back(std::move(component));
        }
    }
    std::sort(cycles.begin(), cycles.end());
    return cycles;
}

} // namespace

const char* to_string(NodeKind kind) {
    return kind == NodeKind::concept_node ? "concept" : "attribute";
}

NodeKind parse_node_kind(const std::string& text) {
    if (text == "concept") return NodeKind::concept_node;
    if (text == "attribute") return NodeKind::attribute;
    throw DataError("unknown node kind '" + text + "' (expected concept or attribute)");
}

const char* to_string(Closure closure) {
    return closure == Closure::ancestors ? "ancestors" : "none";
}

Closure parse_closure(const std::string& text) {
    if (text == "none") return Closure::none;
    if (text == "ancestors") return Closure::ancestors;
    throw ConfigError("unknown closure mode '" + text + "' (expected none or ancestors)");
}

ConceptualStructure::ConceptualStructure(std::vector<AttributeNode> nodes, std::vector<Edge> edges)
    : nodes_(std::move(nodes)), edges_(edges.begin(), edges.end()) {
    for (std::size_t i = 0; i < nodes_.size(); ++i) index_.emplace(nodes_[i].id, i);
    for (const auto& e : edges_) {
        parents_[e.child].push_back(e.parent);
        children_[e.parent].push_back(e.child);
    }
}

const AttributeNode* ConceptualStructure::find(const NodeId& id) const {
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : &nodes_[it->second];
}

const std::vector<NodeId>& ConceptualStructure::parents(const NodeId& id) const {
    auto it = parents_.find(id);
    return it == parents_.end() ? empty_ids() : it->second;
}

const std::vector<NodeId>& ConceptualStructure::children(const NodeId& id) const {
    auto it = children_.find(id);
    return it == children_.end() ? empty_ids() : it->second;
}

AttributeSet ConceptualStructure::attribute_ids() const {
    AttributeSet ids;
    for (const auto& n : nodes_) {
        if (n.kind == NodeKind::attribute) ids.insert(n.id);
    }
    return ids;
}

std::string ValidationReport::to_string() const {
    if (violations.empty()) return "valid\n";
    std::ostringstream out;
    for (const auto& v : violations) out << v.message << '\n';
    return out.str();
}

ValidationReport validate_structure(const ConceptualStructure& s) {
    ValidationReport report;
    auto add = [&](ViolationKind kind, std::vector<std::string> entities, std::string message) {
        report.violations.push_back({kind, std::move(entities), std::move(message)});
    };

    std::map<NodeId, std::size_t> counts;
    for (const auto& n : s.nodes()) ++counts[n.id];
    for (const auto& [id, count] : counts) {
        if (count > 1) add(ViolationKind::duplicate_id, {id}, "duplicate node id " + id);
    }

    for (const auto& e : s.edges()) {
        for (const NodeId* end : {&e.parent, &e.child}) {
            if (!s.contains(*end))
                add(ViolationKind::dangling_edge, {*end}, "dangling edge endpoint " + *end);
        }
    }

    for (auto& cycle : cyclic_components(s)) {
        std::string message = "cycle: " + join(cycle, ",");
        add(ViolationKind::cycle, std::move(cycle), std::move(message));
    }

    bool has_root = std::any_of(s.nodes().begin(), s.nodes().end(),
                                [&](const AttributeNode& n) { return s.parents(n.id).empty(); });
    if (!has_root) add(ViolationKind::no_root, {}, "no root: every node has a parent");

    return report;
}

namespace {

ValidationReport validate_members(const std::string& owner_kind, const std::string& owner_id,
                                  const AttributeSet& members, const ConceptualStructure& s,
                                  bool reject_concepts) {
    ValidationReport report;
    if (members.empty()) {
        report.violations.push_back(
            {ViolationKind::empty_set, {owner_id}, owner_kind + " " + owner_id + " has no attributes"});
    }
    for (const auto& id : members) {
        const AttributeNode* node = s.find(id);
        if (!node) {
            report.violations.push_back({ViolationKind::unknown_attribute, {owner_id, id},
                                         owner_kind + " " + owner_id + " references unknown attribute " + id});
        } else if (reject_concepts && node->kind == NodeKind::concept_node) {
            report.violations.push_back({ViolationKind::concept_member, {owner_id, id},
                                         owner_kind + " " + owner_id + " lists concept node " + id +
                                             " as an attribute"});
        }
    }
    return report;
}

} // namespace

ValidationReport validate_artifact(const Artifact& artifact, const ConceptualStructure& s) {
    return validate_members("artifact", artifact.id, artifact.attributes, s, true);
}

ValidationReport validate_perspective(const Perspective& perspective, const ConceptualStructure& s) {
    // Concept nodes inside a perspective are tolerated; they never reach a
    // metric because artifacts cannot hold them.
    return validate_members("perspective", perspective.id, perspective.attributes, s, false);
}

AttributeSet close_over_ancestors(const AttributeSet& attributes, const ConceptualStructure& s) {
    AttributeSet result;
    std::set<NodeId> visited;
    std::deque<NodeId> queue;
    for (const auto& id : attributes) {
        if (!s.contains(id)) throw DataError("unknown attribute id " + id);
        if (visited.insert(id).second) queue.push_back(id);
    }
    while (!queue.empty()) {
        NodeId node = std::move(queue.front());
        queue.pop_front();
        if (s.find(node)->kind == NodeKind::attribute) result.insert(node);
        for (const auto& parent : s.parents(node)) {
            if (s.contains(parent) && visited.insert(parent).second) queue.push_back(parent);
        }
    }
    return result;
}

AttributeSet effective_attributes(const Artifact& artifact, const ConceptualStructure& s,
                                  Closure closure) {
    if (closure == Closure::ancestors) return close_over_ancestors(artifact.attributes, s);
    for (const auto& id : artifact.attributes) {
        if (!s.contains(id)) throw DataError("artifact " + artifact.id + ": unknown attribute id " + id);
    }
    return artifact.attributes;
}

AttributeSet restrict(const AttributeSet& attributes, const AttributeSet& filter) {
    AttributeSet out;
    std::set_intersection(attributes.begin(), attributes.end(), filter.begin(), filter.end(),
                          std::inserter(out, out.end()));
    return out;
}

AttributeSet restrict(const AttributeSet& attributes, const Perspective& perspective) {
    return restrict(attributes, perspective.attributes);
}

} // namespace cnet
