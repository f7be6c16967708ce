#include "cnet/synthetic.hpp"

#include "cnet/errors.hpp"

#include <cstdio>
#include <map>
#include <random>

namespace cnet {

namespace {

// mt19937_64 output is fixed by the standard; the distributions are not, so
// the conversion to [0, 1) is done here.
class Draws {
public:
    explicit Draws(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    bool chance(double p) { return uniform() < p; }
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }

private:
    std::mt19937_64 engine_;
};

std::string numbered(const std::string& prefix, std::size_t k) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%03zu", k);
    return prefix + "-" + buf;
}

void check_probability(double p, const std::string& what) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(what + " must lie in [0, 1]");
}

} // namespace

SyntheticSpec SyntheticSpec::defaults() {
    SyntheticSpec s;
    s.groups = {
        {"EST", 2, "ethnographic", "north"}, {"FIN", 2, "ethnographic", "north"},
        {"LAT", 3, "ethnographic", "west"},  {"LIT", 3, "ethnographic", "west"},
        {"RUS", 3, "ethnographic", "east"},  {"NVG", 2, "archaeological", "north"},
    };
    s.perspectives = {
        {"physical", "Physical Attributes", 80, 0.85, PrototypeKey::group},
        {"symbolism", "Symbolism", 20, 0.7, PrototypeKey::region},
    };
    return s;
}

std::size_t SyntheticSpec::artifact_count() const {
    std::size_t n = 0;
    for (const auto& g : groups) n += g.count;
    return n;
}

std::size_t SyntheticSpec::attribute_count() const {
    std::size_t n = 0;
    for (const auto& p : perspectives) n += p.size;
    return n;
}

Dataset gen_synthetic(std::uint64_t seed, const SyntheticSpec& spec) {
    if (spec.artifact_count() == 0) throw ConfigError("synthetic spec has no artifacts");
    if (spec.attribute_count() == 0) throw ConfigError("synthetic spec has no attributes");
    check_probability(spec.presence, "presence");
    for (const auto& p : spec.perspectives) check_probability(p.correlation, "correlation of " + p.id);

    Draws draws(seed);
    Dataset d;

    // Structure: PSALTERY -> one concept per perspective -> characters -> states.
    // Every fifth state also hangs off a second character.
    std::vector<AttributeNode> nodes{{"PSALTERY", "PSALTERY", NodeKind::concept_node, {}}};
    std::vector<Edge> edges;
    std::vector<std::vector<NodeId>> attributes_of(spec.perspectives.size());
    for (std::size_t k = 0; k < spec.perspectives.size(); ++k) {
        const auto& ps = spec.perspectives[k];
        if (ps.size == 0) continue;
        std::string concept_id = ps.id + "-root";
        nodes.push_back({concept_id, ps.name, NodeKind::concept_node, {}});
        edges.push_back({"PSALTERY", concept_id});
        const std::size_t characters = (ps.size + 3) / 4;
        for (std::size_t i = 0; i < ps.size; ++i) {
            NodeId id = numbered(ps.id, i + 1);
            nodes.push_back({id, id, NodeKind::attribute, {ps.id}});
            attributes_of[k].push_back(id);
            if (i < characters) {
                edges.push_back({concept_id, id});
            } else {
                std::size_t parent = i % characters;
                edges.push_back({attributes_of[k][parent], id});
                if (i % 5 == 0 && characters > 1)
                    edges.push_back({attributes_of[k][(parent + 1) % characters], id});
            }
        }
        Perspective p{ps.id, ps.name, {}};
        p.attributes.insert(attributes_of[k].begin(), attributes_of[k].end());
        d.perspectives.push_back(std::move(p));
    }
    d.structure = ConceptualStructure(std::move(nodes), std::move(edges));

    // Prototypes, one presence vector per (perspective, key) drawn in spec order.
    std::vector<std::map<std::string, std::vector<bool>>> prototypes(spec.perspectives.size());
    for (std::size_t k = 0; k < spec.perspectives.size(); ++k) {
        for (const auto& g : spec.groups) {
            const std::string& key = spec.perspectives[k].prototype == PrototypeKey::group ? g.name : g.region;
            auto [it, inserted] = prototypes[k].try_emplace(key);
            if (!inserted) continue;
            for (std::size_t i = 0; i < attributes_of[k].size(); ++i) it->second.push_back(draws.chance(spec.presence));
        }
    }

    std::vector<NodeId> all_attributes;
    for (const auto& list : attributes_of) all_attributes.insert(all_attributes.end(), list.begin(), list.end());

    for (const auto& g : spec.groups) {
        for (std::size_t member = 1; member <= g.count; ++member) {
            Artifact a{g.name + "-" + std::to_string(member), g.name, g.era, {}};
            for (std::size_t k = 0; k < spec.perspectives.size(); ++k) {
                const auto& ps = spec.perspectives[k];
                const auto& proto = prototypes[k].at(ps.prototype == PrototypeKey::group ? g.name : g.region);
                for (std::size_t i = 0; i < attributes_of[k].size(); ++i) {
                    bool present = draws.chance(ps.correlation) ? proto[i] : draws.chance(spec.presence);
                    if (present) a.attributes.insert(attributes_of[k][i]);
                }
            }
            if (a.attributes.empty()) a.attributes.insert(all_attributes[draws.below(all_attributes.size())]);
            d.artifacts.push_back(std::move(a));
        }
    }

    d.metadata = {{"name", "synthetic"},
                  {"seed", std::to_string(seed)},
                  {"source", "synthetic generator; content is random, only the shape is modeled"}};
    return canonicalize(std::move(d));
}

} // namespace cnet
