#pragma once

// Synthetic datasets shaped like the Baltic psaltery collection: 15
// instruments in six ethnolinguistic groups, a large physical perspective and
// a small symbolic one. Content is random; only the shape is realistic.
//
// Every artifact copies its prototype's value for an attribute with
// probability `correlation`, otherwise draws it afresh with probability
// `presence`. Prototypes are drawn per group, or per region for perspectives
// keyed by region, so the physical perspective clusters by language group and
// the symbolic one by geography.

#include "cnet/dataset_io.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace cnet {

struct GroupSpec {
    std::string name;
    std::size_t count = 0;
    std::string era = "ethnographic";
    std::string region;
};

enum class PrototypeKey { group, region };

struct PerspectiveSpec {
    std::string id;
    std::string name;
    std::size_t size = 0;
    double correlation = 0.85;
    PrototypeKey prototype = PrototypeKey::group;
};

struct SyntheticSpec {
    std::vector<GroupSpec> groups;
    std::vector<PerspectiveSpec> perspectives;
    double presence = 0.5;

    // EST 2, FIN 2, LAT 3, LIT 3, RUS 3, NVG 2 (archaeological); physical
    // perspective of 80 attributes, symbolic of 20.
    static SyntheticSpec defaults();

    std::size_t artifact_count() const;
    std::size_t attribute_count() const;
};

// Deterministic for a given seed and spec. Throws ConfigError on degenerate
// specs (no artifacts, no attributes, probabilities outside [0, 1]).
Dataset gen_synthetic(std::uint64_t seed, const SyntheticSpec& spec = SyntheticSpec::defaults());

} // namespace cnet
