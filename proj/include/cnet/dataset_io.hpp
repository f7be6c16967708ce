#pragma once

// Dataset documents: one JSON file holding the conceptual structure, its
// artifacts and its perspectives.
//
//   {
//     "format": "cnet-dataset",
//     "version": "1",
//     "metadata": {"name": "..."},                  (omitted when empty)
//     "structure": {
//       "nodes": [{"id", "label", "kind": "concept"|"attribute", "tags": [...]}],
//       "edges": [{"parent", "child"}]
//     },
//     "artifacts":    [{"id", "group", "era", "attributes": [...]}],
//     "perspectives": [{"id", "name", "attributes": [...]}]
//   }
//
// Saving is canonical: object keys sorted, nodes/artifacts/perspectives ordered
// by id, edges by (parent, child), two-space indentation, trailing newline.
// Perspectives therefore index weight vectors in id order.

#include "cnet/model.hpp"
#include "cnet/similarity.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace cnet {

inline constexpr const char* dataset_format_name = "cnet-dataset";
inline constexpr const char* dataset_format_version = "1";

struct Dataset {
    ConceptualStructure structure;
    std::vector<Artifact> artifacts;
    std::vector<Perspective> perspectives;
    std::map<std::string, std::string> metadata;

    friend bool operator==(const Dataset&, const Dataset&) = default;
};

// Sorts every list into canonical order.
Dataset canonicalize(Dataset dataset);

// Parses without validating. Throws ParseError with line and column.
Dataset parse_dataset(std::string_view text);

// Structure, artifact and perspective violations, plus duplicate and
// collision checks across categories.
ValidationReport validate_dataset(const Dataset& dataset);

// parse + validate + canonicalize. Throws ParseError, DuplicateIdError or
// ValidationError; the latter two name the offending entity.
Dataset load_dataset(std::string_view text);
Dataset load_dataset_file(const std::string& path);

std::string save_dataset(const Dataset& dataset);

ComparisonTable comparison_table(const Dataset& dataset, Closure closure = Closure::none);

// Stable content digest of the canonical serialization (16 hex digits).
std::string dataset_digest(const Dataset& dataset);

} // namespace cnet
