#pragma once

// JSON file formats for cubical spaces, graphs, traces, object specs,
// invariant reports and ladders, plus DOT and OFF exports.

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "cubetopo/digitize.hpp"
#include "cubetopo/graph.hpp"
#include "cubetopo/homotopy.hpp"
#include "cubetopo/invariants.hpp"
#include "cubetopo/lattice.hpp"

namespace cubetopo {

using Json = nlohmann::ordered_json;

Json read_json_file(const std::filesystem::path& path);
/// Pretty-printed with a trailing newline.
void write_json_file(const std::filesystem::path& path, const Json& value);
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

/// 64-bit FNV-1a as 16 hex digits.
std::string fnv1a64_hex(const std::string& bytes);

/// {"n", "side": "p/q", "cubes": [[...], ...]} with cubes sorted.
Json space_to_json(const CubicalSpace& space);
CubicalSpace space_from_json(const Json& j);

/// {"vertices": [...], "edges": [[a, b], ...]} in vertex order.
Json graph_to_json(const Graph& g);
Graph graph_from_json(const Json& j);

/// {"steps": [{"op", "element", "rim"}], "relabel": {...}}. Point steps
/// store the element as a string, edge steps as a two-label array.
Json trace_to_json(const TransformationTrace& trace);
TransformationTrace trace_from_json(const Json& j);

/// {"n", "kind", "params": {...}}. A sampled object names its voxel mask
/// file in params.mask, resolved against `base_dir`.
ObjectSpec object_spec_from_json(const Json& j, const std::filesystem::path& base_dir = {});
Json object_spec_to_json(const ObjectSpec& spec);
/// {"origin", "voxel_size", "dims", "data": [0/1, ...]}.
VoxelMask voxel_mask_from_json(const Json& j);
Json voxel_mask_to_json(const VoxelMask& mask);

struct Provenance {
  std::string source;
  std::string source_hash;
  std::optional<Side> side;
  std::string policy;
};

Json report_to_json(const InvariantReport& report, const Provenance& provenance = {});
InvariantReport report_from_json(const Json& j);

Json ladder_to_json(const ResolutionLadder& ladder, const StabilityResult& stability);

/// Graphviz description of the graph.
std::string to_dot(const Graph& g, const std::string& name = "G");
/// Boundary squares of the image (n = 3) or the squares themselves (n = 2).
std::string to_off(const CubicalSpace& space);

}  // namespace cubetopo
