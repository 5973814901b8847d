#pragma once

// Exact canonical forms for small graphs: colour refinement to an equitable
// partition, then individualization/refinement over the remaining cells with
// pruning by discovered automorphisms. Two graphs get equal forms iff they
// are isomorphic.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cubetopo/graph.hpp"

namespace cubetopo {

/// Hard cap on the vertex count accepted by canonicalization.
inline constexpr std::size_t kCanonicalSizeCap = 40;

/// Adjacency as one bit row per vertex (at most 64 vertices).
using MaskRows = std::vector<std::uint64_t>;

MaskRows to_mask_rows(const AdjacencyList& adj);

struct CanonicalForm {
  std::string bytes;

  auto operator<=>(const CanonicalForm&) const = default;
  bool operator==(const CanonicalForm&) const = default;
};

struct CanonicalLabeling {
  CanonicalForm form;
  /// order[k] is the vertex placed at canonical position k.
  std::vector<std::uint32_t> order;
};

/// Throws TooLarge above kCanonicalSizeCap vertices.
CanonicalLabeling canonical_labeling(const MaskRows& rows);
CanonicalLabeling canonical_labeling(const Graph& g);

CanonicalForm canonical_form(const Graph& g);
bool isomorphic(const Graph& g, const Graph& h);

/// map[v] = vertex of h matched to vertex v of g, if the graphs are isomorphic.
std::optional<std::vector<std::size_t>> find_isomorphism(const Graph& g, const Graph& h);

}  // namespace cubetopo

template <>
struct std::hash<cubetopo::CanonicalForm> {
  std::size_t operator()(const cubetopo::CanonicalForm& f) const noexcept {
    return std::hash<std::string>{}(f.bytes);
  }
};
