#pragma once

// Topological invariants used as independent oracles: Euler characteristics
// of the flag complex of a graph and of the image of a cubical space, and
// integer homology ranks of the flag complex.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cubetopo/graph.hpp"
#include "cubetopo/lattice.hpp"

namespace cubetopo {

/// Hard cap on the number of simplices enumerated from one graph.
inline constexpr std::size_t kCliqueCap = 20'000'000;

/// counts[k] = number of (k+1)-cliques, for cliques of at most `max_size`
/// vertices (0 = unbounded).
std::vector<std::size_t> clique_counts(const AdjacencyList& adj, std::size_t max_size = 0);
std::vector<std::size_t> clique_counts(const Graph& g, std::size_t max_size = 0);

std::int64_t euler_characteristic_graph(const Graph& g);
std::int64_t euler_characteristic_image(const CubicalSpace& space);

struct HomologyResult {
  std::vector<std::size_t> betti;          // b_0 .. b_max_dim
  std::vector<bool> torsion;               // per dimension
  std::vector<std::vector<std::string>> torsion_coefficients;  // invariant factors > 1
  bool truncated = false;                  // higher-dimensional cliques exist
};

/// Homology of the flag complex over Z. `max_dim` defaults to the top
/// dimension of the complex (clique number - 1).
HomologyResult homology_ranks(const Graph& g, std::optional<std::size_t> max_dim = std::nullopt);

struct InvariantReport {
  std::int64_t euler_graph = 0;
  std::optional<std::int64_t> euler_image;
  std::vector<std::size_t> betti;
  std::vector<bool> torsion;
  std::vector<std::vector<std::string>> torsion_coefficients;
  bool truncated = false;
  bool approximate = false;

  /// Betti numbers with trailing zeros removed.
  std::vector<std::size_t> betti_trimmed() const;
  bool has_torsion() const;
};

/// Invariants of a graph; homology up to the top dimension of its complex.
InvariantReport fingerprint(const Graph& g);
/// Invariants of a cubical space through its digital model; homology is
/// computed up to the ambient dimension n.
InvariantReport fingerprint(const CubicalSpace& space, bool approximate = false);

/// Equality of the topological content of two reports (Euler characteristics,
/// trimmed Betti numbers, torsion). euler_image is compared only when both
/// reports carry it.
bool same_invariants(const InvariantReport& a, const InvariantReport& b);

/// Human readable description of the first differing invariant, or empty.
std::string invariant_difference(const InvariantReport& a, const InvariantReport& b);

}  // namespace cubetopo
