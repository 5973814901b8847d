#pragma once

// Simple undirected graphs with opaque string labels, induced subgraphs,
// rims, balls, joins, and digital models of cubical spaces.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cubetopo/lattice.hpp"

namespace cubetopo {

/// Unlabeled adjacency lists (sorted, no loops); the working form for search.
using AdjacencyList = std::vector<std::vector<std::uint32_t>>;

/// Subgraph of `adj` induced by `vertices` (given in ascending order);
/// vertex k of the result is vertices[k].
AdjacencyList induced_adjacency(const AdjacencyList& adj, std::span<const std::uint32_t> vertices);

bool is_connected(const AdjacencyList& adj);

/// A simple undirected graph. Vertex order is significant only for
/// tie-breaking: it is the "label order" every deterministic choice uses.
class Graph {
 public:
  Graph() = default;
  Graph(std::vector<std::string> vertices,
        const std::vector<std::pair<std::string, std::string>>& edges);
  Graph(std::vector<std::string> vertices, AdjacencyList adjacency);

  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  std::size_t edge_count() const;

  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t v) const { return labels_[v]; }
  std::optional<std::size_t> find(std::string_view label) const;
  /// Like find(), but throws InvalidArgument for unknown labels.
  std::size_t index_of(std::string_view label) const;

  const AdjacencyList& adjacency() const { return adj_; }
  std::span<const std::uint32_t> neighbors(std::size_t v) const { return adj_[v]; }
  std::size_t degree(std::size_t v) const { return adj_[v].size(); }
  bool adjacent(std::size_t a, std::size_t b) const;

  /// Edges (i, j) with i < j in index order.
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;

  /// Subgraph induced by a set of vertex indices (any order; duplicates ignored).
  Graph induced(std::span<const std::size_t> vertices) const;
  Graph induced_labels(const std::vector<std::string>& labels) const;

  Graph without_vertex(std::size_t v) const;
  Graph with_vertex(std::string label, const std::vector<std::size_t>& neighbors) const;
  Graph with_edge(std::size_t a, std::size_t b) const;
  Graph without_edge(std::size_t a, std::size_t b) const;

  /// Same label set and same edge set; vertex order is ignored.
  bool operator==(const Graph& other) const;

 private:
  void rebuild_index();

  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::uint32_t> index_;
  AdjacencyList adj_;
};

bool is_connected(const Graph& g);

/// O(v): subgraph induced by the neighbors of v.
Graph rim_g(const Graph& g, std::string_view v);
/// U(v): subgraph induced by v and its neighbors.
Graph ball_g(const Graph& g, std::string_view v);

/// G (+) H. Colliding labels of H are made unique by appending "'".
Graph join(const Graph& g, const Graph& h);

/// A few named graphs used throughout tests and fixtures.
Graph complete_graph(std::size_t n, std::string_view prefix = "v");
Graph cycle_graph(std::size_t n, std::string_view prefix = "v");
Graph path_graph(std::size_t n, std::string_view prefix = "v");
/// The join of k+1 two-point edgeless graphs: C_4 for k = 1, octahedron for k = 2.
Graph minimal_sphere(std::size_t k);

/// The intersection graph G(M) together with the vertex -> cube bijection.
struct DigitalModel {
  Graph graph;
  std::vector<CubeId> cubes;  // cubes[v] is the cube of vertex v
};

/// One vertex per cube (labeled by CubeId::label, in cube order), an edge
/// whenever two cubes intersect.
DigitalModel intersection_graph(const CubicalSpace& space);

}  // namespace cubetopo
