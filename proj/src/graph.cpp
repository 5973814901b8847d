#include "cubetopo/graph.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace cubetopo {

AdjacencyList induced_adjacency(const AdjacencyList& adj, std::span<const std::uint32_t> vertices) {
  // position[v] = index in result, or -1
  std::vector<std::int32_t> position(adj.size(), -1);
  for (std::size_t k = 0; k < vertices.size(); ++k) position[vertices[k]] = static_cast<std::int32_t>(k);
  AdjacencyList out(vertices.size());
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    for (auto w : adj[vertices[k]]) {
      if (position[w] >= 0) out[k].push_back(static_cast<std::uint32_t>(position[w]));
    }
    std::sort(out[k].begin(), out[k].end());
  }
  return out;
}

bool is_connected(const AdjacencyList& adj) {
  if (adj.empty()) return false;
  std::vector<char> seen(adj.size(), 0);
  std::vector<std::uint32_t> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    for (auto w : adj[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
    }
  }
  return count == adj.size();
}

Graph::Graph(std::vector<std::string> vertices,
             const std::vector<std::pair<std::string, std::string>>& edges)
    : labels_(std::move(vertices)) {
  rebuild_index();
  adj_.assign(labels_.size(), {});
  for (const auto& [a, b] : edges) {
    auto ia = find(a);
    auto ib = find(b);
    if (!ia || !ib) throw InvalidArgument("edge endpoint is not a vertex: " + (ia ? b : a));
    if (*ia == *ib) throw InvalidArgument("self-loop at " + a);
    adj_[*ia].push_back(static_cast<std::uint32_t>(*ib));
    adj_[*ib].push_back(static_cast<std::uint32_t>(*ia));
  }
  for (auto& nbrs : adj_) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
  }
}

Graph::Graph(std::vector<std::string> vertices, AdjacencyList adjacency)
    : labels_(std::move(vertices)), adj_(std::move(adjacency)) {
  if (adj_.size() != labels_.size()) throw InvalidArgument("adjacency size differs from vertex count");
  rebuild_index();
  for (std::size_t v = 0; v < adj_.size(); ++v) {
    auto& nbrs = adj_[v];
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    for (auto w : nbrs) {
      if (w >= adj_.size() || w == v) throw InvalidArgument("bad adjacency entry");
    }
  }
  for (std::size_t v = 0; v < adj_.size(); ++v) {
    for (auto w : adj_[v]) {
      if (!std::binary_search(adj_[w].begin(), adj_[w].end(), static_cast<std::uint32_t>(v))) {
        throw InvalidArgument("adjacency is not symmetric");
      }
    }
  }
}

void Graph::rebuild_index() {
  index_.clear();
  index_.reserve(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!index_.emplace(labels_[i], static_cast<std::uint32_t>(i)).second) {
      throw InvalidArgument("duplicate vertex label: " + labels_[i]);
    }
  }
}

std::size_t Graph::edge_count() const {
  std::size_t total = 0;
  for (const auto& nbrs : adj_) total += nbrs.size();
  return total / 2;
}

std::optional<std::size_t> Graph::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Graph::index_of(std::string_view label) const {
  auto idx = find(label);
  if (!idx) throw InvalidArgument("unknown vertex: " + std::string(label));
  return *idx;
}

bool Graph::adjacent(std::size_t a, std::size_t b) const {
  const auto& nbrs = adj_[a];
  return std::binary_search(nbrs.begin(), nbrs.end(), static_cast<std::uint32_t>(b));
}

std::vector<std::pair<std::size_t, std::size_t>> Graph::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t v = 0; v < adj_.size(); ++v) {
    for (auto w : adj_[v]) {
      if (v < w) out.emplace_back(v, w);
    }
  }
  return out;
}

Graph Graph::induced(std::span<const std::size_t> vertices) const {
  std::vector<std::uint32_t> sorted;
  sorted.reserve(vertices.size());
  for (auto v : vertices) {
    if (v >= size()) throw InvalidArgument("induced: vertex index out of range");
    sorted.push_back(static_cast<std::uint32_t>(v));
  }
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<std::string> labels;
  labels.reserve(sorted.size());
  for (auto v : sorted) labels.push_back(labels_[v]);
  return Graph(std::move(labels), induced_adjacency(adj_, sorted));
}

Graph Graph::induced_labels(const std::vector<std::string>& labels) const {
  std::vector<std::size_t> idx;
  idx.reserve(labels.size());
  for (const auto& l : labels) idx.push_back(index_of(l));
  return induced(idx);
}

Graph Graph::without_vertex(std::size_t v) const {
  std::vector<std::size_t> keep;
  keep.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) {
    if (i != v) keep.push_back(i);
  }
  return induced(keep);
}

Graph Graph::with_vertex(std::string label, const std::vector<std::size_t>& neighbors) const {
  if (find(label)) throw InvalidArgument("vertex already present: " + label);
  auto labels = labels_;
  auto adj = adj_;
  const auto v = static_cast<std::uint32_t>(labels.size());
  labels.push_back(std::move(label));
  adj.emplace_back();
  for (auto w : neighbors) {
    if (w >= size()) throw InvalidArgument("with_vertex: neighbor out of range");
    adj[w].push_back(v);
    adj[v].push_back(static_cast<std::uint32_t>(w));
  }
  return Graph(std::move(labels), std::move(adj));
}

Graph Graph::with_edge(std::size_t a, std::size_t b) const {
  if (a == b || a >= size() || b >= size()) throw InvalidArgument("with_edge: bad endpoints");
  auto adj = adj_;
  adj[a].push_back(static_cast<std::uint32_t>(b));
  adj[b].push_back(static_cast<std::uint32_t>(a));
  return Graph(labels_, std::move(adj));
}

Graph Graph::without_edge(std::size_t a, std::size_t b) const {
  if (a >= size() || b >= size()) throw InvalidArgument("without_edge: bad endpoints");
  auto adj = adj_;
  std::erase(adj[a], static_cast<std::uint32_t>(b));
  std::erase(adj[b], static_cast<std::uint32_t>(a));
  return Graph(labels_, std::move(adj));
}

bool Graph::operator==(const Graph& other) const {
  if (size() != other.size() || edge_count() != other.edge_count()) return false;
  std::vector<std::size_t> map(size());
  for (std::size_t v = 0; v < size(); ++v) {
    auto w = other.find(labels_[v]);
    if (!w) return false;
    map[v] = *w;
  }
  for (auto [a, b] : edges()) {
    if (!other.adjacent(map[a], map[b])) return false;
  }
  return true;
}

bool is_connected(const Graph& g) { return is_connected(g.adjacency()); }

Graph rim_g(const Graph& g, std::string_view v) {
  auto idx = g.index_of(v);
  std::vector<std::size_t> nbrs(g.neighbors(idx).begin(), g.neighbors(idx).end());
  return g.induced(nbrs);
}

Graph ball_g(const Graph& g, std::string_view v) {
  auto idx = g.index_of(v);
  std::vector<std::size_t> members(g.neighbors(idx).begin(), g.neighbors(idx).end());
  members.push_back(idx);
  return g.induced(members);
}

Graph join(const Graph& g, const Graph& h) {
  std::vector<std::string> labels = g.labels();
  std::set<std::string> used(labels.begin(), labels.end());
  for (auto label : h.labels()) {
    while (used.count(label)) label += '\'';
    used.insert(label);
    labels.push_back(std::move(label));
  }
  const std::size_t offset = g.size();
  AdjacencyList adj(labels.size());
  for (std::size_t v = 0; v < g.size(); ++v) {
    for (auto w : g.neighbors(v)) adj[v].push_back(w);
    for (std::size_t u = 0; u < h.size(); ++u) adj[v].push_back(static_cast<std::uint32_t>(offset + u));
  }
  for (std::size_t u = 0; u < h.size(); ++u) {
    for (std::size_t v = 0; v < g.size(); ++v) adj[offset + u].push_back(static_cast<std::uint32_t>(v));
    for (auto w : h.neighbors(u)) adj[offset + u].push_back(static_cast<std::uint32_t>(offset + w));
  }
  return Graph(std::move(labels), std::move(adj));
}

namespace {

std::vector<std::string> numbered(std::size_t n, std::string_view prefix) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::string(prefix) + std::to_string(i));
  return labels;
}

}  // namespace

Graph complete_graph(std::size_t n, std::string_view prefix) {
  AdjacencyList adj(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) adj[i].push_back(static_cast<std::uint32_t>(j));
    }
  }
  return Graph(numbered(n, prefix), std::move(adj));
}

Graph cycle_graph(std::size_t n, std::string_view prefix) {
  if (n < 3) throw InvalidArgument("cycle_graph needs at least 3 vertices");
  AdjacencyList adj(n);
  for (std::size_t i = 0; i < n; ++i) {
    adj[i].push_back(static_cast<std::uint32_t>((i + 1) % n));
    adj[i].push_back(static_cast<std::uint32_t>((i + n - 1) % n));
  }
  return Graph(numbered(n, prefix), std::move(adj));
}

Graph path_graph(std::size_t n, std::string_view prefix) {
  AdjacencyList adj(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    adj[i].push_back(static_cast<std::uint32_t>(i + 1));
    adj[i + 1].push_back(static_cast<std::uint32_t>(i));
  }
  return Graph(numbered(n, prefix), std::move(adj));
}

Graph minimal_sphere(std::size_t k) {
  Graph out;
  for (std::size_t i = 0; i <= k; ++i) {
    Graph s0({"p" + std::to_string(i), "n" + std::to_string(i)}, AdjacencyList(2));
    out = (i == 0) ? s0 : join(out, s0);
  }
  return out;
}

DigitalModel intersection_graph(const CubicalSpace& space) {
  DigitalModel model;
  model.cubes = space.cubes();
  std::map<CubeId, std::uint32_t> index;
  std::vector<std::string> labels;
  labels.reserve(model.cubes.size());
  for (std::size_t i = 0; i < model.cubes.size(); ++i) {
    index.emplace(model.cubes[i], static_cast<std::uint32_t>(i));
    labels.push_back(model.cubes[i].label());
  }
  AdjacencyList adj(model.cubes.size());
  const auto offsets = neighbor_offsets(space.dim());
  const bool scan_offsets = offsets.size() < model.cubes.size();
  for (std::size_t i = 0; i < model.cubes.size(); ++i) {
    const auto& cube = model.cubes[i];
    if (scan_offsets) {
      for (const auto& off : offsets) {
        auto it = index.find(cube.translated(off));
        if (it != index.end()) adj[i].push_back(it->second);
      }
    } else {
      for (std::size_t j = 0; j < model.cubes.size(); ++j) {
        if (j != i && cubes_intersect(cube, model.cubes[j])) adj[i].push_back(static_cast<std::uint32_t>(j));
      }
    }
  }
  model.graph = Graph(std::move(labels), std::move(adj));
  return model;
}

}  // namespace cubetopo
