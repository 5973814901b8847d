#include "cubetopo/homotopy.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <mutex>
#include <numeric>
#include <set>
#include <unordered_set>

#include "cubetopo/invariants.hpp"

namespace cubetopo {

namespace {

// ---- bit-row helpers ------------------------------------------------------

inline std::uint64_t bit(unsigned v) { return std::uint64_t{1} << v; }

inline std::uint64_t above(unsigned v) { return v >= 63 ? 0 : ~((bit(v) << 1) - 1); }

std::uint64_t compress_bits(std::uint64_t x, std::uint64_t mask) {
  std::uint64_t out = 0;
  unsigned k = 0;
  while (mask) {
    unsigned b = static_cast<unsigned>(__builtin_ctzll(mask));
    if (x & bit(b)) out |= bit(k);
    ++k;
    mask &= mask - 1;
  }
  return out;
}

MaskRows mask_induced(const MaskRows& rows, std::uint64_t subset) {
  MaskRows out;
  out.reserve(static_cast<std::size_t>(__builtin_popcountll(subset)));
  for (std::uint64_t m = subset; m; m &= m - 1) {
    unsigned v = static_cast<unsigned>(__builtin_ctzll(m));
    out.push_back(compress_bits(rows[v] & subset, subset));
  }
  return out;
}

inline std::uint64_t all_bits(std::size_t n) { return n >= 64 ? ~std::uint64_t{0} : bit(static_cast<unsigned>(n)) - 1; }

MaskRows mask_without(const MaskRows& rows, unsigned v) {
  return mask_induced(rows, all_bits(rows.size()) & ~bit(v));
}

bool mask_connected(const MaskRows& rows) {
  if (rows.empty()) return false;
  std::uint64_t seen = 1, frontier = 1;
  while (frontier) {
    std::uint64_t next = 0;
    for (std::uint64_t m = frontier; m; m &= m - 1) next |= rows[static_cast<unsigned>(__builtin_ctzll(m))];
    frontier = next & ~seen;
    seen |= next;
  }
  return seen == all_bits(rows.size());
}

void euler_walk(const MaskRows& rows, std::uint64_t cand, std::size_t size, std::int64_t& chi) {
  chi += (size % 2 == 1) ? 1 : -1;
  for (std::uint64_t m = cand; m; m &= m - 1) {
    unsigned w = static_cast<unsigned>(__builtin_ctzll(m));
    euler_walk(rows, cand & rows[w] & above(w), size + 1, chi);
  }
}

std::int64_t mask_euler(const MaskRows& rows) {
  std::int64_t chi = 0;
  for (unsigned v = 0; v < rows.size(); ++v) euler_walk(rows, rows[v] & above(v), 1, chi);
  return chi;
}

// Vertices ordered by ascending degree, ties by index.
std::vector<unsigned> degree_order(const MaskRows& rows) {
  std::vector<unsigned> order(rows.size());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(), [&](unsigned a, unsigned b) {
    return __builtin_popcountll(rows[a]) < __builtin_popcountll(rows[b]);
  });
  return order;
}

std::int64_t adjacency_euler(const AdjacencyList& adj) {
  std::int64_t chi = 0;
  auto counts = clique_counts(adj);
  for (std::size_t k = 0; k < counts.size(); ++k) chi += (k % 2 == 0 ? 1 : -1) * static_cast<std::int64_t>(counts[k]);
  return chi;
}

}  // namespace

// ---- engine ---------------------------------------------------------------

ContractibilityEngine::ContractibilityEngine(std::size_t max_states) : max_states_(max_states) {}

std::size_t ContractibilityEngine::cache_size() const {
  std::shared_lock lock(mutex_);
  return memo_.size();
}

void ContractibilityEngine::clear_cache() {
  std::unique_lock lock(mutex_);
  memo_.clear();
  hits_ = 0;
}

bool ContractibilityEngine::small_contractible(const MaskRows& rows) {
  const std::size_t n = rows.size();
  if (n == 0) return false;
  if (n == 1) return true;
  if (!mask_connected(rows)) return false;
  if (n == 2) return true;
  // A cone v (+) H reduces to v: every other vertex has a cone as rim.
  for (auto r : rows) {
    if (static_cast<std::size_t>(__builtin_popcountll(r)) == n - 1) return true;
  }
  auto key = canonical_labeling(rows).form.bytes;
  {
    std::shared_lock lock(mutex_);
    if (auto it = memo_.find(key); it != memo_.end()) {
      ++hits_;
      return it->second;
    }
  }
  bool result = false;
  // Simple-point deletion keeps the Euler characteristic, and K_1 has 1.
  if (mask_euler(rows) == 1) {
    for (auto v : degree_order(rows)) {
      if (small_simple(rows, v) && small_contractible(mask_without(rows, v))) {
        result = true;
        break;
      }
    }
  }
  std::unique_lock lock(mutex_);
  memo_.emplace(std::move(key), result);
  return result;
}

bool ContractibilityEngine::small_simple(const MaskRows& rows, unsigned v) {
  if (rows[v] == 0) return false;
  return small_contractible(mask_induced(rows, rows[v]));
}

std::optional<std::vector<std::uint32_t>> ContractibilityEngine::small_sequence(MaskRows rows) {
  if (!small_contractible(rows)) return std::nullopt;
  std::vector<std::uint32_t> ids(rows.size());
  std::iota(ids.begin(), ids.end(), 0u);
  std::vector<std::uint32_t> seq;
  while (rows.size() > 1) {
    bool advanced = false;
    for (auto v : degree_order(rows)) {
      auto rest = mask_without(rows, v);
      if (small_simple(rows, v) && small_contractible(rest)) {
        seq.push_back(ids[v]);
        ids.erase(ids.begin() + v);
        rows = std::move(rest);
        advanced = true;
        break;
      }
    }
    if (!advanced) throw Error("internal: contractible graph without a contractible reduction");
  }
  return seq;
}

namespace {

struct BitsHash {
  std::size_t operator()(const std::vector<std::uint64_t>& v) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto x : v) h = (h ^ x) * 1099511628211ull;
    return h;
  }
};

}  // namespace

std::optional<std::vector<std::uint32_t>> ContractibilityEngine::large_sequence(const AdjacencyList& g) {
  const std::size_t n = g.size();
  std::vector<char> alive(n, 1);
  std::vector<std::uint32_t> degree(n);
  for (std::size_t v = 0; v < n; ++v) degree[v] = static_cast<std::uint32_t>(g[v].size());
  std::size_t remaining = n;
  std::size_t states = 0;
  std::unordered_set<std::vector<std::uint64_t>, BitsHash> failed;
  std::vector<std::uint32_t> path;

  auto alive_key = [&] {
    std::vector<std::uint64_t> key((n + 63) / 64, 0);
    for (std::size_t v = 0; v < n; ++v) {
      if (alive[v]) key[v / 64] |= bit(static_cast<unsigned>(v % 64));
    }
    return key;
  };
  auto alive_rim = [&](std::uint32_t v) {
    std::vector<std::uint32_t> rim;
    for (auto w : g[v]) {
      if (alive[w]) rim.push_back(w);
    }
    return rim;
  };

  std::function<bool()> dfs = [&]() -> bool {
    if (remaining <= kCanonicalSizeCap) {
      std::vector<std::uint32_t> rest;
      for (std::uint32_t v = 0; v < n; ++v) {
        if (alive[v]) rest.push_back(v);
      }
      auto tail = small_sequence(to_mask_rows(induced_adjacency(g, rest)));
      if (!tail) return false;
      for (auto local : *tail) path.push_back(rest[local]);
      return true;
    }
    auto key = alive_key();
    if (failed.count(key)) return false;
    if (++states > max_states_) {
      throw BudgetExceeded("contractibility search exceeded " + std::to_string(max_states_) + " states");
    }
    std::vector<std::uint32_t> candidates;
    for (std::uint32_t v = 0; v < n; ++v) {
      if (alive[v]) candidates.push_back(v);
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](auto a, auto b) { return degree[a] < degree[b]; });
    for (auto v : candidates) {
      auto rim = alive_rim(v);
      if (rim.empty() || !contractible(induced_adjacency(g, rim))) continue;
      alive[v] = 0;
      --remaining;
      for (auto w : rim) --degree[w];
      path.push_back(v);
      if (dfs()) return true;
      path.pop_back();
      for (auto w : rim) ++degree[w];
      ++remaining;
      alive[v] = 1;
    }
    failed.insert(std::move(key));
    return false;
  };

  if (!dfs()) return std::nullopt;
  return path;
}

bool ContractibilityEngine::contractible(const AdjacencyList& g) {
  if (g.size() <= kCanonicalSizeCap) return small_contractible(to_mask_rows(g));
  return deletion_sequence(g).has_value();
}

bool ContractibilityEngine::simple_point(const AdjacencyList& g, std::uint32_t v) {
  if (v >= g.size()) throw InvalidArgument("simple_point: vertex out of range");
  if (g[v].empty()) return false;
  return contractible(induced_adjacency(g, g[v]));
}

std::optional<std::vector<std::uint32_t>> ContractibilityEngine::deletion_sequence(const AdjacencyList& g) {
  if (g.empty()) return std::nullopt;
  if (g.size() == 1) return std::vector<std::uint32_t>{};
  if (g.size() <= kCanonicalSizeCap) return small_sequence(to_mask_rows(g));
  if (!is_connected(g)) return std::nullopt;
  if (adjacency_euler(g) != 1) return std::nullopt;
  return large_sequence(g);
}

ContractibilityEngine& shared_engine() {
  static ContractibilityEngine engine;
  return engine;
}

// ---- labeled graph API ----------------------------------------------------

bool is_simple_point(const Graph& g, std::string_view v) {
  return shared_engine().simple_point(g.adjacency(), static_cast<std::uint32_t>(g.index_of(v)));
}

namespace {

std::vector<std::uint32_t> common_neighbors(const Graph& g, std::size_t a, std::size_t b) {
  std::vector<std::uint32_t> common;
  std::set_intersection(g.neighbors(a).begin(), g.neighbors(a).end(), g.neighbors(b).begin(),
                        g.neighbors(b).end(), std::back_inserter(common));
  return common;
}

bool contractible_subset(const Graph& g, const std::vector<std::uint32_t>& subset) {
  if (subset.empty()) return false;
  return shared_engine().contractible(induced_adjacency(g.adjacency(), subset));
}

std::vector<std::string> labels_of(const Graph& g, const std::vector<std::uint32_t>& idx) {
  std::vector<std::string> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(g.label(i));
  return out;
}

std::vector<std::string> sorted_copy(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

bool is_simple_edge(const Graph& g, std::string_view a, std::string_view b) {
  auto ia = g.index_of(a);
  auto ib = g.index_of(b);
  if (!g.adjacent(ia, ib)) throw InvalidArgument("unknown edge: " + std::string(a) + "-" + std::string(b));
  return contractible_subset(g, common_neighbors(g, ia, ib));
}

std::string_view to_string(StepOp op) {
  switch (op) {
    case StepOp::DeletePoint: return "delete_point";
    case StepOp::AttachPoint: return "attach_point";
    case StepOp::DeleteEdge: return "delete_edge";
    case StepOp::AttachEdge: return "attach_edge";
  }
  return "?";
}

StepOp parse_step_op(std::string_view text) {
  if (text == "delete_point") return StepOp::DeletePoint;
  if (text == "attach_point") return StepOp::AttachPoint;
  if (text == "delete_edge") return StepOp::DeleteEdge;
  if (text == "attach_edge") return StepOp::AttachEdge;
  throw InvalidArgument("unknown trace op: " + std::string(text));
}

CompressionPolicy CompressionPolicy::parse(std::string_view text) {
  CompressionPolicy p;
  if (text == "min-degree" || text.empty()) {
    p.kind = Kind::MinDegree;
  } else if (text == "max-degree") {
    p.kind = Kind::MaxDegree;
  } else if (text == "label-order") {
    p.kind = Kind::LabelOrder;
  } else if (text.rfind("priority:", 0) == 0) {
    p.kind = Kind::Priority;
    auto rest = text.substr(9);
    std::size_t start = 0;
    while (start <= rest.size()) {
      auto pos = rest.find(';', start);
      auto item = rest.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
      if (!item.empty()) p.priority.emplace_back(item);
      if (pos == std::string_view::npos) break;
      start = pos + 1;
    }
  } else {
    throw InvalidArgument("unknown policy: " + std::string(text));
  }
  return p;
}

std::string CompressionPolicy::name() const {
  switch (kind) {
    case Kind::MinDegree: return "min-degree";
    case Kind::MaxDegree: return "max-degree";
    case Kind::LabelOrder: return "label-order";
    case Kind::Priority: {
      std::string s = "priority:";
      for (std::size_t i = 0; i < priority.size(); ++i) s += (i ? ";" : "") + priority[i];
      return s;
    }
  }
  return "?";
}

namespace {

using SimpleTest = std::function<bool(std::uint32_t v, const std::vector<std::uint32_t>& rim)>;

struct CompressionRun {
  std::vector<char> alive;
  TransformationTrace trace;
};

// Deletes simple points of `g` in policy order until none is left. The
// simplicity of a vertex is cached until one of its neighbors is deleted.
CompressionRun run_compression(const Graph& g, const CompressionPolicy& policy, const SimpleTest& is_simple) {
  const std::size_t n = g.size();
  CompressionRun run;
  run.alive.assign(n, 1);
  std::vector<std::uint32_t> degree(n);
  for (std::size_t v = 0; v < n; ++v) degree[v] = static_cast<std::uint32_t>(g.degree(v));

  std::vector<char> deferred(n, 0);
  for (const auto& l : policy.deferred) deferred[g.index_of(l)] = 1;
  std::vector<std::size_t> rank(n);
  for (std::size_t v = 0; v < n; ++v) rank[v] = n + v;
  if (policy.kind == CompressionPolicy::Kind::Priority) {
    for (std::size_t k = 0; k < policy.priority.size(); ++k) {
      auto v = g.index_of(policy.priority[k]);
      rank[v] = std::min(rank[v], k);
    }
  }

  std::vector<signed char> cache(n, -1);
  auto alive_rim = [&](std::uint32_t v) {
    std::vector<std::uint32_t> rim;
    for (auto w : g.neighbors(v)) {
      if (run.alive[w]) rim.push_back(w);
    }
    return rim;
  };

  std::vector<std::uint32_t> order;
  while (true) {
    order.clear();
    for (std::uint32_t v = 0; v < n; ++v) {
      if (run.alive[v]) order.push_back(v);
    }
    if (order.size() <= 1) break;
    auto key = [&](std::uint32_t v) {
      std::int64_t primary = 0;
      switch (policy.kind) {
        case CompressionPolicy::Kind::MinDegree: primary = degree[v]; break;
        case CompressionPolicy::Kind::MaxDegree: primary = -static_cast<std::int64_t>(degree[v]); break;
        case CompressionPolicy::Kind::LabelOrder: primary = 0; break;
        case CompressionPolicy::Kind::Priority: primary = static_cast<std::int64_t>(rank[v]); break;
      }
      return std::tuple(deferred[v], primary, v);
    };
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return key(a) < key(b); });

    bool deleted = false;
    for (auto v : order) {
      auto rim = alive_rim(v);
      if (cache[v] < 0) cache[v] = (!rim.empty() && is_simple(v, rim)) ? 1 : 0;
      if (!cache[v]) continue;
      run.alive[v] = 0;
      for (auto w : rim) {
        --degree[w];
        cache[w] = -1;
      }
      run.trace.steps.push_back({StepOp::DeletePoint, {g.label(v)}, labels_of(g, rim)});
      deleted = true;
      break;
    }
    if (!deleted) break;
  }
  return run;
}

Graph alive_subgraph(const Graph& g, const std::vector<char>& alive) {
  std::vector<std::size_t> keep;
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (alive[v]) keep.push_back(v);
  }
  return g.induced(keep);
}

}  // namespace

std::pair<Graph, TransformationTrace> compress_graph(const Graph& g, const CompressionPolicy& policy) {
  auto& engine = shared_engine();
  auto run = run_compression(g, policy, [&](std::uint32_t, const std::vector<std::uint32_t>& rim) {
    return engine.contractible(induced_adjacency(g.adjacency(), rim));
  });
  return {alive_subgraph(g, run.alive), std::move(run.trace)};
}

ContractibilityVerdict is_contractible(const Graph& g) {
  ContractibilityVerdict verdict;
  auto seq = shared_engine().deletion_sequence(g.adjacency());
  if (seq) {
    verdict.contractible = true;
    verdict.deletion_order = labels_of(g, *seq);
    verdict.remainder = g;
    for (const auto& l : verdict.deletion_order) verdict.remainder = verdict.remainder.without_vertex(verdict.remainder.index_of(l));
  } else {
    verdict.remainder = compress_graph(g).first;
  }
  return verdict;
}

Graph apply_step(const Graph& g, const TraceStep& step) {
  auto fail = [&](const std::string& why, std::vector<std::string> rim) -> Graph {
    throw CertificateError(std::string(to_string(step.op)) + " " +
                               (step.element.empty() ? std::string("?") : step.element.front()) + ": " + why,
                           std::move(rim));
  };
  const bool point = step.op == StepOp::DeletePoint || step.op == StepOp::AttachPoint;
  if (point && step.element.size() != 1) return fail("point steps name exactly one vertex", step.rim);
  if (!point && step.element.size() != 2) return fail("edge steps name exactly two vertices", step.rim);

  switch (step.op) {
    case StepOp::DeletePoint: {
      auto v = g.find(step.element[0]);
      if (!v) return fail("vertex not present", step.rim);
      std::vector<std::uint32_t> rim(g.neighbors(*v).begin(), g.neighbors(*v).end());
      auto actual = labels_of(g, rim);
      if (sorted_copy(actual) != sorted_copy(step.rim)) return fail("recorded rim does not match", actual);
      if (!contractible_subset(g, rim)) return fail("rim is not contractible", actual);
      return g.without_vertex(*v);
    }
    case StepOp::AttachPoint: {
      if (g.find(step.element[0])) return fail("vertex already present", step.rim);
      std::vector<std::uint32_t> rim;
      for (const auto& l : step.rim) {
        auto w = g.find(l);
        if (!w) return fail("rim vertex " + l + " not present", step.rim);
        rim.push_back(static_cast<std::uint32_t>(*w));
      }
      std::sort(rim.begin(), rim.end());
      rim.erase(std::unique(rim.begin(), rim.end()), rim.end());
      if (!contractible_subset(g, rim)) return fail("rim is not contractible", step.rim);
      return g.with_vertex(step.element[0], std::vector<std::size_t>(rim.begin(), rim.end()));
    }
    case StepOp::DeleteEdge:
    case StepOp::AttachEdge: {
      auto a = g.find(step.element[0]);
      auto b = g.find(step.element[1]);
      if (!a || !b || *a == *b) return fail("edge endpoints not present", step.rim);
      const bool present = g.adjacent(*a, *b);
      if (step.op == StepOp::DeleteEdge && !present) return fail("edge not present", step.rim);
      if (step.op == StepOp::AttachEdge && present) return fail("edge already present", step.rim);
      auto common = common_neighbors(g, *a, *b);
      auto actual = labels_of(g, common);
      if (sorted_copy(actual) != sorted_copy(step.rim)) return fail("recorded common neighborhood does not match", actual);
      if (!contractible_subset(g, common)) return fail("common neighborhood is not contractible", actual);
      return step.op == StepOp::DeleteEdge ? g.without_edge(*a, *b) : g.with_edge(*a, *b);
    }
  }
  return g;
}

Graph replay(const Graph& g, const TransformationTrace& trace) {
  Graph cur = g;
  for (const auto& step : trace.steps) cur = apply_step(cur, step);
  if (trace.relabel.empty()) return cur;
  auto labels = cur.labels();
  for (auto& l : labels) {
    if (auto it = trace.relabel.find(l); it != trace.relabel.end()) l = it->second;
  }
  return Graph(std::move(labels), cur.adjacency());
}

Graph delete_point(const Graph& g, std::string_view v) {
  auto idx = g.index_of(v);
  std::vector<std::uint32_t> rim(g.neighbors(idx).begin(), g.neighbors(idx).end());
  return apply_step(g, {StepOp::DeletePoint, {std::string(v)}, labels_of(g, rim)});
}

Graph attach_point(const Graph& g, const std::string& v, const std::vector<std::string>& rim) {
  return apply_step(g, {StepOp::AttachPoint, {v}, rim});
}

Graph delete_edge(const Graph& g, std::string_view a, std::string_view b) {
  auto common = common_neighbors(g, g.index_of(a), g.index_of(b));
  return apply_step(g, {StepOp::DeleteEdge, {std::string(a), std::string(b)}, labels_of(g, common)});
}

Graph attach_edge(const Graph& g, std::string_view a, std::string_view b) {
  auto common = common_neighbors(g, g.index_of(a), g.index_of(b));
  return apply_step(g, {StepOp::AttachEdge, {std::string(a), std::string(b)}, labels_of(g, common)});
}

TransformationTrace reversed(const TransformationTrace& trace) {
  if (!trace.relabel.empty()) throw InvalidArgument("cannot reverse a trace with a relabel map");
  TransformationTrace out;
  for (auto it = trace.steps.rbegin(); it != trace.steps.rend(); ++it) {
    TraceStep s = *it;
    switch (s.op) {
      case StepOp::DeletePoint: s.op = StepOp::AttachPoint; break;
      case StepOp::AttachPoint: s.op = StepOp::DeletePoint; break;
      case StepOp::DeleteEdge: s.op = StepOp::AttachEdge; break;
      case StepOp::AttachEdge: s.op = StepOp::DeleteEdge; break;
    }
    out.steps.push_back(std::move(s));
  }
  return out;
}

// ---- cubical spaces -------------------------------------------------------

namespace {

// Simplicity of a cube depends only on which of its 3^n - 1 neighbor slots
// are occupied; for n <= 3 that pattern fits in 26 bits and is cached.
class LocalConfigCache {
 public:
  bool simple(std::size_t n, std::uint32_t pattern) {
    {
      std::shared_lock lock(mutex_);
      auto& table = tables_[n];
      if (auto it = table.find(pattern); it != table.end()) return it->second;
    }
    const auto& offsets = offsets_for(n);
    std::vector<CubeId> cubes;
    for (std::size_t k = 0; k < offsets.size(); ++k) {
      if (pattern >> k & 1u) cubes.emplace_back(offsets[k]);
    }
    bool result = false;
    if (!cubes.empty()) {
      CubicalSpace rim_space(n, Side(1), cubes);
      result = shared_engine().contractible(intersection_graph(rim_space).graph.adjacency());
    }
    std::unique_lock lock(mutex_);
    tables_[n].emplace(pattern, result);
    return result;
  }

  const std::vector<std::vector<Coord>>& offsets_for(std::size_t n) {
    std::call_once(once_[n], [&] { offsets_[n] = neighbor_offsets(n); });
    return offsets_[n];
  }

 private:
  std::shared_mutex mutex_;
  std::unordered_map<std::uint32_t, bool> tables_[4];
  std::vector<std::vector<Coord>> offsets_[4];
  std::once_flag once_[4];
};

LocalConfigCache& local_cache() {
  static LocalConfigCache cache;
  return cache;
}

// Slot index of neighbor `b` around `a` (Chebyshev distance 1), matching
// the enumeration order of neighbor_offsets().
std::uint32_t slot_of(const CubeId& a, const CubeId& b) {
  // neighbor_offsets enumerates {-1,0,1}^n with axis 0 fastest, skipping zero.
  std::uint32_t code = 0, scale = 1;
  std::uint32_t zero_code = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    code += static_cast<std::uint32_t>(b[i] - a[i] + 1) * scale;
    zero_code += 1 * scale;
    scale *= 3;
  }
  return code < zero_code ? code : code - 1;
}

bool cube_rim_simple(const DigitalModel& model, std::uint32_t v, const std::vector<std::uint32_t>& rim) {
  const std::size_t n = model.cubes[v].dim();
  if (n <= 3) {
    std::uint32_t pattern = 0;
    for (auto w : rim) pattern |= 1u << slot_of(model.cubes[v], model.cubes[w]);
    return local_cache().simple(n, pattern);
  }
  return shared_engine().contractible(induced_adjacency(model.graph.adjacency(), rim));
}

}  // namespace

bool is_simple_cube(const CubicalSpace& space, const CubeId& cube) {
  if (!space.contains(cube)) throw InvalidArgument("is_simple_cube: cube " + cube.label() + " not in space");
  auto r = rim(space, cube);
  if (r.empty()) return false;
  return shared_engine().contractible(intersection_graph(r).graph.adjacency());
}

std::pair<CubicalSpace, TransformationTrace> compress_space(const CubicalSpace& space,
                                                            const CompressionPolicy& policy) {
  auto model = intersection_graph(space);
  auto run = run_compression(model.graph, policy, [&](std::uint32_t v, const std::vector<std::uint32_t>& rim) {
    return cube_rim_simple(model, v, rim);
  });
  CubicalSpace out(space.dim(), space.side());
  for (std::size_t v = 0; v < model.cubes.size(); ++v) {
    if (run.alive[v]) out.insert(model.cubes[v]);
  }
  return {std::move(out), std::move(run.trace)};
}

SpaceVerdict is_contractible_space(const CubicalSpace& space) {
  if (space.empty()) throw InvalidArgument("is_contractible_space: empty space");
  SpaceVerdict verdict{false, {}, CubicalSpace(space.dim(), space.side())};
  auto [compressed, trace] = compress_space(space);
  if (compressed.size() == 1) {
    verdict.contractible = true;
    for (const auto& s : trace.steps) verdict.deletion_order.push_back(CubeId::parse_label(s.element[0]));
    verdict.remainder = compressed;
    return verdict;
  }
  // Greedy compression stalled; decide exactly on the digital model.
  auto model = intersection_graph(space);
  auto seq = shared_engine().deletion_sequence(model.graph.adjacency());
  if (seq) {
    verdict.contractible = true;
    CubicalSpace rest = space;
    for (auto v : *seq) {
      verdict.deletion_order.push_back(model.cubes[v]);
      rest.erase(model.cubes[v]);
    }
    verdict.remainder = rest;
  } else {
    verdict.remainder = compressed;
  }
  return verdict;
}

namespace {

class StrictSearch {
 public:
  explicit StrictSearch(std::size_t max_states) : max_states_(max_states) {}

  bool contractible(const std::vector<CubeId>& cubes) {
    if (cubes.empty()) return false;
    if (cubes.size() == 1) return true;
    auto key = normalized_key(cubes);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    if (++states_ > max_states_) {
      throw BudgetExceeded("strict cubical recursion exceeded " + std::to_string(max_states_) + " states");
    }
    bool result = false;
    for (std::size_t i = 0; i < cubes.size() && !result; ++i) {
      std::vector<CubeId> rim_cubes, rest;
      for (std::size_t j = 0; j < cubes.size(); ++j) {
        if (j == i) continue;
        rest.push_back(cubes[j]);
        if (cubes_intersect(cubes[i], cubes[j])) rim_cubes.push_back(cubes[j]);
      }
      result = !rim_cubes.empty() && contractible(rim_cubes) && contractible(rest);
    }
    memo_.emplace(std::move(key), result);
    return result;
  }

 private:
  static std::vector<Coord> normalized_key(const std::vector<CubeId>& cubes) {
    const std::size_t n = cubes.front().dim();
    std::vector<Coord> lo(cubes.front().coords().begin(), cubes.front().coords().end());
    for (const auto& c : cubes) {
      for (std::size_t i = 0; i < n; ++i) lo[i] = std::min(lo[i], c[i]);
    }
    std::vector<Coord> key;
    key.reserve(cubes.size() * n);
    for (const auto& c : cubes) {  // cubes arrive sorted; translation keeps the order
      for (std::size_t i = 0; i < n; ++i) key.push_back(c[i] - lo[i]);
    }
    return key;
  }

  std::size_t max_states_;
  std::size_t states_ = 0;
  std::map<std::vector<Coord>, bool> memo_;
};

}  // namespace

bool is_contractible_space_strict(const CubicalSpace& space, std::size_t max_states) {
  return StrictSearch(max_states).contractible(space.cubes());
}

CubicalSpace replay_space(const CubicalSpace& space, const TransformationTrace& trace) {
  if (!trace.relabel.empty()) throw InvalidArgument("cubical traces carry no relabel map");
  CubicalSpace cur = space;
  for (const auto& step : trace.steps) {
    auto fail = [&](const std::string& why, std::vector<std::string> rim) {
      throw CertificateError(std::string(to_string(step.op)) + " " +
                                 (step.element.empty() ? std::string("?") : step.element.front()) + ": " + why,
                             std::move(rim));
    };
    if (step.op != StepOp::DeletePoint && step.op != StepOp::AttachPoint) {
      fail("edge steps do not apply to cubical spaces", step.rim);
    }
    if (step.element.size() != 1) fail("point steps name exactly one cube", step.rim);
    auto cube = CubeId::parse_label(step.element[0]);
    if (cube.dim() != cur.dim()) fail("cube dimension mismatch", step.rim);
    const bool attach = step.op == StepOp::AttachPoint;
    if (attach == cur.contains(cube)) fail(attach ? "cube already present" : "cube not present", step.rim);
    CubicalSpace with = cur;
    with.insert(cube);
    auto r = rim(with, cube);
    std::vector<std::string> actual;
    for (const auto& c : r) actual.push_back(c.label());
    if (sorted_copy(actual) != sorted_copy(step.rim)) fail("recorded rim does not match", actual);
    if (r.empty() || !shared_engine().contractible(intersection_graph(r).graph.adjacency())) {
      fail("rim is not contractible", actual);
    }
    if (attach) {
      cur = std::move(with);
    } else {
      cur.erase(cube);
    }
  }
  return cur;
}

// ---- equivalence ----------------------------------------------------------

std::string_view to_string(Equivalence e) {
  switch (e) {
    case Equivalence::Yes: return "yes";
    case Equivalence::No: return "no";
    case Equivalence::Unknown: return "unknown";
  }
  return "?";
}

namespace {

constexpr std::size_t kMaxAttachRim = 4;

std::string fresh_label(const Graph& g, std::size_t& counter) {
  while (true) {
    std::string l = "t" + std::to_string(counter++);
    if (!g.find(l)) return l;
  }
}

// Appends `steps` (written against graph `from`, H-side labels) to `out`,
// translating labels through `h_to_g`; `state` is the G-side graph isomorphic
// to `from`. Fills the relabel map that renames the end state to H labels.
void splice(TransformationTrace& out, const Graph& state, std::map<std::string, std::string> h_to_g,
            const std::vector<TraceStep>& steps) {
  std::set<std::string> used(state.labels().begin(), state.labels().end());
  auto map_label = [&](const std::string& h) {
    auto it = h_to_g.find(h);
    if (it == h_to_g.end()) throw Error("internal: unmapped label in trace splice: " + h);
    return it->second;
  };
  for (const auto& step : steps) {
    TraceStep t;
    t.op = step.op;
    if (step.op == StepOp::AttachPoint) {
      std::string candidate = step.element[0];
      while (used.count(candidate)) candidate += '\'';
      used.insert(candidate);
      for (const auto& r : step.rim) t.rim.push_back(map_label(r));
      h_to_g[step.element[0]] = candidate;
      t.element.push_back(candidate);
    } else {
      for (const auto& e : step.element) t.element.push_back(map_label(e));
      for (const auto& r : step.rim) t.rim.push_back(map_label(r));
      if (step.op == StepOp::DeletePoint) {
        used.erase(t.element[0]);
        h_to_g.erase(step.element[0]);
      }
    }
    out.steps.push_back(std::move(t));
  }
  for (const auto& [h, g] : h_to_g) {
    if (g != h) out.relabel[g] = h;
  }
}

struct SearchNode {
  Graph graph;
  int parent = -1;
  std::vector<TraceStep> steps;  // from parent to this node
};

// Steps from the root of `nodes` to node `idx`.
std::vector<TraceStep> path_to(const std::vector<SearchNode>& nodes, int idx) {
  std::vector<const SearchNode*> chain;
  for (int i = idx; i >= 0; i = nodes[static_cast<std::size_t>(i)].parent) chain.push_back(&nodes[static_cast<std::size_t>(i)]);
  std::vector<TraceStep> out;
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    out.insert(out.end(), (*it)->steps.begin(), (*it)->steps.end());
  }
  return out;
}

// Connected vertex subsets of size <= limit that induce contractible graphs.
std::vector<std::uint64_t> contractible_rims(const Graph& g, std::size_t limit) {
  const auto rows = to_mask_rows(g.adjacency());
  std::unordered_set<std::uint64_t> seen;
  std::vector<std::uint64_t> layer;
  for (unsigned v = 0; v < rows.size(); ++v) {
    layer.push_back(bit(v));
    seen.insert(bit(v));
  }
  std::vector<std::uint64_t> all = layer;
  for (std::size_t size = 2; size <= limit; ++size) {
    std::vector<std::uint64_t> next;
    for (auto s : layer) {
      std::uint64_t frontier = 0;
      for (std::uint64_t m = s; m; m &= m - 1) frontier |= rows[static_cast<unsigned>(__builtin_ctzll(m))];
      frontier &= ~s;
      for (std::uint64_t m = frontier; m; m &= m - 1) {
        auto t = s | (m & -m);
        if (seen.insert(t).second) next.push_back(t);
      }
    }
    all.insert(all.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  std::vector<std::uint64_t> out;
  auto& engine = shared_engine();
  for (auto s : all) {
    if (engine.contractible(induced_adjacency(g.adjacency(), [&] {
          std::vector<std::uint32_t> idx;
          for (std::uint64_t m = s; m; m &= m - 1) idx.push_back(static_cast<std::uint32_t>(__builtin_ctzll(m)));
          return idx;
        }()))) {
      out.push_back(s);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Neighbours of a state: one contractible transformation followed by
// min-degree compression that leaves a freshly attached point for last.
std::vector<std::pair<Graph, std::vector<TraceStep>>> expand(const Graph& g, std::size_t& counter) {
  std::vector<std::pair<Graph, std::vector<TraceStep>>> out;
  auto finish = [&](Graph next, TraceStep step, std::vector<std::string> deferred) {
    CompressionPolicy policy;
    policy.deferred = std::move(deferred);
    auto [compressed, trace] = compress_graph(next, policy);
    std::vector<TraceStep> steps{std::move(step)};
    steps.insert(steps.end(), trace.steps.begin(), trace.steps.end());
    out.emplace_back(std::move(compressed), std::move(steps));
  };

  if (g.size() + 1 <= kCanonicalSizeCap) {
    for (auto s : contractible_rims(g, kMaxAttachRim)) {
      std::vector<std::size_t> rim;
      std::vector<std::string> rim_labels;
      for (std::uint64_t m = s; m; m &= m - 1) {
        auto v = static_cast<std::size_t>(__builtin_ctzll(m));
        rim.push_back(v);
        rim_labels.push_back(g.label(v));
      }
      auto label = fresh_label(g, counter);
      finish(g.with_vertex(label, rim), {StepOp::AttachPoint, {label}, rim_labels}, {label});
    }
  }
  for (auto [a, b] : g.edges()) {
    auto common = common_neighbors(g, a, b);
    if (contractible_subset(g, common)) {
      finish(g.without_edge(a, b), {StepOp::DeleteEdge, {g.label(a), g.label(b)}, labels_of(g, common)}, {});
    }
  }
  for (std::size_t a = 0; a < g.size(); ++a) {
    for (std::size_t b = a + 1; b < g.size(); ++b) {
      if (g.adjacent(a, b)) continue;
      auto common = common_neighbors(g, a, b);
      if (contractible_subset(g, common)) {
        finish(g.with_edge(a, b), {StepOp::AttachEdge, {g.label(a), g.label(b)}, labels_of(g, common)}, {});
      }
    }
  }
  return out;
}

}  // namespace

EquivalenceResult homotopy_equivalent(const Graph& g, const Graph& h, std::size_t budget) {
  EquivalenceResult result;
  auto diff = invariant_difference(fingerprint(g), fingerprint(h));
  if (!diff.empty()) {
    result.verdict = Equivalence::No;
    result.witness = diff;
    return result;
  }
  if (g == h) {
    result.verdict = Equivalence::Yes;
    return result;
  }

  auto [cg, tg] = compress_graph(g);
  auto [ch, th] = compress_graph(h);
  if (cg.size() > kCanonicalSizeCap || ch.size() > kCanonicalSizeCap) {
    result.verdict = Equivalence::Unknown;
    result.witness = "compressed forms exceed the canonical size cap";
    return result;
  }

  // H -> ch as a forward trace; its reverse leads from ch back to H.
  auto h_forward = th.steps;

  auto finish_yes = [&](const std::vector<TraceStep>& g_steps, const Graph& g_state, const Graph& h_state,
                        const std::vector<TraceStep>& h_steps_to_state) {
    auto iso = find_isomorphism(h_state, g_state);
    if (!iso) throw Error("internal: meeting states are not isomorphic");
    std::map<std::string, std::string> h_to_g;
    for (std::size_t v = 0; v < h_state.size(); ++v) h_to_g[h_state.label(v)] = g_state.label((*iso)[v]);
    TransformationTrace trace;
    trace.steps = tg.steps;
    trace.steps.insert(trace.steps.end(), g_steps.begin(), g_steps.end());
    TransformationTrace forward;
    forward.steps = h_forward;
    forward.steps.insert(forward.steps.end(), h_steps_to_state.begin(), h_steps_to_state.end());
    splice(trace, g_state, std::move(h_to_g), reversed(forward).steps);
    result.verdict = Equivalence::Yes;
    result.trace = std::move(trace);
  };

  if (isomorphic(cg, ch)) {
    finish_yes({}, cg, ch, {});
    return result;
  }

  // Bidirectional breadth-first search over compressed states.
  std::vector<SearchNode> nodes[2];
  std::unordered_map<CanonicalForm, int> seen[2];
  std::deque<int> frontier[2];
  nodes[0].push_back({cg, -1, {}});
  nodes[1].push_back({ch, -1, {}});
  seen[0].emplace(canonical_form(cg), 0);
  seen[1].emplace(canonical_form(ch), 0);
  frontier[0].push_back(0);
  frontier[1].push_back(0);
  std::size_t counter = 0;

  while (!frontier[0].empty() || !frontier[1].empty()) {
    int side = frontier[0].empty() ? 1 : frontier[1].empty() ? 0 : (frontier[0].size() <= frontier[1].size() ? 0 : 1);
    int idx = frontier[side].front();
    frontier[side].pop_front();
    Graph state = nodes[side][static_cast<std::size_t>(idx)].graph;
    for (auto& [child, steps] : expand(state, counter)) {
      if (child.size() > kCanonicalSizeCap) continue;
      auto form = canonical_form(child);
      if (seen[side].count(form)) continue;
      if (++result.states_explored > budget) {
        result.verdict = Equivalence::Unknown;
        result.witness = "search budget of " + std::to_string(budget) + " states exhausted";
        return result;
      }
      nodes[side].push_back({child, idx, steps});
      int child_idx = static_cast<int>(nodes[side].size()) - 1;
      seen[side].emplace(form, child_idx);
      frontier[side].push_back(child_idx);
      if (auto other = seen[1 - side].find(form); other != seen[1 - side].end()) {
        int g_idx = side == 0 ? child_idx : other->second;
        int h_idx = side == 1 ? child_idx : other->second;
        finish_yes(path_to(nodes[0], g_idx), nodes[0][static_cast<std::size_t>(g_idx)].graph,
                   nodes[1][static_cast<std::size_t>(h_idx)].graph, path_to(nodes[1], h_idx));
        return result;
      }
    }
  }
  result.verdict = Equivalence::Unknown;
  result.witness = "search space exhausted without a meeting state";
  return result;
}

}  // namespace cubetopo
