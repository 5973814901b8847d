#include "cubetopo/canonical.hpp"

#include <algorithm>
#include <numeric>

namespace cubetopo {

MaskRows to_mask_rows(const AdjacencyList& adj) {
  if (adj.size() > 64) throw TooLarge("graph has more than 64 vertices");
  MaskRows rows(adj.size(), 0);
  for (std::size_t v = 0; v < adj.size(); ++v) {
    for (auto w : adj[v]) rows[v] |= (std::uint64_t{1} << w);
  }
  return rows;
}

namespace {

using Cell = std::vector<std::uint32_t>;
using Partition = std::vector<Cell>;
using Permutation = std::vector<std::uint32_t>;

class Canonizer {
 public:
  explicit Canonizer(const MaskRows& rows) : rows_(rows), n_(rows.size()) {}

  CanonicalLabeling run() {
    Partition root;
    if (n_ > 0) {
      Cell all(n_);
      std::iota(all.begin(), all.end(), 0u);
      root.push_back(std::move(all));
    }
    std::vector<std::uint32_t> prefix;
    search(std::move(root), prefix);
    CanonicalLabeling out;
    out.form.bytes = best_cert_.empty() ? certificate({}) : best_cert_;
    out.order = best_order_;
    return out;
  }

 private:
  void refine(Partition& cells) const {
    bool changed = true;
    std::vector<std::uint64_t> masks;
    while (changed) {
      changed = false;
      masks.assign(cells.size(), 0);
      for (std::size_t c = 0; c < cells.size(); ++c) {
        for (auto v : cells[c]) masks[c] |= (std::uint64_t{1} << v);
      }
      Partition next;
      next.reserve(n_);
      for (auto& cell : cells) {
        if (cell.size() == 1) {
          next.push_back(std::move(cell));
          continue;
        }
        std::vector<std::pair<std::vector<std::uint8_t>, std::uint32_t>> keyed;
        keyed.reserve(cell.size());
        for (auto v : cell) {
          std::vector<std::uint8_t> sig(masks.size());
          for (std::size_t c = 0; c < masks.size(); ++c) {
            sig[c] = static_cast<std::uint8_t>(__builtin_popcountll(rows_[v] & masks[c]));
          }
          keyed.emplace_back(std::move(sig), v);
        }
        std::sort(keyed.begin(), keyed.end());
        std::size_t start = 0;
        for (std::size_t i = 1; i <= keyed.size(); ++i) {
          if (i == keyed.size() || keyed[i].first != keyed[start].first) {
            Cell part;
            for (std::size_t k = start; k < i; ++k) part.push_back(keyed[k].second);
            next.push_back(std::move(part));
            start = i;
          }
        }
        if (next.back().size() != cell.size()) changed = true;
      }
      cells = std::move(next);
    }
  }

  std::string certificate(const std::vector<std::uint32_t>& order) const {
    std::string cert;
    cert.push_back(static_cast<char>(n_));
    std::uint8_t byte = 0;
    int bit = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
      for (std::size_t j = i + 1; j < order.size(); ++j) {
        if (rows_[order[i]] >> order[j] & 1u) byte |= static_cast<std::uint8_t>(1u << (7 - bit));
        if (++bit == 8) {
          cert.push_back(static_cast<char>(byte));
          byte = 0;
          bit = 0;
        }
      }
    }
    if (bit) cert.push_back(static_cast<char>(byte));
    return cert;
  }

  std::uint32_t find_root(std::vector<std::uint32_t>& parent, std::uint32_t x) const {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }

  // Orbits of the group generated by the automorphisms found so far that fix
  // every vertex of `prefix`.
  std::vector<std::uint32_t> orbits(const std::vector<std::uint32_t>& prefix) {
    std::vector<std::uint32_t> parent(n_);
    std::iota(parent.begin(), parent.end(), 0u);
    for (const auto& perm : automorphisms_) {
      bool fixes = std::all_of(prefix.begin(), prefix.end(), [&](auto v) { return perm[v] == v; });
      if (!fixes) continue;
      for (std::uint32_t v = 0; v < n_; ++v) {
        auto a = find_root(parent, v);
        auto b = find_root(parent, perm[v]);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
    for (std::uint32_t v = 0; v < n_; ++v) parent[v] = find_root(parent, v);
    return parent;
  }

  void search(Partition cells, std::vector<std::uint32_t>& prefix) {
    refine(cells);
    if (cells.size() == n_) {
      std::vector<std::uint32_t> order;
      order.reserve(n_);
      for (const auto& c : cells) order.push_back(c.front());
      auto cert = certificate(order);
      if (best_order_.empty() && n_ > 0) {
        best_cert_ = std::move(cert);
        best_order_ = std::move(order);
      } else if (cert == best_cert_) {
        Permutation perm(n_);
        for (std::size_t k = 0; k < n_; ++k) perm[best_order_[k]] = order[k];
        automorphisms_.push_back(std::move(perm));
      } else if (cert > best_cert_) {
        best_cert_ = std::move(cert);
        best_order_ = std::move(order);
      }
      return;
    }
    // Target: first smallest non-singleton cell.
    std::size_t target = cells.size();
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (cells[c].size() > 1 && (target == cells.size() || cells[c].size() < cells[target].size())) {
        target = c;
      }
    }
    Cell candidates = cells[target];
    std::sort(candidates.begin(), candidates.end());
    std::vector<std::uint32_t> tried;
    for (auto v : candidates) {
      if (!tried.empty() && !automorphisms_.empty()) {
        auto orb = orbits(prefix);
        if (std::any_of(tried.begin(), tried.end(), [&](auto t) { return orb[t] == orb[v]; })) continue;
      }
      Partition child;
      child.reserve(cells.size() + 1);
      for (std::size_t c = 0; c < cells.size(); ++c) {
        if (c == target) {
          child.push_back({v});
          Cell rest;
          for (auto w : cells[c]) {
            if (w != v) rest.push_back(w);
          }
          child.push_back(std::move(rest));
        } else {
          child.push_back(cells[c]);
        }
      }
      prefix.push_back(v);
      search(std::move(child), prefix);
      prefix.pop_back();
      tried.push_back(v);
    }
  }

  const MaskRows& rows_;
  std::size_t n_;
  std::string best_cert_;
  std::vector<std::uint32_t> best_order_;
  std::vector<Permutation> automorphisms_;
};

}  // namespace

CanonicalLabeling canonical_labeling(const MaskRows& rows) {
  if (rows.size() > kCanonicalSizeCap) {
    throw TooLarge("canonical form: " + std::to_string(rows.size()) + " vertices exceeds the cap of " +
                   std::to_string(kCanonicalSizeCap));
  }
  return Canonizer(rows).run();
}

CanonicalLabeling canonical_labeling(const Graph& g) {
  if (g.size() > kCanonicalSizeCap) {
    throw TooLarge("canonical form: " + std::to_string(g.size()) + " vertices exceeds the cap of " +
                   std::to_string(kCanonicalSizeCap));
  }
  return canonical_labeling(to_mask_rows(g.adjacency()));
}

CanonicalForm canonical_form(const Graph& g) { return canonical_labeling(g).form; }

bool isomorphic(const Graph& g, const Graph& h) {
  if (g.size() != h.size() || g.edge_count() != h.edge_count()) return false;
  return canonical_form(g) == canonical_form(h);
}

std::optional<std::vector<std::size_t>> find_isomorphism(const Graph& g, const Graph& h) {
  if (g.size() != h.size() || g.edge_count() != h.edge_count()) return std::nullopt;
  auto lg = canonical_labeling(g);
  auto lh = canonical_labeling(h);
  if (lg.form != lh.form) return std::nullopt;
  std::vector<std::size_t> map(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) map[lg.order[k]] = lh.order[k];
  return map;
}

}  // namespace cubetopo
