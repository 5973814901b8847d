#include "cubetopo/invariants.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

namespace cubetopo {

namespace {

using BigInt = boost::multiprecision::cpp_int;

// Upper neighbors of every vertex, sorted.
AdjacencyList forward_lists(const AdjacencyList& adj) {
  AdjacencyList fwd(adj.size());
  for (std::size_t v = 0; v < adj.size(); ++v) {
    for (auto w : adj[v]) {
      if (w > v) fwd[v].push_back(w);
    }
    std::sort(fwd[v].begin(), fwd[v].end());
  }
  return fwd;
}

// Visits every clique (as an ascending vertex list) in lexicographic order.
template <typename Visit>
class CliqueWalker {
 public:
  CliqueWalker(const AdjacencyList& adj, std::size_t max_size, Visit& visit)
      : fwd_(forward_lists(adj)), max_size_(max_size), visit_(visit) {}

  void run() {
    std::vector<std::uint32_t> cand;
    for (std::uint32_t v = 0; v < fwd_.size(); ++v) {
      clique_.assign(1, v);
      extend(fwd_[v]);
    }
  }

 private:
  void extend(const std::vector<std::uint32_t>& cand) {
    if (++visited_ > kCliqueCap) throw TooLarge("flag complex exceeds the simplex cap");
    visit_(clique_);
    if (max_size_ != 0 && clique_.size() >= max_size_) return;
    for (std::size_t i = 0; i < cand.size(); ++i) {
      const auto& nb = fwd_[cand[i]];
      std::vector<std::uint32_t> next;
      std::set_intersection(cand.begin() + static_cast<std::ptrdiff_t>(i) + 1, cand.end(), nb.begin(), nb.end(),
                            std::back_inserter(next));
      clique_.push_back(cand[i]);
      extend(next);
      clique_.pop_back();
    }
  }

  AdjacencyList fwd_;
  std::size_t max_size_;
  Visit& visit_;
  std::vector<std::uint32_t> clique_;
  std::size_t visited_ = 0;
};

template <typename Visit>
void for_each_clique(const AdjacencyList& adj, std::size_t max_size, Visit visit) {
  CliqueWalker<Visit>(adj, max_size, visit).run();
}

// Simplices of one dimension, flattened, in lexicographic order.
struct SimplexList {
  std::size_t width = 0;
  std::vector<std::uint32_t> flat;

  std::size_t size() const { return width ? flat.size() / width : 0; }

  std::size_t find(const std::uint32_t* key) const {
    std::size_t lo = 0;
    std::size_t hi = size();
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      const auto* s = flat.data() + mid * width;
      if (std::lexicographical_compare(s, s + width, key, key + width)) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    return lo;
  }
};

struct IntOverflow {};

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw IntOverflow{};
  return r;
}
inline std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw IntOverflow{};
  return r;
}
inline BigInt checked_mul(const BigInt& a, const BigInt& b) { return a * b; }
inline BigInt checked_sub(const BigInt& a, const BigInt& b) { return a - b; }

struct RankResult {
  std::size_t rank = 0;
  std::vector<BigInt> factors;  // invariant factors > 1
};

// Smith normal form of a small dense matrix; returns the nonzero diagonal.
std::vector<BigInt> dense_smith_diagonal(std::vector<std::vector<BigInt>> m) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  std::vector<BigInt> diag;
  std::size_t t = 0;
  while (t < rows && t < cols) {
    // pivot: smallest nonzero absolute value in the trailing block
    std::size_t pr = rows, pc = cols;
    BigInt best = 0;
    for (std::size_t i = t; i < rows; ++i) {
      for (std::size_t j = t; j < cols; ++j) {
        if (m[i][j] != 0) {
          BigInt a = abs(m[i][j]);
          if (pr == rows || a < best) {
            best = a;
            pr = i;
            pc = j;
          }
        }
      }
    }
    if (pr == rows) break;
    std::swap(m[t], m[pr]);
    for (auto& row : m) std::swap(row[t], row[pc]);
    bool clean = false;
    while (!clean) {
      clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (m[i][t] == 0) continue;
        BigInt q = m[i][t] / m[t][t];
        for (std::size_t j = t; j < cols; ++j) m[i][j] -= q * m[t][j];
        if (m[i][t] != 0) {
          std::swap(m[t], m[i]);
          clean = false;
        }
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (m[t][j] == 0) continue;
        BigInt q = m[t][j] / m[t][t];
        for (std::size_t i = t; i < rows; ++i) m[i][j] -= q * m[i][t];
        if (m[t][j] != 0) {
          for (auto& row : m) std::swap(row[t], row[j]);
          clean = false;
        }
      }
    }
    diag.push_back(abs(m[t][t]));
    ++t;
  }
  // Normalize to invariant factors d_1 | d_2 | ...
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < diag.size(); ++i) {
      for (std::size_t j = i + 1; j < diag.size(); ++j) {
        BigInt g = gcd(diag[i], diag[j]);
        if (g != diag[i]) {
          BigInt l = diag[i] / g * diag[j];
          diag[i] = g;
          diag[j] = l;
          changed = true;
        }
      }
    }
  }
  return diag;
}

// Boundary matrix as sparse columns with entries sorted by row.
template <typename Int>
struct SparseMatrix {
  std::size_t rows = 0;
  std::vector<std::vector<std::pair<std::uint32_t, Int>>> cols;
};

template <typename Int>
RankResult sparse_rank(SparseMatrix<Int> mat) {
  auto& cols = mat.cols;
  const std::size_t ncols = cols.size();
  std::vector<std::vector<std::uint32_t>> row_index(mat.rows);
  for (std::size_t c = 0; c < ncols; ++c) {
    for (const auto& [r, v] : cols[c]) row_index[r].push_back(static_cast<std::uint32_t>(c));
  }
  std::vector<char> col_alive(ncols, 1), row_alive(mat.rows, 1);
  RankResult result;

  auto value_at = [&](std::size_t c, std::uint32_t r) -> const Int* {
    const auto& col = cols[c];
    auto it = std::lower_bound(col.begin(), col.end(), r, [](const auto& e, std::uint32_t row) { return e.first < row; });
    if (it == col.end() || it->first != r) return nullptr;
    return &it->second;
  };

  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t c = 0; c < ncols; ++c) {
      if (!col_alive[c] || cols[c].empty()) continue;
      // unit entry whose row is least shared
      std::uint32_t pivot_row = 0;
      std::size_t best_fill = 0;
      bool found = false;
      for (const auto& [r, v] : cols[c]) {
        if (v == 1 || v == -1) {
          if (!found || row_index[r].size() < best_fill) {
            pivot_row = r;
            best_fill = row_index[r].size();
            found = true;
          }
        }
      }
      if (!found) continue;
      const Int pivot = *value_at(c, pivot_row);
      const auto pivot_col = cols[c];
      const auto users = row_index[pivot_row];
      for (auto other : users) {
        if (other == c || !col_alive[other]) continue;
        const Int* hit = value_at(other, pivot_row);
        if (!hit) continue;
        const Int factor = checked_mul(*hit, pivot);  // pivot is a unit: 1/pivot == pivot
        std::vector<std::pair<std::uint32_t, Int>> merged;
        merged.reserve(cols[other].size() + pivot_col.size());
        auto a = cols[other].begin();
        auto b = pivot_col.begin();
        while (a != cols[other].end() || b != pivot_col.end()) {
          if (b == pivot_col.end() || (a != cols[other].end() && a->first < b->first)) {
            merged.push_back(*a++);
          } else if (a == cols[other].end() || b->first < a->first) {
            Int v = checked_sub(Int(0), checked_mul(factor, b->second));
            merged.emplace_back(b->first, v);
            row_index[b->first].push_back(other);
            ++b;
          } else {
            Int v = checked_sub(a->second, checked_mul(factor, b->second));
            if (v != 0) merged.emplace_back(a->first, v);
            ++a;
            ++b;
          }
        }
        cols[other] = std::move(merged);
      }
      col_alive[c] = 0;
      row_alive[pivot_row] = 0;
      cols[c].clear();
      ++result.rank;
      progress = true;
    }
  }

  // What is left has no unit entries.
  std::vector<std::size_t> rest_cols;
  std::map<std::uint32_t, std::size_t> rest_rows;
  for (std::size_t c = 0; c < ncols; ++c) {
    if (!col_alive[c] || cols[c].empty()) continue;
    rest_cols.push_back(c);
    for (const auto& [r, v] : cols[c]) rest_rows.emplace(r, 0);
  }
  if (!rest_cols.empty()) {
    if (rest_cols.size() * rest_rows.size() > 4'000'000) {
      throw TooLarge("homology: residual boundary matrix too large for exact normal form");
    }
    std::size_t k = 0;
    for (auto& [r, idx] : rest_rows) idx = k++;
    std::vector<std::vector<BigInt>> dense(rest_rows.size(), std::vector<BigInt>(rest_cols.size(), 0));
    for (std::size_t j = 0; j < rest_cols.size(); ++j) {
      for (const auto& [r, v] : cols[rest_cols[j]]) dense[rest_rows[r]][j] = BigInt(v);
    }
    for (auto& d : dense_smith_diagonal(std::move(dense))) {
      ++result.rank;
      if (d > 1) result.factors.push_back(d);
    }
  }
  return result;
}

RankResult boundary_rank(const SimplexList& faces, const SimplexList& cells) {
  auto build = [&](auto tag) {
    using Int = decltype(tag);
    SparseMatrix<Int> mat;
    mat.rows = faces.size();
    mat.cols.resize(cells.size());
    std::vector<std::uint32_t> face(faces.width);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto* s = cells.flat.data() + c * cells.width;
      for (std::size_t drop = 0; drop < cells.width; ++drop) {
        std::size_t k = 0;
        for (std::size_t i = 0; i < cells.width; ++i) {
          if (i != drop) face[k++] = s[i];
        }
        auto row = static_cast<std::uint32_t>(faces.find(face.data()));
        mat.cols[c].emplace_back(row, (drop % 2 == 0) ? Int(1) : Int(-1));
      }
      std::sort(mat.cols[c].begin(), mat.cols[c].end(),
                [](const auto& x, const auto& y) { return x.first < y.first; });
    }
    return mat;
  };
  try {
    return sparse_rank(build(std::int64_t{}));
  } catch (const IntOverflow&) {
    return sparse_rank(build(BigInt{}));
  }
}

}  // namespace

std::vector<std::size_t> clique_counts(const AdjacencyList& adj, std::size_t max_size) {
  std::vector<std::size_t> counts;
  for_each_clique(adj, max_size, [&](const std::vector<std::uint32_t>& c) {
    if (counts.size() < c.size()) counts.resize(c.size(), 0);
    ++counts[c.size() - 1];
  });
  return counts;
}

std::vector<std::size_t> clique_counts(const Graph& g, std::size_t max_size) {
  return clique_counts(g.adjacency(), max_size);
}

std::int64_t euler_characteristic_graph(const Graph& g) {
  std::int64_t chi = 0;
  auto counts = clique_counts(g);
  for (std::size_t k = 0; k < counts.size(); ++k) {
    chi += (k % 2 == 0 ? 1 : -1) * static_cast<std::int64_t>(counts[k]);
  }
  return chi;
}

std::int64_t euler_characteristic_image(const CubicalSpace& space) {
  std::int64_t chi = 0;
  for (const auto& [d, count] : image_faces(space)) {
    chi += (d % 2 == 0 ? 1 : -1) * static_cast<std::int64_t>(count);
  }
  return chi;
}

HomologyResult homology_ranks(const Graph& g, std::optional<std::size_t> max_dim) {
  HomologyResult out;
  if (g.empty()) return out;
  // Enumerate simplices up to dimension max_dim + 1, plus one more size to
  // detect truncation.
  const std::size_t size_limit = max_dim ? *max_dim + 3 : 0;
  std::vector<SimplexList> simplices;
  for_each_clique(g.adjacency(), size_limit, [&](const std::vector<std::uint32_t>& c) {
    if (simplices.size() < c.size()) {
      simplices.resize(c.size());
      simplices[c.size() - 1].width = c.size();
    }
    auto& list = simplices[c.size() - 1];
    list.flat.insert(list.flat.end(), c.begin(), c.end());
  });
  // The DFS emits each dimension in lexicographic order already; sort to be safe.
  for (auto& list : simplices) {
    const std::size_t w = list.width;
    std::vector<std::size_t> idx(list.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    bool sorted = true;
    for (std::size_t i = 1; i < idx.size() && sorted; ++i) {
      sorted = !std::lexicographical_compare(list.flat.begin() + static_cast<std::ptrdiff_t>(i * w),
                                             list.flat.begin() + static_cast<std::ptrdiff_t>((i + 1) * w),
                                             list.flat.begin() + static_cast<std::ptrdiff_t>((i - 1) * w),
                                             list.flat.begin() + static_cast<std::ptrdiff_t>(i * w));
    }
    if (!sorted) throw Error("internal: clique enumeration out of order");
  }

  const std::size_t top = simplices.size() - 1;  // top dimension present
  const std::size_t dims = max_dim ? *max_dim : top;
  out.truncated = top > dims;
  // rank[k] = rank of the boundary map C_k -> C_{k-1}
  std::vector<RankResult> ranks(dims + 2);
  for (std::size_t k = 1; k <= dims + 1 && k <= top; ++k) {
    ranks[k] = boundary_rank(simplices[k - 1], simplices[k]);
  }
  out.betti.resize(dims + 1);
  out.torsion.resize(dims + 1);
  out.torsion_coefficients.resize(dims + 1);
  for (std::size_t k = 0; k <= dims; ++k) {
    const std::size_t ck = k <= top ? simplices[k].size() : 0;
    const std::size_t rk = k >= 1 ? ranks[k].rank : 0;
    const std::size_t rk1 = ranks[k + 1].rank;
    out.betti[k] = ck - rk - rk1;
    for (const auto& f : ranks[k + 1].factors) out.torsion_coefficients[k].push_back(f.str());
    out.torsion[k] = !out.torsion_coefficients[k].empty();
  }
  return out;
}

std::vector<std::size_t> InvariantReport::betti_trimmed() const {
  auto b = betti;
  while (!b.empty() && b.back() == 0) b.pop_back();
  return b;
}

bool InvariantReport::has_torsion() const {
  return std::any_of(torsion.begin(), torsion.end(), [](bool t) { return t; });
}

InvariantReport fingerprint(const Graph& g) {
  InvariantReport r;
  r.euler_graph = euler_characteristic_graph(g);
  auto h = homology_ranks(g);
  r.betti = std::move(h.betti);
  r.torsion = std::move(h.torsion);
  r.torsion_coefficients = std::move(h.torsion_coefficients);
  r.truncated = h.truncated;
  return r;
}

InvariantReport fingerprint(const CubicalSpace& space, bool approximate) {
  InvariantReport r;
  auto model = intersection_graph(space);
  r.euler_graph = euler_characteristic_graph(model.graph);
  r.euler_image = euler_characteristic_image(space);
  auto h = homology_ranks(model.graph, space.dim());
  r.betti = std::move(h.betti);
  r.torsion = std::move(h.torsion);
  r.torsion_coefficients = std::move(h.torsion_coefficients);
  r.truncated = h.truncated;
  r.approximate = approximate;
  return r;
}

std::string invariant_difference(const InvariantReport& a, const InvariantReport& b) {
  std::ostringstream os;
  if (a.euler_graph != b.euler_graph) {
    os << "euler characteristic " << a.euler_graph << " != " << b.euler_graph;
    return os.str();
  }
  if (a.euler_image && b.euler_image && *a.euler_image != *b.euler_image) {
    os << "image euler characteristic " << *a.euler_image << " != " << *b.euler_image;
    return os.str();
  }
  auto ba = a.betti_trimmed();
  auto bb = b.betti_trimmed();
  for (std::size_t k = 0; k < std::max(ba.size(), bb.size()); ++k) {
    auto x = k < ba.size() ? ba[k] : 0;
    auto y = k < bb.size() ? bb[k] : 0;
    if (x != y) {
      os << "betti[" << k << "] " << x << " != " << y;
      return os.str();
    }
  }
  for (std::size_t k = 0; k < std::max(a.torsion_coefficients.size(), b.torsion_coefficients.size()); ++k) {
    static const std::vector<std::string> none;
    const auto& x = k < a.torsion_coefficients.size() ? a.torsion_coefficients[k] : none;
    const auto& y = k < b.torsion_coefficients.size() ? b.torsion_coefficients[k] : none;
    if (x != y) {
      os << "torsion in dimension " << k << " differs";
      return os.str();
    }
  }
  return {};
}

bool same_invariants(const InvariantReport& a, const InvariantReport& b) {
  return invariant_difference(a, b).empty();
}

}  // namespace cubetopo
