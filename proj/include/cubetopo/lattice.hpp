#pragma once

// Cubes of the lattice Q^n, cubical spaces (finite sets of same-size cubes)
// and the face structure of their unions.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

#include "cubetopo/error.hpp"

namespace cubetopo {

using Coord = std::int64_t;

/// Side length of the lattice cubes. Kept exact so repeated halving is lossless.
using Side = boost::rational<std::int64_t>;

Side parse_side(std::string_view text);
std::string format_side(const Side& side);

/// An n-cube of Q^n spanning [L*c_i, L*(c_i+1)] on every axis i.
class CubeId {
 public:
  CubeId() = default;
  explicit CubeId(std::vector<Coord> coords);
  CubeId(std::initializer_list<Coord> coords)
      : CubeId(std::vector<Coord>(coords)) {}

  std::size_t dim() const { return coords_.size(); }
  std::span<const Coord> coords() const { return coords_; }
  Coord operator[](std::size_t axis) const { return coords_[axis]; }

  CubeId translated(std::span<const Coord> offset) const;

  /// Comma separated corner coordinates, e.g. "0,-1,2".
  std::string label() const;
  static CubeId parse_label(std::string_view label);

  auto operator<=>(const CubeId&) const = default;
  bool operator==(const CubeId&) const = default;

 private:
  std::vector<Coord> coords_;
};

/// Closed cubes meet iff their corner coordinates are at Chebyshev
/// distance at most one.
bool cubes_intersect(const CubeId& a, const CubeId& b);

/// Inclusive box of cube indices.
struct LatticeBox {
  std::vector<Coord> lo;
  std::vector<Coord> hi;

  std::size_t dim() const { return lo.size(); }
  bool contains(const CubeId& cube) const;
  bool contains(const LatticeBox& other) const;
  std::size_t cube_count() const;

  /// "lo1,lo2,...:hi1,hi2,..."
  static LatticeBox parse(std::string_view text);
  std::string format() const;

  bool operator==(const LatticeBox&) const = default;
};

/// A finite set of n-cubes of Q^n sharing one side length.
class CubicalSpace {
 public:
  using const_iterator = std::set<CubeId>::const_iterator;

  CubicalSpace(std::size_t n, Side side);
  CubicalSpace(std::size_t n, Side side, std::span<const CubeId> cubes);

  std::size_t dim() const { return n_; }
  const Side& side() const { return side_; }
  std::size_t size() const { return cubes_.size(); }
  bool empty() const { return cubes_.empty(); }
  bool contains(const CubeId& cube) const { return cubes_.count(cube) != 0; }

  const_iterator begin() const { return cubes_.begin(); }
  const_iterator end() const { return cubes_.end(); }

  /// Lexicographically sorted cubes.
  std::vector<CubeId> cubes() const { return {cubes_.begin(), cubes_.end()}; }

  /// Returns false when the cube was already present.
  bool insert(const CubeId& cube);
  /// Returns false when the cube was absent.
  bool erase(const CubeId& cube);

  CubicalSpace without(const CubeId& cube) const;

  bool operator==(const CubicalSpace& other) const;

 private:
  void check_dim(const CubeId& cube) const;

  std::size_t n_;
  Side side_;
  std::set<CubeId> cubes_;
};

/// All offset vectors in {-1,0,1}^n except the zero vector.
std::vector<std::vector<Coord>> neighbor_offsets(std::size_t n);

/// O(u): the cubes of M other than u that meet u.
CubicalSpace rim(const CubicalSpace& space, const CubeId& cube);

/// U(u) = O(u) together with u.
CubicalSpace ball(const CubicalSpace& space, const CubeId& cube);

/// A closed d-face of the lattice: extruded from `anchor` along the axes in
/// the bit mask `axes`. Keyed by the minimal corner.
struct Face {
  std::vector<Coord> anchor;
  std::uint32_t axes = 0;

  std::size_t dim() const;
  auto operator<=>(const Face&) const = default;
  bool operator==(const Face&) const = default;
};

/// The 3^n closed faces of one cube (including the cube itself).
std::vector<Face> cube_faces(const CubeId& cube);

/// Number of distinct d-faces of the union I(M), indexed by d.
std::map<std::size_t, std::size_t> image_faces(const CubicalSpace& space);

}  // namespace cubetopo
