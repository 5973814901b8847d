#pragma once

// Named fixtures shared by unit and acceptance tests.

#include <map>
#include <string>
#include <vector>

#include "cubetopo/digitize.hpp"
#include "cubetopo/graph.hpp"
#include "cubetopo/lattice.hpp"

namespace fixture {

using cubetopo::CubeId;
using cubetopo::CubicalSpace;
using cubetopo::Exact;
using cubetopo::Side;

/// The eight-cube space of the compression example. Cubes a, b, c, e, h are
/// simple; deleting c, b, a, h leaves a four-cube ring and deleting c, b, e
/// leaves a five-cube ring. The arrangement needs three dimensions: in the
/// plane every compressed ring under corner adjacency has an even number of
/// squares.
struct EightCube {
  CubicalSpace space{3, Side(1)};
  std::map<char, CubeId> cube;

  std::string label(char name) const { return cube.at(name).label(); }
};

inline EightCube eight_cube() {
  EightCube f;
  f.cube = {{'a', CubeId{0, 0, 1}},  {'b', CubeId{-1, -1, 0}}, {'c', CubeId{-1, 0, 0}},
            {'d', CubeId{1, 0, 2}},  {'e', CubeId{0, 1, 1}},   {'f', CubeId{1, 2, 0}},
            {'g', CubeId{2, 1, 1}},  {'h', CubeId{0, 1, 0}}};
  for (const auto& [name, c] : f.cube) f.space.insert(c);
  return f;
}

/// Contractible spaces in which cube a = first entry is simple.
inline std::vector<CubicalSpace> simple_cube_examples() {
  return {
      CubicalSpace(2, Side(1), std::vector<CubeId>{{0, 0}, {1, 0}}),                  // edge contact
      CubicalSpace(2, Side(1), std::vector<CubeId>{{0, 0}, {1, 1}}),                  // corner contact
      CubicalSpace(3, Side(1), std::vector<CubeId>{{0, 0, 0}, {1, 1, 1}}),            // vertex contact in 3D
      CubicalSpace(2, Side(1), std::vector<CubeId>{{0, 0}, {1, 0}, {1, 1}}),          // L tromino
      CubicalSpace(2, Side(1), std::vector<CubeId>{{0, 0}, {1, 0}, {0, 1}, {1, 1}}),  // 2x2 block
  };
}

inline cubetopo::ObjectSpec disk() { return cubetopo::ObjectSpec::ball({0, 0}, 1); }
inline cubetopo::ObjectSpec ball3() { return cubetopo::ObjectSpec::ball({0, 0, 0}, 1); }
/// Quarter of the radius.
inline Side ball_side() { return Side(1, 4); }

/// Annulus around a cell centre; at L = 1 the hole is a single cell.
inline cubetopo::ObjectSpec circle() {
  return cubetopo::ObjectSpec::sphere_shell({Exact(1, 2), Exact(1, 2)}, Exact(6, 5), 2);
}

/// Spherical shell with outer radius 3, digitized at L = 1.
inline cubetopo::ObjectSpec sphere() {
  return cubetopo::ObjectSpec::sphere_shell({Exact(1, 2), Exact(1, 2), Exact(1, 2)}, Exact(3, 2), 3);
}

/// Annulus around a lattice corner: filled at L = 1, holed from L = 1/2.
inline cubetopo::ObjectSpec thin_circle() {
  return cubetopo::ObjectSpec::sphere_shell({0, 0}, Exact(4, 5), Exact(6, 5));
}

inline cubetopo::Graph octahedron() { return cubetopo::minimal_sphere(2); }

}  // namespace fixture
