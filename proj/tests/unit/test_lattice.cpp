#include <doctest.h>

#include <random>

#include "cubetopo/lattice.hpp"
#include "oracles.hpp"

using namespace cubetopo;

namespace {

CubicalSpace block(std::size_t w, std::size_t h) {
  CubicalSpace s(2, Side(1));
  for (Coord x = 0; x < static_cast<Coord>(w); ++x) {
    for (Coord y = 0; y < static_cast<Coord>(h); ++y) s.insert(CubeId{x, y});
  }
  return s;
}

std::int64_t alternating(const std::map<std::size_t, std::size_t>& counts) {
  std::int64_t chi = 0;
  for (auto [d, c] : counts) chi += (d % 2 == 0 ? 1 : -1) * static_cast<std::int64_t>(c);
  return chi;
}

}  // namespace

TEST_CASE("side parsing is exact") {
  CHECK(parse_side("1/2") == Side(1, 2));
  CHECK(parse_side("0.25") == Side(1, 4));
  CHECK(parse_side("3") == Side(3));
  CHECK(parse_side(" 6/4 ") == Side(3, 2));
  CHECK(format_side(Side(3, 6)) == "1/2");
  CHECK(format_side(Side(2)) == "2/1");
  CHECK_THROWS_AS(parse_side("0"), InvalidArgument);
  CHECK_THROWS_AS(parse_side("-1/2"), InvalidArgument);
  CHECK_THROWS_AS(parse_side("1/0"), InvalidArgument);
  CHECK_THROWS_AS(parse_side("abc"), InvalidArgument);
}

TEST_CASE("cube ids") {
  CubeId c{1, -2, 3};
  CHECK(c.dim() == 3);
  CHECK(c.label() == "1,-2,3");
  CHECK(CubeId::parse_label("1,-2,3") == c);
  CHECK(c.translated(std::vector<Coord>{1, 1, 1}) == CubeId{2, -1, 4});
  CHECK_THROWS_AS(CubeId(std::vector<Coord>{}), InvalidArgument);
  CHECK_THROWS_AS(CubeId::parse_label("1,,2"), InvalidArgument);
  CHECK_THROWS_AS(c.translated(std::vector<Coord>{1}), InvalidArgument);
}

TEST_CASE("cubes_intersect examples") {
  CHECK(cubes_intersect(CubeId{0, 0}, CubeId{1, 1}));
  CHECK_FALSE(cubes_intersect(CubeId{0, 0}, CubeId{2, 0}));
  CHECK(cubes_intersect(CubeId{0, 0}, CubeId{0, 0}));
  CHECK_THROWS_AS(cubes_intersect(CubeId{0, 0}, CubeId{0, 0, 0}), InvalidArgument);
}

TEST_CASE("a cube of Q^3 meets 26 others") {
  // Oracle: count offset vectors in {-1,0,1}^3 other than zero.
  std::size_t expected = 0;
  for (int x = -1; x <= 1; ++x)
    for (int y = -1; y <= 1; ++y)
      for (int z = -1; z <= 1; ++z) expected += (x || y || z) ? 1 : 0;
  CHECK(expected == 26);
  std::size_t count = 0;
  for (Coord x = -3; x <= 3; ++x)
    for (Coord y = -3; y <= 3; ++y)
      for (Coord z = -3; z <= 3; ++z) {
        CubeId other{x, y, z};
        if (other != CubeId{0, 0, 0} && cubes_intersect(CubeId{0, 0, 0}, other)) ++count;
      }
  CHECK(count == expected);
  CHECK(neighbor_offsets(3).size() == expected);
}

TEST_CASE("cubes_intersect is symmetric and reflexive") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<Coord> coord(-3, 3);
  for (int trial = 0; trial < 2000; ++trial) {
    CubeId a{coord(rng), coord(rng), coord(rng)};
    CubeId b{coord(rng), coord(rng), coord(rng)};
    CHECK(cubes_intersect(a, b) == cubes_intersect(b, a));
    CHECK(cubes_intersect(a, a));
  }
}

TEST_CASE("cubical space set semantics") {
  CubicalSpace s(2, Side(1, 2));
  CHECK(s.insert(CubeId{0, 0}));
  CHECK_FALSE(s.insert(CubeId{0, 0}));
  CHECK(s.size() == 1);
  CHECK_THROWS_AS(s.insert(CubeId{0, 0, 0}), InvalidArgument);
  CHECK(s.contains(CubeId{0, 0}));
  CHECK(s.erase(CubeId{0, 0}));
  CHECK_FALSE(s.erase(CubeId{0, 0}));
  CHECK(s.empty());
  CHECK_THROWS_AS(CubicalSpace(0, Side(1)), InvalidArgument);
  CHECK_THROWS_AS(CubicalSpace(2, Side(0)), InvalidArgument);
}

TEST_CASE("rim and ball examples") {
  CubicalSpace domino(2, Side(1), std::vector<CubeId>{{0, 0}, {1, 0}});
  CHECK(rim(domino, CubeId{0, 0}).cubes() == std::vector<CubeId>{{1, 0}});
  CHECK(ball(domino, CubeId{0, 0}) == domino);

  CubicalSpace single(2, Side(1), std::vector<CubeId>{{4, 4}});
  CHECK(rim(single, CubeId{4, 4}).empty());
  CHECK(ball(single, CubeId{4, 4}) == single);

  auto b = block(3, 3);
  auto r = rim(b, CubeId{1, 1});
  CHECK(r.size() == 8);
  CHECK_FALSE(r.contains(CubeId{1, 1}));
  CHECK(ball(b, CubeId{1, 1}).size() == 9);

  CHECK_THROWS_AS(rim(b, CubeId{7, 7}), InvalidArgument);
  CHECK_THROWS_AS(ball(b, CubeId{7, 7}), InvalidArgument);
}

TEST_CASE("rim properties on random spaces") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 2;
    auto space = oracle::random_space(rng, n, 12, 4);
    std::size_t cap = 1;
    for (std::size_t i = 0; i < n; ++i) cap *= 3;
    for (const auto& u : space) {
      auto r = rim(space, u);
      auto bl = ball(space, u);
      CHECK(r.size() <= cap - 1);
      CHECK(bl.without(u) == r);
      // Independent check against pairwise intersection.
      std::size_t expected = 0;
      for (const auto& v : space) expected += (v != u && cubes_intersect(u, v)) ? 1 : 0;
      CHECK(r.size() == expected);
    }
  }
}

TEST_CASE("faces of a cube") {
  CHECK(cube_faces(CubeId{0, 0}).size() == 9);
  CHECK(cube_faces(CubeId{0, 0, 0}).size() == 27);
  std::size_t top = 0;
  for (const auto& f : cube_faces(CubeId{2, 3})) top += f.dim() == 2 ? 1 : 0;
  CHECK(top == 1);
}

TEST_CASE("image_faces examples") {
  using Counts = std::map<std::size_t, std::size_t>;
  CHECK(image_faces(block(1, 1)) == Counts{{0, 4}, {1, 4}, {2, 1}});
  CHECK(image_faces(block(2, 1)) == Counts{{0, 6}, {1, 7}, {2, 2}});
  CHECK(image_faces(block(2, 2)) == Counts{{0, 9}, {1, 12}, {2, 4}});
  CHECK(image_faces(CubicalSpace(2, Side(1))).empty());
  // Oracle agreement on the frozen examples.
  CHECK(oracle::doubled_face_counts(block(2, 1)) == Counts{{0, 6}, {1, 7}, {2, 2}});
  CHECK(oracle::doubled_face_counts(block(2, 2)) == Counts{{0, 9}, {1, 12}, {2, 4}});
}

TEST_CASE("image_faces agrees with doubled-lattice counting") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + trial % 2;
    auto space = oracle::random_space(rng, n, 1 + trial % 12, 4);
    auto faces = image_faces(space);
    auto expected = oracle::doubled_face_counts(space);
    for (std::size_t d = 0; d <= n; ++d) {
      CHECK(faces[d] == (expected.count(d) ? expected[d] : 0));
    }
  }
}

TEST_CASE("image Euler characteristic is translation invariant") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    auto space = oracle::random_space(rng, 3, 10, 4);
    std::vector<Coord> shift{7, -3, 12};
    CubicalSpace moved(3, Side(1));
    for (const auto& c : space) moved.insert(c.translated(shift));
    CHECK(alternating(image_faces(space)) == alternating(image_faces(moved)));
  }
}

TEST_CASE("lattice boxes") {
  auto b = LatticeBox::parse("-1,0:2,3");
  CHECK(b.lo == std::vector<Coord>{-1, 0});
  CHECK(b.hi == std::vector<Coord>{2, 3});
  CHECK(b.cube_count() == 16);
  CHECK(b.contains(CubeId{2, 3}));
  CHECK_FALSE(b.contains(CubeId{3, 3}));
  CHECK(b.contains(LatticeBox::parse("0,0:1,1")));
  CHECK_FALSE(b.contains(LatticeBox::parse("0,0:3,1")));
  CHECK(LatticeBox::parse(b.format()) == b);
  CHECK_THROWS_AS(LatticeBox::parse("0,0:1"), InvalidArgument);
  CHECK_THROWS_AS(LatticeBox::parse("2:1"), InvalidArgument);
}
