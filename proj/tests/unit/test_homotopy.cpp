#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include "corpus.hpp"
#include "cubetopo/canonical.hpp"
#include "cubetopo/homotopy.hpp"
#include "cubetopo/invariants.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace cubetopo;

namespace {

Graph make(std::vector<std::string> v, std::vector<std::pair<std::string, std::string>> e) {
  return Graph(std::move(v), e);
}

// Connected graphs on fewer than five vertices other than C_4.
std::vector<Graph> small_contractible() {
  return {
      complete_graph(1),
      complete_graph(2),
      path_graph(3),
      complete_graph(3),
      path_graph(4),
      make({"c", "a", "b", "d"}, {{"c", "a"}, {"c", "b"}, {"c", "d"}}),
      make({"a", "b", "c", "d"}, {{"a", "b"}, {"b", "c"}, {"a", "c"}, {"c", "d"}}),
      make({"a", "b", "c", "d"}, {{"a", "b"}, {"b", "c"}, {"c", "d"}, {"d", "a"}, {"a", "c"}}),
      complete_graph(4),
  };
}

// Deletes cubes in order, requiring each to be simple at its turn.
CubicalSpace delete_in_order(CubicalSpace space, const fixture::EightCube& f, const std::string& order) {
  for (char name : order) {
    REQUIRE(is_simple_cube(space, f.cube.at(name)));
    space.erase(f.cube.at(name));
  }
  return space;
}

bool no_simple_cube(const CubicalSpace& space) {
  for (const auto& c : space) {
    if (is_simple_cube(space, c)) return false;
  }
  return true;
}

std::size_t simple_cube_count(const CubicalSpace& space) {
  std::size_t k = 0;
  for (const auto& c : space) k += is_simple_cube(space, c) ? 1 : 0;
  return k;
}

}  // namespace

TEST_CASE("contractible graphs on fewer than five vertices") {
  auto graphs = small_contractible();
  CHECK(graphs.size() == 9);
  for (const auto& g : graphs) {
    auto v = is_contractible(g);
    CHECK(v.contractible);
    CHECK(v.deletion_order.size() == g.size() - 1);
    // Replaying the witness checks each deleted vertex simple at its turn.
    Graph cur = g;
    for (const auto& l : v.deletion_order) {
      CHECK(is_simple_point(cur, l));
      cur = delete_point(cur, l);
    }
    CHECK(cur.size() == 1);
    CHECK(compress_graph(g).first.size() == 1);
  }
}

TEST_CASE("contractibility examples") {
  CHECK(is_contractible(complete_graph(1)).contractible);
  auto c4 = is_contractible(cycle_graph(4));
  CHECK_FALSE(c4.contractible);
  CHECK(c4.remainder == cycle_graph(4));
  CHECK_FALSE(is_contractible(fixture::octahedron()).contractible);
  CHECK_FALSE(is_contractible(Graph()).contractible);
  CHECK_FALSE(is_contractible(make({"a", "b"}, {})).contractible);
  CHECK(is_contractible(complete_graph(12)).contractible);
  CHECK(is_contractible(join(complete_graph(1, "apex"), cycle_graph(9))).contractible);
}

TEST_CASE("simple points") {
  auto p3 = path_graph(3);
  CHECK(is_simple_point(p3, "v0"));
  CHECK_FALSE(is_simple_point(p3, "v1"));
  auto c4 = cycle_graph(4);
  for (const auto& l : c4.labels()) CHECK_FALSE(is_simple_point(c4, l));
  CHECK_FALSE(is_simple_point(complete_graph(1), "v0"));  // empty rim
  CHECK_THROWS_AS(is_simple_point(p3, "zz"), InvalidArgument);
}

TEST_CASE("simple edges") {
  auto k3 = complete_graph(3);
  for (auto [a, b] : k3.edges()) CHECK(is_simple_edge(k3, k3.label(a), k3.label(b)));
  auto c4 = cycle_graph(4);
  for (auto [a, b] : c4.edges()) CHECK_FALSE(is_simple_edge(c4, c4.label(a), c4.label(b)));
  // In the octahedron the two common neighbours of an edge are opposite, hence non-adjacent.
  auto oct = fixture::octahedron();
  for (auto [a, b] : oct.edges()) CHECK_FALSE(is_simple_edge(oct, oct.label(a), oct.label(b)));
  CHECK_THROWS_AS(is_simple_edge(c4, "v0", "v2"), InvalidArgument);
  CHECK_THROWS_AS(is_simple_edge(c4, "v0", "zz"), InvalidArgument);
}

TEST_CASE("simple edges follow the common-neighbourhood definition") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    auto r = oracle::random_graph(rng, 7, 0.5);
    auto g = oracle::graph_of(r);
    for (auto [a, b] : g.edges()) {
      std::vector<unsigned> common;
      for (unsigned w = 0; w < r.size(); ++w) {
        if ((r[a] >> w & 1u) && (r[b] >> w & 1u)) common.push_back(w);
      }
      bool expected = oracle::memo_literal_contractible(oracle::induced(r, common));
      CHECK(is_simple_edge(g, g.label(a), g.label(b)) == expected);
    }
  }
}

TEST_CASE("step op names round-trip") {
  for (auto op : {StepOp::DeletePoint, StepOp::AttachPoint, StepOp::DeleteEdge, StepOp::AttachEdge}) {
    CHECK(parse_step_op(to_string(op)) == op);
  }
  CHECK_THROWS_AS(parse_step_op("explode"), InvalidArgument);
}

TEST_CASE("compression policies parse") {
  CHECK(CompressionPolicy::parse("min-degree").kind == CompressionPolicy::Kind::MinDegree);
  CHECK(CompressionPolicy::parse("max-degree").kind == CompressionPolicy::Kind::MaxDegree);
  CHECK(CompressionPolicy::parse("label-order").kind == CompressionPolicy::Kind::LabelOrder);
  auto p = CompressionPolicy::parse("priority:a;b;c");
  CHECK(p.kind == CompressionPolicy::Kind::Priority);
  CHECK(p.priority == std::vector<std::string>{"a", "b", "c"});
  CHECK(CompressionPolicy::parse(p.name()).priority == p.priority);
  CHECK_THROWS_AS(CompressionPolicy::parse("random"), InvalidArgument);
}

TEST_CASE("compress_graph examples") {
  auto [c4, trace] = compress_graph(cycle_graph(4));
  CHECK(c4 == cycle_graph(4));
  CHECK(trace.steps.empty());
  auto [k1, t] = compress_graph(complete_graph(6));
  CHECK(k1.size() == 1);
  CHECK(t.steps.size() == 5);
  CHECK(replay(complete_graph(6), t) == k1);
  // Deterministic for a fixed policy.
  std::mt19937_64 rng(4);
  auto g = oracle::graph_of(oracle::random_graph(rng, 12, 0.4));
  CHECK(compress_graph(g).second == compress_graph(g).second);
  // Unknown priority labels are rejected.
  CHECK_THROWS_AS(compress_graph(path_graph(3), CompressionPolicy::parse("priority:zz")), InvalidArgument);
}

TEST_CASE("compression policies pick different first deletions") {
  auto p4 = path_graph(4);
  auto first = [&](const char* policy) {
    return compress_graph(p4, CompressionPolicy::parse(policy)).second.steps.front().element.front();
  };
  CHECK(first("min-degree") == "v0");
  CHECK(first("label-order") == "v0");
  CHECK(first("priority:v3") == "v3");
  // In K_1 + P_3 apex cones every vertex is simple; max-degree takes the apex.
  auto cone = join(complete_graph(1, "apex"), path_graph(3));
  CHECK(compress_graph(cone, CompressionPolicy::parse("max-degree")).second.steps.front().element.front() == "apex0");
}

TEST_CASE("attach and delete operations") {
  auto k2 = attach_point(complete_graph(1), "w", {"v0"});
  CHECK(isomorphic(k2, complete_graph(2)));
  auto p4 = attach_point(path_graph(3), "v3", {"v2"});
  CHECK(p4 == path_graph(4));
  try {
    attach_point(cycle_graph(4), "apex", {"v0", "v1", "v2", "v3"});
    FAIL("attachment with a C_4 rim must be rejected");
  } catch (const CertificateError& e) {
    auto rim = e.rim();
    std::sort(rim.begin(), rim.end());
    CHECK(rim == std::vector<std::string>{"v0", "v1", "v2", "v3"});
  }
  CHECK_THROWS_AS(attach_point(path_graph(3), "v0", {"v1"}), CertificateError);
  CHECK_THROWS_AS(attach_point(path_graph(3), "w", {"nope"}), CertificateError);
  CHECK_THROWS_AS(attach_point(path_graph(3), "w", {}), CertificateError);
  CHECK_THROWS_AS(delete_point(cycle_graph(4), "v0"), CertificateError);
  CHECK_THROWS_AS(delete_point(cycle_graph(4), "zz"), InvalidArgument);

  auto k3 = attach_edge(path_graph(3), "v0", "v2");
  CHECK(isomorphic(k3, complete_graph(3)));
  CHECK(delete_edge(k3, "v0", "v2") == path_graph(3));
  CHECK_THROWS_AS(delete_edge(cycle_graph(4), "v0", "v1"), CertificateError);
  CHECK_THROWS_AS(attach_edge(path_graph(4), "v0", "v3"), CertificateError);  // common neighbourhood empty
  CHECK_THROWS_AS(attach_edge(path_graph(3), "v0", "v1"), CertificateError);  // already an edge
}

TEST_CASE("apply_step re-validates certificates") {
  auto p3 = path_graph(3);
  CHECK_THROWS_AS(apply_step(p3, {StepOp::DeletePoint, {"v0"}, {"v2"}}), CertificateError);
  CHECK_THROWS_AS(apply_step(p3, {StepOp::DeletePoint, {"v0", "v1"}, {}}), CertificateError);
  CHECK_THROWS_AS(apply_step(p3, {StepOp::DeleteEdge, {"v0"}, {}}), CertificateError);
  CHECK(apply_step(p3, {StepOp::DeletePoint, {"v0"}, {"v1"}}).size() == 2);
  TransformationTrace t;
  t.steps.push_back({StepOp::DeletePoint, {"v0"}, {"v1"}});
  t.relabel = {{"v1", "a"}, {"v2", "b"}};
  CHECK(replay(p3, t) == make({"a", "b"}, {{"a", "b"}}));
  CHECK_THROWS_AS(reversed(t), InvalidArgument);
}

TEST_CASE("reversed traces undo compression") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    auto g = oracle::graph_of(oracle::random_graph(rng, 10, 0.45));
    auto [c, t] = compress_graph(g);
    CHECK(replay(c, reversed(t)) == g);
  }
}

TEST_CASE("contractibility agrees with the literal recursion on every graph up to 6 vertices") {
  auto classes = corpus::graph_classes(6);
  auto closure = oracle::gluing_closure(6);
  std::size_t total = 0, disagreements = 0, gluing_disagreements = 0;
  for (std::size_t n = 1; n <= 6; ++n) {
    for (const auto& r : classes[n]) {
      ++total;
      bool engine = is_contractible(oracle::graph_of(r)).contractible;
      if (engine != oracle::literal_contractible(r)) ++disagreements;
      if (engine != (closure[n].count(oracle::brute_canonical(r)) > 0)) ++gluing_disagreements;
    }
  }
  CHECK(classes[6].size() == 156);
  CHECK(total == 208);
  CHECK(disagreements == 0);
  CHECK(gluing_disagreements == 0);
}

TEST_CASE("reversed deletion witnesses are gluing chains") {
  auto classes = corpus::graph_classes(6);
  for (std::size_t n = 2; n <= 6; ++n) {
    for (const auto& r : classes[n]) {
      auto g = oracle::graph_of(r);
      auto v = is_contractible(g);
      if (!v.contractible) continue;
      // Build the survivor, then glue deleted vertices back in reverse order.
      std::vector<std::string> survivors;
      for (const auto& l : g.labels()) {
        if (std::find(v.deletion_order.begin(), v.deletion_order.end(), l) == v.deletion_order.end()) survivors.push_back(l);
      }
      REQUIRE(survivors.size() == 1);
      Graph cur = g.induced_labels(survivors);
      for (auto it = v.deletion_order.rbegin(); it != v.deletion_order.rend(); ++it) {
        std::vector<std::string> rim;
        for (auto w : g.neighbors(g.index_of(*it))) {
          if (cur.find(g.label(w))) rim.push_back(g.label(w));
        }
        cur = attach_point(cur, *it, rim);
      }
      CHECK(cur == g);
    }
  }
}

TEST_CASE("greedy compression of contractible graphs up to 7 vertices") {
  auto classes = corpus::graph_classes(7);
  std::size_t contractible = 0, greedy_failures = 0, uncertified = 0;
  std::mt19937_64 rng(99);
  for (std::size_t n = 2; n <= 7; ++n) {
    for (const auto& r : classes[n]) {
      auto g = oracle::graph_of(r);
      if (!is_contractible(g).contractible) continue;
      ++contractible;
      std::vector<CompressionPolicy> policies = {CompressionPolicy::parse("min-degree"),
                                                 CompressionPolicy::parse("max-degree"),
                                                 CompressionPolicy::parse("label-order")};
      // Every vertex order for small graphs, a sample of orders otherwise.
      std::vector<std::string> order = g.labels();
      std::sort(order.begin(), order.end());
      if (n <= 5) {
        do {
          CompressionPolicy p;
          p.kind = CompressionPolicy::Kind::Priority;
          p.priority = order;
          policies.push_back(p);
        } while (std::next_permutation(order.begin(), order.end()));
      } else {
        for (int k = 0; k < 40; ++k) {
          std::shuffle(order.begin(), order.end(), rng);
          CompressionPolicy p;
          p.kind = CompressionPolicy::Kind::Priority;
          p.priority = order;
          policies.push_back(p);
        }
      }
      for (const auto& p : policies) {
        auto [c, t] = compress_graph(g, p);
        if (c.size() != 1) {
          ++greedy_failures;
          MESSAGE("greedy dead end from " << g.size() << " vertices under " << p.name());
          if (!is_contractible(g).contractible) ++uncertified;
        }
        CHECK(replay(g, t) == c);
      }
    }
  }
  CHECK(contractible > 0);
  CHECK(uncertified == 0);
  CHECK(greedy_failures == 0);
}

TEST_CASE("cache hits are indistinguishable from recomputation") {
  auto classes = corpus::graph_classes(6);
  ContractibilityEngine fresh;
  std::vector<bool> first, second;
  for (std::size_t n = 1; n <= 6; ++n) {
    for (const auto& r : classes[n]) first.push_back(fresh.contractible(oracle::graph_of(r).adjacency()));
  }
  for (std::size_t n = 1; n <= 6; ++n) {
    for (const auto& r : classes[n]) {
      ContractibilityEngine cold;
      second.push_back(cold.contractible(oracle::graph_of(r).adjacency()));
    }
  }
  CHECK(first == second);
  CHECK(fresh.cache_size() > 0);
}

TEST_CASE("graphs above the canonical cap use the bounded search") {
  auto big = path_graph(kCanonicalSizeCap + 20);
  auto v = is_contractible(big);
  CHECK(v.contractible);
  CHECK(v.deletion_order.size() == big.size() - 1);
  CHECK_FALSE(is_contractible(cycle_graph(kCanonicalSizeCap + 6)).contractible);
}

TEST_CASE("simple cubes") {
  for (const auto& space : fixture::simple_cube_examples()) {
    CHECK(is_simple_cube(space, space.cubes().front()));
    CHECK(is_contractible_space(space).contractible);
    CHECK(is_contractible_space_strict(space));
  }
  CubicalSpace single(3, Side(1), std::vector<CubeId>{{0, 0, 0}});
  CHECK(is_contractible_space(single).contractible);
  CHECK_FALSE(is_simple_cube(single, CubeId{0, 0, 0}));
  CHECK_THROWS_AS(is_simple_cube(single, CubeId{1, 0, 0}), InvalidArgument);
  CHECK_THROWS_AS(is_contractible_space(CubicalSpace(2, Side(1))), InvalidArgument);

  // A 3x3 ring of squares: nothing simple.
  CubicalSpace ring(2, Side(1));
  for (Coord x = 0; x < 3; ++x)
    for (Coord y = 0; y < 3; ++y)
      if (x != 1 || y != 1) ring.insert(CubeId{x, y});
  auto [compressed, trace] = compress_space(ring);
  CHECK(no_simple_cube(compressed));
  CHECK_FALSE(is_contractible_space(ring).contractible);
}

TEST_CASE("simple cubes match simple points of the model graph") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 2 + trial % 2;
    auto space = oracle::random_space(rng, n, 3 + trial % 10, 3);
    auto model = intersection_graph(space);
    for (std::size_t v = 0; v < model.cubes.size(); ++v) {
      CHECK(is_simple_cube(space, model.cubes[v]) == is_simple_point(model.graph, model.graph.label(v)));
    }
  }
}

TEST_CASE("the eight-cube fixture") {
  auto f = fixture::eight_cube();
  CHECK(f.space.size() == 8);
  CHECK_FALSE(is_contractible_space(f.space).contractible);
  for (char name : std::string("abceh")) CHECK(is_simple_cube(f.space, f.cube.at(name)));
  for (char name : std::string("dfg")) CHECK_FALSE(is_simple_cube(f.space, f.cube.at(name)));

  auto m1 = delete_in_order(f.space, f, "cbah");
  auto m2 = delete_in_order(f.space, f, "cbe");
  CHECK(m1.size() == 4);
  CHECK(m2.size() == 5);
  CHECK(no_simple_cube(m1));
  CHECK(no_simple_cube(m2));
  auto g1 = intersection_graph(m1).graph;
  auto g2 = intersection_graph(m2).graph;
  CHECK(isomorphic(g1, cycle_graph(4)));
  CHECK(isomorphic(g2, cycle_graph(5)));
  CHECK_FALSE(isomorphic(g1, g2));
  auto eq = homotopy_equivalent(g1, g2);
  CHECK(eq.verdict == Equivalence::Yes);
  CHECK(replay(g1, eq.trace) == g2);

  auto [compressed, trace] = compress_space(f.space);
  CHECK(no_simple_cube(compressed));
  auto cg = intersection_graph(compressed).graph;
  CHECK((isomorphic(cg, g1) || isomorphic(cg, g2)));
  CHECK(replay_space(f.space, trace) == compressed);
  CHECK_FALSE(is_contractible_space_strict(f.space));
}

TEST_CASE("replay_space validates cube certificates") {
  auto f = fixture::eight_cube();
  TransformationTrace t;
  t.steps.push_back({StepOp::DeletePoint, {f.label('d')}, {}});
  CHECK_THROWS_AS(replay_space(f.space, t), CertificateError);
  t.relabel = {{"x", "y"}};
  CHECK_THROWS_AS(replay_space(f.space, t), InvalidArgument);
}

TEST_CASE("contractible space corpus: deletion and exposure corollaries") {
  auto spaces = corpus::contractible_spaces(2024, 300);
  std::size_t violations = 0;
  for (const auto& m : spaces) {
    auto verdict = is_contractible_space(m);
    REQUIRE(verdict.contractible);
    // Graph contractibility of the model follows from cubical contractibility.
    if (!is_contractible(intersection_graph(m).graph).contractible) ++violations;
    if (m.size() > 1 && simple_cube_count(m) < 2) ++violations;
    for (const auto& u : m) {
      if (m.size() > 1 && is_simple_cube(m, u) && !is_contractible_space(m.without(u)).contractible) ++violations;
    }
    auto [c, t] = compress_space(m);
    if (c.size() != 1) ++violations;
    CHECK(replay_space(m, t) == c);
  }
  CHECK(violations == 0);
}

TEST_CASE("strict cubical recursion agrees with the graph recursion") {
  std::mt19937_64 rng(12);
  std::size_t checked = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 2 + trial % 2;
    auto space = oracle::grown_space(rng, n, 2 + trial % 8, trial % 3 == 0);
    CHECK(is_contractible_space_strict(space) == is_contractible_space(space).contractible);
    ++checked;
  }
  CHECK(checked == 150);
  CHECK_THROWS_AS(is_contractible_space_strict(fixture::eight_cube().space, 1), BudgetExceeded);
}

TEST_CASE("homotopy equivalence examples") {
  auto same = homotopy_equivalent(cycle_graph(4), cycle_graph(4));
  CHECK(same.verdict == Equivalence::Yes);
  CHECK(same.trace.steps.empty());

  auto no = homotopy_equivalent(complete_graph(1), cycle_graph(4));
  CHECK(no.verdict == Equivalence::No);
  CHECK(no.witness.find("euler") != std::string::npos);

  auto direct = homotopy_equivalent(complete_graph(5), path_graph(3, "p"));
  CHECK(direct.verdict == Equivalence::Yes);
  CHECK(replay(complete_graph(5), direct.trace) == path_graph(3, "p"));

  for (std::size_t k : {5u, 6u, 8u}) {
    auto r = homotopy_equivalent(cycle_graph(k, "c"), cycle_graph(4));
    REQUIRE(r.verdict == Equivalence::Yes);
    CHECK(r.states_explored > 0);
    CHECK(replay(cycle_graph(k, "c"), r.trace) == cycle_graph(4));
  }

  auto starved = homotopy_equivalent(cycle_graph(8, "c"), cycle_graph(4), 0);
  CHECK(starved.verdict == Equivalence::Unknown);
  CHECK_FALSE(starved.witness.empty());

  auto oct = homotopy_equivalent(fixture::octahedron(), cycle_graph(4));
  CHECK(oct.verdict == Equivalence::No);
  CHECK(to_string(Equivalence::Unknown) == "unknown");
}

TEST_CASE("equivalence of compressible graphs uses compression only") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    auto g = oracle::graph_of(oracle::random_graph(rng, 9, 0.5));
    auto [c, t] = compress_graph(g);
    auto r = homotopy_equivalent(g, c);
    REQUIRE(r.verdict == Equivalence::Yes);
    CHECK(r.states_explored == 0);
    CHECK(replay(g, r.trace) == c);
  }
}
