#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "oracles.hpp"
#include "polycap/polytree.hpp"
#include "polycap/rng.hpp"

using namespace polycap;
using doctest::Approx;

namespace {
Vertex vx(std::initializer_list<AxisVertex> coords) {
  return Vertex{std::vector<AxisVertex>(coords)};
}
}  // namespace

TEST_CASE("order: worked examples") {
  const TreeSpec t1({3});
  const TreeSpec t2({3, 3});
  // Everything lies below the root.
  for (std::uint64_t id = 0; id < t2.vertex_count(); ++id) {
    CHECK(leq(t2, t2.vertex_from_id(id), vx({{0, 0}, {0, 0}})));
  }
  CHECK_FALSE(leq(t1, vx({{2, 0}}), vx({{1, 1}})));
  // Incomparable in both orders: axis 1 one way, axis 2 the other.
  const Vertex a = vx({{2, 0}, {1, 1}});
  const Vertex b = vx({{1, 0}, {2, 2}});
  CHECK_FALSE(leq(t2, a, b));
  CHECK_FALSE(leq(t2, b, a));
}

TEST_CASE("order: matches interval containment on random pairs") {
  const TreeSpec t({3, 4});
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    const Vertex a = oracles::random_vertex(t, rng);
    const Vertex b = oracles::random_vertex(t, rng);
    CHECK(leq(t, a, b) == oracles::leq_oracle(a, b));
  }
}

TEST_CASE("order: partial order axioms on random triples") {
  const TreeSpec t({3, 3});
  Rng rng(12);
  for (int i = 0; i < 300; ++i) {
    const Vertex a = oracles::random_vertex(t, rng);
    const Vertex b = oracles::random_vertex(t, rng);
    const Vertex c = oracles::random_vertex(t, rng);
    CHECK(leq(t, a, a));
    if (leq(t, a, b) && leq(t, b, a)) CHECK(a == b);
    if (leq(t, a, b) && leq(t, b, c)) CHECK(leq(t, a, c));
  }
}

TEST_CASE("order: mismatched tree is rejected") {
  const TreeSpec t({3, 3});
  CHECK_THROWS_AS(leq(t, vx({{2, 0}}), vx({{1, 1}, {0, 0}})), std::invalid_argument);
  CHECK_THROWS_AS(meet(t, vx({{2, 0}, {5, 0}}), vx({{1, 1}, {0, 0}})), std::invalid_argument);
}

TEST_CASE("meet: worked examples") {
  const TreeSpec t1({3});
  const TreeSpec t4({4, 4});
  Rng rng(13);
  for (int i = 0; i < 50; ++i) {
    const Vertex a = oracles::random_vertex(t4, rng);
    CHECK(meet(t4, a, a) == a);
  }
  CHECK(meet(t1, vx({{2, 0}}), vx({{2, 3}})) == vx({{0, 0}}));
  CHECK(meet(t4, vx({{3, 1}, {2, 2}}), vx({{3, 1}, {1, 0}})) == vx({{3, 1}, {0, 0}}));
}

TEST_CASE("meet: deepest common ancestor, exhaustively") {
  const TreeSpec t({2, 3});
  for (std::uint64_t ia = 0; ia < t.vertex_count(); ++ia) {
    for (std::uint64_t ib = 0; ib < t.vertex_count(); ++ib) {
      const Vertex a = t.vertex_from_id(ia);
      const Vertex b = t.vertex_from_id(ib);
      const Vertex m = meet(t, a, b);
      CHECK(leq(t, a, m));
      CHECK(leq(t, b, m));
      // Every common ancestor dominates the meet.
      for (std::uint64_t ig = 0; ig < t.vertex_count(); ++ig) {
        const Vertex g = t.vertex_from_id(ig);
        if (leq(t, a, g) && leq(t, b, g)) CHECK(leq(t, m, g));
      }
    }
  }
}

TEST_CASE("meet: ancestor count is the predecessor count") {
  const TreeSpec t({3, 3});
  Rng rng(14);
  for (int i = 0; i < 100; ++i) {
    const Vertex a = oracles::random_vertex(t, rng);
    const Vertex b = oracles::random_vertex(t, rng);
    const Vertex m = meet(t, a, b);
    CHECK(ancestor_count(m) == oracles::predecessors_of(t, m).size());
  }
}

TEST_CASE("delta: worked examples") {
  const TreeSpec t({3});
  CHECK(delta(t, vx({{0, 0}}), vx({{1, 0}})) == Approx(0.125).epsilon(1e-14));
  CHECK(delta(t, vx({{1, 0}}), vx({{1, 1}})) == Approx(0.25).epsilon(1e-14));
  const TreeSpec t2({3, 2});
  Rng rng(15);
  for (int i = 0; i < 20; ++i) {
    const Vertex a = oracles::random_vertex(t2, rng);
    CHECK(delta(t2, a, a) == 0.0);
  }
  // Cells go through their leaf vertices: meet of sibling leaf cells is at
  // level 1, so delta = 2^-2 - 2^-3.
  CHECK(delta(t, BoundaryCell{{0}}, BoundaryCell{{1}}) ==
        Approx(std::ldexp(1.0, -2) - std::ldexp(1.0, -3)).epsilon(1e-14));
}

TEST_CASE("delta: metric axioms, exhaustive points at small size") {
  const TreeSpec t({2, 2});
  std::vector<Vertex> pts;
  for (std::uint64_t id = 0; id < t.vertex_count(); ++id) pts.push_back(t.vertex_from_id(id));
  for (const auto& a : pts) {
    for (const auto& b : pts) {
      const double dab = delta(t, a, b);
      CHECK(dab >= 0.0);
      CHECK(dab == Approx(delta(t, b, a)).epsilon(1e-14));
      if (!(a == b)) CHECK(dab > 0.0);
      for (const auto& c : pts) {
        CHECK(dab <= delta(t, a, c) + delta(t, c, b) + 1e-14);
      }
    }
  }
}

TEST_CASE("boundary shadow: worked examples") {
  const TreeSpec t({3});
  const RectangularSet everything = boundary_shadow(t, {vx({{0, 0}})});
  CHECK(everything.covered_cell_count() == t.cell_count());
  const RectangularSet half = boundary_shadow(t, {vx({{1, 0}})});
  CHECK(half.cell_ids() == std::vector<std::uint64_t>{0, 1});
  // Overlapping boxes counted once.
  const TreeSpec t2({3, 3});
  const RectangularSet overlap =
      boundary_shadow(t2, {vx({{1, 0}, {0, 0}}), vx({{0, 0}, {1, 0}})});
  std::set<std::uint64_t> expect;
  for (std::uint64_t c = 0; c < t2.cell_count(); ++c) {
    const BoundaryCell cell = t2.cell_from_id(c);
    if (cell.cell[0] < 2 || cell.cell[1] < 2) expect.insert(c);
  }
  const auto ids = overlap.cell_ids();
  CHECK(std::set<std::uint64_t>(ids.begin(), ids.end()) == expect);
  CHECK(boundary_shadow(t, {}).empty());
}

TEST_CASE("boundary shadow: membership and count match a brute-force scan") {
  const TreeSpec t({3, 4});
  Rng rng(16);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Vertex> tops;
    for (int i = 0; i < 4; ++i) tops.push_back(oracles::random_vertex(t, rng));
    const RectangularSet set = boundary_shadow(t, tops);
    std::uint64_t count = 0;
    for (std::uint64_t c = 0; c < t.cell_count(); ++c) {
      const Vertex leaf = t.vertex_from_id(t.leaf_vertex_of_cell(c));
      bool in = false;
      for (const auto& top : tops) in = in || oracles::leq_oracle(leaf, top);
      count += in;
      CHECK(set.contains_cell_id(c) == in);
    }
    CHECK(set.covered_cell_count() == count);
  }
}

TEST_CASE("rectangular set: canonical form drops dominated boxes") {
  const TreeSpec t({3, 3});
  const RectangularSet set(t, {vx({{1, 0}, {1, 0}}), vx({{2, 1}, {2, 1}}), vx({{1, 0}, {1, 0}})});
  REQUIRE(set.boxes().size() == 1);
  CHECK(set.boxes()[0] == vx({{1, 0}, {1, 0}}));
}

TEST_CASE("rect_family: generators") {
  const TreeSpec t({3});
  const auto singles = rect_family(t, FamilySpec::parse("single-boxes,max-level=2"));
  CHECK(singles.size() == 7);  // 1 + 2 + 4 vertices
  const auto none = rect_family(t, FamilySpec::parse("random-unions,k=3,count=0,seed=1"));
  CHECK(none.empty());
  const auto a = rect_family(t, FamilySpec::parse("random-unions,k=2,count=5,seed=9"));
  const auto b = rect_family(t, FamilySpec::parse("random-unions,k=2,count=5,seed=9"));
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].boxes() == b[i].boxes());
  CHECK_THROWS_AS(rect_family(t, FamilySpec::parse("spirals,count=3")), std::invalid_argument);
  CHECK_THROWS_AS(rect_family(t, FamilySpec::parse("random-unions,k=3,count=1")),
                  std::invalid_argument);  // missing seed
}

TEST_CASE("vertex text form round trip") {
  const Vertex v = vx({{2, 1}, {3, 5}});
  CHECK(to_string(v) == "2:1×3:5");
  CHECK(parse_vertex(to_string(v)) == v);
  CHECK(parse_vertex("2:1x3:5") == v);  // ascii accepted on input
  CHECK_THROWS_AS(parse_vertex("banana"), std::invalid_argument);
}

TEST_CASE("tree spec: validation and id round trips") {
  CHECK_THROWS_AS(TreeSpec(std::vector<std::uint32_t>{}), std::invalid_argument);
  CHECK_THROWS_AS(TreeSpec({0}), std::invalid_argument);
  CHECK_THROWS_AS(TreeSpec({30, 30}), std::invalid_argument);  // over the vertex budget
  const TreeSpec t({3, 2});
  CHECK(t.vertex_count() == 7 * 3);
  CHECK(t.cell_count() == 4 * 2);
  CHECK_THROWS_AS(t.validate(vx({{2, 4}, {0, 0}})), std::invalid_argument);
  for (std::uint64_t id = 0; id < t.vertex_count(); ++id) {
    CHECK(t.vertex_id(t.vertex_from_id(id)) == id);
  }
  for (std::uint64_t c = 0; c < t.cell_count(); ++c) {
    CHECK(t.cell_id(t.cell_from_id(c)) == c);
  }
}
