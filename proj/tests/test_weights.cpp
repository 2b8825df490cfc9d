#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "polycap/json_io.hpp"
#include "polycap/weights.hpp"

using namespace polycap;
using doctest::Approx;

namespace {
Vertex vx(std::initializer_list<AxisVertex> coords) {
  return Vertex{std::vector<AxisVertex>(coords)};
}
}  // namespace

TEST_CASE("pi: worked examples") {
  const TreeSpec t({4, 3});
  const Weight flat = Weight::polynomial(t, {0.0, 0.0});
  for (std::uint64_t id = 0; id < t.vertex_count(); ++id) {
    CHECK(flat.pi_by_id(id) == 1.0);
  }
  const TreeSpec t1({5});
  const Weight half = Weight::polynomial(t1, {0.5});
  CHECK(half.pi(vx({{3, 2}})) == Approx(4.0).epsilon(1e-14));
  const Weight mixed = Weight::polynomial(t, {0.5, 0.0});
  CHECK(mixed.pi(vx({{3, 1}, {2, 2}})) == Approx(4.0).epsilon(1e-14));
}

TEST_CASE("d_pi: worked examples") {
  const TreeSpec t1({5});
  const Weight flat = Weight::polynomial(t1, {0.0});
  CHECK(flat.d_pi(vx({{4, 0}})) == Approx(5.0).epsilon(1e-14));
  const Weight half = Weight::polynomial(t1, {0.5});
  CHECK(half.d_pi(vx({{1, 1}})) == Approx(3.414214).epsilon(1e-6));
  const TreeSpec t2({2, 3});
  const Weight flat2 = Weight::polynomial(t2, {0.0, 0.0});
  const Vertex v = vx({{1, 0}, {2, 3}});
  CHECK(flat2.d_pi(v) == Approx(6.0).epsilon(1e-14));
  CHECK(flat2.d_pi(v) == Approx(oracles::d_pi_brute(t2, flat2, v)).epsilon(1e-14));
}

TEST_CASE("d_pi: equals predecessor enumeration on every vertex") {
  const TreeSpec t({4, 3});
  const Weight poly = Weight::polynomial(t, {0.3, 0.7});
  const Weight table = Weight::product_table(
      t, {{1.0, 2.0, 1.5, 3.0}, {2.0, 1.25, 4.0}});
  std::vector<double> dense_vals(t.vertex_count());
  Rng rng(21);
  for (auto& x : dense_vals) x = 0.5 + rng.next_double();
  const Weight dense = Weight::dense_table(t, dense_vals);
  for (const Weight* w : {&poly, &table, &dense}) {
    for (std::uint64_t id = 0; id < t.vertex_count(); ++id) {
      const Vertex v = t.vertex_from_id(id);
      const double brute = oracles::d_pi_brute(t, *w, v);
      CHECK(w->d_pi(v) == Approx(brute).epsilon(1e-12));
      CHECK(w->d_pi_by_id(id) == Approx(brute).epsilon(1e-12));
    }
  }
}

TEST_CASE("d_pi: monotone under descent") {
  const TreeSpec t({4, 4});
  const Weight w = Weight::polynomial(t, {0.5, 0.25});
  Rng rng(22);
  for (int i = 0; i < 200; ++i) {
    const Vertex a = oracles::random_vertex(t, rng);
    const Vertex b = oracles::random_vertex(t, rng);
    if (leq(t, a, b)) CHECK(w.d_pi(a) >= w.d_pi(b) - 1e-12);
  }
}

TEST_CASE("d_pi: asymptotic regimes") {
  // s = 0: linear growth in d_T.
  const TreeSpec deep({20});
  const Weight flat = Weight::polynomial(deep, {0.0});
  for (std::uint32_t l = 0; l < 20; ++l) {
    CHECK(flat.axis_d_pi(0, l) == Approx(l + 1.0).epsilon(1e-14));
  }
  // s > 0: successive ratios approach 2^s.
  const Weight half = Weight::polynomial(deep, {0.5});
  const double ratio = half.axis_d_pi(0, 19) / half.axis_d_pi(0, 18);
  CHECK(ratio == Approx(std::exp2(0.5)).epsilon(3e-3));
}

TEST_CASE("weights: construction guards") {
  const TreeSpec t({3});
  CHECK_THROWS_AS(Weight::polynomial(t, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(Weight::polynomial(t, {-0.1}), std::invalid_argument);
  CHECK_THROWS_AS(Weight::polynomial(t, {0.2, 0.3}), std::invalid_argument);
  CHECK_THROWS_AS(Weight::product_table(t, {{1.0, 0.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(Weight::dense_table(t, {1.0}), std::invalid_argument);
  CHECK(Weight::polynomial(t, {0.0}).at_least_one());
  CHECK(Weight::polynomial(t, {0.9}).at_least_one());
  CHECK_FALSE(Weight::product_table(t, {{0.5, 1.0, 1.0}}).at_least_one());
  CHECK(Weight::product_table(t, {{1.5, 1.0, 2.0}}).at_least_one());
}

TEST_CASE("weights: axis factors multiply back") {
  const TreeSpec t({3, 4});
  const Weight w = Weight::polynomial(t, {0.25, 0.5});
  const Weight w0 = w.axis_weight(0);
  const Weight w1 = w.axis_weight(1);
  Rng rng(23);
  for (int i = 0; i < 50; ++i) {
    const Vertex v = oracles::random_vertex(t, rng);
    const Vertex a0 = Vertex{{v.coords[0]}};
    const Vertex a1 = Vertex{{v.coords[1]}};
    CHECK(w.pi(v) == Approx(w0.pi(a0) * w1.pi(a1)).epsilon(1e-12));
    CHECK(w.d_pi(v) == Approx(w0.d_pi(a0) * w1.d_pi(a1)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(Weight::dense_table(TreeSpec({2}), {1.0, 1.0, 1.0}).axis_weight(0),
                  std::invalid_argument);
}

TEST_CASE("weights: json round trip for all kinds") {
  const TreeSpec t({3, 2});
  Rng rng(24);
  std::vector<double> dense_vals(t.vertex_count());
  for (auto& x : dense_vals) x = 0.5 + rng.next_double();
  const Weight kinds[] = {
      Weight::polynomial(t, {0.5, 0.0}),
      Weight::product_table(t, {{1.0, 2.0, 0.5}, {3.0, 1.25}}),
      Weight::dense_table(t, dense_vals),
  };
  for (const Weight& w : kinds) {
    const Weight back = weight_from_json(t, weight_to_json(w));
    CHECK(back.kind() == w.kind());
    for (std::uint64_t id = 0; id < t.vertex_count(); ++id) {
      CHECK(back.pi_by_id(id) == w.pi_by_id(id));
      CHECK(back.d_pi_by_id(id) == doctest::Approx(w.d_pi_by_id(id)).epsilon(1e-14));
    }
  }
}
