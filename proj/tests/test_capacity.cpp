#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "polycap/capacity.hpp"
#include "polycap/potential.hpp"
#include "polycap/reference.hpp"

using namespace polycap;
using doctest::Approx;

namespace {
Vertex vx(std::initializer_list<AxisVertex> coords) {
  return Vertex{std::vector<AxisVertex>(coords)};
}
}  // namespace

TEST_CASE("capacity: single vertex has the Lagrange closed form 1/d_pi") {
  Rng rng(51);
  for (const auto depths : {std::vector<std::uint32_t>{5}, {3, 4}}) {
    for (const double s : {0.0, 0.5}) {
      const TreeSpec t(depths);
      const Weight w = Weight::polynomial(t, std::vector<double>(depths.size(), s));
      for (int trial = 0; trial < 5; ++trial) {
        const Vertex v = oracles::random_vertex(t, rng);
        const auto res = solve_capacity(TargetSet::of_vertices(t, {v}), w, {1e-10, 0});
        CHECK(res.converged);
        CHECK(res.cap == Approx(1.0 / oracles::d_pi_brute(t, w, v)).epsilon(1e-8));
        CHECK(res.gap <= 1e-9);
        CHECK(res.dual_value <= res.primal_value);
      }
    }
  }
}

TEST_CASE("capacity: full boundary closed form 2^(n-1)/(2^n - 1)") {
  for (std::uint32_t n = 3; n <= 6; ++n) {
    const TreeSpec t({n});
    const Weight w = Weight::polynomial(t, {0.0});
    const auto res = solve_capacity(TargetSet::full_boundary(t), w, {1e-9, 0});
    const double expect = std::ldexp(1.0, n - 1) / (std::ldexp(1.0, n) - 1.0);
    CHECK(res.converged);
    CHECK(res.cap == Approx(expect).epsilon(1e-6));
  }
}

TEST_CASE("capacity: boundary capacity converges as the truncation deepens") {
  // Truncation depth is a free parameter; the full-boundary capacity
  // decreases in depth toward its closed-form limit on each axis count.
  double prev = 1e300;
  for (std::uint32_t n = 3; n <= 7; ++n) {
    const TreeSpec t({n, n});
    const Weight w = Weight::polynomial(t, {0.0, 0.0});
    const double cap = solve_capacity(TargetSet::full_boundary(t), w, {1e-8, 0}).cap;
    CHECK(cap < prev);
    prev = cap;
  }
  CHECK(prev == Approx(0.25).epsilon(0.02));  // limit 1/4 at d=2
}

TEST_CASE("capacity: empty set") {
  const TreeSpec t({3});
  const Weight w = Weight::polynomial(t, {0.0});
  const auto res = solve_capacity(TargetSet{t, {}, {}}, w);
  CHECK(res.cap == 0.0);
  CHECK(res.converged);
  CHECK(res.mu_E.total_mass() == 0.0);
}

TEST_CASE("capacity: equilibrium identity at convergence") {
  Rng rng(52);
  const TreeSpec t({3, 3});
  const Weight w = Weight::polynomial(t, {0.25, 0.0});
  for (int trial = 0; trial < 8; ++trial) {
    TargetSet e;
    e.tree = t;
    std::vector<Vertex> vs;
    for (int i = 0; i < 3; ++i) vs.push_back(oracles::random_vertex(t, rng));
    e = TargetSet::of_vertices(t, vs);
    const double tol = 1e-8;
    const auto res = solve_capacity(e, w, {tol, 0});
    REQUIRE(res.converged);
    CHECK(std::abs(res.cap - res.mu_E.total_mass()) <= tol);
    CHECK(std::abs(res.cap - energy(res.mu_E, w)) <= tol);
    CHECK(res.gap >= 0.0);
  }
}

TEST_CASE("capacity: monotone in the target set") {
  Rng rng(53);
  const TreeSpec t({3, 3});
  const Weight w = Weight::polynomial(t, {0.0, 0.0});
  const double tol = 1e-8;
  for (int trial = 0; trial < 6; ++trial) {
    std::vector<Vertex> small, big;
    for (int i = 0; i < 3; ++i) {
      const Vertex v = oracles::random_vertex(t, rng);
      small.push_back(v);
      big.push_back(v);
    }
    for (int i = 0; i < 3; ++i) big.push_back(oracles::random_vertex(t, rng));
    const double cap_small = solve_capacity(TargetSet::of_vertices(t, small), w, {tol, 0}).cap;
    const double cap_big = solve_capacity(TargetSet::of_vertices(t, big), w, {tol, 0}).cap;
    CHECK(cap_small <= cap_big + 2.0 * tol);
  }
}

TEST_CASE("product_capacity: worked examples and equality with the 2-d solver") {
  const TreeSpec axis({3});
  const TreeSpec t({3, 3});
  const Weight w = Weight::polynomial(t, {0.0, 0.0});
  const TargetSet axis_full = TargetSet::full_boundary(axis);
  CHECK(product_capacity({axis_full, axis_full}, w, {1e-9, 0}) ==
        Approx(16.0 / 49.0).epsilon(1e-6));
  CHECK(product_capacity({axis_full, TargetSet{axis, {}, {}}}, w) == 0.0);

  // Singleton times singleton.
  const Weight wm = Weight::polynomial(t, {0.5, 0.0});
  const Vertex a0 = vx({{2, 1}});
  const Vertex a1 = vx({{1, 0}});
  const TargetSet s0 = TargetSet::of_vertices(axis, {a0});
  const TargetSet s1 = TargetSet::of_vertices(axis, {a1});
  const double expect = 1.0 / (oracles::d_pi_brute(axis, wm.axis_weight(0), a0) *
                               oracles::d_pi_brute(axis, wm.axis_weight(1), a1));
  CHECK(product_capacity({s0, s1}, wm, {1e-10, 0}) == Approx(expect).epsilon(1e-7));

  // Product equality against the 2-d solver on cell products.
  Rng rng(54);
  for (int trial = 0; trial < 4; ++trial) {
    std::vector<std::uint64_t> c0, c1;
    for (int i = 0; i < 2; ++i) {
      c0.push_back(rng.next_below(axis.cell_count()));
      c1.push_back(rng.next_below(axis.cell_count()));
    }
    const TargetSet e0 = TargetSet::of_cell_ids(axis, c0);
    const TargetSet e1 = TargetSet::of_cell_ids(axis, c1);
    std::vector<std::uint64_t> prod;
    for (auto i : e0.cells) {
      for (auto k : e1.cells) prod.push_back(i * t.cell_stride(0) + k);
    }
    const double lhs = solve_capacity(TargetSet::of_cell_ids(t, prod), w, {1e-9, 0}).cap;
    const double rhs = product_capacity({e0, e1}, w, {1e-9, 0});
    CHECK(lhs == Approx(rhs).epsilon(1e-4));
  }

  const Weight dense = Weight::dense_table(t, std::vector<double>(t.vertex_count(), 1.0));
  CHECK_THROWS_AS(product_capacity({axis_full, axis_full}, dense), std::invalid_argument);
}

TEST_CASE("capacity: projections bound arbitrary sets (subadditivity)") {
  Rng rng(55);
  const TreeSpec t({3, 3});
  const TreeSpec axis({3});
  const Weight w = Weight::polynomial(t, {0.25, 0.25});
  for (int trial = 0; trial < 6; ++trial) {
    std::vector<Vertex> members;
    for (int i = 0; i < 4; ++i) members.push_back(oracles::random_vertex(t, rng));
    const TargetSet e = TargetSet::of_vertices(t, members);
    std::vector<Vertex> p0, p1;
    for (const auto& v : members) {
      p0.push_back(Vertex{{v.coords[0]}});
      p1.push_back(Vertex{{v.coords[1]}});
    }
    const double cap_e = solve_capacity(e, w, {1e-8, 0}).cap;
    const double cap_p = solve_capacity(TargetSet::of_vertices(axis, p0), w.axis_weight(0), {1e-8, 0}).cap *
                         solve_capacity(TargetSet::of_vertices(axis, p1), w.axis_weight(1), {1e-8, 0}).cap;
    CHECK(cap_e <= cap_p + 1e-6);
  }
}

TEST_CASE("capacity: measures with bounded potential or dominated energy fit under cap") {
  Rng rng(56);
  const TreeSpec t({3, 3});
  const Weight w = Weight::polynomial(t, {0.0, 0.0});
  const double tol = 1e-7;
  for (int trial = 0; trial < 6; ++trial) {
    // Random candidate measure scaled so that sup_E V = 1; then mu(E) <= cap(E).
    std::vector<std::uint64_t> cells;
    for (int i = 0; i < 5; ++i) cells.push_back(rng.next_below(t.cell_count()));
    const TargetSet e = TargetSet::of_cell_ids(t, cells);
    MeasureBuilder b(t);
    for (auto c : e.cells) b.add_cell_id(c, 0.2 + rng.next_double());
    const Measure base = b.build();
    const Field v = potential(base, w);
    double sup = 0.0;
    for (auto c : e.cells) sup = std::max(sup, v.cell_values[c]);
    const Measure mu = scaled(base, 1.0 / sup);
    const double cap = solve_capacity(e, w, {tol, 0}).cap;
    CHECK(mu.total_mass() <= cap + 1e-5);

    // Same conclusion from the energy route: scale so mu(E) = E[mu].
    const Measure nu = scaled(base, base.total_mass() / energy(base, w));
    CHECK(std::abs(nu.total_mass() - energy(nu, w)) <= 1e-9);
    CHECK(nu.total_mass() <= cap + 1e-5);
  }
}

TEST_CASE("capacity: shadow comparison") {
  Rng rng(57);
  const TreeSpec t({3, 3});
  const Weight w = Weight::polynomial(t, {0.0, 0.0});
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<Vertex> members;
    for (int i = 0; i < 3; ++i) members.push_back(oracles::random_vertex(t, rng));
    const TargetSet e = TargetSet::of_vertices(t, members);
    const RectangularSet shadow = boundary_shadow(t, members);
    const double cap_e = solve_capacity(e, w, {1e-8, 0}).cap;
    const double cap_b = solve_capacity(TargetSet::from_rectangular(shadow), w, {1e-8, 0}).cap;
    CHECK(cap_b <= cap_e + 1e-6);
    CHECK(cap_e <= 100.0 * cap_b);
  }
}

TEST_CASE("capacity: agrees with the dense reference optimizer") {
  Rng rng(58);
  const TreeSpec t({2, 2});
  const Weight w = Weight::polynomial(t, {0.35, 0.0});
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<Vertex> vs;
    for (int i = 0; i < 3; ++i) vs.push_back(oracles::random_vertex(t, rng));
    TargetSet e = TargetSet::of_vertices(t, vs);
    e.cells.push_back(rng.next_below(t.cell_count()));
    const double fast = solve_capacity(e, w, {1e-9, 0}).cap;
    const double slow = reference_capacity(e, w, 200000);
    CHECK(fast == Approx(slow).epsilon(1e-6));
  }
}

TEST_CASE("capacity: comparable vertices collapse to the ancestor constraint") {
  // The ancestor's admissibility constraint implies the descendant's, so the
  // pair has the ancestor's point capacity; the solver must cope with the
  // redundant atom rather than require canonicalization.
  const TreeSpec t({5});
  const Weight w = Weight::polynomial(t, {0.3});
  const Vertex anc = vx({{1, 0}});
  const Vertex dec = vx({{4, 3}});
  const double both = solve_capacity(TargetSet::of_vertices(t, {anc, dec}), w, {1e-10, 0}).cap;
  const double point = solve_capacity(TargetSet::of_vertices(t, {anc}), w, {1e-10, 0}).cap;
  CHECK(both == Approx(point).epsilon(1e-8));
}

TEST_CASE("capacity: three-parameter product structure") {
  const TreeSpec t({3, 3, 3});
  const TreeSpec axis({3});
  const Weight w = Weight::polynomial(t, {0.0, 0.2, 0.4});
  const double cap3 = solve_capacity(TargetSet::full_boundary(t), w, {1e-9, 0}).cap;
  double prod = 1.0;
  for (int j = 0; j < 3; ++j) {
    prod *= solve_capacity(TargetSet::full_boundary(axis), w.axis_weight(j), {1e-10, 0}).cap;
  }
  CHECK(cap3 == Approx(prod).epsilon(1e-6));
  CHECK(cap3 == Approx(reference_capacity(TargetSet::full_boundary(t), w, 500000)).epsilon(1e-8));
}

TEST_CASE("capacity: non-convergence is flagged, not thrown") {
  const TreeSpec t({4});
  const Weight w = Weight::polynomial(t, {0.0});
  const auto res = solve_capacity(TargetSet::full_boundary(t), w, {1e-12, 1});
  CHECK_FALSE(res.converged);
  CHECK(res.gap > 0.0);
  CHECK(res.iterations == 1);
}

TEST_CASE("kkt_check: certificates") {
  const TreeSpec t({3});
  const Weight w = Weight::polynomial(t, {0.0});
  const TargetSet full = TargetSet::full_boundary(t);
  const Measure eq = scaled(md_measure(t), 1.0 / (2.0 * (1.0 - 0.125)));
  CHECK(kkt_check(full, eq, w, 1e-9).pass);
  CHECK_FALSE(kkt_check(full, scaled(eq, 2.0), w, 1e-9).pass);

  // Solver output on a single vertex passes at 1e-6.
  const Vertex v = vx({{2, 3}});
  const TargetSet point = TargetSet::of_vertices(t, {v});
  const auto res = solve_capacity(point, w, {1e-9, 0});
  CHECK(kkt_check(point, res.mu_E, w, 1e-6).pass);

  // Support violations are reported with the offending atom.
  const auto bad = kkt_check(point, eq, w, 1e-6);
  CHECK_FALSE(bad.pass);
  CHECK_FALSE(bad.support_ok);
  CHECK_FALSE(bad.offending_atoms.empty());
}
