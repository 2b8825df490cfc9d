#include "polycap/selftest.hpp"

#include <cmath>

#include "polycap/capacity.hpp"
#include "polycap/measures.hpp"
#include "polycap/potential.hpp"
#include "polycap/trace.hpp"
#include "polycap/weights.hpp"

namespace polycap {

namespace {

struct Harness {
  SelfTestReport report;

  void close(const std::string& name, double measured, double expected, double tol) {
    SelfTestCheck c{name, std::abs(measured - expected) <= tol * std::max(1.0, std::abs(expected)),
                    measured, expected};
    if (!c.pass) ++report.failures;
    report.checks.push_back(std::move(c));
  }

  void truth(const std::string& name, bool ok) {
    SelfTestCheck c{name, ok, ok ? 1.0 : 0.0, 1.0};
    if (!ok) ++report.failures;
    report.checks.push_back(std::move(c));
  }
};

Vertex vx(std::initializer_list<AxisVertex> coords) { return Vertex{std::vector<AxisVertex>(coords)}; }

}  // namespace

SelfTestReport run_selftest() {
  Harness h;

  // Order, meets, metric.
  {
    const TreeSpec t({3, 3});
    const Vertex a = vx({{2, 0}, {1, 1}});
    const Vertex root = vx({{0, 0}, {0, 0}});
    h.truth("leq: root dominates", leq(t, a, root));
    const TreeSpec t1({3});
    h.truth("leq: disjoint quarters", !leq(t1, vx({{2, 0}}), vx({{1, 1}})));
    const Vertex m = meet(t1, vx({{2, 0}}), vx({{2, 3}}));
    h.truth("meet: opposite quarters meet at root", m == vx({{0, 0}}));
    const TreeSpec t4({4, 4});
    const Vertex m2 = meet(t4, vx({{3, 1}, {2, 2}}), vx({{3, 1}, {1, 0}}));
    h.truth("meet: per-axis lca", m2 == vx({{3, 1}, {0, 0}}));
    h.close("delta(root, half)", delta(t1, vx({{0, 0}}), vx({{1, 0}})), 0.125, 1e-15);
    h.close("delta(halves)", delta(t1, vx({{1, 0}}), vx({{1, 1}})), 0.25, 1e-15);
    h.close("delta(a, a)", delta(t, a, a), 0.0, 1e-15);
  }

  // Weights and counting functions.
  {
    const TreeSpec t({5});
    const Weight w = Weight::polynomial(t, {0.5});
    h.close("pi: s=0.5 level 3", w.pi(vx({{3, 0}})), 4.0, 1e-14);
    const TreeSpec t2({3});
    const Weight w2 = Weight::polynomial(t2, {0.5});
    h.close("d_pi: two-term geometric", w2.d_pi(vx({{1, 0}})), std::sqrt(2.0) + 2.0, 1e-12);
    const TreeSpec tp({2, 3});
    const Weight wp = Weight::polynomial(tp, {0.0, 0.0});
    h.close("d_pi: product of counts", wp.d_pi(vx({{1, 1}, {2, 3}})), 6.0, 1e-14);
  }

  // Boundary measure, pushdown, shadows.
  {
    const TreeSpec t({3});
    h.close("lebesgue: root cell", lebesgue_cell_mass({0, 0}), 1.0, 1e-15);
    h.close("lebesgue: level 3", lebesgue_cell_mass({3, 0}), 0.125, 1e-15);
    const Measure md = md_measure(t);
    h.close("md: total mass", md.total_mass(), 1.0, 1e-14);
    const Measure atom =
        MeasureBuilder(t).add_interior(vx({{1, 0}}), 1.0).build();
    const Measure down = pushdown(atom);
    h.close("pushdown: mass preserved", down.total_mass(), atom.total_mass(), 1e-14);
    h.close("pushdown: left cell", down.boundary()[0], 0.5, 1e-15);
    h.close("pushdown: right cell", down.boundary()[1], 0.5, 1e-15);
    h.close("pushdown: outside shadow", down.boundary()[2], 0.0, 1e-15);
    const Measure twice = pushdown(down);
    double diff = 0.0;
    for (std::uint64_t c = 0; c < t.cell_count(); ++c) {
      diff = std::max(diff, std::abs(twice.boundary()[c] - down.boundary()[c]));
    }
    h.close("pushdown: idempotent", diff, 0.0, 1e-15);
    const Measure root_atom = MeasureBuilder(t).add_interior(vx({{0, 0}}), 1.0).build();
    const Measure root_down = pushdown(root_atom);
    diff = 0.0;
    for (std::uint64_t c = 0; c < t.cell_count(); ++c) {
      diff = std::max(diff, std::abs(root_down.boundary()[c] - md.boundary()[c]));
    }
    h.close("pushdown: root atom gives M_d", diff, 0.0, 1e-15);
    const RectangularSet shadow = boundary_shadow(t, {vx({{1, 0}})});
    h.close("shadow: cell count", static_cast<double>(shadow.covered_cell_count()), 2.0, 0.0);
  }

  // Potentials and energies.
  {
    const TreeSpec t({4});
    const Weight w = Weight::polynomial(t, {0.0});
    const Measure atom = gen_atom_cell(t, BoundaryCell{{0}});
    const Field V = potential(atom, w);
    h.close("potential: own cell", V.cell_values[0], 4.0, 1e-14);
    h.close("potential: sibling cell", V.cell_values[1], 3.0, 1e-14);
    h.close("energy: cell atom", energy(atom, w), 4.0, 1e-14);
    const TreeSpec t3({3});
    const Weight w3 = Weight::polynomial(t3, {0.0});
    const Measure md = md_measure(t3);
    const Field Vmd = potential(md, w3);
    h.close("potential: M at cells", Vmd.cell_values[0], 1.75, 1e-14);
    h.close("energy: E[M]", energy(md, w3), 1.75, 1e-14);
    Field ones = Field::on_vertices(t3, 1.0);
    const Field If = apply_I(ones, w3);
    h.close("apply_I: ones at leaf", If.vertex_values[t3.vertex_id(vx({{2, 3}}))], 3.0, 1e-14);
  }

  // Capacities.
  {
    const TreeSpec t({5});
    const Weight w = Weight::polynomial(t, {0.0});
    const auto point = solve_capacity(TargetSet::of_vertices(t, {vx({{4, 7}})}), w, {1e-10, 0});
    h.close("capacity: point 1/d_pi", point.cap, 0.2, 1e-8);
    h.truth("capacity: point gap", point.gap <= 1e-9);
    const TreeSpec t3({3});
    const Weight w3 = Weight::polynomial(t3, {0.0});
    const auto full = solve_capacity(TargetSet::full_boundary(t3), w3, {1e-9, 0});
    h.close("capacity: full boundary 4/7", full.cap, 4.0 / 7.0, 1e-7);
    const TreeSpec tp({3, 3});
    const Weight wp = Weight::polynomial(tp, {0.0, 0.0});
    const TreeSpec axis({3});
    const auto axis_full = TargetSet::full_boundary(axis);
    const double prod = product_capacity({axis_full, axis_full}, wp, {1e-9, 0});
    h.close("capacity: product of axes", prod, 16.0 / 49.0, 1e-6);
    const auto two_d = solve_capacity(TargetSet::full_boundary(tp), wp, {1e-8, 0});
    h.close("capacity: 2-d full boundary", two_d.cap, 16.0 / 49.0, 1e-5);
    // Uniform equilibrium measure on the full boundary, checked by KKT.
    const double n = 3.0;
    const Measure eq = scaled(md_measure(t3), 1.0 / (2.0 * (1.0 - std::exp2(-n))));
    const auto kkt = kkt_check(TargetSet::full_boundary(t3), eq, w3, 1e-9);
    h.truth("kkt: uniform equilibrium passes", kkt.pass);
    const auto kkt_bad = kkt_check(TargetSet::full_boundary(t3), scaled(eq, 2.0), w3, 1e-9);
    h.truth("kkt: scaled measure fails", !kkt_bad.pass);
  }

  // Hardy norm and maximal function.
  {
    const TreeSpec t({4});
    const Weight w = Weight::polynomial(t, {0.0});
    const Measure atom = gen_atom_cell(t, BoundaryCell{{3}});
    const auto hn = hardy_norm(atom, w, 1e-12);
    h.close("hardy: point mass = d_pi", hn.C, 4.0, 1e-10);
    const auto hn2 = hardy_norm(scaled(atom, 2.0), w, 1e-12);
    h.close("hardy: homogeneity", hn2.C, 2.0 * hn.C, 1e-9);

    const TreeSpec t3({3});
    const Measure md = md_measure(t3);
    Field g = Field::on_cells(t3, 1.0);
    const Field mg = maximal_function(g, md);
    h.close("maximal: constant g", mg.cell_values[2], 1.0, 1e-14);
    Field left = Field::on_cells(t3, 0.0);
    left.cell_values[0] = left.cell_values[1] = 1.0;
    const Field ml = maximal_function(left, md);
    h.close("maximal: left cells", ml.cell_values[0], 1.0, 1e-14);
    h.close("maximal: right cells", ml.cell_values[3], 0.5, 1e-14);
  }

  return h.report;
}

}  // namespace polycap
