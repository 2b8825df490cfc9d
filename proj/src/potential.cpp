#include "polycap/potential.hpp"

#include <stdexcept>

#include "polycap/sweeps.hpp"

namespace polycap {

namespace {

// Dense vertex array of a measure: interior atoms plus cell masses folded
// onto their leaf vertices.
std::vector<double> measure_on_vertices(const Measure& mu) {
  const TreeSpec& t = mu.tree();
  std::vector<double> val(t.vertex_count(), 0.0);
  for (const auto& [vid, m] : mu.interior()) val[vid] += m;
  for (std::uint64_t c = 0; c < t.cell_count(); ++c) {
    const double m = mu.boundary()[c];
    if (m != 0.0) val[t.leaf_vertex_of_cell(c)] += m;
  }
  return val;
}

void require_boundary_supported(const Measure& mu, const char* op) {
  if (!mu.boundary_supported()) {
    throw std::invalid_argument(std::string(op) + ": measure must be boundary-supported (apply pushdown first)");
  }
}

}  // namespace

Field apply_I(const Field& f, const Weight& w) {
  if (!f.has_vertices()) throw std::invalid_argument("apply_I: field must be defined on vertices");
  if (!(f.tree == w.tree())) throw std::invalid_argument("apply_I: field and weight trees differ");
  const TreeSpec& t = f.tree;
  Field out = Field::on_both(t);
  out.vertex_values = f.vertex_values;
  const auto& pi = w.pi_dense();
  for (std::uint64_t v = 0; v < out.vertex_values.size(); ++v) out.vertex_values[v] *= pi[v];
  ancestor_sum_sweep(t, out.vertex_values);
  for (std::uint64_t c = 0; c < t.cell_count(); ++c) {
    out.cell_values[c] = out.vertex_values[t.leaf_vertex_of_cell(c)];
  }
  return out;
}

Field apply_I_star(const Measure& mu) {
  const TreeSpec& t = mu.tree();
  Field out = Field::on_vertices(t);
  out.vertex_values = measure_on_vertices(mu);
  subtree_sum_sweep(t, out.vertex_values);
  return out;
}

Field potential(const Measure& mu, const Weight& w, PotentialMode mode) {
  const TreeSpec& t = mu.tree();
  if (!(t == w.tree())) throw std::invalid_argument("potential: measure and weight trees differ");
  if (mode == PotentialMode::sweep) {
    Field istar = apply_I_star(mu);
    return apply_I(istar, w);
  }
  // Kernel oracle: V(x) = sum over atoms tau of d_pi(meet(x, tau)) mass(tau).
  std::vector<std::pair<Vertex, double>> atoms;
  for (const auto& [vid, m] : mu.interior()) atoms.emplace_back(t.vertex_from_id(vid), m);
  for (std::uint64_t c = 0; c < t.cell_count(); ++c) {
    if (mu.boundary()[c] != 0.0) {
      atoms.emplace_back(t.vertex_from_id(t.leaf_vertex_of_cell(c)), mu.boundary()[c]);
    }
  }
  Field out = Field::on_both(t);
  for (std::uint64_t v = 0; v < t.vertex_count(); ++v) {
    const Vertex x = t.vertex_from_id(v);
    double acc = 0.0;
    for (const auto& [tau, m] : atoms) acc += w.d_pi(meet(t, x, tau)) * m;
    out.vertex_values[v] = acc;
  }
  for (std::uint64_t c = 0; c < t.cell_count(); ++c) {
    out.cell_values[c] = out.vertex_values[t.leaf_vertex_of_cell(c)];
  }
  return out;
}

double energy(const Measure& mu, const Measure& nu, const Weight& w) {
  const TreeSpec& t = mu.tree();
  if (!(t == nu.tree()) || !(t == w.tree())) {
    throw std::invalid_argument("energy: arguments live on different trees");
  }
  std::vector<double> a = measure_on_vertices(mu);
  subtree_sum_sweep(t, a);
  const bool same = &mu == &nu;
  std::vector<double> b;
  if (!same) {
    b = measure_on_vertices(nu);
    subtree_sum_sweep(t, b);
  }
  const auto& pi = w.pi_dense();
  double acc = 0.0;
  for (std::uint64_t v = 0; v < a.size(); ++v) {
    acc += a[v] * (same ? a[v] : b[v]) * pi[v];
  }
  return acc;
}

double energy(const Measure& mu, const Weight& w) { return energy(mu, mu, w); }

Field apply_I_star_mu(const Field& g_cells, const Measure& mu) {
  require_boundary_supported(mu, "apply_I_star_mu");
  if (!g_cells.has_cells()) throw std::invalid_argument("apply_I_star_mu: g must be defined on cells");
  if (!(g_cells.tree == mu.tree())) throw std::invalid_argument("apply_I_star_mu: trees differ");
  const TreeSpec& t = mu.tree();
  Field out = Field::on_vertices(t);
  for (std::uint64_t c = 0; c < t.cell_count(); ++c) {
    const double gm = g_cells.cell_values[c] * mu.boundary()[c];
    if (gm != 0.0) out.vertex_values[t.leaf_vertex_of_cell(c)] += gm;
  }
  subtree_sum_sweep(t, out.vertex_values);
  return out;
}

Field maximal_function(const Field& g_cells, const Measure& mu) {
  require_boundary_supported(mu, "maximal_function");
  if (!g_cells.has_cells()) throw std::invalid_argument("maximal_function: g must be defined on cells");
  if (!(g_cells.tree == mu.tree())) throw std::invalid_argument("maximal_function: trees differ");
  const TreeSpec& t = mu.tree();

  // Box averages, with empty boxes pinned to zero so they never win the sup.
  std::vector<double> box_mass(t.vertex_count(), 0.0);
  std::vector<double> box_int(t.vertex_count(), 0.0);
  for (std::uint64_t c = 0; c < t.cell_count(); ++c) {
    const double m = mu.boundary()[c];
    if (m != 0.0) {
      const std::uint64_t v = t.leaf_vertex_of_cell(c);
      box_mass[v] += m;
      box_int[v] += g_cells.cell_values[c] * m;
    }
  }
  subtree_sum_sweep(t, box_mass);
  subtree_sum_sweep(t, box_int);
  std::vector<double>& avg = box_int;
  for (std::uint64_t v = 0; v < avg.size(); ++v) {
    avg[v] = box_mass[v] > 0.0 ? avg[v] / box_mass[v] : 0.0;
  }
  ancestor_max_sweep(t, avg);

  Field out = Field::on_cells(t);
  for (std::uint64_t c = 0; c < t.cell_count(); ++c) {
    out.cell_values[c] = avg[t.leaf_vertex_of_cell(c)];
  }
  return out;
}

double field_value_at_cell(const Field& f, std::uint64_t cell_id) {
  if (f.has_cells()) return f.cell_values[cell_id];
  return f.vertex_values[f.tree.leaf_vertex_of_cell(cell_id)];
}

double inner_pi(const Field& a, const Field& b, const Weight& w) {
  if (!a.has_vertices() || !b.has_vertices()) {
    throw std::invalid_argument("inner_pi: fields must be defined on vertices");
  }
  const auto& pi = w.pi_dense();
  double acc = 0.0;
  for (std::uint64_t v = 0; v < pi.size(); ++v) {
    acc += a.vertex_values[v] * b.vertex_values[v] * pi[v];
  }
  return acc;
}

double inner_mu(const Field& a, const Field& b, const Measure& mu) {
  double acc = 0.0;
  for (std::uint64_t c = 0; c < mu.tree().cell_count(); ++c) {
    const double m = mu.boundary()[c];
    if (m != 0.0) acc += field_value_at_cell(a, c) * field_value_at_cell(b, c) * m;
  }
  return acc;
}

}  // namespace polycap
