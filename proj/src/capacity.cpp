#include "polycap/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "polycap/potential.hpp"
#include "polycap/sweeps.hpp"

namespace polycap {

TargetSet TargetSet::of_vertices(const TreeSpec& t, const std::vector<Vertex>& vs) {
  TargetSet e;
  e.tree = t;
  for (const auto& v : vs) e.vertices.push_back(t.vertex_id(v));
  std::sort(e.vertices.begin(), e.vertices.end());
  e.vertices.erase(std::unique(e.vertices.begin(), e.vertices.end()), e.vertices.end());
  return e;
}

TargetSet TargetSet::of_cells(const TreeSpec& t, const std::vector<BoundaryCell>& cs) {
  std::vector<std::uint64_t> ids;
  for (const auto& c : cs) ids.push_back(t.cell_id(c));
  return of_cell_ids(t, std::move(ids));
}

TargetSet TargetSet::of_cell_ids(const TreeSpec& t, std::vector<std::uint64_t> ids) {
  TargetSet e;
  e.tree = t;
  for (auto id : ids) {
    if (id >= t.cell_count()) throw std::invalid_argument("target: cell id out of range");
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  e.cells = std::move(ids);
  return e;
}

TargetSet TargetSet::full_boundary(const TreeSpec& t) {
  TargetSet e;
  e.tree = t;
  e.cells.resize(t.cell_count());
  for (std::uint64_t c = 0; c < t.cell_count(); ++c) e.cells[c] = c;
  return e;
}

TargetSet TargetSet::from_rectangular(const RectangularSet& set) {
  TargetSet e;
  e.tree = set.tree();
  e.cells = set.cell_ids();
  return e;
}

namespace {

struct AtomLayout {
  // Vertex id every atom is evaluated at (cells through their leaf vertex).
  std::vector<std::uint64_t> eval_vertex;
  std::size_t n_vertex_atoms = 0;  // prefix of eval_vertex backed by interior atoms
};

AtomLayout layout_atoms(const TargetSet& E) {
  AtomLayout a;
  a.n_vertex_atoms = E.vertices.size();
  a.eval_vertex = E.vertices;
  for (auto c : E.cells) a.eval_vertex.push_back(E.tree.leaf_vertex_of_cell(c));
  return a;
}

// One dual evaluation: given atom masses m, fill V at the atoms and return
// {dual value, energy, total mass}.
struct DualEval {
  double dual = 0.0;
  double energy = 0.0;
  double mass = 0.0;
};

DualEval eval_dual(const TreeSpec& t, const Weight& w, const AtomLayout& atoms,
                   const std::vector<double>& m, std::vector<double>& scratch,
                   std::vector<double>& V_at_atoms) {
  scratch.assign(t.vertex_count(), 0.0);
  double mass = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    scratch[atoms.eval_vertex[i]] += m[i];
    mass += m[i];
  }
  subtree_sum_sweep(t, scratch);
  const auto& pi = w.pi_dense();
  double energy = 0.0;
  for (std::uint64_t v = 0; v < scratch.size(); ++v) {
    energy += scratch[v] * scratch[v] * pi[v];
    scratch[v] *= pi[v];
  }
  ancestor_sum_sweep(t, scratch);
  V_at_atoms.resize(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) V_at_atoms[i] = scratch[atoms.eval_vertex[i]];
  return DualEval{2.0 * mass - energy, energy, mass};
}

Measure measure_from_atoms(const TargetSet& E, const std::vector<double>& m) {
  std::vector<std::pair<std::uint64_t, double>> interior;
  std::vector<double> boundary(E.tree.cell_count(), 0.0);
  for (std::size_t i = 0; i < E.vertices.size(); ++i) {
    if (m[i] > 0.0) interior.emplace_back(E.vertices[i], m[i]);
  }
  for (std::size_t i = 0; i < E.cells.size(); ++i) {
    boundary[E.cells[i]] = std::max(0.0, m[E.vertices.size() + i]);
  }
  return Measure(E.tree, std::move(interior), std::move(boundary));
}

// The capacitary function: f = I* mu / min_E V^mu, on vertices.
Field capacitary_field(const TreeSpec& t, const AtomLayout& atoms, const std::vector<double>& m,
                       double min_V) {
  Field f = Field::on_vertices(t);
  for (std::size_t i = 0; i < m.size(); ++i) f.vertex_values[atoms.eval_vertex[i]] += m[i];
  subtree_sum_sweep(t, f.vertex_values);
  if (min_V > 0.0) {
    for (double& x : f.vertex_values) x /= min_V;
  }
  return f;
}

}  // namespace

EquilibriumResult solve_capacity(const TargetSet& E, const Weight& w, SolveOptions opts) {
  const TreeSpec& t = E.tree;
  if (!(t == w.tree())) throw std::invalid_argument("capacity: target and weight trees differ");
  if (!(opts.tol > 0.0)) throw std::invalid_argument("capacity: tol must be positive");

  EquilibriumResult res{0.0, Measure(t), Field::on_vertices(t), 0.0, 0.0, 0.0, 0, true};
  if (E.empty()) return res;

  const AtomLayout atoms = layout_atoms(E);
  const std::size_t n = atoms.eval_vertex.size();
  const std::uint64_t max_iters = opts.max_iters ? opts.max_iters : 50 * static_cast<std::uint64_t>(n);

  // Start from a uniform guess scaled by the point capacity of the deepest atom.
  double dpi_max = 0.0;
  for (auto v : atoms.eval_vertex) dpi_max = std::max(dpi_max, w.d_pi_by_id(v));
  std::vector<double> m(n, 1.0 / (dpi_max * static_cast<double>(n)));

  std::vector<double> scratch, V;
  DualEval cur = eval_dual(t, w, atoms, m, scratch, V);
  std::vector<double> grad(n);
  for (std::size_t i = 0; i < n; ++i) grad[i] = 1.0 - V[i];

  double step = 1.0 / dpi_max;
  double primal = 1e300, min_V = 0.0;
  std::uint64_t iter = 0;
  bool converged = false;

  std::vector<double> m_next(n), grad_next(n), V_next;
  while (iter < max_iters) {
    ++iter;

    min_V = V.empty() ? 0.0 : *std::min_element(V.begin(), V.end());
    primal = min_V > 0.0 ? cur.energy / (min_V * min_V) : 1e300;

    const double scale = std::max(1.0, cur.dual);
    const double gap = primal - cur.dual;
    const double identity_residual = std::abs(cur.mass - cur.energy);
    if (gap <= 0.5 * opts.tol * scale && identity_residual <= 0.25 * opts.tol * scale) {
      converged = true;
      break;
    }

    // Safeguarded projected ascent step.
    DualEval next{};
    int halvings = 0;
    for (;;) {
      for (std::size_t i = 0; i < n; ++i) m_next[i] = std::max(0.0, m[i] + step * grad[i]);
      next = eval_dual(t, w, atoms, m_next, scratch, V_next);
      if (next.dual >= cur.dual - 1e-16 * (1.0 + std::abs(cur.dual)) || halvings >= 60) break;
      step *= 0.5;
      ++halvings;
    }

    for (std::size_t i = 0; i < n; ++i) grad_next[i] = 1.0 - V_next[i];

    // Barzilai-Borwein step for the next round: <s,s> / <s, K s>.
    double ss = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double s = m_next[i] - m[i];
      ss += s * s;
      sy += s * (grad[i] - grad_next[i]);
    }
    if (sy > 0.0 && ss > 0.0) {
      step = ss / sy;
    } else if (ss == 0.0) {
      step *= 2.0;  // projection wiped the step; try a larger one
    }

    m.swap(m_next);
    grad.swap(grad_next);
    V.swap(V_next);
    cur = next;
  }

  if (!converged) {
    // Report the sandwich at the final iterate.
    min_V = V.empty() ? 0.0 : *std::min_element(V.begin(), V.end());
    primal = min_V > 0.0 ? cur.energy / (min_V * min_V) : 1e300;
  }

  res.converged = converged;
  res.iterations = iter;
  res.dual_value = cur.dual;
  // Roundoff can land the two bounds a few ulp out of order; the sandwich
  // dual <= cap <= primal holds in exact arithmetic, so restore it.
  res.primal_value = std::max(primal, cur.dual);
  res.gap = res.primal_value - cur.dual;
  res.cap = 0.5 * (res.primal_value + cur.dual);
  res.mu_E = measure_from_atoms(E, m);
  res.f_E = capacitary_field(t, atoms, m, min_V);
  return res;
}

double product_capacity(const std::vector<TargetSet>& axis_sets, const Weight& w,
                        SolveOptions opts) {
  if (!w.is_product()) throw std::invalid_argument("product_capacity: weight must be a product weight");
  const TreeSpec& t = w.tree();
  if (static_cast<int>(axis_sets.size()) != t.dim()) {
    throw std::invalid_argument("product_capacity: one target set per axis required");
  }
  double cap = 1.0;
  for (int j = 0; j < t.dim(); ++j) {
    const TreeSpec axis_tree(std::vector<std::uint32_t>{t.depth(j)});
    if (!(axis_sets[j].tree == axis_tree)) {
      throw std::invalid_argument("product_capacity: axis set does not match axis tree");
    }
    if (axis_sets[j].empty()) return 0.0;
    cap *= solve_capacity(axis_sets[j], w.axis_weight(j), opts).cap;
  }
  return cap;
}

KktReport kkt_check(const TargetSet& E, const Measure& mu, const Weight& w, double tol) {
  const TreeSpec& t = E.tree;
  if (!(t == mu.tree()) || !(t == w.tree())) {
    throw std::invalid_argument("kkt_check: arguments live on different trees");
  }
  KktReport rep;
  rep.support_ok = true;
  for (const auto& [vid, mass] : mu.interior()) {
    if (!std::binary_search(E.vertices.begin(), E.vertices.end(), vid)) {
      rep.support_ok = false;
      rep.offending_atoms.push_back(to_string(t.vertex_from_id(vid)));
    }
  }
  for (std::uint64_t c = 0; c < t.cell_count(); ++c) {
    if (mu.boundary()[c] > 0.0 && !std::binary_search(E.cells.begin(), E.cells.end(), c)) {
      rep.support_ok = false;
      rep.offending_atoms.push_back("cell#" + std::to_string(c));
    }
  }

  const Field V = potential(mu, w);
  const AtomLayout atoms = layout_atoms(E);
  double min_V = 1e300;
  for (auto v : atoms.eval_vertex) min_V = std::min(min_V, V.vertex_values[v]);
  double max_V = 0.0;
  for (const auto& [vid, mass] : mu.interior()) max_V = std::max(max_V, V.vertex_values[vid]);
  for (std::uint64_t c = 0; c < t.cell_count(); ++c) {
    if (mu.boundary()[c] > 0.0) max_V = std::max(max_V, V.cell_values[c]);
  }

  rep.min_V_on_E = atoms.eval_vertex.empty() ? 0.0 : min_V;
  rep.max_V_on_support = max_V;
  rep.mass = mu.total_mass();
  rep.energy = energy(mu, w);
  rep.identity_gap = std::abs(rep.mass - rep.energy);
  const double scale = std::max(1.0, rep.mass);
  rep.pass = rep.support_ok && rep.min_V_on_E >= 1.0 - tol && rep.max_V_on_support <= 1.0 + tol &&
             rep.identity_gap <= tol * scale;
  return rep;
}

}  // namespace polycap
