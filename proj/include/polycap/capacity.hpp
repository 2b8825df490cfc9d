#pragma once

// Capacity of subsets of the closed poly-tree via convex duality. The dual
// problem  max { 2 mu(E) - energy(mu) : mu >= 0 on E }  is solved by
// projected gradient ascent with Barzilai-Borwein steps; the primal candidate
// f = I* mu / min_E V^mu certifies an upper bound, so every result carries a
// two-sided duality sandwich.

#include <cstdint>
#include <string>
#include <vector>

#include "polycap/field.hpp"
#include "polycap/measures.hpp"
#include "polycap/weights.hpp"

namespace polycap {

struct TargetSet {
  TreeSpec tree;
  std::vector<std::uint64_t> vertices;  // sorted, unique
  std::vector<std::uint64_t> cells;     // sorted, unique

  static TargetSet of_vertices(const TreeSpec& t, const std::vector<Vertex>& vs);
  static TargetSet of_cells(const TreeSpec& t, const std::vector<BoundaryCell>& cs);
  static TargetSet of_cell_ids(const TreeSpec& t, std::vector<std::uint64_t> ids);
  static TargetSet full_boundary(const TreeSpec& t);
  static TargetSet from_rectangular(const RectangularSet& set);

  bool empty() const { return vertices.empty() && cells.empty(); }
  std::size_t size() const { return vertices.size() + cells.size(); }
};

struct SolveOptions {
  double tol = 1e-6;
  // 0 means the default 50 * #E.
  std::uint64_t max_iters = 0;
};

struct EquilibriumResult {
  double cap = 0.0;
  Measure mu_E;
  Field f_E;  // capacitary function on vertices
  double primal_value = 0.0;
  double dual_value = 0.0;
  double gap = 0.0;
  std::uint64_t iterations = 0;
  bool converged = true;
};

EquilibriumResult solve_capacity(const TargetSet& E, const Weight& w, SolveOptions opts = {});

// Product sets: solves one capacity problem per axis and multiplies
// (equality case of the projection bound). Product weights only.
double product_capacity(const std::vector<TargetSet>& axis_sets, const Weight& w,
                        SolveOptions opts = {});

struct KktReport {
  bool pass = false;
  bool support_ok = false;
  double min_V_on_E = 0.0;
  double max_V_on_support = 0.0;
  double mass = 0.0;       // mu(E)
  double energy = 0.0;     // E[mu]
  double identity_gap = 0.0;  // |mu(E) - E[mu]|
  std::vector<std::string> offending_atoms;
};

// Equilibrium certificate: V^mu >= 1 on E, V^mu <= 1 on supp mu, and
// mu(E) = E[mu], all within tol (relative to max(1, mu(E))).
KktReport kkt_check(const TargetSet& E, const Measure& mu, const Weight& w, double tol);

}  // namespace polycap
