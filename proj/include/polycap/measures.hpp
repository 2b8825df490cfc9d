#pragma once

// Nonnegative measures on the closed poly-tree at desk scale: sparse atoms on
// interior vertices plus a dense mass vector over the distinguished-boundary
// cells. Includes the Lebesgue-type boundary measure M_d, restriction to
// rectangular sets, the boundary pushdown, and deterministic generators.

#include <cstdint>
#include <utility>
#include <vector>

#include "polycap/polytree.hpp"

namespace polycap {

class Measure {
 public:
  explicit Measure(const TreeSpec& t);
  Measure(const TreeSpec& t, std::vector<std::pair<std::uint64_t, double>> interior,
          std::vector<double> boundary);

  const TreeSpec& tree() const { return tree_; }
  // Sorted by vertex id, strictly positive masses.
  const std::vector<std::pair<std::uint64_t, double>>& interior() const { return interior_; }
  // Dense, one entry per cell id.
  const std::vector<double>& boundary() const { return boundary_; }

  double total_mass() const { return interior_mass_ + boundary_mass_; }
  double interior_mass() const { return interior_mass_; }
  double boundary_mass() const { return boundary_mass_; }
  bool boundary_supported() const { return interior_.empty(); }
  bool is_zero() const { return total_mass() == 0.0; }

  // Boundary mass inside a rectangular set.
  double mass_on(const RectangularSet& set) const;

 private:
  TreeSpec tree_;
  std::vector<std::pair<std::uint64_t, double>> interior_;
  std::vector<double> boundary_;
  double interior_mass_ = 0.0, boundary_mass_ = 0.0;
};

class MeasureBuilder {
 public:
  explicit MeasureBuilder(const TreeSpec& t);

  MeasureBuilder& add_interior(const Vertex& v, double mass);
  MeasureBuilder& add_interior_id(std::uint64_t vertex_id, double mass);
  MeasureBuilder& add_cell(const BoundaryCell& c, double mass);
  MeasureBuilder& add_cell_id(std::uint64_t cell_id, double mass);
  Measure build();

 private:
  TreeSpec tree_;
  std::vector<std::pair<std::uint64_t, double>> interior_;
  std::vector<double> boundary_;
};

// M(boundary shadow of one axis vertex) = 2^-level.
double lebesgue_cell_mass(AxisVertex v);

// The product Lebesgue measure M_d: every leaf cell gets prod_j 2^-(n_j-1);
// total mass one.
Measure md_measure(const TreeSpec& t);

// Boundary pushdown: the boundary part is kept, each interior atom is spread
// uniformly (w.r.t. M_d) over the cells of its boundary shadow. Total mass is
// preserved and the map is idempotent.
Measure pushdown(const Measure& mu);

// Restriction to a rectangular set: boundary mass kept iff the cell lies in
// the set; an interior atom is kept iff its whole shadow is covered.
Measure restricted(const Measure& mu, const RectangularSet& set);

Measure scaled(const Measure& mu, double factor);

// Deterministic measure generators (CLI names in parentheses).
Measure gen_atom_cell(const TreeSpec& t, const BoundaryCell& c);         // atom-cell
Measure gen_cantor(const TreeSpec& t, double ratio, std::uint32_t depth);  // cantor
Measure gen_diagonal(const TreeSpec& t);                                  // diagonal
Measure gen_random_atoms(const TreeSpec& t, std::uint64_t k, std::uint64_t seed);  // random-atoms

// The maximal boundary measure whose box masses respect per-axis level caps:
// each axis gets the greedy top-down mass assignment under
// mu_j(box at level l) <= caps[j][l], and the result is the product across
// axes. Used to build families that saturate single-box tests.
Measure max_measure_under_axis_caps(const TreeSpec& t,
                                    const std::vector<std::vector<double>>& axis_caps);

// One axis of the construction above, as cell masses.
std::vector<double> axis_masses_under_caps(std::uint32_t depth, const std::vector<double>& caps);

}  // namespace polycap
