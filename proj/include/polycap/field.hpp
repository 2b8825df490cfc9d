#pragma once

// A real-valued function on the vertices of the poly-tree and/or on the
// distinguished-boundary cells. Fields are the codomain of the Hardy
// operator, its adjoints and the potentials.

#include <vector>

#include "polycap/polytree.hpp"

namespace polycap {

enum class FieldDomain { vertices_only, vertices_and_cells, cells_only };

struct Field {
  TreeSpec tree;
  FieldDomain domain = FieldDomain::vertices_only;
  std::vector<double> vertex_values;
  std::vector<double> cell_values;

  static Field on_vertices(const TreeSpec& t, double fill = 0.0) {
    Field f;
    f.tree = t;
    f.domain = FieldDomain::vertices_only;
    f.vertex_values.assign(t.vertex_count(), fill);
    return f;
  }

  static Field on_cells(const TreeSpec& t, double fill = 0.0) {
    Field f;
    f.tree = t;
    f.domain = FieldDomain::cells_only;
    f.cell_values.assign(t.cell_count(), fill);
    return f;
  }

  static Field on_both(const TreeSpec& t, double fill = 0.0) {
    Field f;
    f.tree = t;
    f.domain = FieldDomain::vertices_and_cells;
    f.vertex_values.assign(t.vertex_count(), fill);
    f.cell_values.assign(t.cell_count(), fill);
    return f;
  }

  bool has_vertices() const { return domain != FieldDomain::cells_only; }
  bool has_cells() const { return domain != FieldDomain::vertices_only; }
};

}  // namespace polycap
