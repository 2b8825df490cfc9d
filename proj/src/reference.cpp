#include "polycap/reference.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace polycap {

double kernel_d_pi_by_enumeration(const TreeSpec& t, const Weight& w, const Vertex& x,
                                  const Vertex& y) {
  const Vertex g = meet(t, x, y);
  // Odometer over the predecessor tuple of the meet.
  const int d = t.dim();
  std::vector<AxisVertex> cur(d);
  for (int j = 0; j < d; ++j) cur[j] = g.coords[j];
  double total = 0.0;
  while (true) {
    total += w.pi(Vertex{cur});
    int j = d - 1;
    while (j >= 0) {
      if (cur[j].level > 0) {
        cur[j] = AxisVertex{cur[j].level - 1, cur[j].index >> 1};
        break;
      }
      cur[j] = g.coords[j];
      --j;
    }
    if (j < 0) break;
  }
  return total;
}

double reference_capacity(const TargetSet& E, const Weight& w, std::uint64_t iterations) {
  if (E.empty()) return 0.0;
  const TreeSpec& t = E.tree;
  std::vector<Vertex> atoms;
  for (auto vid : E.vertices) atoms.push_back(t.vertex_from_id(vid));
  for (auto cid : E.cells) atoms.push_back(t.vertex_from_id(t.leaf_vertex_of_cell(cid)));
  const std::size_t n = atoms.size();

  std::vector<double> K(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i; k < n; ++k) {
      const double v = kernel_d_pi_by_enumeration(t, w, atoms[i], atoms[k]);
      K[i * n + k] = v;
      K[k * n + i] = v;
    }
  }

  double row_max = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t k = 0; k < n; ++k) row += K[i * n + k];
    row_max = std::max(row_max, row);
  }
  const double step = 1.0 / row_max;

  std::vector<double> m(n, 0.0), Km(n, 0.0);
  for (std::uint64_t it = 0; it < iterations; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += K[i * n + k] * m[k];
      Km[i] = acc;
    }
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double next = std::max(0.0, m[i] + step * (1.0 - Km[i]));
      change = std::max(change, std::abs(next - m[i]));
      m[i] = next;
    }
    if (change <= 1e-17) break;  // stationary to machine precision
  }

  double mass = 0.0, quad = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mass += m[i];
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) acc += K[i * n + k] * m[k];
    quad += m[i] * acc;
  }
  return 2.0 * mass - quad;
}

}  // namespace polycap
