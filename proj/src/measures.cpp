#include "polycap/measures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "polycap/rng.hpp"

namespace polycap {

namespace {

void check_mass(double m) {
  if (!(m >= 0.0) || !std::isfinite(m)) {
    throw std::invalid_argument("measure: masses must be nonnegative and finite");
  }
}

// Iterate the cell ids of one box's shadow.
template <typename Fn>
void for_each_shadow_cell(const TreeSpec& t, const Vertex& box, Fn&& fn) {
  const int d = t.dim();
  std::vector<std::uint64_t> lo(d), hi(d), cur(d);
  for (int j = 0; j < d; ++j) {
    const std::uint32_t shift = t.leaf_level(j) - box.coords[j].level;
    lo[j] = box.coords[j].index << shift;
    hi[j] = (box.coords[j].index + 1) << shift;
    cur[j] = lo[j];
  }
  while (true) {
    std::uint64_t id = 0;
    for (int j = 0; j < d; ++j) id += cur[j] * t.cell_stride(j);
    fn(id);
    int j = d - 1;
    while (j >= 0 && ++cur[j] == hi[j]) {
      cur[j] = lo[j];
      --j;
    }
    if (j < 0) break;
  }
}

}  // namespace

Measure::Measure(const TreeSpec& t) : tree_(t), boundary_(t.cell_count(), 0.0) {}

Measure::Measure(const TreeSpec& t, std::vector<std::pair<std::uint64_t, double>> interior,
                 std::vector<double> boundary)
    : tree_(t), boundary_(std::move(boundary)) {
  if (boundary_.empty()) boundary_.assign(t.cell_count(), 0.0);
  if (boundary_.size() != t.cell_count()) {
    throw std::invalid_argument("measure: boundary vector must have one entry per cell");
  }
  std::sort(interior.begin(), interior.end());
  for (auto& [id, m] : interior) {
    check_mass(m);
    if (id >= t.vertex_count()) throw std::invalid_argument("measure: interior vertex id out of range");
    if (m == 0.0) continue;
    if (!interior_.empty() && interior_.back().first == id) {
      interior_.back().second += m;
    } else {
      interior_.emplace_back(id, m);
    }
    interior_mass_ += m;
  }
  for (double& m : boundary_) {
    check_mass(m);
    boundary_mass_ += m;
  }
}

double Measure::mass_on(const RectangularSet& set) const {
  const auto bits = set.cell_bitmap();
  double total = 0.0;
  for (std::uint64_t c = 0; c < boundary_.size(); ++c) {
    if (bits[c]) total += boundary_[c];
  }
  return total;
}

MeasureBuilder::MeasureBuilder(const TreeSpec& t)
    : tree_(t), boundary_(t.cell_count(), 0.0) {}

MeasureBuilder& MeasureBuilder::add_interior(const Vertex& v, double mass) {
  return add_interior_id(tree_.vertex_id(v), mass);
}

MeasureBuilder& MeasureBuilder::add_interior_id(std::uint64_t vertex_id, double mass) {
  check_mass(mass);
  if (vertex_id >= tree_.vertex_count()) {
    throw std::invalid_argument("measure: interior vertex id out of range");
  }
  interior_.emplace_back(vertex_id, mass);
  return *this;
}

MeasureBuilder& MeasureBuilder::add_cell(const BoundaryCell& c, double mass) {
  return add_cell_id(tree_.cell_id(c), mass);
}

MeasureBuilder& MeasureBuilder::add_cell_id(std::uint64_t cell_id, double mass) {
  check_mass(mass);
  if (cell_id >= boundary_.size()) throw std::invalid_argument("measure: cell id out of range");
  boundary_[cell_id] += mass;
  return *this;
}

Measure MeasureBuilder::build() {
  return Measure(tree_, std::move(interior_), std::move(boundary_));
}

double lebesgue_cell_mass(AxisVertex v) {
  // 2^(-d_T + 1) with d_T = level + 1.
  return std::ldexp(1.0, -static_cast<int>(v.level));
}

Measure md_measure(const TreeSpec& t) {
  double cell_mass = 1.0;
  for (int j = 0; j < t.dim(); ++j) {
    cell_mass *= std::ldexp(1.0, -static_cast<int>(t.leaf_level(j)));
  }
  return Measure(t, {}, std::vector<double>(t.cell_count(), cell_mass));
}

Measure pushdown(const Measure& mu) {
  const TreeSpec& t = mu.tree();
  std::vector<double> boundary = mu.boundary();
  for (const auto& [vid, mass] : mu.interior()) {
    const Vertex box = t.vertex_from_id(vid);
    std::uint64_t cells = 1;
    for (int j = 0; j < t.dim(); ++j) {
      cells <<= t.leaf_level(j) - box.coords[j].level;
    }
    const double share = mass / static_cast<double>(cells);
    for_each_shadow_cell(t, box, [&](std::uint64_t c) { boundary[c] += share; });
  }
  return Measure(t, {}, std::move(boundary));
}

Measure restricted(const Measure& mu, const RectangularSet& set) {
  const TreeSpec& t = mu.tree();
  if (!(set.tree() == t)) throw std::invalid_argument("restrict: set lives on a different tree");
  const auto bits = set.cell_bitmap();
  std::vector<double> boundary(t.cell_count(), 0.0);
  for (std::uint64_t c = 0; c < boundary.size(); ++c) {
    if (bits[c]) boundary[c] = mu.boundary()[c];
  }
  // Interior atoms survive only when their whole shadow is covered; partially
  // covered atoms are dropped, not split.
  std::vector<std::pair<std::uint64_t, double>> interior;
  for (const auto& [vid, mass] : mu.interior()) {
    const Vertex box = t.vertex_from_id(vid);
    bool covered = true;
    for_each_shadow_cell(t, box, [&](std::uint64_t c) { covered = covered && bits[c]; });
    if (covered) interior.emplace_back(vid, mass);
  }
  return Measure(t, std::move(interior), std::move(boundary));
}

Measure scaled(const Measure& mu, double factor) {
  if (!(factor >= 0.0) || !std::isfinite(factor)) {
    throw std::invalid_argument("measure: scale factor must be nonnegative and finite");
  }
  std::vector<std::pair<std::uint64_t, double>> interior = mu.interior();
  for (auto& [id, m] : interior) m *= factor;
  std::vector<double> boundary = mu.boundary();
  for (double& m : boundary) m *= factor;
  return Measure(mu.tree(), std::move(interior), std::move(boundary));
}

Measure gen_atom_cell(const TreeSpec& t, const BoundaryCell& c) {
  std::vector<double> boundary(t.cell_count(), 0.0);
  boundary[t.cell_id(c)] = 1.0;
  return Measure(t, {}, std::move(boundary));
}

Measure gen_cantor(const TreeSpec& t, double ratio, std::uint32_t depth) {
  if (!(ratio >= 0.0) || ratio > 1.0) throw std::invalid_argument("cantor: ratio must be in [0, 1]");
  std::vector<std::vector<double>> axis_masses(t.dim());
  for (int j = 0; j < t.dim(); ++j) {
    std::vector<double> cur{1.0};
    for (std::uint32_t l = 0; l < t.leaf_level(j); ++l) {
      const double left = l < depth ? ratio : 0.5;
      std::vector<double> next(cur.size() * 2);
      for (std::size_t k = 0; k < cur.size(); ++k) {
        next[2 * k] = cur[k] * left;
        next[2 * k + 1] = cur[k] * (1.0 - left);
      }
      cur = std::move(next);
    }
    axis_masses[j] = std::move(cur);
  }
  std::vector<double> boundary(t.cell_count());
  for (std::uint64_t c = 0; c < boundary.size(); ++c) {
    double m = 1.0;
    for (int j = 0; j < t.dim(); ++j) {
      m *= axis_masses[j][(c / t.cell_stride(j)) % t.axis_cell_count(j)];
    }
    boundary[c] = m;
  }
  return Measure(t, {}, std::move(boundary));
}

Measure gen_diagonal(const TreeSpec& t) {
  std::uint64_t diag = t.axis_cell_count(0);
  for (int j = 1; j < t.dim(); ++j) diag = std::min(diag, t.axis_cell_count(j));
  std::vector<double> boundary(t.cell_count(), 0.0);
  const double m = 1.0 / static_cast<double>(diag);
  for (std::uint64_t k = 0; k < diag; ++k) {
    std::uint64_t id = 0;
    for (int j = 0; j < t.dim(); ++j) id += k * t.cell_stride(j);
    boundary[id] += m;
  }
  return Measure(t, {}, std::move(boundary));
}

Measure gen_random_atoms(const TreeSpec& t, std::uint64_t k, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> boundary(t.cell_count(), 0.0);
  double total = 0.0;
  for (std::uint64_t i = 0; i < k; ++i) {
    const std::uint64_t c = rng.next_below(t.cell_count());
    const double m = 0.5 + 0.5 * rng.next_double();
    boundary[c] += m;
    total += m;
  }
  if (total > 0.0) {
    for (double& m : boundary) m /= total;
  }
  return Measure(t, {}, std::move(boundary));
}

std::vector<double> axis_masses_under_caps(std::uint32_t depth, const std::vector<double>& caps) {
  if (caps.size() != depth) throw std::invalid_argument("caps: one value per level required");
  for (double c : caps) check_mass(c);
  const std::uint64_t count = (1ull << depth) - 1;
  const std::uint64_t first_leaf = (1ull << (depth - 1)) - 1;
  // Bottom-up deliverable mass, then top-down assignment; the binding boxes
  // end up exactly at their caps.
  std::vector<double> avail(count);
  for (std::uint64_t a = count; a-- > 0;) {
    const std::uint32_t level = TreeSpec::axis_from_linear(a).level;
    if (a >= first_leaf) {
      avail[a] = caps[level];
    } else {
      avail[a] = std::min(caps[level], avail[2 * a + 1] + avail[2 * a + 2]);
    }
  }
  std::vector<double> give(count, 0.0);
  give[0] = avail[0];
  for (std::uint64_t a = 0; a < first_leaf; ++a) {
    const double child_avail = avail[2 * a + 1] + avail[2 * a + 2];
    if (child_avail > 0.0) {
      give[2 * a + 1] = give[a] * (avail[2 * a + 1] / child_avail);
      give[2 * a + 2] = give[a] * (avail[2 * a + 2] / child_avail);
    }
  }
  std::vector<double> cells(1ull << (depth - 1));
  for (std::uint64_t k = 0; k < cells.size(); ++k) cells[k] = give[first_leaf + k];
  return cells;
}

Measure max_measure_under_axis_caps(const TreeSpec& t,
                                    const std::vector<std::vector<double>>& axis_caps) {
  if (static_cast<int>(axis_caps.size()) != t.dim()) {
    throw std::invalid_argument("caps: one table per axis required");
  }
  std::vector<std::vector<double>> axis_masses(t.dim());
  for (int j = 0; j < t.dim(); ++j) {
    axis_masses[j] = axis_masses_under_caps(t.depth(j), axis_caps[j]);
  }
  std::vector<double> boundary(t.cell_count());
  for (std::uint64_t c = 0; c < boundary.size(); ++c) {
    double m = 1.0;
    for (int j = 0; j < t.dim(); ++j) {
      m *= axis_masses[j][(c / t.cell_stride(j)) % t.axis_cell_count(j)];
    }
    boundary[c] = m;
  }
  return Measure(t, {}, std::move(boundary));
}

}  // namespace polycap
