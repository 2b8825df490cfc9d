#include "polycap/weights.hpp"

#include <cmath>
#include <stdexcept>

#include "polycap/sweeps.hpp"

namespace polycap {

namespace {

void fill_product_dense(const TreeSpec& t, const std::vector<std::vector<double>>& axis_pi,
                        std::vector<double>& out) {
  out.assign(t.vertex_count(), 1.0);
  for (int j = 0; j < t.dim(); ++j) {
    const std::uint64_t stride = t.vertex_stride(j);
    const std::uint64_t count = t.axis_vertex_count(j);
    for (std::uint64_t v = 0; v < out.size(); ++v) {
      const AxisVertex a = TreeSpec::axis_from_linear((v / stride) % count);
      out[v] *= axis_pi[j][a.level];
    }
  }
}

}  // namespace

Weight Weight::polynomial(const TreeSpec& t, std::vector<double> s) {
  if (static_cast<int>(s.size()) != t.dim()) {
    throw std::invalid_argument("weight: s must have one exponent per axis");
  }
  for (double sj : s) {
    // s >= 1 leaves the Dirichlet regime: the boundary becomes polar and the
    // capacity theory degenerates, so it is rejected outright.
    if (!(sj >= 0.0) || sj >= 1.0) {
      throw std::invalid_argument("weight: exponents must satisfy 0 <= s < 1");
    }
  }
  Weight w;
  w.kind_ = WeightKind::product_polynomial;
  w.tree_ = t;
  w.s_ = std::move(s);
  w.axis_pi_.resize(t.dim());
  w.axis_dpi_.resize(t.dim());
  for (int j = 0; j < t.dim(); ++j) {
    const std::uint32_t levels = t.depth(j);
    w.axis_pi_[j].resize(levels);
    w.axis_dpi_[j].resize(levels);
    double acc = 0.0;
    for (std::uint32_t l = 0; l < levels; ++l) {
      w.axis_pi_[j][l] = std::exp2(w.s_[j] * (l + 1));
      acc += w.axis_pi_[j][l];
      w.axis_dpi_[j][l] = acc;
    }
  }
  fill_product_dense(t, w.axis_pi_, w.pi_dense_);
  w.at_least_one_ = true;  // 2^(s*d_T) >= 1 whenever s >= 0
  return w;
}

Weight Weight::product_table(const TreeSpec& t, std::vector<std::vector<double>> axis_values) {
  if (static_cast<int>(axis_values.size()) != t.dim()) {
    throw std::invalid_argument("weight: one level table per axis required");
  }
  double min_value = 1e300;
  for (int j = 0; j < t.dim(); ++j) {
    if (axis_values[j].size() != t.depth(j)) {
      throw std::invalid_argument("weight: axis table must have one value per level");
    }
    for (double x : axis_values[j]) {
      if (!(x > 0.0) || !std::isfinite(x)) {
        throw std::invalid_argument("weight: table values must be positive and finite");
      }
      min_value = std::min(min_value, x);
    }
  }
  Weight w;
  w.kind_ = WeightKind::product_table;
  w.tree_ = t;
  w.axis_pi_ = std::move(axis_values);
  w.axis_dpi_.resize(t.dim());
  for (int j = 0; j < t.dim(); ++j) {
    w.axis_dpi_[j].resize(t.depth(j));
    double acc = 0.0;
    for (std::uint32_t l = 0; l < t.depth(j); ++l) {
      acc += w.axis_pi_[j][l];
      w.axis_dpi_[j][l] = acc;
    }
  }
  fill_product_dense(t, w.axis_pi_, w.pi_dense_);
  double prod_min = 1.0;
  for (int j = 0; j < t.dim(); ++j) {
    double m = w.axis_pi_[j][0];
    for (double x : w.axis_pi_[j]) m = std::min(m, x);
    prod_min *= m;
  }
  w.at_least_one_ = prod_min >= 1.0 && min_value >= 0.0;
  return w;
}

Weight Weight::dense_table(const TreeSpec& t, std::vector<double> values) {
  if (values.size() != t.vertex_count()) {
    throw std::invalid_argument("weight: dense table must have one value per vertex");
  }
  double min_value = 1e300;
  for (double x : values) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw std::invalid_argument("weight: table values must be positive and finite");
    }
    min_value = std::min(min_value, x);
  }
  Weight w;
  w.kind_ = WeightKind::dense_table;
  w.tree_ = t;
  w.pi_dense_ = std::move(values);
  w.dpi_dense_ = w.pi_dense_;
  ancestor_sum_sweep(t, w.dpi_dense_);
  w.at_least_one_ = min_value >= 1.0;
  return w;
}

const std::vector<double>& Weight::exponents() const {
  if (kind_ != WeightKind::product_polynomial) {
    throw std::invalid_argument("weight: exponents only defined for polynomial weights");
  }
  return s_;
}

double Weight::pi(const Vertex& v) const { return pi_dense_[tree_.vertex_id(v)]; }

double Weight::d_pi(const Vertex& v) const {
  if (kind_ == WeightKind::dense_table) return dpi_dense_[tree_.vertex_id(v)];
  tree_.validate(v);
  double prod = 1.0;
  for (int j = 0; j < tree_.dim(); ++j) prod *= axis_dpi_[j][v.coords[j].level];
  return prod;
}

double Weight::d_pi_by_id(std::uint64_t vertex_id) const {
  if (kind_ == WeightKind::dense_table) return dpi_dense_[vertex_id];
  double prod = 1.0;
  for (int j = 0; j < tree_.dim(); ++j) {
    const AxisVertex a =
        TreeSpec::axis_from_linear((vertex_id / tree_.vertex_stride(j)) % tree_.axis_vertex_count(j));
    prod *= axis_dpi_[j][a.level];
  }
  return prod;
}

Weight Weight::axis_weight(int axis) const {
  if (!is_product()) {
    throw std::invalid_argument("weight: axis factors only exist for product weights");
  }
  const TreeSpec axis_tree(std::vector<std::uint32_t>{tree_.depth(axis)});
  if (kind_ == WeightKind::product_polynomial) {
    return polynomial(axis_tree, {s_[axis]});
  }
  return product_table(axis_tree, {axis_pi_[axis]});
}

}  // namespace polycap
