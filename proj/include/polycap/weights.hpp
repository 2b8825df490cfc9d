#pragma once

// Vertex weights pi and the weighted counting function d_pi (the pi-mass of
// a predecessor set). Standard polynomial weights pi_j = 2^(s_j * d_T) get
// closed-form geometric sums; table weights fall back to cached prefix sums.

#include <cstdint>
#include <vector>

#include "polycap/polytree.hpp"

namespace polycap {

enum class WeightKind { product_polynomial, product_table, dense_table };

class Weight {
 public:
  // pi_j(level) = 2^(s_j * (level+1)), 0 <= s_j < 1.
  static Weight polynomial(const TreeSpec& t, std::vector<double> s);
  // Positive per-axis tables indexed by level.
  static Weight product_table(const TreeSpec& t, std::vector<std::vector<double>> axis_values);
  // Positive value per vertex, canonical id order.
  static Weight dense_table(const TreeSpec& t, std::vector<double> values);

  WeightKind kind() const { return kind_; }
  const TreeSpec& tree() const { return tree_; }
  bool is_product() const { return kind_ != WeightKind::dense_table; }
  // inf pi >= 1; the only hypothesis some boundary-mass statements need.
  bool at_least_one() const { return at_least_one_; }
  const std::vector<double>& exponents() const;  // product_polynomial only

  double pi(const Vertex& v) const;
  double pi_by_id(std::uint64_t vertex_id) const { return pi_dense_[vertex_id]; }
  const std::vector<double>& pi_dense() const { return pi_dense_; }

  // Sum of pi over the predecessor set of v.
  double d_pi(const Vertex& v) const;
  double d_pi_by_id(std::uint64_t vertex_id) const;

  // Product kinds only: the one-axis factors.
  double axis_pi(int axis, std::uint32_t level) const { return axis_pi_[axis][level]; }
  double axis_d_pi(int axis, std::uint32_t level) const { return axis_dpi_[axis][level]; }

  // The weight of coordinate axis `axis` as a one-dimensional weight
  // (product kinds only).
  Weight axis_weight(int axis) const;

 private:
  Weight() = default;

  WeightKind kind_ = WeightKind::product_polynomial;
  TreeSpec tree_;
  std::vector<double> s_;                        // polynomial
  std::vector<std::vector<double>> axis_pi_;     // product kinds
  std::vector<std::vector<double>> axis_dpi_;    // product kinds, prefix sums
  std::vector<double> pi_dense_;                 // all kinds
  std::vector<double> dpi_dense_;                // dense_table only
  bool at_least_one_ = false;
};

}  // namespace polycap
