#pragma once

// Per-axis lattice sweeps. The product order factorizes sums and minima over
// predecessor/successor sets into d sequential one-axis passes; axis order is
// fixed (0..d-1) so floating-point results are reproducible.

#include <vector>

#include "polycap/polytree.hpp"

namespace polycap {

// val[v] <- sum of val over all ancestors-or-equal of v (the predecessor set).
inline void ancestor_sum_sweep(const TreeSpec& t, std::vector<double>& val) {
  const std::uint64_t n = t.vertex_count();
  for (int j = 0; j < t.dim(); ++j) {
    const std::uint64_t stride = t.vertex_stride(j);
    const std::uint64_t count = t.axis_vertex_count(j);
    for (std::uint64_t v = 0; v < n; ++v) {
      const std::uint64_t a = (v / stride) % count;
      if (a == 0) continue;
      val[v] += val[v - (a - TreeSpec::axis_parent(a)) * stride];
    }
  }
}

// val[v] <- sum of val over all descendants-or-equal of v (the successor set).
inline void subtree_sum_sweep(const TreeSpec& t, std::vector<double>& val) {
  const std::uint64_t n = t.vertex_count();
  for (int j = 0; j < t.dim(); ++j) {
    const std::uint64_t stride = t.vertex_stride(j);
    const std::uint64_t count = t.axis_vertex_count(j);
    for (std::uint64_t v = n; v-- > 0;) {
      const std::uint64_t a = (v / stride) % count;
      if (a == 0) continue;
      val[v - (a - TreeSpec::axis_parent(a)) * stride] += val[v];
    }
  }
}

// val[v] <- min of val over all descendants-or-equal of v.
inline void subtree_min_sweep(const TreeSpec& t, std::vector<double>& val) {
  const std::uint64_t n = t.vertex_count();
  for (int j = 0; j < t.dim(); ++j) {
    const std::uint64_t stride = t.vertex_stride(j);
    const std::uint64_t count = t.axis_vertex_count(j);
    for (std::uint64_t v = n; v-- > 0;) {
      const std::uint64_t a = (v / stride) % count;
      if (a == 0) continue;
      double& parent = val[v - (a - TreeSpec::axis_parent(a)) * stride];
      if (val[v] < parent) parent = val[v];
    }
  }
}

// val[v] <- max of val over all ancestors-or-equal of v.
inline void ancestor_max_sweep(const TreeSpec& t, std::vector<double>& val) {
  const std::uint64_t n = t.vertex_count();
  for (int j = 0; j < t.dim(); ++j) {
    const std::uint64_t stride = t.vertex_stride(j);
    const std::uint64_t count = t.axis_vertex_count(j);
    for (std::uint64_t v = 0; v < n; ++v) {
      const std::uint64_t a = (v / stride) % count;
      if (a == 0) continue;
      const double parent = val[v - (a - TreeSpec::axis_parent(a)) * stride];
      if (parent > val[v]) val[v] = parent;
    }
  }
}

}  // namespace polycap
