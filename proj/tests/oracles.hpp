#pragma once

// Test-only oracles. Everything here recomputes engine quantities by the most
// literal route available (explicit enumeration, integer interval arithmetic,
// dense linear algebra) and deliberately avoids the sweep and closed-form
// paths used by the library.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "polycap/measures.hpp"
#include "polycap/polytree.hpp"
#include "polycap/potential.hpp"
#include "polycap/rng.hpp"
#include "polycap/weights.hpp"

namespace oracles {

using namespace polycap;

// All vertex ids >= v: the product of the per-axis ancestor chains.
inline std::vector<std::uint64_t> predecessors_of(const TreeSpec& t, const Vertex& v) {
  std::vector<std::uint64_t> acc{0};
  std::vector<std::uint64_t> next;
  for (int j = 0; j < t.dim(); ++j) {
    AxisVertex a = v.coords[j];
    std::vector<std::uint64_t> chain;
    for (;;) {
      chain.push_back(TreeSpec::axis_linear(a));
      if (a.level == 0) break;
      a = AxisVertex{a.level - 1, a.index >> 1};
    }
    next.clear();
    for (auto prefix : acc) {
      for (auto link : chain) next.push_back(prefix + link * t.vertex_stride(j));
    }
    acc = next;
  }
  return acc;
}

inline double d_pi_brute(const TreeSpec& t, const Weight& w, const Vertex& v) {
  double total = 0.0;
  for (auto id : predecessors_of(t, v)) total += w.pi_by_id(id);
  return total;
}

// Potential by the defining kernel sum with brute-force d_pi.
inline double potential_oracle(const TreeSpec& t, const Weight& w, const Measure& mu,
                               const Vertex& x) {
  double acc = 0.0;
  for (const auto& [vid, m] : mu.interior()) {
    acc += d_pi_brute(t, w, meet(t, x, t.vertex_from_id(vid))) * m;
  }
  for (std::uint64_t c = 0; c < t.cell_count(); ++c) {
    const double m = mu.boundary()[c];
    if (m != 0.0) {
      acc += d_pi_brute(t, w, meet(t, x, t.vertex_from_id(t.leaf_vertex_of_cell(c)))) * m;
    }
  }
  return acc;
}

// Ancestor-or-equal through integer interval containment, no bit tricks.
inline bool interval_contains(AxisVertex outer, AxisVertex inner) {
  const std::uint32_t L = std::max(outer.level, inner.level);
  const std::uint64_t in_lo = inner.index << (L - inner.level);
  const std::uint64_t in_hi = (inner.index + 1) << (L - inner.level);
  const std::uint64_t out_lo = outer.index << (L - outer.level);
  const std::uint64_t out_hi = (outer.index + 1) << (L - outer.level);
  return out_lo <= in_lo && in_hi <= out_hi;
}

inline bool leq_oracle(const Vertex& alpha, const Vertex& beta) {
  for (std::size_t j = 0; j < alpha.coords.size(); ++j) {
    if (!interval_contains(beta.coords[j], alpha.coords[j])) return false;
  }
  return true;
}

// Largest eigenvalue of a dense symmetric matrix by cyclic Jacobi rotations.
inline double jacobi_max_eigenvalue(std::vector<double> A, std::size_t n) {
  if (n == 0) return 0.0;
  auto at = [&](std::size_t i, std::size_t k) -> double& { return A[i * n + k]; };
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = i + 1; k < n; ++k) off += at(i, k) * at(i, k);
    }
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(at(p, q)) < 1e-300) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * at(p, q));
        const double sign = theta >= 0.0 ? 1.0 : -1.0;
        const double tt = sign / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(tt * tt + 1.0);
        const double s = tt * c;
        for (std::size_t i = 0; i < n; ++i) {
          const double aip = at(i, p), aiq = at(i, q);
          at(i, p) = c * aip - s * aiq;
          at(i, q) = s * aip + c * aiq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double api = at(p, i), aqi = at(q, i);
          at(p, i) = c * api - s * aqi;
          at(q, i) = s * api + c * aqi;
        }
      }
    }
  }
  double best = at(0, 0);
  for (std::size_t i = 1; i < n; ++i) best = std::max(best, at(i, i));
  return best;
}

// Squared Hardy norm as the top eigenvalue of the cell-side kernel matrix
// [sqrt(mu(w) mu(w')) d_pi(meet(w, w'))], assembled with brute-force d_pi.
inline double hardy_norm_oracle(const Measure& mu, const Weight& w) {
  const TreeSpec& t = mu.tree();
  std::vector<std::uint64_t> cells;
  for (std::uint64_t c = 0; c < t.cell_count(); ++c) {
    if (mu.boundary()[c] > 0.0) cells.push_back(c);
  }
  const std::size_t n = cells.size();
  std::vector<double> K(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vertex vi = t.vertex_from_id(t.leaf_vertex_of_cell(cells[i]));
    for (std::size_t k = i; k < n; ++k) {
      const Vertex vk = t.vertex_from_id(t.leaf_vertex_of_cell(cells[k]));
      const double val = std::sqrt(mu.boundary()[cells[i]] * mu.boundary()[cells[k]]) *
                         d_pi_brute(t, w, meet(t, vi, vk));
      K[i * n + k] = val;
      K[k * n + i] = val;
    }
  }
  return jacobi_max_eigenvalue(std::move(K), n);
}

// Maximal function by walking every predecessor box of every cell.
inline double maximal_oracle_at_cell(const TreeSpec& t, const Measure& mu, const Field& g,
                                     std::uint64_t cell_id) {
  const Vertex leaf = t.vertex_from_id(t.leaf_vertex_of_cell(cell_id));
  double best = 0.0;
  for (auto vid : predecessors_of(t, leaf)) {
    const RectangularSet box(t, {t.vertex_from_id(vid)});
    double mass = 0.0, integral = 0.0;
    for (auto c : box.cell_ids()) {
      mass += mu.boundary()[c];
      integral += g.cell_values[c] * mu.boundary()[c];
    }
    if (mass > 0.0) best = std::max(best, integral / mass);
  }
  return best;
}

// Random helpers (deterministic, seeded).
inline Vertex random_vertex(const TreeSpec& t, Rng& rng) {
  return t.vertex_from_id(rng.next_below(t.vertex_count()));
}

inline Measure random_boundary_measure(const TreeSpec& t, Rng& rng, std::uint64_t atoms) {
  MeasureBuilder b(t);
  for (std::uint64_t i = 0; i < atoms; ++i) {
    b.add_cell_id(rng.next_below(t.cell_count()), 0.25 + rng.next_double());
  }
  return b.build();
}

inline Measure random_interior_measure(const TreeSpec& t, Rng& rng, std::uint64_t atoms) {
  MeasureBuilder b(t);
  for (std::uint64_t i = 0; i < atoms; ++i) {
    b.add_interior_id(rng.next_below(t.vertex_count()), 0.25 + rng.next_double());
  }
  return b.build();
}

}  // namespace oracles
