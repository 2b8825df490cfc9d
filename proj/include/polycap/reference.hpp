#pragma once

// Dense long-run reference optimizer for capacities. Deliberately shares no
// machinery with the sweep-based solver: the energy kernel is assembled by
// explicit predecessor enumeration and the dual is maximized by plain
// fixed-step projected gradient. Slow, simple, and used only to cross-check.

#include <cstdint>

#include "polycap/capacity.hpp"
#include "polycap/weights.hpp"

namespace polycap {

// Kernel entry d_pi(meet(x, y)) by walking every common ancestor.
double kernel_d_pi_by_enumeration(const TreeSpec& t, const Weight& w, const Vertex& x,
                                  const Vertex& y);

double reference_capacity(const TargetSet& E, const Weight& w,
                          std::uint64_t iterations = 1000000);

}  // namespace polycap
