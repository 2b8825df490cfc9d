#pragma once

// The Hardy operator I, its adjoints I* and I*_mu, the pi-potential of a
// measure, mutual energies and the mu-maximal function. Everything runs as
// per-axis sweeps in O(d * #vertices); the kernel mode of `potential`
// evaluates the defining sum atom by atom and serves as the slow oracle.

#include <cstdint>
#include <vector>

#include "polycap/field.hpp"
#include "polycap/measures.hpp"
#include "polycap/weights.hpp"

namespace polycap {

enum class PotentialMode { sweep, kernel };

// (If)(x) = sum over gamma >= x of f(gamma) pi(gamma), for x a vertex or a
// boundary cell (a cell contributes its full leaf chain of predecessors).
Field apply_I(const Field& f, const Weight& w);

// (I* mu)(beta) = mu(S(beta)): interior mass at-or-below beta plus boundary
// mass of the cells under beta.
Field apply_I_star(const Measure& mu);

// V^mu = I(pi * I** mu); kernel mode sums d_pi(meet(x, atom)) * mass instead.
Field potential(const Measure& mu, const Weight& w,
                PotentialMode mode = PotentialMode::sweep);

// Mutual energy <I* mu, I* nu> in L^2(pi); energy(mu, w) is the quadratic form.
double energy(const Measure& mu, const Measure& nu, const Weight& w);
double energy(const Measure& mu, const Weight& w);

// (I*_mu g)(beta) = sum over cells w <= beta of g(w) mu(w). Requires a
// boundary-supported mu (push interior mass down first).
Field apply_I_star_mu(const Field& g_cells, const Measure& mu);

// (M_mu g)(cell) = max over boxes Q containing the cell of the mu-average of
// g over Q; boxes with mu(Q) = 0 are skipped. g is taken as given (callers
// pass |g| when needed).
Field maximal_function(const Field& g_cells, const Measure& mu);

// Value of a vertices-domain field extended to cells through the leaf chain.
double field_value_at_cell(const Field& f, std::uint64_t cell_id);

// L^2 pairings used across the trace module.
double inner_pi(const Field& a, const Field& b, const Weight& w);     // vertices
double inner_mu(const Field& a, const Field& b, const Measure& mu);   // cells

}  // namespace polycap
