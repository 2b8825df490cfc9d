#pragma once

// Trace-measure analysis for the multilinear Hardy inequality: exact best
// constants via power iteration, the necessary charge-energy conditions over
// families of rectangular sets, the single-box sufficiency test, lower bounds
// for the mu-maximal function constant, and a randomized counterexample
// search over measure families.

#include <cstdint>
#include <string>
#include <vector>

#include "polycap/capacity.hpp"
#include "polycap/field.hpp"
#include "polycap/measures.hpp"
#include "polycap/weights.hpp"

namespace polycap {

struct HardyNormResult {
  double C = 0.0;       // best constant: squared operator norm of I
  Field extremal_f;     // pi-normalized near-extremal function on vertices
  std::uint64_t iterations = 0;
  bool converged = true;
};

// Power iteration on the self-adjoint composition f -> I*_mu(I f) in L^2(pi).
HardyNormResult hardy_norm(const Measure& mu, const Weight& w, double tol = 1e-10,
                           std::uint64_t max_iters = 200000);

struct ConditionRow {
  std::vector<std::string> boxes;  // canonical box list of the set
  double mass = 0.0;               // mu(E)
  double global_energy = 0.0;      // energy of mu restricted to E
  double local_energy = 0.0;       // sum over boxes inside E of mu(Q)^2 pi(Q)
  double capacity = 0.0;
  bool skipped = false;            // mu(E) = 0: listed but excluded from ratios
};

struct ConditionReport {
  double global_ratio = 0.0;   // sup global_energy / mass
  double local_ratio = 0.0;    // sup local_energy / mass
  double subcap_ratio = 0.0;   // sup mass / capacity
  double hardy_norm_value = -1.0;      // -1 when not computed
  double maximal_lower_bound = -1.0;   // -1 when not computed
  std::string family;
  std::vector<ConditionRow> rows;
};

ConditionReport charge_energy_report(const Measure& mu, const std::vector<RectangularSet>& family,
                                     const Weight& w, SolveOptions cap_opts = {});

// Test function for the single-box condition, evaluated on the dyadic grid
// t_j = 2^-m_j. Monotonicity ("increasing in each variable") is checked by
// sampling at construction.
class TestFunctionPhi {
 public:
  // prod_j t_j^a_j
  static TestFunctionPhi product_power(std::vector<double> a);
  // prod_j log(e*2/t_j)^-b_j
  static TestFunctionPhi product_log(std::vector<double> b);
  // Per-axis tables indexed by the dyadic exponent m (clamped at the end).
  static TestFunctionPhi dyadic_table(std::vector<std::vector<double>> axis_values);

  double eval_dyadic(const std::vector<std::uint32_t>& m) const;
  bool monotone() const { return monotone_; }
  int dim() const { return dim_; }
  const std::string& kind() const { return kind_; }
  const std::vector<double>& params() const { return params_; }

 private:
  TestFunctionPhi() = default;
  void check_monotone();

  std::string kind_;
  int dim_ = 0;
  std::vector<double> params_;
  std::vector<std::vector<double>> tables_;
  bool monotone_ = false;
};

struct SingleBoxResult {
  bool eligible = false;        // monotone and the proxy series converges
  bool monotone = false;
  bool series_divergent = false;  // desk-scale heuristic, see below
  double integral_proxy = 0.0;
  bool box_check = false;       // mu(Q) <= phi(M(Q_1), ..., M(Q_d)) for all Q
  double potential_sup = 0.0;   // max over cells of V^mu
};

// Single-box sufficiency test. The proxy series is
//   sum over n in [1, cap]^d of phi(2^-n_1, ..., 2^-n_d) * 2^(s.n);
// divergence is flagged when the last octave block of partial sums has not
// decayed below 0.99 of the previous one (a finite truncation cannot prove
// divergence, so this is an explicit heuristic).
SingleBoxResult single_box_test(const Measure& mu, const TestFunctionPhi& phi, const Weight& w,
                                std::uint32_t proxy_depth_cap = 40);

struct MaximalEstimate {
  double lower_bound = 0.0;
  Field witness_g;
  std::uint64_t evaluations = 0;
};

// Randomized search for large Rayleigh quotients ||M_mu g||^2 / ||g||^2 in
// L^2(mu): seeded candidates (indicators, atoms, tilted profiles, iid) then
// greedy coordinate ascent. Returns a certified lower bound, never an upper
// bound.
MaximalEstimate maximal_constant_estimate(const Measure& mu, std::uint64_t budget,
                                          std::uint64_t seed);

struct SearchConfig {
  TreeSpec tree;
  Weight weight;
  std::uint64_t budget = 0;  // number of candidate measures
  std::uint64_t seed = 0;
  double local_ratio_ceiling = 1e9;
  std::uint64_t maximal_budget = 500;
  FamilySpec set_family;  // empty name = built-in default family
  SolveOptions cap_opts;
};

struct SearchCandidate {
  std::string generator;
  ConditionReport report;
  double score = 0.0;  // maximal lower bound
};

// Scores measures from the cantor / diagonal / random-atoms families by their
// maximal-function lower bound, keeping only candidates whose local
// charge-energy ratio stays below the ceiling. Deterministic for fixed seed.
std::vector<SearchCandidate> counterexample_search(const SearchConfig& config);

// Per-axis level caps phi_axis(2^-(l+1)) for the log test function; the
// maximal measure under these caps saturates the single-box bound for
// phi(t) = prod log(e*2/t_j)^-b_j while keeping its potential below the
// proxy series.
std::vector<double> log_saturating_axis_caps(std::uint32_t depth, double b);

}  // namespace polycap
