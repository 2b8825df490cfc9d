#include "polycap/trace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "polycap/potential.hpp"
#include "polycap/rng.hpp"
#include "polycap/sweeps.hpp"

namespace polycap {

HardyNormResult hardy_norm(const Measure& mu, const Weight& w, double tol,
                           std::uint64_t max_iters) {
  const TreeSpec& t = mu.tree();
  if (!(t == w.tree())) throw std::invalid_argument("hardy_norm: measure and weight trees differ");
  if (!mu.boundary_supported()) {
    throw std::invalid_argument("hardy_norm: measure must be boundary-supported (apply pushdown first)");
  }
  HardyNormResult res;
  res.extremal_f = Field::on_vertices(t);
  if (mu.is_zero()) return res;

  Field f = Field::on_vertices(t, 1.0);
  double norm = std::sqrt(inner_pi(f, f, w));
  for (double& x : f.vertex_values) x /= norm;

  double lambda_prev = -1.0;
  res.converged = false;
  for (std::uint64_t it = 1; it <= max_iters; ++it) {
    res.iterations = it;
    const Field If = apply_I(f, w);
    const Field Tf = apply_I_star_mu(If, mu);
    const double lambda = inner_pi(Tf, f, w);  // Rayleigh quotient, f is unit
    const double tnorm = std::sqrt(inner_pi(Tf, Tf, w));
    if (tnorm == 0.0) {
      res.C = 0.0;
      res.converged = true;
      return res;
    }
    f.vertex_values = Tf.vertex_values;
    for (double& x : f.vertex_values) x /= tnorm;
    if (lambda_prev >= 0.0 && std::abs(lambda - lambda_prev) <= tol * std::max(lambda, 1e-300)) {
      res.C = lambda;
      res.extremal_f = f;
      res.converged = true;
      return res;
    }
    lambda_prev = lambda;
  }
  res.C = lambda_prev;
  res.extremal_f = f;
  return res;
}

ConditionReport charge_energy_report(const Measure& mu, const std::vector<RectangularSet>& family,
                                     const Weight& w, SolveOptions cap_opts) {
  const TreeSpec& t = mu.tree();
  if (!(t == w.tree())) throw std::invalid_argument("conditions: measure and weight trees differ");
  if (!mu.boundary_supported()) {
    throw std::invalid_argument("conditions: measure must be boundary-supported (apply pushdown first)");
  }
  if (family.empty()) throw std::invalid_argument("conditions: family must be nonempty");

  const Field istar = apply_I_star(mu);
  const auto& pi = w.pi_dense();

  ConditionReport rep;
  for (const auto& set : family) {
    if (!(set.tree() == t)) throw std::invalid_argument("conditions: set lives on a different tree");
    ConditionRow row;
    for (const auto& b : set.boxes()) row.boxes.push_back(to_string(b));

    const auto bits = set.cell_bitmap();
    double mass = 0.0;
    for (std::uint64_t c = 0; c < bits.size(); ++c) {
      if (bits[c]) mass += mu.boundary()[c];
    }
    row.mass = mass;
    row.skipped = mass == 0.0;

    // Global charge-energy side: full energy of mu restricted to E.
    {
      std::vector<double> restricted_cells(t.vertex_count(), 0.0);
      for (std::uint64_t c = 0; c < bits.size(); ++c) {
        if (bits[c] && mu.boundary()[c] != 0.0) {
          restricted_cells[t.leaf_vertex_of_cell(c)] += mu.boundary()[c];
        }
      }
      subtree_sum_sweep(t, restricted_cells);
      double acc = 0.0;
      for (std::uint64_t v = 0; v < restricted_cells.size(); ++v) {
        acc += restricted_cells[v] * restricted_cells[v] * pi[v];
      }
      row.global_energy = acc;
    }

    // Local side: only boxes contained in E. A box is contained iff the
    // subtree minimum of the cell indicator is one.
    {
      std::vector<double> ind(t.vertex_count(), 2.0);
      for (std::uint64_t c = 0; c < bits.size(); ++c) {
        ind[t.leaf_vertex_of_cell(c)] = bits[c] ? 1.0 : 0.0;
      }
      subtree_min_sweep(t, ind);
      double acc = 0.0;
      for (std::uint64_t v = 0; v < ind.size(); ++v) {
        if (ind[v] == 1.0) acc += istar.vertex_values[v] * istar.vertex_values[v] * pi[v];
      }
      row.local_energy = acc;
    }

    if (!row.skipped) {
      row.capacity = solve_capacity(TargetSet::from_rectangular(set), w, cap_opts).cap;
      rep.global_ratio = std::max(rep.global_ratio, row.global_energy / mass);
      rep.local_ratio = std::max(rep.local_ratio, row.local_energy / mass);
      if (row.capacity > 0.0) {
        rep.subcap_ratio = std::max(rep.subcap_ratio, mass / row.capacity);
      }
    }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

TestFunctionPhi TestFunctionPhi::product_power(std::vector<double> a) {
  TestFunctionPhi phi;
  phi.kind_ = "product-power";
  phi.dim_ = static_cast<int>(a.size());
  phi.params_ = std::move(a);
  for (double aj : phi.params_) {
    if (!(aj >= 0.0)) throw std::invalid_argument("phi: power exponents must be >= 0");
  }
  phi.check_monotone();
  return phi;
}

TestFunctionPhi TestFunctionPhi::product_log(std::vector<double> b) {
  TestFunctionPhi phi;
  phi.kind_ = "product-log";
  phi.dim_ = static_cast<int>(b.size());
  phi.params_ = std::move(b);
  for (double bj : phi.params_) {
    if (!(bj >= 0.0)) throw std::invalid_argument("phi: log exponents must be >= 0");
  }
  phi.check_monotone();
  return phi;
}

TestFunctionPhi TestFunctionPhi::dyadic_table(std::vector<std::vector<double>> axis_values) {
  TestFunctionPhi phi;
  phi.kind_ = "dyadic-table";
  phi.dim_ = static_cast<int>(axis_values.size());
  phi.tables_ = std::move(axis_values);
  for (const auto& tab : phi.tables_) {
    if (tab.empty()) throw std::invalid_argument("phi: table axes must be nonempty");
    for (double x : tab) {
      if (!(x >= 0.0) || !std::isfinite(x)) {
        throw std::invalid_argument("phi: table values must be nonnegative and finite");
      }
    }
  }
  phi.check_monotone();
  return phi;
}

double TestFunctionPhi::eval_dyadic(const std::vector<std::uint32_t>& m) const {
  if (static_cast<int>(m.size()) != dim_) {
    throw std::invalid_argument("phi: dimension mismatch");
  }
  constexpr double kLn2 = 0.6931471805599453;
  double out = 1.0;
  if (kind_ == "product-power") {
    double e = 0.0;
    for (int j = 0; j < dim_; ++j) e += params_[j] * static_cast<double>(m[j]);
    out = std::exp2(-e);
  } else if (kind_ == "product-log") {
    for (int j = 0; j < dim_; ++j) {
      out *= std::pow(1.0 + (m[j] + 1.0) * kLn2, -params_[j]);
    }
  } else {
    for (int j = 0; j < dim_; ++j) {
      const std::size_t idx = std::min<std::size_t>(m[j], tables_[j].size() - 1);
      out *= tables_[j][idx];
    }
  }
  return out;
}

void TestFunctionPhi::check_monotone() {
  // Increasing in each t_j means nonincreasing in each dyadic exponent.
  constexpr std::uint32_t kSampleDepth = 24;
  monotone_ = true;
  std::vector<std::uint32_t> m(dim_, 0);
  for (int j = 0; j < dim_ && monotone_; ++j) {
    std::fill(m.begin(), m.end(), 0u);
    double prev = eval_dyadic(m);
    for (std::uint32_t k = 1; k <= kSampleDepth; ++k) {
      m[j] = k;
      const double cur = eval_dyadic(m);
      if (cur > prev * (1.0 + 1e-12)) {
        monotone_ = false;
        break;
      }
      prev = cur;
    }
  }
}

SingleBoxResult single_box_test(const Measure& mu, const TestFunctionPhi& phi, const Weight& w,
                                std::uint32_t proxy_depth_cap) {
  const TreeSpec& t = mu.tree();
  if (w.kind() != WeightKind::product_polynomial) {
    throw std::invalid_argument("single_box_test: polynomial weight required");
  }
  if (!(t == w.tree())) throw std::invalid_argument("single_box_test: trees differ");
  if (phi.dim() != t.dim()) throw std::invalid_argument("single_box_test: phi dimension mismatch");
  if (proxy_depth_cap < 8) throw std::invalid_argument("single_box_test: proxy cap must be >= 8");

  SingleBoxResult res;
  res.monotone = phi.monotone();

  // Proxy series and its octave blocks over max_j n_j.
  const auto& s = w.exponents();
  const int d = t.dim();
  const std::uint32_t N = proxy_depth_cap;
  double total = 0.0, block_last = 0.0, block_prev = 0.0;
  std::vector<std::uint32_t> n(d, 1);
  while (true) {
    std::uint32_t nmax = 0;
    double weight_factor = 0.0;
    for (int j = 0; j < d; ++j) {
      nmax = std::max(nmax, n[j]);
      weight_factor += s[j] * static_cast<double>(n[j]);
    }
    const double term = phi.eval_dyadic(n) * std::exp2(weight_factor);
    total += term;
    if (nmax > N / 2) {
      block_last += term;
    } else if (nmax > N / 4) {
      block_prev += term;
    }
    int j = d - 1;
    while (j >= 0 && ++n[j] > N) {
      n[j] = 1;
      --j;
    }
    if (j < 0) break;
  }
  res.integral_proxy = total;
  res.series_divergent = block_prev > 0.0 && block_last >= 0.99 * block_prev;
  res.eligible = res.monotone && !res.series_divergent;

  // Single-box bound mu(Q) <= phi(M(Q_1), ..., M(Q_d)) over every box.
  const Field istar = apply_I_star(mu);
  res.box_check = true;
  std::vector<std::uint32_t> levels(d);
  for (std::uint64_t v = 0; v < t.vertex_count(); ++v) {
    for (int j = 0; j < d; ++j) {
      levels[j] = TreeSpec::axis_from_linear((v / t.vertex_stride(j)) % t.axis_vertex_count(j)).level;
    }
    const double cap = phi.eval_dyadic(levels);
    if (istar.vertex_values[v] > cap * (1.0 + 1e-12) + 1e-300) {
      res.box_check = false;
      break;
    }
  }

  const Field V = potential(mu, w);
  double sup = 0.0;
  for (double x : V.cell_values) sup = std::max(sup, x);
  res.potential_sup = sup;
  return res;
}

namespace {

double maximal_ratio(const Field& g, const Measure& mu) {
  const double den = inner_mu(g, g, mu);
  if (den <= 0.0) return 0.0;
  const Field mg = maximal_function(g, mu);
  return inner_mu(mg, mg, mu) / den;
}

}  // namespace

MaximalEstimate maximal_constant_estimate(const Measure& mu, std::uint64_t budget,
                                          std::uint64_t seed) {
  const TreeSpec& t = mu.tree();
  if (!mu.boundary_supported()) {
    throw std::invalid_argument("maximal_constant_estimate: measure must be boundary-supported");
  }
  if (mu.is_zero()) {
    throw std::invalid_argument("maximal_constant_estimate: measure must be nonzero");
  }

  std::vector<std::uint64_t> support;
  for (std::uint64_t c = 0; c < t.cell_count(); ++c) {
    if (mu.boundary()[c] > 0.0) support.push_back(c);
  }

  MaximalEstimate best;
  Field g = Field::on_cells(t, 1.0);
  best.lower_bound = maximal_ratio(g, mu);  // = 1 whenever mu is nonzero
  best.witness_g = g;

  Rng rng(seed);
  std::uint64_t evals = 0;
  auto consider = [&](const Field& cand) {
    const double r = maximal_ratio(cand, mu);
    ++evals;
    if (r > best.lower_bound) {
      best.lower_bound = r;
      best.witness_g = cand;
    }
  };

  // Seeded candidate sweep: box indicators, atoms, tilted boxes, iid noise.
  const std::uint64_t explore = budget / 2;
  while (evals < explore) {
    const std::uint64_t kind = rng.next_u64() % 4;
    Field cand = Field::on_cells(t, 0.0);
    if (kind == 0 || kind == 2) {
      const Vertex box = t.vertex_from_id(rng.next_below(t.vertex_count()));
      const double inside = kind == 0 ? 1.0 : 1.0 + rng.next_double();
      const double outside = kind == 0 ? 0.0 : rng.next_double();
      const RectangularSet rs(t, {box});
      const auto bits = rs.cell_bitmap();
      for (std::uint64_t c = 0; c < t.cell_count(); ++c) {
        cand.cell_values[c] = bits[c] ? inside : outside;
      }
    } else if (kind == 1) {
      cand.cell_values[support[rng.next_below(support.size())]] = 1.0;
    } else {
      for (std::uint64_t c = 0; c < t.cell_count(); ++c) {
        cand.cell_values[c] = rng.next_double();
      }
    }
    consider(cand);
  }

  // Greedy coordinate ascent from the incumbent.
  g = best.witness_g;
  double gmax = 1.0;
  for (double x : g.cell_values) gmax = std::max(gmax, x);
  bool improved = true;
  while (improved && evals < budget) {
    improved = false;
    for (const std::uint64_t c : support) {
      if (evals >= budget) break;
      const double old = g.cell_values[c];
      for (const double trial : {old > 0.0 ? old * 2.0 : 0.25 * gmax, old * 0.5}) {
        if (evals >= budget) break;
        g.cell_values[c] = trial;
        const double r = maximal_ratio(g, mu);
        ++evals;
        if (r > best.lower_bound * (1.0 + 1e-12)) {
          best.lower_bound = r;
          best.witness_g = g;
          improved = true;
        } else {
          g.cell_values[c] = old;
        }
      }
    }
  }
  best.evaluations = evals;
  return best;
}

std::vector<SearchCandidate> counterexample_search(const SearchConfig& config) {
  const TreeSpec& t = config.tree;
  if (t.dim() < 2) {
    throw std::invalid_argument("search: d must be >= 2 (the one-parameter maximal operator is bounded)");
  }
  if (!(t == config.weight.tree())) throw std::invalid_argument("search: weight tree mismatch");

  std::vector<SearchCandidate> out;
  if (config.budget == 0) return out;

  // Rectangular sets the charge-energy conditions are tested on.
  std::vector<RectangularSet> family;
  if (config.set_family.name.empty()) {
    FamilySpec singles{"single-boxes", {{"max-level", "2"}}};
    family = rect_family(t, singles);
    FamilySpec unions{"random-unions",
                      {{"k", "3"}, {"count", "16"}, {"seed", std::to_string(config.seed ^ 0x5bd1e995u)}}};
    auto more = rect_family(t, unions);
    family.insert(family.end(), more.begin(), more.end());
  } else {
    family = rect_family(t, config.set_family);
  }

  Rng rng(config.seed);
  for (std::uint64_t i = 0; i < config.budget; ++i) {
    Measure mu(t);
    std::string generator;
    // The diagonal family has no parameters, so it enters exactly once; the
    // remaining budget alternates between the parameterized families.
    if (i == 1) {
      mu = gen_diagonal(t);
      generator = "diagonal";
    } else if (i % 2 == 0) {
      const double ratio = 0.1 + 0.8 * rng.next_double();
      const std::uint32_t depth = t.depth(0);
      mu = gen_cantor(t, ratio, depth);
      generator = "cantor,ratio=" + std::to_string(ratio) + ",depth=" + std::to_string(depth);
    } else {
      const std::uint64_t k = 1 + rng.next_below(std::max<std::uint64_t>(1, t.cell_count() / 2));
      const std::uint64_t sub_seed = rng.next_u64();
      mu = gen_random_atoms(t, k, sub_seed);
      generator = "random-atoms,k=" + std::to_string(k) + ",seed=" + std::to_string(sub_seed);
    }
    if (mu.is_zero()) continue;

    SearchCandidate cand;
    cand.generator = std::move(generator);
    cand.report = charge_energy_report(mu, family, config.weight, config.cap_opts);
    cand.report.family = config.set_family.name.empty() ? "builtin" : config.set_family.str();
    cand.report.hardy_norm_value = hardy_norm(mu, config.weight).C;
    cand.report.maximal_lower_bound =
        maximal_constant_estimate(mu, config.maximal_budget, rng.next_u64()).lower_bound;
    cand.score = cand.report.maximal_lower_bound;
    if (cand.report.local_ratio <= config.local_ratio_ceiling) {
      out.push_back(std::move(cand));
    }
  }

  std::stable_sort(out.begin(), out.end(), [](const SearchCandidate& a, const SearchCandidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.generator < b.generator;
  });
  return out;
}

std::vector<double> log_saturating_axis_caps(std::uint32_t depth, double b) {
  constexpr double kLn2 = 0.6931471805599453;
  std::vector<double> caps(depth);
  for (std::uint32_t l = 0; l < depth; ++l) {
    // phi_axis evaluated one dyadic step below the box size, so that summing
    // the caps along a leaf chain reproduces the proxy series from n = 1 on.
    caps[l] = std::pow(1.0 + (l + 2.0) * kLn2, -b);
  }
  return caps;
}

}  // namespace polycap
