// polycap: batch front end for the poly-tree potential-theory engine.
//
// One command per process. Reports are JSON on stdout (byte-identical for
// identical inputs and seeds); timing goes to stderr so it cannot perturb the
// output contract. Schema violations exit with code 2 and a diagnostic naming
// the offending field; numerical non-convergence is not an error and is
// reported inline as "converged": false.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "polycap/json_io.hpp"
#include "polycap/potential.hpp"
#include "polycap/reference.hpp"
#include "polycap/selftest.hpp"

namespace {

constexpr const char* kEngineName = "polycap";
constexpr const char* kEngineVersion = "0.1.0";

using polycap::json;

std::string slurp_arg(const std::string& text) {
  if (!text.empty() && text.front() == '@') {
    std::ifstream in(text.substr(1));
    if (!in) throw std::invalid_argument("file: cannot read " + text.substr(1));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  return text;
}

struct CommonArgs {
  std::string tree;
  std::string weight = "s=0";
  std::string measure;
  std::string target;
  std::string family;
  double tol = 1e-6;
  std::uint64_t max_iters = 0;
  std::optional<std::uint64_t> seed;
  int threads = 0;
  std::string mode = "sweep";
  bool oracle = false;
  std::string out = "json";
  std::string csv_path;
  std::uint64_t budget = 0;
  std::optional<std::uint32_t> depth;  // search shorthand: d=2, n=depth
  std::string s_arg;                   // search shorthand for --weight
};

json spec_echo(const CommonArgs& a, std::initializer_list<const char*> fields, const json& extra) {
  json spec = extra;
  for (const char* f : fields) {
    const std::string name(f);
    if (name == "tree") spec["tree"] = polycap::tree_to_json(polycap::parse_tree_spec(a.tree));
    if (name == "tol") spec["tol"] = a.tol;
    if (name == "max_iters") spec["max_iters"] = a.max_iters;
    if (name == "mode") spec["mode"] = a.mode;
    if (name == "threads") spec["threads"] = a.threads;
    if (name == "budget") spec["budget"] = a.budget;
    if (name == "seed" && a.seed) spec["seed"] = *a.seed;
  }
  return spec;
}

void emit_report(const std::string& command, const json& spec, const json& result) {
  json envelope;
  envelope["command"] = command;
  envelope["engine"] = {{"name", kEngineName}, {"version", kEngineVersion}};
  envelope["spec"] = spec;
  envelope["result"] = result;
  std::cout << envelope.dump(2) << "\n";
}

void write_rows_csv(std::ostream& out, const polycap::ConditionReport& rep) {
  out << "index,boxes,mass,global_energy,local_energy,capacity,skipped\n";
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& r = rep.rows[i];
    out << i << ",\"";
    for (std::size_t b = 0; b < r.boxes.size(); ++b) {
      if (b) out << '|';
      out << r.boxes[b];
    }
    out << "\"," << json(r.mass).dump() << ',' << json(r.global_energy).dump() << ','
        << json(r.local_energy).dump() << ',' << json(r.capacity).dump() << ','
        << (r.skipped ? 1 : 0) << "\n";
  }
}

int run(int argc, char** argv) {
  CLI::App app{"discrete multi-parameter potential theory on weighted poly-trees"};
  app.require_subcommand(0, 1);

  CommonArgs a;
  if (const char* env = std::getenv("POLYCAP_THREADS")) a.threads = std::atoi(env);

  auto add_common = [&](CLI::App* cmd, bool needs_tree = true) {
    auto* t = cmd->add_option("--tree", a.tree, "tree spec, e.g. d=2,n=3,4");
    if (needs_tree) t->required();
    cmd->add_option("--weight", a.weight, "weight: s=0.5,0 or JSON or @file");
    cmd->add_option("--tol", a.tol, "solver tolerance");
    cmd->add_option("--max-iters", a.max_iters, "iteration cap (0 = default)");
    cmd->add_option("--seed", a.seed, "seed for randomized steps");
    cmd->add_option("--threads", a.threads, "worker threads (engine runs deterministically)");
    cmd->add_option("--out", a.out, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  };

  auto* tree_info = app.add_subcommand("tree-info", "sizes and addressing of a tree spec");
  add_common(tree_info);

  auto* capacity = app.add_subcommand("capacity", "capacity and equilibrium measure of a target set");
  add_common(capacity);
  capacity->add_option("--target", a.target, "target set: full-boundary | vertex:<v> | box:<v> | JSON")
      ->required();
  capacity->add_flag("--oracle", a.oracle, "also run the dense reference optimizer");

  auto* equilibrium = app.add_subcommand("equilibrium", "capacity solve plus KKT certificate");
  add_common(equilibrium);
  equilibrium->add_option("--target", a.target, "target set")->required();

  auto* potential_cmd = app.add_subcommand("potential", "potential field of a measure");
  add_common(potential_cmd);
  potential_cmd->add_option("--measure", a.measure, "measure JSON, generator JSON, or @file")->required();
  potential_cmd->add_option("--mode", a.mode, "sweep|kernel")->check(CLI::IsMember({"sweep", "kernel"}));

  auto* pushdown_cmd = app.add_subcommand("pushdown", "boundary pushdown of a measure");
  add_common(pushdown_cmd);
  pushdown_cmd->add_option("--measure", a.measure, "measure JSON or @file")->required();

  auto* hardy = app.add_subcommand("hardy-norm", "best Hardy constant of a trace measure");
  add_common(hardy);
  hardy->add_option("--measure", a.measure, "measure JSON or @file")->required();

  auto* conditions = app.add_subcommand("conditions", "charge-energy condition report over a family");
  add_common(conditions);
  conditions->add_option("--measure", a.measure, "measure JSON or @file")->required();
  conditions->add_option("--family", a.family, "family descriptor or explicit JSON sets")->required();
  conditions->add_option("--budget", a.budget, "maximal-function search budget (0 = constant witness only)");
  conditions->add_option("--csv", a.csv_path, "write per-set rows to a CSV file");

  auto* search = app.add_subcommand("search-counterexample",
                                    "rank measures by maximal-function violation (JSON lines)");
  add_common(search, /*needs_tree=*/false);
  search->add_option("--family", a.family, "family descriptor for the condition checks");
  search->add_option("--budget", a.budget, "number of candidate measures");
  search->add_option("--depth", a.depth, "shorthand: tree d=2,n=<depth>");
  search->add_option("--s", a.s_arg, "shorthand: polynomial weight exponents");

  auto* selftest = app.add_subcommand("selftest", "run the built-in closed-form suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << kEngineName << ": error: " << e.what() << "\n";
    return 2;
  }

  const auto t0 = std::chrono::steady_clock::now();
  int exit_code = 0;
  std::string command = "help";

  try {
    if (a.out == "csv" && !conditions->parsed()) {
      throw std::invalid_argument("out: csv applies to tabular reports (conditions) only");
    }
    if (tree_info->parsed()) {
      command = "tree-info";
      const polycap::TreeSpec t = polycap::parse_tree_spec(a.tree);
      json result;
      result["d"] = t.dim();
      result["n"] = t.depths();
      result["vertex_count"] = t.vertex_count();
      result["cell_count"] = t.cell_count();
      json av = json::array(), ac = json::array();
      for (int j = 0; j < t.dim(); ++j) {
        av.push_back(t.axis_vertex_count(j));
        ac.push_back(t.axis_cell_count(j));
      }
      result["axis_vertex_counts"] = std::move(av);
      result["axis_cell_counts"] = std::move(ac);
      emit_report(command, spec_echo(a, {"tree", "threads"}, {}), result);
    } else if (capacity->parsed() || equilibrium->parsed()) {
      command = capacity->parsed() ? "capacity" : "equilibrium";
      const polycap::TreeSpec t = polycap::parse_tree_spec(a.tree);
      const polycap::Weight w = polycap::parse_weight_arg(t, slurp_arg(a.weight));
      const polycap::TargetSet E = polycap::parse_target_arg(t, slurp_arg(a.target));
      const auto res = polycap::solve_capacity(E, w, {a.tol, a.max_iters});
      json result = polycap::equilibrium_to_json(res);
      if (capacity->parsed() && a.oracle) {
        result["cap_oracle"] = polycap::reference_capacity(E, w);
      }
      if (equilibrium->parsed()) {
        // Pointwise certificates trail the duality gap, so certify looser.
        result["kkt"] = polycap::kkt_to_json(polycap::kkt_check(E, res.mu_E, w, 100.0 * a.tol));
      }
      json spec = spec_echo(a, {"tree", "tol", "max_iters", "threads"},
                            {{"weight", polycap::weight_to_json(w)},
                             {"target", polycap::target_to_json(E)}});
      emit_report(command, spec, result);
      if (!res.converged) exit_code = 0;  // flagged inline, still a report
    } else if (potential_cmd->parsed()) {
      command = "potential";
      const polycap::TreeSpec t = polycap::parse_tree_spec(a.tree);
      const polycap::Weight w = polycap::parse_weight_arg(t, slurp_arg(a.weight));
      const polycap::Measure mu = polycap::measure_from_json(t, json::parse(slurp_arg(a.measure)));
      const auto mode =
          a.mode == "kernel" ? polycap::PotentialMode::kernel : polycap::PotentialMode::sweep;
      const polycap::Field V = polycap::potential(mu, w, mode);
      json spec = spec_echo(a, {"tree", "mode", "threads"},
                            {{"weight", polycap::weight_to_json(w)},
                             {"measure", polycap::measure_to_json(mu)}});
      emit_report(command, spec, polycap::field_to_json(V));
    } else if (pushdown_cmd->parsed()) {
      command = "pushdown";
      const polycap::TreeSpec t = polycap::parse_tree_spec(a.tree);
      const polycap::Measure mu = polycap::measure_from_json(t, json::parse(slurp_arg(a.measure)));
      json spec = spec_echo(a, {"tree", "threads"}, {{"measure", polycap::measure_to_json(mu)}});
      emit_report(command, spec, polycap::measure_to_json(polycap::pushdown(mu)));
    } else if (hardy->parsed()) {
      command = "hardy-norm";
      const polycap::TreeSpec t = polycap::parse_tree_spec(a.tree);
      const polycap::Weight w = polycap::parse_weight_arg(t, slurp_arg(a.weight));
      const polycap::Measure mu = polycap::measure_from_json(t, json::parse(slurp_arg(a.measure)));
      const auto res = polycap::hardy_norm(mu, w, a.tol);
      json spec = spec_echo(a, {"tree", "tol", "threads"},
                            {{"weight", polycap::weight_to_json(w)},
                             {"measure", polycap::measure_to_json(mu)}});
      emit_report(command, spec, polycap::hardy_to_json(res));
    } else if (conditions->parsed()) {
      command = "conditions";
      const polycap::TreeSpec t = polycap::parse_tree_spec(a.tree);
      const polycap::Weight w = polycap::parse_weight_arg(t, slurp_arg(a.weight));
      const polycap::Measure mu = polycap::measure_from_json(t, json::parse(slurp_arg(a.measure)));
      const auto family = polycap::parse_family_arg(t, slurp_arg(a.family));
      if (a.budget > 0 && !a.seed) {
        throw std::invalid_argument("seed: required when --budget > 0 (randomized search)");
      }
      auto rep = polycap::charge_energy_report(mu, family, w, {a.tol, a.max_iters});
      rep.family = a.family;
      if (!mu.is_zero()) {
        rep.hardy_norm_value = polycap::hardy_norm(mu, w).C;
        rep.maximal_lower_bound =
            polycap::maximal_constant_estimate(mu, a.budget, a.seed.value_or(0)).lower_bound;
      }
      if (!a.csv_path.empty()) {
        std::ofstream file(a.csv_path);
        if (!file) throw std::invalid_argument("csv: cannot write " + a.csv_path);
        write_rows_csv(file, rep);
      }
      if (a.out == "csv") {
        write_rows_csv(std::cout, rep);
      } else {
        json spec = spec_echo(a, {"tree", "tol", "budget", "seed", "threads"},
                              {{"weight", polycap::weight_to_json(w)},
                               {"measure", polycap::measure_to_json(mu)},
                               {"family", a.family}});
        emit_report(command, spec, polycap::condition_report_to_json(rep));
      }
    } else if (search->parsed()) {
      command = "search-counterexample";
      if (!a.seed) throw std::invalid_argument("seed: required for search-counterexample");
      std::string tree_text = a.tree;
      if (tree_text.empty()) {
        if (!a.depth) throw std::invalid_argument("tree: give --tree or --depth");
        tree_text = "d=2,n=" + std::to_string(*a.depth);
      }
      const polycap::TreeSpec t = polycap::parse_tree_spec(tree_text);
      std::string weight_text = a.weight;
      if (!a.s_arg.empty()) weight_text = "s=" + a.s_arg;
      polycap::SearchConfig cfg{t, polycap::parse_weight_arg(t, weight_text)};
      cfg.budget = a.budget;
      cfg.seed = *a.seed;
      cfg.cap_opts = {a.tol, a.max_iters};
      if (!a.family.empty()) cfg.set_family = polycap::FamilySpec::parse(a.family);
      const auto candidates = polycap::counterexample_search(cfg);
      json spec = spec_echo(a, {"tol", "budget", "seed", "threads"},
                            {{"tree", polycap::tree_to_json(t)},
                             {"weight", polycap::weight_to_json(cfg.weight)},
                             {"family", a.family}});
      json envelope;
      envelope["command"] = command;
      envelope["engine"] = {{"name", kEngineName}, {"version", kEngineVersion}};
      envelope["spec"] = spec;
      envelope["result"] = {{"candidates", candidates.size()}};
      std::cout << envelope.dump() << "\n";
      for (std::size_t i = 0; i < candidates.size(); ++i) {
        std::cout << polycap::search_candidate_to_json(candidates[i], i).dump() << "\n";
      }
    } else if (selftest->parsed()) {
      command = "selftest";
      const auto rep = polycap::run_selftest();
      json checks = json::array();
      for (const auto& c : rep.checks) {
        checks.push_back({{"name", c.name}, {"pass", c.pass}, {"measured", c.measured},
                          {"expected", c.expected}});
      }
      json result;
      result["checks"] = std::move(checks);
      result["failures"] = rep.failures;
      result["total"] = rep.checks.size();
      emit_report(command, spec_echo(a, {"threads"}, {}), result);
      exit_code = rep.failures == 0 ? 0 : 1;
    } else {
      std::cout << app.help() << "\n";
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << kEngineName << ": error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << kEngineName << ": error: malformed JSON: " << e.what() << "\n";
    return 2;
  }

  const auto dt = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - t0);
  std::cerr << kEngineName << ": " << command << " finished in " << dt.count() << " ms\n";
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
