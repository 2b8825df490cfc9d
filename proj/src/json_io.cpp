#include "polycap/json_io.hpp"

#include <stdexcept>

namespace polycap {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw std::invalid_argument(field + ": " + what);
}

std::vector<double> doubles_from(const json& j, const std::string& field) {
  if (!j.is_array()) fail(field, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& x : j) {
    if (!x.is_number()) fail(field, "expected an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace

TreeSpec parse_tree_spec(const std::string& text) {
  if (!text.empty() && text.front() == '{') return tree_from_json(json::parse(text));
  // "d=2,n=3,4" or "d=1,n=5".
  long d = -1;
  std::vector<std::uint32_t> depths;
  std::size_t pos = 0;
  bool in_n = false;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string tok = text.substr(pos, (comma == std::string::npos ? text.size() : comma) - pos);
    while (!tok.empty() && tok.front() == ' ') tok.erase(tok.begin());
    if (tok.rfind("d=", 0) == 0) {
      d = std::stol(tok.substr(2));
      in_n = false;
    } else if (tok.rfind("n=", 0) == 0) {
      depths.push_back(static_cast<std::uint32_t>(std::stoul(tok.substr(2))));
      in_n = true;
    } else if (!tok.empty() && in_n) {
      depths.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
    } else if (!tok.empty()) {
      fail("tree", "unrecognized token \"" + tok + "\"");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (d < 1) fail("tree", "d must be given and >= 1");
  if (depths.empty()) fail("tree", "n must be given");
  if (depths.size() == 1) depths.assign(static_cast<std::size_t>(d), depths[0]);
  if (static_cast<long>(depths.size()) != d) fail("tree", "expected one depth or one per axis");
  return TreeSpec(depths);
}

TreeSpec tree_from_json(const json& j) {
  if (!j.is_object() || !j.contains("n")) fail("tree.n", "missing");
  std::vector<std::uint32_t> depths;
  for (const auto& n : j["n"]) depths.push_back(n.get<std::uint32_t>());
  if (j.contains("d") && j["d"].get<int>() != static_cast<int>(depths.size())) {
    fail("tree.d", "does not match the number of depths");
  }
  return TreeSpec(depths);
}

json tree_to_json(const TreeSpec& t) {
  json j;
  j["d"] = t.dim();
  j["n"] = t.depths();
  return j;
}

Weight weight_from_json(const TreeSpec& t, const json& j) {
  if (!j.is_object() || !j.contains("type")) fail("weight.type", "missing");
  const std::string type = j["type"].get<std::string>();
  if (type == "polynomial") {
    if (!j.contains("s")) fail("weight.s", "missing");
    return Weight::polynomial(t, doubles_from(j["s"], "weight.s"));
  }
  if (type == "table") {
    if (!j.contains("axes")) fail("weight.axes", "missing");
    std::vector<std::vector<double>> axes;
    for (const auto& a : j["axes"]) axes.push_back(doubles_from(a, "weight.axes"));
    return Weight::product_table(t, std::move(axes));
  }
  if (type == "dense") {
    if (!j.contains("values")) fail("weight.values", "missing");
    return Weight::dense_table(t, doubles_from(j["values"], "weight.values"));
  }
  fail("weight.type", "unknown type \"" + type + "\"");
}

json weight_to_json(const Weight& w) {
  json j;
  switch (w.kind()) {
    case WeightKind::product_polynomial:
      j["type"] = "polynomial";
      j["s"] = w.exponents();
      break;
    case WeightKind::product_table: {
      j["type"] = "table";
      json axes = json::array();
      for (int a = 0; a < w.tree().dim(); ++a) {
        json col = json::array();
        for (std::uint32_t l = 0; l < w.tree().depth(a); ++l) col.push_back(w.axis_pi(a, l));
        axes.push_back(std::move(col));
      }
      j["axes"] = std::move(axes);
      break;
    }
    case WeightKind::dense_table:
      j["type"] = "dense";
      j["values"] = w.pi_dense();
      break;
  }
  return j;
}

Weight parse_weight_arg(const TreeSpec& t, const std::string& text) {
  if (text.rfind("s=", 0) == 0) {
    std::vector<double> s;
    std::size_t pos = 2;
    while (pos <= text.size()) {
      std::size_t comma = text.find(',', pos);
      const std::string tok =
          text.substr(pos, (comma == std::string::npos ? text.size() : comma) - pos);
      if (!tok.empty()) s.push_back(std::stod(tok));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (s.size() == 1) s.assign(static_cast<std::size_t>(t.dim()), s[0]);
    return Weight::polynomial(t, std::move(s));
  }
  return weight_from_json(t, json::parse(text));
}

Measure measure_from_json(const TreeSpec& t, const json& j) {
  if (!j.is_object()) fail("measure", "expected an object");
  if (j.contains("gen")) {
    const std::string gen = j["gen"].get<std::string>();
    if (gen == "md") return md_measure(t);
    if (gen == "atom-cell") {
      if (!j.contains("cell")) fail("measure.cell", "missing");
      BoundaryCell c;
      for (const auto& k : j["cell"]) c.cell.push_back(k.get<std::uint64_t>());
      return gen_atom_cell(t, c);
    }
    if (gen == "cantor") {
      const double ratio = j.value("ratio", 0.5);
      const std::uint32_t depth = j.value("depth", t.depth(0));
      return gen_cantor(t, ratio, depth);
    }
    if (gen == "diagonal") return gen_diagonal(t);
    if (gen == "random-atoms") {
      if (!j.contains("k")) fail("measure.k", "missing");
      if (!j.contains("seed")) fail("measure.seed", "randomized generators require a seed");
      return gen_random_atoms(t, j["k"].get<std::uint64_t>(), j["seed"].get<std::uint64_t>());
    }
    if (gen == "axis-capped") {
      if (!j.contains("caps")) fail("measure.caps", "missing");
      std::vector<std::vector<double>> caps;
      for (const auto& a : j["caps"]) caps.push_back(doubles_from(a, "measure.caps"));
      return max_measure_under_axis_caps(t, caps);
    }
    fail("measure.gen", "unknown generator \"" + gen + "\"");
  }
  MeasureBuilder b(t);
  if (j.contains("interior")) {
    for (const auto& atom : j["interior"]) {
      if (!atom.contains("v") || !atom.contains("m")) fail("measure.interior", "atoms need v and m");
      b.add_interior(parse_vertex(atom["v"].get<std::string>()), atom["m"].get<double>());
    }
  }
  if (j.contains("boundary")) {
    const auto& bd = j["boundary"];
    const std::string enc = bd.value("encoding", "sparse");
    if (enc == "dense") {
      const auto vals = doubles_from(bd["values"], "measure.boundary.values");
      if (vals.size() != t.cell_count()) fail("measure.boundary.values", "length must equal cell count");
      for (std::uint64_t c = 0; c < vals.size(); ++c) b.add_cell_id(c, vals[c]);
    } else if (enc == "sparse") {
      for (const auto& atom : bd["cells"]) {
        if (!atom.contains("c") || !atom.contains("m")) fail("measure.boundary.cells", "atoms need c and m");
        BoundaryCell c;
        for (const auto& k : atom["c"]) c.cell.push_back(k.get<std::uint64_t>());
        b.add_cell(c, atom["m"].get<double>());
      }
    } else {
      fail("measure.boundary.encoding", "must be dense or sparse");
    }
  }
  return b.build();
}

json measure_to_json(const Measure& mu) {
  const TreeSpec& t = mu.tree();
  json j;
  json interior = json::array();
  for (const auto& [vid, m] : mu.interior()) {
    interior.push_back({{"v", to_string(t.vertex_from_id(vid))}, {"m", m}});
  }
  j["interior"] = std::move(interior);
  std::uint64_t nonzero = 0;
  for (double m : mu.boundary()) nonzero += m != 0.0;
  json boundary;
  if (nonzero * 4 >= t.cell_count()) {
    boundary["encoding"] = "dense";
    boundary["values"] = mu.boundary();
  } else {
    boundary["encoding"] = "sparse";
    json cells = json::array();
    for (std::uint64_t c = 0; c < t.cell_count(); ++c) {
      if (mu.boundary()[c] != 0.0) {
        cells.push_back({{"c", t.cell_from_id(c).cell}, {"m", mu.boundary()[c]}});
      }
    }
    boundary["cells"] = std::move(cells);
  }
  j["boundary"] = std::move(boundary);
  j["total_mass"] = mu.total_mass();
  return j;
}

TargetSet target_from_json(const TreeSpec& t, const json& j) {
  if (!j.is_object()) fail("target", "expected an object");
  TargetSet e;
  e.tree = t;
  std::vector<Vertex> vs;
  if (j.contains("vertices")) {
    for (const auto& s : j["vertices"]) vs.push_back(parse_vertex(s.get<std::string>()));
  }
  e = TargetSet::of_vertices(t, vs);
  if (j.contains("cells")) {
    std::vector<std::uint64_t> ids;
    for (const auto& arr : j["cells"]) {
      BoundaryCell c;
      for (const auto& k : arr) c.cell.push_back(k.get<std::uint64_t>());
      ids.push_back(t.cell_id(c));
    }
    auto cells = TargetSet::of_cell_ids(t, std::move(ids));
    e.cells = std::move(cells.cells);
  }
  return e;
}

json target_to_json(const TargetSet& e) {
  json j;
  json vs = json::array();
  for (auto vid : e.vertices) vs.push_back(to_string(e.tree.vertex_from_id(vid)));
  j["vertices"] = std::move(vs);
  json cs = json::array();
  for (auto cid : e.cells) cs.push_back(e.tree.cell_from_id(cid).cell);
  j["cells"] = std::move(cs);
  return j;
}

TargetSet parse_target_arg(const TreeSpec& t, const std::string& text) {
  if (text == "full-boundary") return TargetSet::full_boundary(t);
  if (text.rfind("vertex:", 0) == 0) {
    return TargetSet::of_vertices(t, {parse_vertex(text.substr(7))});
  }
  if (text.rfind("box:", 0) == 0) {
    const RectangularSet rs(t, {parse_vertex(text.substr(4))});
    return TargetSet::from_rectangular(rs);
  }
  return target_from_json(t, json::parse(text));
}

RectangularSet rectset_from_json(const TreeSpec& t, const json& j) {
  if (!j.is_array()) fail("set", "expected an array of vertex strings");
  std::vector<Vertex> boxes;
  for (const auto& s : j) boxes.push_back(parse_vertex(s.get<std::string>()));
  return RectangularSet(t, std::move(boxes));
}

json rectset_to_json(const RectangularSet& s) {
  json j = json::array();
  for (const auto& b : s.boxes()) j.push_back(to_string(b));
  return j;
}

std::vector<RectangularSet> parse_family_arg(const TreeSpec& t, const std::string& text) {
  if (!text.empty() && text.front() == '[') {
    const json j = json::parse(text);
    std::vector<RectangularSet> out;
    for (const auto& set : j) out.push_back(rectset_from_json(t, set));
    return out;
  }
  return rect_family(t, FamilySpec::parse(text));
}

json field_to_json(const Field& f) {
  json j;
  switch (f.domain) {
    case FieldDomain::vertices_only: j["domain"] = "vertices"; break;
    case FieldDomain::vertices_and_cells: j["domain"] = "vertices+cells"; break;
    case FieldDomain::cells_only: j["domain"] = "cells"; break;
  }
  if (f.has_vertices()) j["vertices"] = f.vertex_values;
  if (f.has_cells()) j["cells"] = f.cell_values;
  return j;
}

json equilibrium_to_json(const EquilibriumResult& r) {
  json j;
  j["cap"] = r.cap;
  j["primal"] = r.primal_value;
  j["dual"] = r.dual_value;
  j["gap"] = r.gap;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["mu_E"] = measure_to_json(r.mu_E);
  j["f_E"] = field_to_json(r.f_E);
  return j;
}

json kkt_to_json(const KktReport& r) {
  json j;
  j["pass"] = r.pass;
  j["support_ok"] = r.support_ok;
  j["min_V_on_E"] = r.min_V_on_E;
  j["max_V_on_support"] = r.max_V_on_support;
  j["mass"] = r.mass;
  j["energy"] = r.energy;
  j["identity_gap"] = r.identity_gap;
  j["offending_atoms"] = r.offending_atoms;
  return j;
}

json hardy_to_json(const HardyNormResult& r, bool include_field) {
  json j;
  j["C"] = r.C;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  if (include_field) j["extremal_f"] = field_to_json(r.extremal_f);
  return j;
}

json condition_report_to_json(const ConditionReport& r) {
  json j;
  j["global_ratio"] = r.global_ratio;
  j["local_ratio"] = r.local_ratio;
  j["subcap_ratio"] = r.subcap_ratio;
  if (r.hardy_norm_value >= 0.0) j["hardy_norm"] = r.hardy_norm_value;
  if (r.maximal_lower_bound >= 0.0) j["maximal_lower_bound"] = r.maximal_lower_bound;
  if (!r.family.empty()) j["family"] = r.family;
  json rows = json::array();
  for (const auto& row : r.rows) {
    json rj;
    rj["boxes"] = row.boxes;
    rj["mass"] = row.mass;
    rj["global_energy"] = row.global_energy;
    rj["local_energy"] = row.local_energy;
    rj["capacity"] = row.capacity;
    rj["skipped"] = row.skipped;
    rows.push_back(std::move(rj));
  }
  j["rows"] = std::move(rows);
  return j;
}

json single_box_to_json(const SingleBoxResult& r) {
  json j;
  j["eligible"] = r.eligible;
  j["monotone"] = r.monotone;
  j["series_divergent"] = r.series_divergent;
  j["integral_proxy"] = r.integral_proxy;
  j["box_check"] = r.box_check;
  j["potential_sup"] = r.potential_sup;
  return j;
}

json maximal_to_json(const MaximalEstimate& r, bool include_field) {
  json j;
  j["lower_bound"] = r.lower_bound;
  j["evaluations"] = r.evaluations;
  if (include_field) j["witness_g"] = field_to_json(r.witness_g);
  return j;
}

json search_candidate_to_json(const SearchCandidate& c, std::size_t rank) {
  json j;
  j["rank"] = rank;
  j["generator"] = c.generator;
  j["score"] = c.score;
  j["report"] = condition_report_to_json(c.report);
  return j;
}

}  // namespace polycap
