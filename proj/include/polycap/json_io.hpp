#pragma once

// JSON forms of the engine types: the wire format of the CLI. Object keys are
// emitted in nlohmann's sorted order, so identical inputs produce identical
// bytes.

#include <string>
#include <vector>

#include <json.hpp>

#include "polycap/capacity.hpp"
#include "polycap/field.hpp"
#include "polycap/measures.hpp"
#include "polycap/polytree.hpp"
#include "polycap/trace.hpp"
#include "polycap/weights.hpp"

namespace polycap {

using json = nlohmann::json;

// "d=2,n=3,4" (a single n applies to every axis) or inline JSON.
TreeSpec parse_tree_spec(const std::string& text);
TreeSpec tree_from_json(const json& j);
json tree_to_json(const TreeSpec& t);

Weight weight_from_json(const TreeSpec& t, const json& j);
json weight_to_json(const Weight& w);
// "s=0.5,0" shorthand or inline JSON.
Weight parse_weight_arg(const TreeSpec& t, const std::string& text);

Measure measure_from_json(const TreeSpec& t, const json& j);  // literals and generators
json measure_to_json(const Measure& mu);

TargetSet target_from_json(const TreeSpec& t, const json& j);
json target_to_json(const TargetSet& e);
// "full-boundary", "vertex:<text>", "box:<text>" or inline JSON.
TargetSet parse_target_arg(const TreeSpec& t, const std::string& text);

RectangularSet rectset_from_json(const TreeSpec& t, const json& j);
json rectset_to_json(const RectangularSet& s);
// Either a family descriptor string or an explicit JSON array of box arrays.
std::vector<RectangularSet> parse_family_arg(const TreeSpec& t, const std::string& text);

json field_to_json(const Field& f);

json equilibrium_to_json(const EquilibriumResult& r);
json kkt_to_json(const KktReport& r);
json hardy_to_json(const HardyNormResult& r, bool include_field = true);
json condition_report_to_json(const ConditionReport& r);
json single_box_to_json(const SingleBoxResult& r);
json maximal_to_json(const MaximalEstimate& r, bool include_field = true);
json search_candidate_to_json(const SearchCandidate& c, std::size_t rank);

}  // namespace polycap
