#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lcc/embed.hpp"
#include "lcc/galois.hpp"
#include "lcc/oracle.hpp"
#include "lcc/pminor.hpp"
#include "lcc/witness.hpp"

namespace lcc {

using json = nlohmann::ordered_json;

// --- masks: {"p":3,"zero":false,"sups":["inf",2,null]} ----------------------

inline json to_json(const PMinorSubset& m) {
  json sups = json::array();
  for (const auto& b : m.bounds()) {
    if (b.is_empty()) {
      sups.push_back(nullptr);
    } else if (b.is_infinite()) {
      sups.push_back("inf");
    } else {
      sups.push_back(b.sup());
    }
  }
  return {{"p", m.modulus().value()}, {"zero", m.contains_zero()}, {"sups", sups}, {"elements", to_string(m)}};
}

inline PMinorSubset mask_from_json(const json& j) {
  const PrimeModulus p(j.at("p").get<std::uint32_t>());
  const auto& sups = j.at("sups");
  if (!sups.is_array() || sups.size() != p.value() - 1) {
    throw std::invalid_argument("mask: \"sups\" must list one bound per residue class 1..p-1");
  }
  std::vector<ClassBound> bounds;
  for (const auto& s : sups) {
    if (s.is_null()) {
      bounds.push_back(ClassBound::empty());
    } else if (s.is_string() && s.get<std::string>() == "inf") {
      bounds.push_back(ClassBound::infinite());
    } else if (s.is_number_unsigned()) {
      bounds.push_back(ClassBound::finite(s.get<std::uint64_t>()));
    } else {
      throw std::invalid_argument("mask: bound must be null, \"inf\" or a natural number");
    }
  }
  return PMinorSubset(p, j.value("zero", false), std::move(bounds));
}

inline PMinorSubset parse_mask(std::string_view text) { return mask_from_json(json::parse(text)); }

inline json to_json(const FunctionTable& t) {
  return {{"p", t.modulus().value()}, {"arity", t.arity()}, {"values", serialize(t)}};
}

// --- witness traces ---------------------------------------------------------

inline json to_json(const WitnessTrace& trace);

inline json to_json(const WitnessStep& s) {
  json j{{"kind", step_kind(s)}};
  std::visit(
      [&](const auto& st) {
        using T = std::decay_t<decltype(st)>;
        if constexpr (std::is_same_v<T, step::SubstituteZero>) {
          j["positions"] = st.positions;
        } else if constexpr (std::is_same_v<T, step::SubtractShifted>) {
          j["position"] = st.position;
        } else if constexpr (std::is_same_v<T, step::SubstituteSum>) {
          j["position"] = st.position;
          j["fresh"] = st.fresh;
        } else if constexpr (std::is_same_v<T, step::Scale>) {
          j["factor"] = st.factor;
        } else if constexpr (std::is_same_v<T, step::Relabel>) {
          json map = json::array();
          for (const auto& [from, to] : st.mapping) map.push_back({from, to});
          j["mapping"] = map;
        } else {
          j["degree"] = st.degree;
          json subs = json::array();
          for (const auto& t : st.subtraces) subs.push_back(to_json(*t));
          j["subtraces"] = subs;
        }
      },
      s);
  return j;
}

inline json to_json(const WitnessTrace& trace) {
  json steps = json::array();
  for (const auto& s : trace.steps) steps.push_back(to_json(s));
  return {{"p", trace.start.modulus().value()},
          {"start", format(trace.start)},
          {"result", format(trace.claimed_result)},
          {"length", trace.length()},
          {"steps", steps}};
}

inline WitnessTrace trace_from_json(const json& j);

inline WitnessStep step_from_json(const json& j, PrimeModulus p) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "substitute-zero") return step::SubstituteZero{j.at("positions").get<std::vector<VarIndex>>()};
  if (kind == "subtract-shifted") return step::SubtractShifted{j.at("position").get<VarIndex>()};
  if (kind == "substitute-sum") return step::SubstituteSum{j.at("position").get<VarIndex>(), j.at("fresh").get<VarIndex>()};
  if (kind == "scale") return step::Scale{p.reduce(j.at("factor").get<std::int64_t>())};
  if (kind == "relabel") {
    step::Relabel r;
    for (const auto& pair : j.at("mapping")) r.mapping.emplace_back(pair.at(0).get<VarIndex>(), pair.at(1).get<VarIndex>());
    return r;
  }
  if (kind == "drop-higher-degrees") {
    step::DropHigherDegrees d{j.at("degree").get<std::uint64_t>(), {}};
    for (const auto& sub : j.at("subtraces")) d.subtraces.push_back(std::make_shared<const WitnessTrace>(trace_from_json(sub)));
    return d;
  }
  throw std::invalid_argument("witness: unknown step kind \"" + kind + "\"");
}

inline WitnessTrace trace_from_json(const json& j) {
  const PrimeModulus p(j.at("p").get<std::uint32_t>());
  WitnessTrace t{parse(j.at("start").get<std::string>(), p), {}, parse(j.at("result").get<std::string>(), p)};
  for (const auto& s : j.at("steps")) t.steps.push_back(step_from_json(s, p));
  return t;
}

// --- reports ----------------------------------------------------------------

inline json to_json(const CrossValidationReport& r) {
  json j{{"arity", r.arity},
         {"dimension", r.dimension},
         {"agree", r.agree()},
         {"exhaustive", r.exhaustive},
         {"tables_checked", r.tables_checked},
         {"disagreements", r.disagreements}};
  if (r.counterexample) {
    j["counterexample"] = {{"table", serialize(*r.counterexample)}, {"in_span", r.counterexample_in_span}};
  }
  return j;
}

inline json to_json(const CorrespondenceReport& r) {
  json matches = json::array();
  for (const auto& m : r.matches) {
    json e{{"generator", m.subgroup.generator},
           {"elements", m.subgroup.elements},
           {"order", m.subgroup.order()},
           {"divisor", m.divisor ? json(*m.divisor) : json(nullptr)},
           {"contains_plus", m.contains_plus}};
    if (r.exhaustive) e["pol_size"] = m.pol_size;
    if (m.divisor) e["mask"] = to_json(arithmetic_progression(m.subgroup.modulus, *m.divisor));
    matches.push_back(e);
  }
  return {{"p", r.p},         {"arity", r.arity},           {"exhaustive", r.exhaustive},
          {"matches", matches}, {"mismatches", r.mismatches}, {"bijective", r.bijective}};
}

inline json to_json(const ChainReport& r) {
  json masks = json::array();
  for (std::size_t i = 0; i < r.chain.size(); ++i) {
    json m = to_json(r.chain[i].mask());
    m["finitely_generated"] = static_cast<bool>(r.finitely_generated[i]);
    masks.push_back(m);
  }
  json links = json::array();
  for (const auto& l : r.links) {
    json e{{"separator", format(l.separator)},
           {"degree", l.degree},
           {"strict", l.strict},
           {"in_upper", l.in_upper},
           {"in_lower", l.in_lower},
           {"table_checked", l.table_checked},
           {"verified", l.verified()}};
    if (l.table_checked) {
      e["table_in_upper"] = l.table_in_upper;
      e["table_in_lower"] = l.table_in_lower;
    }
    links.push_back(e);
  }
  return {{"p", r.p}, {"m1", r.m1}, {"m2", r.m2}, {"masks", masks}, {"links", links}, {"passed", r.passed()}};
}

}  // namespace lcc
