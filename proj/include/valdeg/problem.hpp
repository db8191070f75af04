// Problem files: UTF-8 JSON describing a weighted ring with deformed
// equations, or a plane-branch block, plus optional queries. Loading goes
// through the same constructors as in-memory use, so every invariant the
// constructors enforce is enforced here too; errors carry JSON paths.
#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "valdeg/approximation.hpp"
#include "valdeg/degeneration.hpp"

namespace valdeg {

using Json = nlohmann::json;

template <class K>
struct ProblemData {
  std::optional<DeformationSystem<K>> system;
  std::optional<BranchResult<K>> branch;
  std::vector<std::string> query_elements;

  DeformationSystem<K>& sys() {
    if (!system) throw Error("problem has no system");
    return *system;
  }
  const DeformationSystem<K>& sys() const {
    if (!system) throw Error("problem has no system");
    return *system;
  }
};

using LoadedProblem = std::variant<ProblemData<QQ>, ProblemData<GFp>>;

namespace detail_problem {

[[noreturn]] inline void fail(const std::string& path, const std::string& msg) {
  throw Error(path + ": " + msg);
}

inline const Json& need(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "missing");
  return *it;
}

inline std::string need_string(const Json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

inline const Json& need_array(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  return j;
}

inline unsigned need_uint(const Json& j, const std::string& path) {
  if (!j.is_number_unsigned()) fail(path, "expected a nonnegative integer");
  return j.get<unsigned>();
}

inline FieldDesc parse_field(const Json& doc) {
  if (!doc.contains("field")) return FieldDesc::rationals();
  const Json& f = doc["field"];
  std::string type = need_string(need(f, "type", "field"), "field.type");
  if (type == "Q") return FieldDesc::rationals();
  if (type == "Fp") {
    uint64_t p = need(f, "p", "field").get<uint64_t>();
    try {
      return FieldDesc::prime_field(p);
    } catch (const Error& e) {
      fail("field.p", e.what());
    }
  }
  fail("field.type", "must be \"Q\" or \"Fp\"");
}

template <class K>
ProblemData<K> load_typed(const Json& doc, const FieldDesc& field) {
  ProblemData<K> out;
  bool has_vars = doc.contains("variables") || doc.contains("equations");
  bool has_branch = doc.contains("branch");
  if (has_vars && has_branch)
    fail("branch", "a problem carries either variables/equations or a branch block, not both");
  if (!has_vars && !has_branch) fail("variables", "missing (and no branch block)");

  if (has_branch) {
    const Json& br = doc["branch"];
    BranchData<K> data;
    const Json& gens = need_array(need(br, "generators", "branch"), "branch.generators");
    for (size_t i = 0; i < gens.size(); ++i) {
      try {
        data.gammas.push_back(parse_rational(need_string(gens[i], "branch.generators[" +
                                                                      std::to_string(i) + "]")));
      } catch (const Error& e) {
        fail("branch.generators[" + std::to_string(i) + "]", e.what());
      }
    }
    const Json& ns = need_array(need(br, "n", "branch"), "branch.n");
    for (size_t i = 0; i < ns.size(); ++i)
      data.n.push_back(need_uint(ns[i], "branch.n[" + std::to_string(i) + "]"));
    const Json& ds = need_array(need(br, "digits", "branch"), "branch.digits");
    for (size_t i = 0; i < ds.size(); ++i) {
      const Json& row = need_array(ds[i], "branch.digits[" + std::to_string(i) + "]");
      std::vector<unsigned> t;
      for (size_t q = 0; q < row.size(); ++q)
        t.push_back(
            need_uint(row[q], "branch.digits[" + std::to_string(i) + "][" + std::to_string(q) +
                                  "]"));
      data.digits.push_back(std::move(t));
    }
    if (br.contains("tails")) {
      if (data.gammas.empty()) fail("branch.tails", "tails need generators");
      RingPtr ring;
      try {
        ring = branch_ring(field, data.gammas);
      } catch (const Error& e) {
        fail("branch.generators", e.what());
      }
      const Json& ts = need_array(br["tails"], "branch.tails");
      for (size_t i = 0; i < ts.size(); ++i) {
        std::string expr = need_string(ts[i], "branch.tails[" + std::to_string(i) + "]");
        try {
          data.tails.push_back(parse_poly<K>(expr, ring));
        } catch (const Error& e) {
          fail("branch.tails[" + std::to_string(i) + "]", e.what());
        }
      }
    }
    try {
      out.branch = branch_system<K>(data, field);
    } catch (const Error& e) {
      fail("branch", e.what());
    }
    out.system = out.branch->system;
  } else {
    const Json& vars = need_array(need(doc, "variables", ""), "variables");
    std::vector<std::string> names;
    std::vector<Value> weights;
    for (size_t i = 0; i < vars.size(); ++i) {
      std::string path = "variables[" + std::to_string(i) + "]";
      names.push_back(need_string(need(vars[i], "name", path), path + ".name"));
      const Json& w = need_array(need(vars[i], "weight", path), path + ".weight");
      if (w.empty()) fail(path + ".weight", "weight must have at least one coordinate");
      std::vector<Rational> coords;
      for (size_t c = 0; c < w.size(); ++c) {
        try {
          coords.push_back(parse_rational(need_string(w[c], path + ".weight[" +
                                                                 std::to_string(c) + "]")));
        } catch (const Error& e) {
          fail(path + ".weight[" + std::to_string(c) + "]", e.what());
        }
      }
      weights.push_back(Value(std::move(coords)));
    }
    RingPtr ring;
    try {
      ring = WeightedRing::make(field, std::move(names), std::move(weights));
    } catch (const Error& e) {
      fail("variables", e.what());
    }
    std::vector<DeformedEquation<K>> eqs;
    const Json& eqj = need_array(need(doc, "equations", ""), "equations");
    for (size_t i = 0; i < eqj.size(); ++i) {
      std::string path = "equations[" + std::to_string(i) + "]";
      std::string expr = need_string(need(eqj[i], "expr", path), path + ".expr");
      std::string kind_s = need_string(need(eqj[i], "kind", path), path + ".kind");
      EquationKind kind;
      if (kind_s == "Fi")
        kind = EquationKind::Fi;
      else if (kind_s == "Fq")
        kind = EquationKind::Fq;
      else
        fail(path + ".kind", "must be \"Fi\" or \"Fq\"");
      std::optional<size_t> trailing;
      if (eqj[i].contains("trailing_var")) {
        if (kind != EquationKind::Fi) fail(path + ".trailing_var", "only Fi equations have one");
        std::string tv = need_string(eqj[i]["trailing_var"], path + ".trailing_var");
        int idx = ring->var_index(tv);
        if (idx < 0) fail(path + ".trailing_var", "unknown variable '" + tv + "'");
        trailing = static_cast<size_t>(idx);
      }
      try {
        eqs.push_back(make_equation(parse_poly<K>(expr, ring), kind, trailing,
                                    "equation " + std::to_string(i + 1)));
      } catch (const Error& e) {
        fail(path + ".expr", e.what());
      }
    }
    std::vector<size_t> base;
    if (doc.contains("base_indices")) {
      const Json& bj = need_array(doc["base_indices"], "base_indices");
      for (size_t i = 0; i < bj.size(); ++i) {
        std::string nm = need_string(bj[i], "base_indices[" + std::to_string(i) + "]");
        int idx = ring->var_index(nm);
        if (idx < 0) fail("base_indices[" + std::to_string(i) + "]", "unknown variable '" + nm +
                                                                        "'");
        base.push_back(static_cast<size_t>(idx));
      }
    }
    try {
      out.system = DeformationSystem<K>(ring, std::move(eqs), std::move(base));
    } catch (const Error& e) {
      fail("equations", e.what());
    }
  }

  if (doc.contains("queries")) {
    const Json& q = doc["queries"];
    if (!q.is_object()) fail("queries", "expected an object");
    if (q.contains("elements")) {
      const Json& els = need_array(q["elements"], "queries.elements");
      for (size_t i = 0; i < els.size(); ++i)
        out.query_elements.push_back(
            need_string(els[i], "queries.elements[" + std::to_string(i) + "]"));
    }
  }
  return out;
}

}  // namespace detail_problem

inline LoadedProblem load_problem(const Json& doc) {
  if (!doc.is_object()) detail_problem::fail("$", "problem document must be a JSON object");
  FieldDesc field = detail_problem::parse_field(doc);
  if (field.type == FieldDesc::Type::Q)
    return detail_problem::load_typed<QQ>(doc, field);
  return detail_problem::load_typed<GFp>(doc, field);
}

template <class K>
Json dump_problem(const ProblemData<K>& prob) {
  const DeformationSystem<K>& sys = prob.sys();
  const RingPtr& ring = sys.ring();
  Json doc;
  if constexpr (std::is_same_v<K, QQ>) {
    doc["field"] = Json{{"type", "Q"}};
  } else {
    doc["field"] = Json{{"type", "Fp"}, {"p", ring->field().p}};
  }
  Json vars = Json::array();
  for (size_t i = 0; i < ring->nvars(); ++i) {
    Json w = Json::array();
    for (size_t c = 0; c < ring->rank(); ++c) w.push_back(to_string(ring->weight(i)[c]));
    vars.push_back(Json{{"name", ring->name(i)}, {"weight", w}});
  }
  doc["variables"] = vars;
  Json eqs = Json::array();
  for (const auto& eq : sys.equations()) {
    Json e;
    e["expr"] = eq.poly.str();
    e["kind"] = eq.kind == EquationKind::Fi ? "Fi" : "Fq";
    if (eq.trailing_var) e["trailing_var"] = ring->name(*eq.trailing_var);
    eqs.push_back(e);
  }
  doc["equations"] = eqs;
  Json base = Json::array();
  for (size_t i : sys.base_indices()) base.push_back(ring->name(i));
  doc["base_indices"] = base;
  if (!prob.query_elements.empty()) {
    Json els = Json::array();
    for (const auto& s : prob.query_elements) els.push_back(s);
    doc["queries"] = Json{{"elements", els}};
  }
  return doc;
}

}  // namespace valdeg
