// valdeg: command-line surface for the overweight-deformation engine.
//
//   valdeg check FILE        certify an overweight deformation
//   valdeg value FILE        valuation of an element
//   valdeg partition FILE    partition counts / Euler identity
//   valdeg degenerate FILE   toric degeneration family and its fibers
//   valdeg approx FILE       Abhyankar semivaluation approximation table
//   valdeg branch FILE       plane-branch equations and key polynomials
//
// Exit codes: 0 success, 1 domain error, 2 usage error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "valdeg/problem.hpp"
#include "valdeg/puiseux.hpp"

using namespace valdeg;

namespace {

struct Options {
  std::string output = "text";
  unsigned long seed = 0;
  bool seed_given = false;
  std::optional<uint32_t> precision;

  std::string file;
  std::string element;
  std::string up_to;
  bool euler = false;
  std::string at;
  bool at_given = false;
  unsigned levels = 3;
  std::string elements_csv;
  bool composed = false;
};

bool json_mode(const Options& o) { return o.output == "json"; }

void emit(const Options& o, const Json& j, const std::string& text) {
  if (json_mode(o))
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
}

Json file_to_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file '" + path + "'");
  Json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw Error("invalid JSON in '" + path + "': " + e.what());
  }
  return doc;
}

template <class K>
void require_certified(DeformationSystem<K>& sys) {
  const auto& rep = sys.certify();
  if (!rep.ok) throw Error("system failed certification: " + rep.failure);
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

// --- check -------------------------------------------------------------------

template <class K>
int cmd_check(ProblemData<K>& prob, const Options& opt) {
  auto& sys = prob.sys();
  const auto& rep = sys.certify();
  Json j{{"certified", rep.ok},
         {"dim", rep.dim},
         {"rational_rank", rep.rational_rank},
         {"lattice_rank", rep.lattice_rank},
         {"saturated", rep.saturated},
         {"lambda_consistent", rep.lambda_consistent},
         {"standard_basis_size", rep.standard_basis_size},
         {"equations", sys.equations().size()},
         {"variables", sys.ring()->nvars()}};
  if (!rep.ok) j["failure"] = rep.failure;
  std::ostringstream t;
  t << "certified: " << (rep.ok ? "yes" : "no") << "\n";
  if (!rep.ok) t << "failure: " << rep.failure << "\n";
  t << "variables: " << sys.ring()->nvars() << "\nequations: " << sys.equations().size()
    << "\nlattice rank: " << rep.lattice_rank << " (saturated: " << (rep.saturated ? "yes" : "no")
    << ", lambda consistent: " << (rep.lambda_consistent ? "yes" : "no") << ")\n";
  if (rep.ok)
    t << "dim: " << rep.dim << "\nrational rank: " << rep.rational_rank
      << "\nstandard basis size: " << rep.standard_basis_size << "\n";
  if (rep.ok && opt.seed_given) {
    // Randomized property demo: nu(fg) = nu(f) + nu(g) on a few samples.
    std::mt19937_64 rng(opt.seed);
    auto rand_poly = [&]() {
      const RingPtr& ring = sys.ring();
      while (true) {
        std::vector<Term<K>> terms;
        size_t nt = 1 + rng() % 3;
        for (size_t i = 0; i < nt; ++i) {
          std::vector<uint32_t> e(ring->nvars());
          for (auto& x : e) x = rng() % 3;
          long c = static_cast<long>(rng() % 9) - 4;
          if (c == 0) c = 1;
          terms.push_back({Monomial(e), K::from_rational(Rational(c), ring->field())});
        }
        auto p = Polynomial<K>::from_terms(ring, std::move(terms));
        if (!p.is_zero()) return p;
      }
    };
    size_t ok = 0, total = 20;
    for (size_t i = 0; i < total; ++i) {
      auto f = rand_poly();
      auto g = rand_poly();
      auto vf = value_of(f, sys).value;
      auto vg = value_of(g, sys).value;
      auto vfg = value_of(f * g, sys).value;
      if (vfg == vf + vg) ++ok;
    }
    j["property_demo"] = Json{{"seed", opt.seed}, {"passed", ok}, {"total", total}};
    t << "property demo (seed " << opt.seed << "): nu(fg)=nu(f)+nu(g) on " << ok << "/" << total
      << " samples\n";
  }
  emit(opt, j, t.str());
  return rep.ok ? 0 : 1;
}

// --- value -------------------------------------------------------------------

template <class K>
int cmd_value(ProblemData<K>& prob, const Options& opt) {
  if (opt.element.empty()) throw Error("value: --element is required");
  auto& sys = prob.sys();
  require_certified(sys);
  auto f = parse_poly<K>(opt.element, sys.ring());
  auto res = value_of(f, sys);
  Json j{{"element", opt.element},
         {"value", res.value.str()},
         {"witness", res.witness.str()}};
  std::ostringstream t;
  t << res.value.str() << "\nwitness: " << res.witness.str() << "\n";
  emit(opt, j, t.str());
  return 0;
}

// --- partition ---------------------------------------------------------------

template <class K>
int cmd_partition(ProblemData<K>& prob, const Options& opt) {
  if (opt.up_to.empty()) throw Error("partition: --up-to is required");
  auto& sys = prob.sys();
  SemigroupPresentation sg(sys.ring()->weights());
  if (!sg.is_rank_one_rational())
    throw Error("partition tables need rank-1 rational weights");
  Value bound{parse_rational(opt.up_to)};
  Int d = sg.scale_factor();
  d = lcm(d, rat_den(bound.scalar()));
  Int steps = rat_num(bound.scalar()) * (d / rat_den(bound.scalar()));
  if (steps < 0) steps = 0;
  Json rows = Json::array();
  std::ostringstream t;
  t << "gamma\tp(gamma)\n";
  for (Int k = 0; k <= steps; ++k) {
    Rational gamma(k, d);
    Int count = sg.partition_count(Value(gamma));
    rows.push_back(Json{{"gamma", to_string(gamma)}, {"count", to_string(count)}});
    t << to_string(gamma) << "\t" << to_string(count) << "\n";
  }
  Json j{{"table", rows}};
  if (opt.euler) {
    auto rep = sg.euler_identity_check(bound);
    j["euler"] = Json{{"holds", rep.ok}, {"bound", opt.up_to}};
    t << "euler identity up to " << opt.up_to << ": " << (rep.ok ? "holds" : "FAILS") << "\n";
    if (!rep.ok)
      for (const auto& [gamma, lr] : rep.mismatches)
        t << "  mismatch at " << gamma.str() << ": " << to_string(lr.first)
          << " != " << to_string(lr.second) << "\n";
  }
  emit(opt, j, t.str());
  return 0;
}

// --- degenerate ---------------------------------------------------------------

template <class K>
int cmd_degenerate(ProblemData<K>& prob, const Options& opt) {
  auto& sys = prob.sys();
  require_certified(sys);
  auto fam = degenerate(sys);
  Json j;
  Json tilde = Json::array();
  for (size_t i = 0; i < fam.ring->nvars(); ++i)
    tilde.push_back(Json{{"tilde", fam.ring->name(i)}});
  j["tilde_variables"] = tilde;
  std::ostringstream t;
  if (!opt.at_given) {
    Json eqs = Json::array();
    for (const auto& eq : fam.equations) {
      Json terms = Json::array();
      for (const auto& term : eq.terms) {
        Json vexp = Json::array();
        for (size_t c = 0; c < term.v_exp.rank(); ++c) vexp.push_back(to_string(term.v_exp[c]));
        terms.push_back(Json{{"coeff", term.coeff.str()},
                             {"v_exp", vexp},
                             {"monomial", fam.tilde_ring->monomial_str(term.mono)}});
      }
      eqs.push_back(Json{{"text", family_equation_str(fam, eq)}, {"terms", terms}});
      t << family_equation_str(fam, eq) << "\n";
    }
    j["family"] = eqs;
    emit(opt, j, t.str());
    return 0;
  }
  Rational at = parse_rational(opt.at);
  if (at == 0) {
    Json eqs = Json::array();
    for (const auto& p : specialize_zero(fam)) {
      eqs.push_back(p.str());
      t << p.str() << "\n";
    }
    j["special_fiber"] = eqs;
    emit(opt, j, t.str());
    return 0;
  }
  K v0 = K::from_rational(at, sys.ring()->field());
  auto spec = specialize(fam, sys.equations(), sys.base_indices(), v0);
  const auto& rep = spec.certify();
  Json eqs = Json::array();
  for (const auto& eq : spec.equations()) {
    eqs.push_back(eq.poly.str());
    t << eq.poly.str() << "\n";
  }
  j["fiber_at"] = opt.at;
  j["equations"] = eqs;
  j["certified"] = rep.ok;
  t << "certified: " << (rep.ok ? "yes" : "no") << "\n";
  emit(opt, j, t.str());
  return rep.ok ? 0 : 1;
}

// --- approx -------------------------------------------------------------------

template <class K>
int cmd_approx(ProblemData<K>& prob, const Options& opt) {
  auto& sys = prob.sys();
  require_certified(sys);
  std::vector<std::string> elements = split_csv(opt.elements_csv);
  if (elements.empty()) elements = prob.query_elements;
  if (elements.empty()) throw Error("approx: no elements (use --elements or queries.elements)");

  const RingPtr& ring = sys.ring();
  IndexSet b0 = sys.base_indices();
  for (size_t e = 0; e < sys.equations().size(); ++e) {
    const auto& eq = sys.equations()[e];
    if (eq.kind != EquationKind::Fq) continue;
    for (size_t i = 0; i < ring->nvars(); ++i)
      for (const auto& term : eq.poly.terms())
        if (term.mono[i]) b0.push_back(i);
  }
  b0 = initial_closure(b0, ring->weights());
  auto chain = build_chain(b0, ring->weights(), opt.levels);

  std::vector<TruncationIdeal<K>> truncs;
  for (const auto& b : chain) truncs.push_back(truncate(sys, b));
  auto growth = order_growth_report(sys, chain);

  std::optional<BranchResult<K>> branch_shape;
  if (opt.composed) {
    if constexpr (std::is_same_v<K, QQ>) {
      if (auto data = extract_branch_data(sys))
        branch_shape = branch_system(*data, ring->field());
    }
    if (!branch_shape) throw Error("--composed needs a branch-shaped rational system");
  }

  Json jlevels = Json::array();
  std::ostringstream t;
  t << "levels:";
  for (size_t l = 0; l < chain.size(); ++l) {
    Json names = Json::array();
    std::string label = "{";
    for (size_t i : chain[l]) {
      names.push_back(ring->name(i));
      if (label.size() > 1) label += ",";
      label += ring->name(i);
    }
    label += "}";
    jlevels.push_back(names);
    t << " B" << l << "=" << label;
  }
  t << "\n";

  Json rows = Json::array();
  bool all_stable = true;
  for (const auto& expr : elements) {
    auto f = parse_poly<K>(expr, ring);
    Json row{{"element", expr}};
    Json vals = Json::array();
    std::optional<Value> first_finite;
    bool stable = true;
    t << expr << ":";
    for (size_t l = 0; l < chain.size(); ++l) {
      auto res = semivaluation_value(f, truncs[l]);
      std::string shown = res.value.str();
      if (res.value.is_infinite() && branch_shape && f.ring()->nvars() >= 2) {
        // Composed rank-two value (p-adic order, value of the quotient).
        bool plane_only = true;
        for (const auto& term : f.terms())
          for (size_t v = 2; v < ring->nvars(); ++v)
            if (term.mono[v]) plane_only = false;
        size_t level_idx = chain[l].size() >= 2 ? chain[l].size() - 2 : 0;
        if (plane_only && level_idx >= 1 && level_idx <= branch_shape->key_polys.size()) {
          std::vector<Term<K>> plane_terms;
          for (const auto& term : f.terms())
            plane_terms.push_back({Monomial{{term.mono[0], term.mono[1]}}, term.coeff});
          auto fp = Polynomial<K>::from_terms(branch_shape->plane_ring, std::move(plane_terms));
          auto cv = composed_value(fp, branch_shape->key_polys[level_idx - 1], truncs[l],
                                   opt.precision);
          shown += " [composed: (" + to_string(cv.order) + ", " + cv.gamma.str() + ")" +
                   (cv.provisional ? " provisional" : "") + "]";
        }
      }
      vals.push_back(res.value.str());
      t << "\t" << shown;
      if (!res.value.is_infinite()) {
        if (!first_finite)
          first_finite = res.value.finite();
        else if (*first_finite != res.value.finite())
          stable = false;
      }
    }
    auto full = value_of(f, sys);
    if (first_finite && !full.value.is_infinite() && *first_finite != full.value.finite())
      stable = false;
    row["values"] = vals;
    row["full_value"] = full.value.str();
    row["stable"] = stable;
    all_stable = all_stable && stable;
    t << "\tfull=" << full.value.str() << "\t" << (stable ? "stable" : "VIOLATION") << "\n";
    rows.push_back(row);
  }

  Json jgrowth = Json::array();
  t << "ord_m K_B:";
  for (const auto& r : growth.rows) {
    jgrowth.push_back(r.order ? Json(*r.order) : Json("infinite"));
    t << "\t" << (r.order ? std::to_string(*r.order) : "infinite");
  }
  t << "\t(" << (growth.nondecreasing ? "nondecreasing" : "DECREASING") << ")\n";

  Json j{{"levels", jlevels},
         {"rows", rows},
         {"order_growth", jgrowth},
         {"order_growth_nondecreasing", growth.nondecreasing},
         {"all_stable", all_stable}};
  emit(opt, j, t.str());
  return 0;
}

// --- branch -------------------------------------------------------------------

template <class K>
int cmd_branch(ProblemData<K>& prob, const Options& opt) {
  std::optional<BranchResult<K>> local;
  BranchResult<K>* br = nullptr;
  if (prob.branch) {
    br = &*prob.branch;
  } else if constexpr (std::is_same_v<K, QQ>) {
    if (auto data = extract_branch_data(prob.sys())) {
      local = branch_system(*data, prob.sys().ring()->field());
      br = &*local;
    }
  }
  if (!br) throw Error("branch: the problem has no branch block and is not branch shaped");
  const RingPtr& ring = br->system.ring();
  Json j;
  std::ostringstream t;
  Json eqs = Json::array();
  t << "equations:\n";
  for (const auto& eq : br->system.equations()) {
    eqs.push_back(eq.poly.str());
    t << "  " << eq.poly.str() << "\n";
  }
  j["equations"] = eqs;
  Json keys = Json::array();
  t << "key polynomials:\n";
  for (size_t i = 0; i < br->key_polys.size(); ++i) {
    keys.push_back(br->key_polys[i].str());
    t << "  p_" << (i + 1) << " = " << br->key_polys[i].str() << "\n";
  }
  j["key_polynomials"] = keys;
  Json betas = Json::array();
  t << "beta:";
  for (auto b : br->betas) {
    betas.push_back(b);
    t << " " << b;
  }
  t << "\n";
  j["beta"] = betas;
  Json gens = Json::array();
  t << "semigroup (scaled by " << to_string(br->scale) << "): <";
  for (size_t i = 0; i < ring->nvars(); ++i) {
    Rational scaled = ring->weight(i).scalar() * Rational(br->scale);
    gens.push_back(to_string(scaled));
    t << (i ? "," : "") << to_string(scaled);
  }
  t << ">\n";
  j["scale"] = to_string(br->scale);
  j["scaled_semigroup_generators"] = gens;
  emit(opt, j, t.str());
  return 0;
}

template <class K>
int run_all(ProblemData<K>& prob, const std::string& cmd, const Options& opt) {
  if (cmd == "check") return cmd_check(prob, opt);
  if (cmd == "value") return cmd_value(prob, opt);
  if (cmd == "partition") return cmd_partition(prob, opt);
  if (cmd == "degenerate") return cmd_degenerate(prob, opt);
  if (cmd == "approx") return cmd_approx(prob, opt);
  if (cmd == "branch") return cmd_branch(prob, opt);
  throw Error("unknown command");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"valdeg: valuations from overweight deformations of binomial ideals"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--output", opt.output, "output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--seed", opt.seed, "seed for randomized property demos");
  uint32_t precision_raw = 0;
  auto* prec_opt = app.add_option("--precision", precision_raw, "x-adic precision for composed values");

  std::string cmd;
  auto add_file = [&](CLI::App* sub) {
    sub->add_option("file", opt.file, "problem file (JSON)")->required();
    sub->parse_complete_callback([&, sub]() { cmd = sub->get_name(); });
  };
  auto* c_check = app.add_subcommand("check", "load, validate, certify");
  add_file(c_check);
  auto* c_value = app.add_subcommand("value", "valuation of an element");
  add_file(c_value);
  c_value->add_option("--element", opt.element, "expression to evaluate")->required();
  auto* c_part = app.add_subcommand("partition", "partition counts table");
  add_file(c_part);
  c_part->add_option("--up-to", opt.up_to, "bound (rational)")->required();
  c_part->add_flag("--euler", opt.euler, "check the Euler identity");
  auto* c_deg = app.add_subcommand("degenerate", "toric degeneration family");
  add_file(c_deg);
  auto* at_opt = c_deg->add_option("--at", opt.at, "specialize v to this value (0 = special fiber)");
  auto* c_approx = app.add_subcommand("approx", "semivaluation approximation table");
  add_file(c_approx);
  c_approx->add_option("--levels", opt.levels, "number of chain growth steps");
  c_approx->add_option("--elements", opt.elements_csv, "comma-separated element expressions");
  c_approx->add_flag("--composed", opt.composed,
                     "report composed rank-two values at infinite levels");
  auto* c_branch = app.add_subcommand("branch", "branch equations and key polynomials");
  add_file(c_branch);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  opt.seed_given = app.count("--seed") > 0;
  opt.at_given = at_opt->count() > 0;
  if (prec_opt->count() > 0) opt.precision = precision_raw;

  try {
    Json doc = file_to_json(opt.file);
    LoadedProblem prob = load_problem(doc);
    return std::visit([&](auto& p) { return run_all(p, cmd, opt); }, prob);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
