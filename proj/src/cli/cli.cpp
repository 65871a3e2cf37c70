#include "fintopos/cli/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "fintopos/cli/workspace.hpp"
#include "fintopos/kan/extension.hpp"
#include "fintopos/kan/flat.hpp"
#include "fintopos/site/continuity.hpp"
#include "fintopos/site/sheaf.hpp"
#include "fintopos/verify/corpus.hpp"
#include "fintopos/verify/fixtures.hpp"
#include "fintopos/verify/suite.hpp"

namespace fintopos {

namespace {

struct Options {
  std::string input;
  std::uint64_t seed = 0;
  std::string budget = "default";
  std::string report = "text";
  std::string out;
  std::string presheaf, site, functor, object, category;
  int max_family = 4;
  std::string suite;
};

struct Outcome {
  std::string stem;  // file name under --out
  Json json;
  std::string text;
  int code = kExitOk;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

std::string require(const std::string& value, const char* flag) {
  if (value.empty()) throw UsageError(std::string("missing ") + flag);
  return value;
}

Workspace workspace_of(const Options& o) { return load_workspace(require(o.input, "--input")); }

Json names_of(const FinCategory& c, const Family& f) {
  Json out = Json::array();
  for (MorId m : f) out.push_back(c.morphism_name(m));
  return out;
}

Json sieve_json(const FinCategory& c, SieveMask s) {
  Json out = Json::array();
  for (MorId m : members(s)) out.push_back(c.morphism_name(m));
  return out;
}

std::string scalar_text(const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

// key: value lines; nested values on one line.
std::string generic_text(const Json& j) {
  std::ostringstream os;
  for (const auto& [key, v] : j.items()) {
    os << key << ": ";
    if (v.is_array() && std::all_of(v.begin(), v.end(), [](const Json& e) { return e.is_primitive(); })) {
      for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << scalar_text(v[i]);
    } else {
      os << scalar_text(v);
    }
    os << '\n';
  }
  return os.str();
}

void ensure_same_base(const FinCategory& a, const FinCategory& b, const std::string& what) {
  if (!same_category(a, b)) throw UsageError(what + ": bases differ (" + a.name() + " vs " + b.name() + ")");
}

Outcome cmd_validate(const Options& o) {
  Workspace ws = workspace_of(o);
  Json entities = Json::array();
  for (auto [kind, i] : ws.order) {
    Json e{{"kind", kind_name(kind)}};
    switch (kind) {
      case EntityKind::category: {
        const auto& c = *ws.categories[i].category;
        e["name"] = ws.categories[i].name;
        e["objects"] = c.num_objects();
        e["morphisms"] = c.num_morphisms();
        break;
      }
      case EntityKind::finfunctor:
        e["name"] = ws.finfunctors[i].name;
        e["dom"] = ws.finfunctors[i].functor.dom->name();
        e["cod"] = ws.finfunctors[i].functor.cod->name();
        break;
      case EntityKind::presheaf:
        e["name"] = ws.presheaves[i].name;
        e["base"] = ws.presheaves[i].presheaf->base->name();
        e["elements"] = ws.presheaves[i].presheaf->total_size();
        break;
      case EntityKind::handle:
        e["name"] = ws.handles[i].name;
        e["handle"] = ws.handles[i].topos->name();
        e["bound"] = ws.handles[i].bound;
        break;
      case EntityKind::site:
        e["name"] = ws.sites[i].name;
        e["base"] = ws.sites[i].base;
        e["covering_sieves"] = ws.sites[i].site->num_covering_sieves();
        break;
      case EntityKind::functor:
        e["name"] = ws.functors[i].name;
        e["form"] = ws.functors[i].form;
        e["dom"] = ws.functors[i].functor.dom->name();
        e["cod"] = ws.functors[i].functor.cod->name();
        break;
    }
    entities.push_back(std::move(e));
  }
  Json j{{"command", "validate"},
         {"config", {{"seed", ws.config.seed}, {"budget", ws.config.budget}, {"bound", ws.config.bound}}},
         {"entities", entities},
         {"verdict", "pass"}};
  std::ostringstream text;
  text << "workspace ok: " << ws.order.size() << " entities\n";
  for (const auto& e : entities) text << "  " << e["kind"].get<std::string>() << ' ' << e["name"].get<std::string>() << '\n';
  return {"validate", j, text.str(), kExitOk};
}

Outcome cmd_sheafify(const Options& o) {
  Workspace ws = workspace_of(o);
  const PresheafPtr& f = ws.presheaf(require(o.presheaf, "--presheaf")).presheaf;
  const SitePtr& s = ws.site(require(o.site, "--site")).site;
  ensure_same_base(*f->base, *s->base(), "sheafify");
  auto input = is_sheaf(*f, *s);
  auto r = sheafify(f, *s);
  const bool output_sheaf = is_sheaf(*r.sheaf, *s).sheaf;
  const bool unit_iso = is_iso(r.unit);
  Json j{{"command", "sheafify"},
         {"presheaf", o.presheaf},
         {"site", o.site},
         {"input_is_sheaf", input.sheaf},
         {"sheaf", json_of(*r.sheaf)},
         {"unit", json_of(r.unit)},
         {"unit_iso", unit_iso},
         {"stage_sizes", {r.stages[0]->total_size(), r.stages[1]->total_size()}},
         {"output_is_sheaf", output_sheaf}};
  if (input.counterexample) {
    const auto& cx = *input.counterexample;
    j["input_counterexample"] = {{"object", s->base()->object_name(cx.object)},
                                 {"sieve", sieve_json(*s->base(), cx.sieve)},
                                 {"kind", cx.kind}};
  }
  const bool ok = output_sheaf && unit_iso == input.sheaf;
  j["verdict"] = ok ? "pass" : "fail";
  return {"sheafify", j, generic_text(j), ok ? kExitOk : kExitFailed};
}

Outcome cmd_extend(const Options& o) {
  Workspace ws = workspace_of(o);
  const ToposFunctor& p = ws.functor(require(o.functor, "--functor")).functor;
  auto ext = make_extension(p);
  auto eta = eta_iso(*ext);
  Json j{{"command", "extend"}, {"functor", o.functor}, {"eta_iso", eta.iso}, {"eta_natural", eta.natural}};
  if (eta.non_iso) j["eta_non_iso_at"] = p.dom->object_name(*eta.non_iso);
  if (eta.non_natural) j["eta_non_natural_at"] = p.dom->morphism_name(*eta.non_natural);
  if (!o.presheaf.empty()) {
    const PresheafPtr& h = ws.presheaf(o.presheaf).presheaf;
    ensure_same_base(*h->base, *p.dom, "extend");
    auto v = (*ext)(h);
    j["presheaf"] = o.presheaf;
    j["elements"] = v->elements.gamma->num_objects();
    j["value"] = json_of(*v->object());
  }
  const bool ok = eta.iso && eta.natural;
  j["verdict"] = ok ? "pass" : "fail";
  return {"extend", j, generic_text(j), ok ? kExitOk : kExitFailed};
}

Outcome cmd_adjoint(const Options& o) {
  Workspace ws = workspace_of(o);
  const ToposFunctor& p = ws.functor(require(o.functor, "--functor")).functor;
  const PresheafPtr& z = ws.presheaf(require(o.object, "--object")).presheaf;
  if (!p.cod->contains(*z)) throw UsageError("adjoint: '" + o.object + "' is not an object of " + p.cod->name());
  auto hz = right_adjoint_hp(p, z);
  Json j{{"command", "adjoint"}, {"functor", o.functor}, {"object", o.object}, {"hp", json_of(*hz.presheaf)}};
  bool ok = true;
  if (!o.presheaf.empty()) {
    const PresheafPtr& h = ws.presheaf(o.presheaf).presheaf;
    ensure_same_base(*h->base, *p.dom, "adjoint");
    auto ext = make_extension(p);
    auto adj = adjunction_phi(*ext, h, z);
    j["presheaf"] = o.presheaf;
    j["left"] = adj.left;
    j["right"] = adj.right;
    j["bijective"] = adj.bijective;
    if (!adj.failure.empty()) j["failure"] = adj.failure;
    ok = adj.bijective;
  }
  if (!o.site.empty()) {
    const SitePtr& s = ws.site(o.site).site;
    ensure_same_base(*s->base(), *p.dom, "adjoint");
    j["site"] = o.site;
    j["hp_is_sheaf"] = is_sheaf(*hz.presheaf, *s).sheaf;
  }
  j["verdict"] = ok ? "pass" : "fail";
  return {"adjoint", j, generic_text(j), ok ? kExitOk : kExitFailed};
}

Outcome cmd_flat(const Options& o, const Budget& budget) {
  Workspace ws = workspace_of(o);
  const ToposFunctor& p = ws.functor(require(o.functor, "--functor")).functor;
  auto ext = make_extension(p);
  auto bounded = is_flat_bounded(*ext, budget);
  Json j{{"command", "flat"},
         {"functor", o.functor},
         {"status", bounded.status()},
         {"terminal_checked", bounded.terminal_checked},
         {"products_checked", bounded.products_checked},
         {"equalizers_checked", bounded.equalizers_checked},
         {"exhaustive", bounded.exhaustive}};
  if (bounded.counterexample) {
    Json objs = Json::array();
    for (const auto& n : bounded.counterexample->objects) objs.push_back(json_of(*n));
    j["counterexample"] = {{"kind", bounded.counterexample->kind}, {"objects", objs}};
  }
  auto exact = is_exact(p);
  j["finitely_complete"] = exact.finitely_complete;
  if (exact.finitely_complete) j["exact"] = exact.exact;
  if (!exact.failing_kind.empty()) j["exact_failing_kind"] = exact.failing_kind;
  if (!p.cod->sheaf_mode() && *p.cod->base() == *terminal_category()) {
    auto sv = is_flat_setvalued(p);
    j["elements_cofiltered"] = sv.flat;
    if (!sv.flat) j["cofiltered_failure"] = sv.cofiltered.reason;
  }
  j["verdict"] = bounded.verified ? "pass" : "fail";
  return {"flat", j, generic_text(j), bounded.verified ? kExitOk : kExitFailed};
}

Outcome cmd_continuous(const Options& o) {
  Workspace ws = workspace_of(o);
  const ToposFunctor& p = ws.functor(require(o.functor, "--functor")).functor;
  const SitePtr& s = ws.site(require(o.site, "--site")).site;
  ensure_same_base(*s->base(), *p.dom, "continuous");
  auto v = is_continuous(p, *s);
  Json j{{"command", "continuous"},
         {"functor", o.functor},
         {"site", o.site},
         {"continuous", v.continuous},
         {"covers_checked", v.covers_checked}};
  if (v.object) {
    j["failing_object"] = p.dom->object_name(*v.object);
    j["failing_family"] = names_of(*p.dom, *v.family);
    j["witness_kind"] = v.witness.kind;
    if (v.witness.target) j["witness_target"] = json_of(*v.witness.target);
  }
  j["verdict"] = v.continuous ? "pass" : "fail";
  return {"continuous", j, generic_text(j), v.continuous ? kExitOk : kExitFailed};
}

Outcome cmd_epsilon(const Options& o, const Budget& budget) {
  Workspace ws = workspace_of(o);
  const SitePtr& s = ws.site(require(o.site, "--site")).site;
  const FinCategory& c = *s->base();
  auto sub = is_subcanonical(*s);
  auto eps = epsilon_functor(s, budget);
  Json objects = Json::object();
  for (ObjId x = 0; x < c.num_objects(); ++x) objects[c.object_name(x)] = json_of(*eps.obj[x]);
  auto cont = is_continuous(eps, *s);
  auto ff = is_fully_faithful(eps);
  Json j{{"command", "epsilon"},
         {"site", o.site},
         {"subcanonical", sub.subcanonical},
         {"covers_strict_epi", sub.covers_strict_epi},
         {"representables_sheaves", sub.representables_sheaves},
         {"continuous", cont.continuous},
         {"fully_faithful", ff.fully_faithful},
         {"objects", objects}};
  const bool ok = cont.continuous && sub.agree;
  j["verdict"] = ok ? "pass" : "fail";
  return {"epsilon", j, generic_text(j), ok ? kExitOk : kExitFailed};
}

Outcome cmd_canonical(const Options& o) {
  const std::string name = require(o.category, "--category");
  CatPtr c;
  if (!o.input.empty()) {
    c = workspace_of(o).category(name).category;
  } else {
    for (const auto& f : fixtures::categories())
      if (f->name() == name) c = f;
    if (!c) throw UsageError("no fixture category '" + name + "' (pass --input for a workspace)");
  }
  if (o.max_family < 0 || o.max_family > 6) throw UsageError("--max-family must be 0..6");
  auto pt = canonical_pretopology(c, o.max_family);
  auto site = generate_topology(name + "-canonical", c, pt.covers);
  Json covers = Json::object(), topology = Json::object();
  for (ObjId x = 0; x < c->num_objects(); ++x) {
    Json fams = Json::array();
    for (const auto& f : pt.covers[x]) fams.push_back(names_of(*c, f));
    covers[c->object_name(x)] = fams;
    Json sieves = Json::array();
    for (SieveMask m : site->topology(x)) sieves.push_back(sieve_json(*c, m));
    topology[c->object_name(x)] = sieves;
  }
  Json gaps = Json::array();
  for (const auto& [x, f] : pt.gap_families) gaps.push_back({{"object", c->object_name(x)}, {"family", names_of(*c, f)}});
  auto sub = is_subcanonical(*site);
  Json j{{"command", "canonical-topology"},
         {"category", name},
         {"max_family", o.max_family},
         {"covers", covers},
         {"gap_families", gaps},
         {"topology", topology},
         {"subcanonical", sub.subcanonical},
         {"verdict", sub.subcanonical ? "pass" : "fail"}};
  return {"canonical-topology", j, generic_text(j), sub.subcanonical ? kExitOk : kExitFailed};
}

Outcome cmd_suite(const Options& o, const Budget& budget) {
  CorpusBounds bounds;
  bounds.value_bound = budget.value_bound;
  Corpus corpus = corpus_generate(o.seed, bounds);
  Json doc;
  if (o.suite == "all") {
    doc = run_all_suites(corpus, budget);
  } else {
    doc = suite_document({run_theorem_suite(o.suite, corpus, budget)}, corpus, budget);
  }
  std::ostringstream text;
  text << "suite " << o.suite << "  seed " << o.seed << "  budget " << budget.profile << "  corpus "
       << doc["corpus_digest"].get<std::string>() << '\n';
  for (const auto& r : doc["reports"]) {
    std::string id = r["theorem"].get<std::string>();
    id.resize(std::max<std::size_t>(id.size(), 9), ' ');
    text << "  " << id << ' ' << r["verdict"].get<std::string>() << "  checks " << r["checks_run"].dump()
         << "  failures " << r["failures"].dump() << "  controls " << r["controls_confirmed"].dump() << '\n';
    for (const auto& n : r["notes"]) text << "      note: " << n.get<std::string>() << '\n';
  }
  text << "verdict: " << doc["verdict"].get<std::string>() << '\n';
  const bool ok = doc["verdict"] == "pass";
  return {"suite-" + o.suite, doc, text.str(), ok ? kExitOk : kExitFailed};
}

void emit(const Outcome& r, const Options& o, std::ostream& out) {
  const bool json = o.report != "text";
  const bool text = o.report != "json";
  const std::string dumped = r.json.dump(2) + "\n";
  if (o.out.empty()) {
    if (text) out << r.text;
    if (json) out << dumped;
    return;
  }
  std::filesystem::create_directories(o.out);
  auto write = [&](const std::string& ext, const std::string& body) {
    auto path = std::filesystem::path(o.out) / (r.stem + ext);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write " + path.string());
    f << body;
  };
  if (json) write(".json", dumped);
  if (text) write(".txt", r.text);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Exact finite category and topos computations", "fintopos"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--input", o.input, "Workspace file");
  app.add_option("--seed", o.seed, "Corpus seed")->capture_default_str();
  app.add_option("--budget", o.budget, "Budget profile")
      ->check(CLI::IsMember({"small", "default", "large"}))
      ->capture_default_str();
  app.add_option("--report", o.report, "Report format")
      ->check(CLI::IsMember({"json", "text", "both"}))
      ->capture_default_str();
  app.add_option("--out", o.out, "Write reports into this directory");

  auto* validate = app.add_subcommand("validate", "Parse and validate a workspace");
  auto* sheafify_cmd = app.add_subcommand("sheafify", "Sheafify a presheaf on a site");
  sheafify_cmd->add_option("--presheaf", o.presheaf)->required();
  sheafify_cmd->add_option("--site", o.site)->required();
  auto* extend = app.add_subcommand("extend", "Cocontinuous extension of a functor and its unit");
  extend->add_option("--functor", o.functor)->required();
  extend->add_option("--presheaf", o.presheaf, "Also evaluate the extension here");
  auto* adjoint = app.add_subcommand("adjoint", "Right adjoint h_p at an object of the codomain");
  adjoint->add_option("--functor", o.functor)->required();
  adjoint->add_option("--object", o.object, "Presheaf naming the object Z")->required();
  adjoint->add_option("--presheaf", o.presheaf, "Check the adjunction bijection against this H");
  adjoint->add_option("--site", o.site, "Report whether h_p(Z) is a sheaf here");
  auto* flat = app.add_subcommand("flat", "Bounded flatness and exactness of a functor");
  flat->add_option("--functor", o.functor)->required();
  auto* continuous = app.add_subcommand("continuous", "Covers sent to strict epimorphic families");
  continuous->add_option("--functor", o.functor)->required();
  continuous->add_option("--site", o.site)->required();
  auto* epsilon_cmd = app.add_subcommand("epsilon", "Sheafified Yoneda functor of a site");
  epsilon_cmd->add_option("--site", o.site)->required();
  auto* suite = app.add_subcommand("suite", "Run a verification suite on the seeded corpus");
  std::vector<std::string> ids = suite_ids();
  ids.push_back("all");
  suite->add_option("id", o.suite, "Suite id or 'all'")->required()->check(CLI::IsMember(ids));
  auto* canonical = app.add_subcommand("canonical-topology", "Canonical pretopology and its topology");
  canonical->add_option("--category", o.category)->required();
  canonical->add_option("--max-family", o.max_family)->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    const Budget budget = budget_profile(o.budget);
    Outcome r;
    if (validate->parsed()) r = cmd_validate(o);
    else if (sheafify_cmd->parsed()) r = cmd_sheafify(o);
    else if (extend->parsed()) r = cmd_extend(o);
    else if (adjoint->parsed()) r = cmd_adjoint(o);
    else if (flat->parsed()) r = cmd_flat(o, budget);
    else if (continuous->parsed()) r = cmd_continuous(o);
    else if (epsilon_cmd->parsed()) r = cmd_epsilon(o, budget);
    else if (suite->parsed()) r = cmd_suite(o, budget);
    else r = cmd_canonical(o);
    emit(r, o, out);
    return r.code;
  } catch (const WorkspaceError& e) {
    for (const auto& le : e.errors()) {
      err << o.input << ':' << le.line << ": ";
      if (!le.entity.empty()) err << le.entity << ": ";
      err << le.reason << '\n';
    }
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ContractError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ResourceError& e) {
    err << "budget exceeded: " << e.what() << '\n';
    return kExitFailed;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailed;
  }
}

}  // namespace fintopos
