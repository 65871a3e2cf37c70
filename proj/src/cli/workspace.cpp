#include "fintopos/cli/workspace.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "fintopos/site/continuity.hpp"

namespace fintopos {

const char* kind_name(EntityKind k) {
  switch (k) {
    case EntityKind::category: return "category";
    case EntityKind::finfunctor: return "finfunctor";
    case EntityKind::presheaf: return "presheaf";
    case EntityKind::handle: return "handle";
    case EntityKind::site: return "site";
    case EntityKind::functor: return "functor";
  }
  return "?";
}

namespace {

std::string render_errors(const std::vector<LocatedError>& errors) {
  std::ostringstream os;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (i) os << '\n';
    os << "line " << errors[i].line << ": ";
    if (!errors[i].entity.empty()) os << errors[i].entity << ": ";
    os << errors[i].reason;
  }
  return os.str();
}

template <class E>
const E* find_named(const std::vector<E>& list, std::string_view name) {
  for (const auto& e : list)
    if (e.name == name) return &e;
  return nullptr;
}

template <class E>
const E& lookup(const std::vector<E>& list, EntityKind k, std::string_view name) {
  if (const E* e = find_named(list, name)) return *e;
  throw ContractError(std::string("workspace: no ") + kind_name(k) + " named '" + std::string(name) + "'");
}

}  // namespace

WorkspaceError::WorkspaceError(std::vector<LocatedError> errors)
    : Error(render_errors(errors)), errors_(std::move(errors)) {}

const CategoryEntry& Workspace::category(std::string_view n) const { return lookup(categories, EntityKind::category, n); }
const FinFunctorEntry& Workspace::finfunctor(std::string_view n) const {
  return lookup(finfunctors, EntityKind::finfunctor, n);
}
const PresheafEntry& Workspace::presheaf(std::string_view n) const { return lookup(presheaves, EntityKind::presheaf, n); }
const HandleEntry& Workspace::handle(std::string_view n) const { return lookup(handles, EntityKind::handle, n); }
const SiteEntry& Workspace::site(std::string_view n) const { return lookup(sites, EntityKind::site, n); }
const FunctorEntry& Workspace::functor(std::string_view n) const { return lookup(functors, EntityKind::functor, n); }

Budget Workspace::budget(int bound) const {
  Budget b = budget_profile(config.budget);
  b.value_bound = bound;
  return b;
}

namespace {

struct Stmt {
  int line = 0;
  std::vector<std::string> tok;
};

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(std::move(cur));
    cur.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    char ch = text[i];
    if (ch == '#') break;
    if (ch == ' ' || ch == '\t' || ch == '\r') {
      flush();
    } else if (ch == '{' || ch == '}' || ch == ':' || ch == '=') {
      flush();
      out.emplace_back(1, ch);
    } else if (ch == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      flush();
      out.emplace_back("->");
      ++i;
    } else {
      cur.push_back(ch);
    }
  }
  flush();
  return out;
}

bool is_block_head(const Stmt& s) {
  static const std::set<std::string> heads{"category", "poset", "presheaf", "finfunctor", "functor", "site"};
  if (!heads.count(s.tok[0])) return false;
  return !(s.tok.size() >= 3 && s.tok[2] == "=");
}

struct Block {
  Stmt head;
  std::vector<Stmt> body;
};

// Thrown after an error has been recorded, or silently for dependents of a broken entity.
struct Abort {};

class Parser {
 public:
  Workspace ws;
  std::vector<LocatedError> errors;

  void run(std::string_view text) {
    std::vector<Stmt> stmts;
    int n = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      ++n;
      auto tok = tokenize(text.substr(pos, end - pos));
      if (!tok.empty()) stmts.push_back({n, std::move(tok)});
      pos = end + 1;
    }
    for (std::size_t i = 0; i < stmts.size();) {
      const Stmt& s = stmts[i];
      if (s.tok[0] == "end") {
        errors.push_back({s.line, "", "'end' outside a block"});
        ++i;
        continue;
      }
      if (!is_block_head(s)) {
        statement(s);
        ++i;
        continue;
      }
      Block b{s, {}};
      ++i;
      bool closed = false;
      while (i < stmts.size()) {
        if (stmts[i].tok == std::vector<std::string>{"end"}) {
          closed = true;
          ++i;
          break;
        }
        if (kind_of(stmts[i].tok[0]) || stmts[i].tok[0] == "config") break;
        b.body.push_back(stmts[i++]);
      }
      if (!closed) {
        entity_ = describe(b.head);
        errors.push_back({b.head.line, entity_, "block has no 'end'"});
        mark_broken(b.head);
        continue;
      }
      block(b);
    }
  }

 private:
  std::string entity_;
  std::set<std::pair<EntityKind, std::string>> broken_;
  bool seen_entity_ = false;
  bool duplicate_ = false;

  static std::string describe(const Stmt& s) { return s.tok.size() >= 2 ? s.tok[0] + " " + s.tok[1] : s.tok[0]; }

  static std::optional<EntityKind> kind_of(const std::string& word) {
    if (word == "category" || word == "poset") return EntityKind::category;
    if (word == "finfunctor") return EntityKind::finfunctor;
    if (word == "presheaf") return EntityKind::presheaf;
    if (word == "handle") return EntityKind::handle;
    if (word == "site") return EntityKind::site;
    if (word == "functor") return EntityKind::functor;
    return std::nullopt;
  }

  void mark_broken(const Stmt& head) {
    auto k = kind_of(head.tok[0]);
    if (k && head.tok.size() >= 2) broken_.insert({*k, head.tok[1]});
  }

  [[noreturn]] void fail(int line, std::string reason) {
    errors.push_back({line, entity_, std::move(reason)});
    throw Abort{};
  }

  void shape(const Stmt& s, bool ok, const char* usage) {
    if (!ok) fail(s.line, std::string("expected '") + usage + "'");
  }

  int number(const Stmt& s, const std::string& word, int lo, int hi) {
    int v = 0;
    auto [p, ec] = std::from_chars(word.data(), word.data() + word.size(), v);
    if (ec != std::errc() || p != word.data() + word.size() || v < lo || v > hi)
      fail(s.line, "'" + word + "' is not a number in " + std::to_string(lo) + ".." + std::to_string(hi));
    return v;
  }

  template <class E>
  const E& need(const std::vector<E>& list, EntityKind k, const std::string& name, int line) {
    if (const E* e = find_named(list, name)) return *e;
    if (broken_.count({k, name})) throw Abort{};
    fail(line, std::string("undefined ") + kind_name(k) + " '" + name + "'");
  }

  ObjId object_of(const FinCategory& c, const std::string& name, int line) {
    if (auto x = c.find_object(name)) return *x;
    fail(line, "category " + c.name() + " has no object '" + name + "'");
  }

  MorId morphism_of(const FinCategory& c, const std::string& name, int line) {
    if (auto f = c.find_morphism(name)) return *f;
    fail(line, "category " + c.name() + " has no morphism '" + name + "'");
  }

  // Starts an entity; a duplicate name leaves the earlier entity in place.
  template <class E>
  void fresh(const std::vector<E>& list, EntityKind k, const std::string& name, int line) {
    seen_entity_ = true;
    duplicate_ = find_named(list, name) != nullptr;
    if (duplicate_) fail(line, std::string("duplicate ") + kind_name(k) + " '" + name + "'");
  }

  template <class E>
  void add(std::vector<E>& list, EntityKind k, E entry) {
    list.push_back(std::move(entry));
    ws.order.emplace_back(k, list.size() - 1);
  }

  template <class F>
  void guarded(const Stmt& head, F&& body) {
    entity_ = describe(head);
    duplicate_ = false;
    try {
      body();
    } catch (const Abort&) {
      if (!duplicate_) mark_broken(head);
    } catch (const Error& e) {
      errors.push_back({head.line, entity_, e.what()});
      mark_broken(head);
    }
  }

  void statement(const Stmt& s) {
    const std::string& w = s.tok[0];
    if (w == "config") {
      guarded(s, [&] { config(s); });
    } else if (w == "handle") {
      guarded(s, [&] { handle(s); });
    } else if (w == "site") {
      guarded(s, [&] { site_oneliner(s); });
    } else if (w == "functor") {
      guarded(s, [&] { functor_oneliner(s); });
    } else {
      entity_.clear();
      errors.push_back({s.line, "", "unknown statement '" + w + "'"});
    }
  }

  void block(const Block& b) {
    const std::string& w = b.head.tok[0];
    guarded(b.head, [&] {
      if (w == "category") category_block(b);
      else if (w == "poset") poset_block(b);
      else if (w == "presheaf") presheaf_block(b);
      else if (w == "finfunctor") finfunctor_block(b);
      else if (w == "functor") functor_block(b);
      else site_block(b);
    });
  }

  void config(const Stmt& s) {
    shape(s, s.tok.size() == 3, "config seed|budget|bound VALUE");
    if (seen_entity_) fail(s.line, "config must precede every entity");
    const std::string& key = s.tok[1];
    if (key == "seed") {
      std::uint64_t v = 0;
      const std::string& word = s.tok[2];
      auto [p, ec] = std::from_chars(word.data(), word.data() + word.size(), v);
      if (ec != std::errc() || p != word.data() + word.size()) fail(s.line, "'" + word + "' is not a seed");
      ws.config.seed = v;
    } else if (key == "budget") {
      budget_profile(s.tok[2]);
      ws.config.budget = s.tok[2];
    } else if (key == "bound") {
      ws.config.bound = number(s, s.tok[2], 1, 3);
    } else {
      fail(s.line, "unknown config key '" + key + "'");
    }
  }

  void category_block(const Block& b) {
    const Stmt& h = b.head;
    shape(h, h.tok.size() == 2, "category NAME");
    fresh(ws.categories, EntityKind::category, h.tok[1], h.line);
    CategoryBuilder builder(h.tok[1]);
    std::set<std::string> objects, morphisms;
    for (const Stmt& s : b.body) {
      const auto& t = s.tok;
      if (t[0] == "object") {
        shape(s, t.size() == 2 || (t.size() == 4 && t[2] == "identity"), "object X [identity ID]");
        std::string id = t.size() == 4 ? t[3] : "id_" + t[1];
        if (!objects.insert(t[1]).second) fail(s.line, "duplicate object '" + t[1] + "'");
        if (!morphisms.insert(id).second) fail(s.line, "duplicate morphism '" + id + "'");
        builder.add_object(t[1], id);
      } else if (t[0] == "morphism") {
        shape(s, t.size() == 6 && t[2] == ":" && t[4] == "->", "morphism F : X -> Y");
        if (!objects.count(t[3])) fail(s.line, "unknown object '" + t[3] + "'");
        if (!objects.count(t[5])) fail(s.line, "unknown object '" + t[5] + "'");
        if (!morphisms.insert(t[1]).second) fail(s.line, "duplicate morphism '" + t[1] + "'");
        builder.add_morphism(t[1], t[3], t[5]);
      } else if (t[0] == "compose") {
        shape(s, t.size() == 5 && t[3] == "=", "compose G F = H");
        for (int i : {1, 2, 4})
          if (!morphisms.count(t[i])) fail(s.line, "unknown morphism '" + t[i] + "'");
        builder.set_compose(t[1], t[2], t[4]);
      } else {
        fail(s.line, "unknown statement '" + t[0] + "' in a category");
      }
    }
    CategoryData data = builder.data();
    ValidationReport report = validate_category(data);
    check_bounds(data, CategoryBounds{}, report);
    if (!report.ok()) fail(h.line, report.summary());
    add(ws.categories, EntityKind::category, CategoryEntry{h.tok[1], false, make_category(std::move(data))});
  }

  void poset_block(const Block& b) {
    const Stmt& h = b.head;
    shape(h, h.tok.size() == 2, "poset NAME");
    fresh(ws.categories, EntityKind::category, h.tok[1], h.line);
    std::vector<std::string> names;
    std::vector<std::pair<int, int>> pairs;
    auto index = [&](const Stmt& s, const std::string& x) {
      auto it = std::find(names.begin(), names.end(), x);
      if (it == names.end()) fail(s.line, "unknown object '" + x + "'");
      return static_cast<int>(it - names.begin());
    };
    for (const Stmt& s : b.body) {
      const auto& t = s.tok;
      if (t[0] == "object") {
        shape(s, t.size() == 2, "object X");
        if (std::find(names.begin(), names.end(), t[1]) != names.end()) fail(s.line, "duplicate object '" + t[1] + "'");
        names.push_back(t[1]);
      } else if (t[0] == "leq") {
        shape(s, t.size() == 3, "leq X Y");
        pairs.emplace_back(index(s, t[1]), index(s, t[2]));
      } else {
        fail(s.line, "unknown statement '" + t[0] + "' in a poset");
      }
    }
    const std::size_t n = names.size();
    std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) leq[i][i] = true;
    for (auto [i, j] : pairs) leq[i][j] = true;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (leq[i][k] && leq[k][j]) leq[i][j] = true;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (leq[i][j] && leq[j][i]) fail(h.line, "order is not antisymmetric: " + names[i] + ", " + names[j]);
    CatPtr c = make_poset(h.tok[1], names, leq);
    ValidationReport report;
    check_bounds(c->data(), CategoryBounds{}, report);
    if (!report.ok()) fail(h.line, report.summary());
    add(ws.categories, EntityKind::category, CategoryEntry{h.tok[1], true, c});
  }

  // "a -> b" triples from position `from`.
  std::vector<std::pair<std::string, std::string>> mapping(const Stmt& s, std::size_t from) {
    std::vector<std::pair<std::string, std::string>> out;
    if ((s.tok.size() - from) % 3 != 0) fail(s.line, "expected pairs 'a->b'");
    for (std::size_t i = from; i < s.tok.size(); i += 3) {
      if (s.tok[i + 1] != "->") fail(s.line, "expected pairs 'a->b'");
      out.emplace_back(s.tok[i], s.tok[i + 2]);
    }
    return out;
  }

  static int label_index(const std::vector<std::string>& labels, const std::string& l) {
    auto it = std::find(labels.begin(), labels.end(), l);
    return it == labels.end() ? -1 : static_cast<int>(it - labels.begin());
  }

  // A total function from `from` labels to `to` labels.
  std::vector<ElemId> table(const Stmt& s, const std::vector<std::pair<std::string, std::string>>& pairs,
                            const std::vector<std::string>& from, const std::vector<std::string>& to,
                            const std::string& what) {
    std::vector<ElemId> out(from.size(), kNone);
    for (const auto& [a, b] : pairs) {
      int i = label_index(from, a), j = label_index(to, b);
      if (i < 0) fail(s.line, what + ": '" + a + "' is not in the source set");
      if (j < 0) fail(s.line, what + ": '" + b + "' is not in the target set");
      if (out[i] != kNone) fail(s.line, what + ": '" + a + "' is mapped twice");
      out[i] = j;
    }
    for (std::size_t i = 0; i < out.size(); ++i)
      if (out[i] == kNone) fail(s.line, what + ": '" + from[i] + "' has no image");
    return out;
  }

  void presheaf_block(const Block& b) {
    const Stmt& h = b.head;
    shape(h, h.tok.size() == 4 && h.tok[2] == "on", "presheaf NAME on CATEGORY");
    fresh(ws.presheaves, EntityKind::presheaf, h.tok[1], h.line);
    const CatPtr& c = need(ws.categories, EntityKind::category, h.tok[3], h.line).category;
    std::vector<std::vector<std::string>> values(c->num_objects());
    std::vector<bool> given(c->num_objects(), false);
    std::vector<const Stmt*> action(c->num_morphisms(), nullptr);
    for (const Stmt& s : b.body) {
      const auto& t = s.tok;
      if (t[0] == "values") {
        shape(s, t.size() >= 3 && t[2] == ":", "values X : a b ...");
        ObjId x = object_of(*c, t[1], s.line);
        if (given[x]) fail(s.line, "values of '" + t[1] + "' given twice");
        given[x] = true;
        std::set<std::string> seen;
        for (std::size_t i = 3; i < t.size(); ++i) {
          if (!seen.insert(t[i]).second) fail(s.line, "duplicate label '" + t[i] + "'");
          values[x].push_back(t[i]);
        }
      } else if (t[0] == "action") {
        shape(s, t.size() >= 3 && t[2] == ":", "action F : a->b ...");
        MorId f = morphism_of(*c, t[1], s.line);
        if (action[f]) fail(s.line, "action of '" + t[1] + "' given twice");
        action[f] = &s;
      } else {
        fail(s.line, "unknown statement '" + t[0] + "' in a presheaf");
      }
    }
    std::vector<std::vector<ElemId>> actions(c->num_morphisms());
    for (MorId f = 0; f < c->num_morphisms(); ++f) {
      const auto& from = values[c->tgt(f)];
      const auto& to = values[c->src(f)];
      if (action[f]) {
        actions[f] = table(*action[f], mapping(*action[f], 3), from, to, "action " + c->morphism_name(f));
      } else if (c->is_identity(f)) {
        for (int i = 0; i < static_cast<int>(from.size()); ++i) actions[f].push_back(i);
      } else if (!from.empty()) {
        fail(h.line, "no action given for morphism '" + c->morphism_name(f) + "'");
      }
    }
    Presheaf p{c, std::move(values), std::move(actions)};
    auto report = validate_presheaf(p);
    if (!report.ok()) fail(h.line, report.summary());
    add(ws.presheaves, EntityKind::presheaf, PresheafEntry{h.tok[1], share(std::move(p))});
  }

  void finfunctor_block(const Block& b) {
    const Stmt& h = b.head;
    const auto& t = h.tok;
    shape(h, t.size() == 6 && t[2] == ":" && t[4] == "->", "finfunctor NAME : CATEGORY -> CATEGORY");
    fresh(ws.finfunctors, EntityKind::finfunctor, t[1], h.line);
    const CatPtr& dom = need(ws.categories, EntityKind::category, t[3], h.line).category;
    const CatPtr& cod = need(ws.categories, EntityKind::category, t[5], h.line).category;
    FinFunctor f{t[1], dom, cod, std::vector<ObjId>(dom->num_objects(), kNone),
                 std::vector<MorId>(dom->num_morphisms(), kNone)};
    for (const Stmt& s : b.body) {
      const auto& u = s.tok;
      shape(s, u.size() == 4 && u[2] == "=" && (u[0] == "object" || u[0] == "morphism"),
            "object X = Y' or 'morphism F = G");
      if (u[0] == "object") {
        ObjId x = object_of(*dom, u[1], s.line);
        if (f.obj_map[x] != kNone) fail(s.line, "object '" + u[1] + "' mapped twice");
        f.obj_map[x] = object_of(*cod, u[3], s.line);
      } else {
        MorId m = morphism_of(*dom, u[1], s.line);
        if (f.mor_map[m] != kNone) fail(s.line, "morphism '" + u[1] + "' mapped twice");
        f.mor_map[m] = morphism_of(*cod, u[3], s.line);
      }
    }
    for (ObjId x = 0; x < dom->num_objects(); ++x)
      if (f.obj_map[x] == kNone) fail(h.line, "object '" + dom->object_name(x) + "' has no image");
    for (MorId m = 0; m < dom->num_morphisms(); ++m) {
      if (f.mor_map[m] != kNone) continue;
      if (!dom->is_identity(m)) fail(h.line, "morphism '" + dom->morphism_name(m) + "' has no image");
      f.mor_map[m] = cod->identity(f.obj_map[dom->src(m)]);
    }
    auto report = validate_functor(f);
    if (!report.ok()) fail(h.line, report.summary());
    add(ws.finfunctors, EntityKind::finfunctor, FinFunctorEntry{t[1], std::move(f)});
  }

  int bound_suffix(const Stmt& s, std::size_t at) {
    if (s.tok.size() == at) return ws.config.bound;
    shape(s, s.tok.size() == at + 2 && s.tok[at] == "bound", "... bound N");
    return number(s, s.tok[at + 1], 1, 3);
  }

  void handle(const Stmt& s) {
    const auto& t = s.tok;
    shape(s, t.size() >= 4 && t[2] == "=", "handle NAME = finset|presheaves C|sheaves S [bound N]");
    fresh(ws.handles, EntityKind::handle, t[1], s.line);
    HandleEntry e{t[1], HandleKind::finset, "", 0, nullptr};
    if (t[3] == "finset") {
      e.bound = bound_suffix(s, 4);
      e.topos = finset_category(ws.budget(e.bound));
    } else if (t[3] == "presheaves" || t[3] == "sheaves") {
      shape(s, t.size() >= 5, "handle NAME = presheaves|sheaves NAME [bound N]");
      e.over = t[4];
      e.bound = bound_suffix(s, 5);
      if (t[3] == "presheaves") {
        e.kind = HandleKind::presheaves;
        e.topos = presheaf_category(need(ws.categories, EntityKind::category, t[4], s.line).category, ws.budget(e.bound));
      } else {
        e.kind = HandleKind::sheaves;
        e.topos = sheaf_category(need(ws.sites, EntityKind::site, t[4], s.line).site, ws.budget(e.bound));
      }
    } else {
      fail(s.line, "unknown handle kind '" + t[3] + "'");
    }
    add(ws.handles, EntityKind::handle, std::move(e));
  }

  void site_block(const Block& b) {
    const Stmt& h = b.head;
    shape(h, h.tok.size() == 4 && h.tok[2] == "on", "site NAME on CATEGORY");
    fresh(ws.sites, EntityKind::site, h.tok[1], h.line);
    const CatPtr& c = need(ws.categories, EntityKind::category, h.tok[3], h.line).category;
    std::vector<std::vector<Family>> covers(c->num_objects());
    for (const Stmt& s : b.body) {
      const auto& t = s.tok;
      shape(s, t[0] == "cover" && t.size() >= 3 && t[2] == ":", "cover X : F G ...");
      ObjId x = object_of(*c, t[1], s.line);
      Family fam;
      for (std::size_t i = 3; i < t.size(); ++i) {
        MorId f = morphism_of(*c, t[i], s.line);
        if (c->tgt(f) != x) fail(s.line, "member '" + t[i] + "' does not have target '" + t[1] + "'");
        fam.push_back(f);
      }
      covers[x].push_back(std::move(fam));
    }
    add(ws.sites, EntityKind::site, SiteEntry{h.tok[1], "declared", h.tok[3], 4, generate_topology(h.tok[1], c, covers)});
  }

  void site_oneliner(const Stmt& s) {
    const auto& t = s.tok;
    shape(s, t.size() >= 5, "site NAME = trivial|canonical CATEGORY [max K]");
    fresh(ws.sites, EntityKind::site, t[1], s.line);
    SiteEntry e{t[1], t[3], t[4], 4, nullptr};
    const CatPtr& c = need(ws.categories, EntityKind::category, t[4], s.line).category;
    if (t[3] == "trivial") {
      shape(s, t.size() == 5, "site NAME = trivial CATEGORY");
      e.site = generate_topology(t[1], c, std::vector<std::vector<Family>>(c->num_objects()));
    } else if (t[3] == "canonical") {
      if (t.size() != 5) {
        shape(s, t.size() == 7 && t[5] == "max", "site NAME = canonical CATEGORY [max K]");
        e.max_family = number(s, t[6], 0, 6);
      }
      e.site = generate_topology(t[1], c, canonical_pretopology(c, e.max_family).covers);
    } else {
      fail(s.line, "unknown site form '" + t[3] + "'");
    }
    add(ws.sites, EntityKind::site, std::move(e));
  }

  const HandleEntry& handle_ref(const Stmt& s, const std::string& name) {
    return need(ws.handles, EntityKind::handle, name, s.line);
  }

  void in_handle(const Stmt& s, const Presheaf& p, const HandleEntry& h, const std::string& what) {
    if (!same_category(*p.base, *h.topos->base()))
      fail(s.line, what + " does not live over the base of handle '" + h.name + "'");
  }

  void finish_functor(const Stmt& s, FunctorEntry e) {
    e.functor.name = e.name;
    auto report = validate_topos_functor(e.functor);
    if (!report.ok()) fail(s.line, report.summary());
    add(ws.functors, EntityKind::functor, std::move(e));
  }

  void functor_oneliner(const Stmt& s) {
    const auto& t = s.tok;
    shape(s, t.size() >= 5, "functor NAME = FORM ARGS");
    fresh(ws.functors, EntityKind::functor, t[1], s.line);
    FunctorEntry e;
    e.name = t[1];
    e.form = t[3];
    auto tail_in = [&](std::size_t nargs, const char* usage) {
      shape(s, t.size() == 4 + nargs + 2 && t[4 + nargs] == "in", usage);
      e.args.assign(t.begin() + 4, t.begin() + 4 + static_cast<long>(nargs));
      e.handle = t.back();
      return &handle_ref(s, e.handle);
    };
    if (e.form == "corepresentable") {
      const HandleEntry* h = tail_in(2, "functor NAME = corepresentable CATEGORY X in HANDLE");
      const CatPtr& c = need(ws.categories, EntityKind::category, e.args[0], s.line).category;
      if (h->kind != HandleKind::finset) fail(s.line, "corepresentable functors land in a finset handle");
      e.functor = corepresentable(c, object_of(*c, e.args[1], s.line), h->topos);
    } else if (e.form == "yoneda") {
      const HandleEntry* h = tail_in(1, "functor NAME = yoneda CATEGORY in HANDLE");
      const CatPtr& c = need(ws.categories, EntityKind::category, e.args[0], s.line).category;
      if (h->kind != HandleKind::presheaves || !same_category(*c, *h->topos->base()))
        fail(s.line, "yoneda needs a presheaf handle over '" + e.args[0] + "'");
      e.functor = yoneda_functor(h->topos);
    } else if (e.form == "yoneda-after") {
      const HandleEntry* h = tail_in(1, "functor NAME = yoneda-after FINFUNCTOR in HANDLE");
      const FinFunctor& f = need(ws.finfunctors, EntityKind::finfunctor, e.args[0], s.line).functor;
      if (h->kind != HandleKind::presheaves || !same_category(*f.cod, *h->topos->base()))
        fail(s.line, "yoneda-after needs a presheaf handle over the codomain of '" + e.args[0] + "'");
      e.functor = yoneda_after(f, h->topos);
    } else if (e.form == "constant") {
      const HandleEntry* h = tail_in(2, "functor NAME = constant CATEGORY PRESHEAF in HANDLE");
      const CatPtr& c = need(ws.categories, EntityKind::category, e.args[0], s.line).category;
      const PresheafPtr& p = need(ws.presheaves, EntityKind::presheaf, e.args[1], s.line).presheaf;
      in_handle(s, *p, *h, "presheaf '" + e.args[1] + "'");
      e.functor = constant_topos_functor(e.name, c, h->topos, p);
    } else if (e.form == "epsilon") {
      shape(s, t.size() == 5, "functor NAME = epsilon SITE");
      e.args = {t[4]};
      e.functor = epsilon_functor(need(ws.sites, EntityKind::site, t[4], s.line).site, ws.budget(ws.config.bound));
    } else {
      fail(s.line, "unknown functor form '" + e.form + "'");
    }
    finish_functor(s, std::move(e));
  }

  void functor_block(const Block& b) {
    const Stmt& h = b.head;
    const auto& t = h.tok;
    shape(h, t.size() == 6 && t[2] == ":" && t[4] == "->", "functor NAME : CATEGORY -> HANDLE");
    fresh(ws.functors, EntityKind::functor, t[1], h.line);
    const CatPtr& c = need(ws.categories, EntityKind::category, t[3], h.line).category;
    const HandleEntry& hd = handle_ref(h, t[5]);
    const FinCategory& base = *hd.topos->base();
    FunctorEntry e;
    e.name = t[1];
    e.handle = t[5];
    e.object_refs.assign(c->num_objects(), "");
    std::vector<PresheafPtr> obj(c->num_objects());
    std::vector<std::vector<const Stmt*>> mor(c->num_morphisms(), std::vector<const Stmt*>(base.num_objects()));
    for (const Stmt& s : b.body) {
      const auto& u = s.tok;
      if (u[0] == "object") {
        shape(s, u.size() >= 4 && u[2] == "=", "object X = PRESHEAF' or 'object X = { a b }");
        ObjId x = object_of(*c, u[1], s.line);
        if (obj[x]) fail(s.line, "object '" + u[1] + "' given twice");
        if (u[3] == "{") {
          shape(s, u.back() == "}", "object X = { a b }");
          if (hd.kind != HandleKind::finset) fail(s.line, "inline sets need a finset handle");
          std::vector<std::string> labels(u.begin() + 4, u.end() - 1);
          std::set<std::string> seen(labels.begin(), labels.end());
          if (seen.size() != labels.size()) fail(s.line, "duplicate label in an inline set");
          obj[x] = share(finite_set(std::move(labels)));
        } else {
          shape(s, u.size() == 4, "object X = PRESHEAF");
          obj[x] = need(ws.presheaves, EntityKind::presheaf, u[3], s.line).presheaf;
          in_handle(s, *obj[x], hd, "presheaf '" + u[3] + "'");
          e.object_refs[x] = u[3];
        }
      } else if (u[0] == "morphism") {
        shape(s, u.size() >= 3, "morphism F [@ OBJECT] : a->b ...");
        MorId m = morphism_of(*c, u[1], s.line);
        ObjId at = 0;
        std::size_t colon = 2;
        if (u[2] == "@") {
          shape(s, u.size() >= 5 && u[4] == ":", "morphism F @ OBJECT : a->b ...");
          at = object_of(base, u[3], s.line);
          colon = 4;
        } else if (base.num_objects() != 1) {
          fail(s.line, "morphism '" + u[1] + "' needs '@ OBJECT' in handle '" + hd.name + "'");
        }
        shape(s, u[colon] == ":", "morphism F [@ OBJECT] : a->b ...");
        if (mor[m][at]) fail(s.line, "component of '" + u[1] + "' given twice");
        mor[m][at] = &s;
      } else {
        fail(s.line, "unknown statement '" + u[0] + "' in a functor");
      }
    }
    for (ObjId x = 0; x < c->num_objects(); ++x)
      if (!obj[x]) fail(h.line, "object '" + c->object_name(x) + "' has no value");
    std::vector<PresheafMorphism> maps;
    for (MorId m = 0; m < c->num_morphisms(); ++m) {
      const PresheafPtr& dom = obj[c->src(m)];
      const PresheafPtr& cod = obj[c->tgt(m)];
      PresheafMorphism pm{dom, cod, std::vector<std::vector<ElemId>>(base.num_objects())};
      for (ObjId z = 0; z < base.num_objects(); ++z) {
        const Stmt* s = mor[m][z];
        const std::string what = "morphism " + c->morphism_name(m);
        if (s) {
          std::size_t from = (*s).tok[2] == "@" ? 5 : 3;
          pm.components[z] = table(*s, mapping(*s, from), dom->values[z], cod->values[z], what);
        } else if (c->is_identity(m)) {
          for (int i = 0; i < dom->size(z); ++i) pm.components[z].push_back(i);
        } else if (dom->size(z) > 0) {
          fail(h.line, what + " has no component at '" + base.object_name(z) + "'");
        }
      }
      maps.push_back(std::move(pm));
    }
    e.functor = ToposFunctor{t[1], c, hd.topos, std::move(obj), std::move(maps)};
    finish_functor(h, std::move(e));
  }
};

// ---- printing ----

void printable(const std::string& s) {
  bool bad = s.empty() || s.find("->") != std::string::npos ||
             s.find_first_of(" \t\r\n{}:=#") != std::string::npos;
  if (bad) throw ContractError("workspace: '" + s + "' cannot be written as a name or label");
}

std::string word(const std::string& s) {
  printable(s);
  return s;
}

void print_category(std::ostream& os, const CategoryEntry& e) {
  const FinCategory& c = *e.category;
  const int m = c.num_morphisms();
  if (e.poset) {
    os << "poset " << word(e.name) << '\n';
    for (ObjId x = 0; x < c.num_objects(); ++x) os << "  object " << word(c.object_name(x)) << '\n';
    for (MorId f = 0; f < m; ++f)
      if (!c.is_identity(f)) os << "  leq " << c.object_name(c.src(f)) << ' ' << c.object_name(c.tgt(f)) << '\n';
    os << "end\n";
    return;
  }
  os << "category " << word(e.name) << '\n';
  ObjId next = 0;
  for (MorId f = 0; f < m; ++f) {
    if (c.is_identity(f)) {
      ObjId x = c.src(f);
      if (x != next) throw ContractError("workspace: objects of " + c.name() + " are not in identity order");
      ++next;
      os << "  object " << word(c.object_name(x));
      if (c.morphism_name(f) != "id_" + c.object_name(x)) os << " identity " << word(c.morphism_name(f));
      os << '\n';
    } else {
      os << "  morphism " << word(c.morphism_name(f)) << " : " << c.object_name(c.src(f)) << " -> "
         << c.object_name(c.tgt(f)) << '\n';
    }
  }
  for (MorId g = 0; g < m; ++g)
    for (MorId f = 0; f < m; ++f) {
      if (c.is_identity(g) || c.is_identity(f)) continue;
      MorId h = c.try_compose(g, f);
      if (h != kNone)
        os << "  compose " << c.morphism_name(g) << ' ' << c.morphism_name(f) << " = " << c.morphism_name(h) << '\n';
    }
  os << "end\n";
}

void print_pairs(std::ostream& os, const std::vector<ElemId>& table, const std::vector<std::string>& from,
                 const std::vector<std::string>& to) {
  for (std::size_t i = 0; i < table.size(); ++i) os << ' ' << word(from[i]) << "->" << word(to[table[i]]);
}

void print_presheaf(std::ostream& os, const std::string& name, const std::string& base, const Presheaf& p) {
  const FinCategory& c = *p.base;
  os << "presheaf " << word(name) << " on " << word(base) << '\n';
  for (ObjId x = 0; x < c.num_objects(); ++x) {
    os << "  values " << c.object_name(x) << " :";
    for (const auto& l : p.values[x]) os << ' ' << word(l);
    os << '\n';
  }
  for (MorId f = 0; f < c.num_morphisms(); ++f) {
    if (c.is_identity(f) || p.values[c.tgt(f)].empty()) continue;
    os << "  action " << c.morphism_name(f) << " :";
    print_pairs(os, p.actions[f], p.values[c.tgt(f)], p.values[c.src(f)]);
    os << '\n';
  }
  os << "end\n";
}

// Name of the category entry holding c, for references.
std::string category_name(const Workspace& ws, const FinCategory& c) {
  for (const auto& e : ws.categories)
    if (same_category(*e.category, c)) return e.name;
  if (same_category(c, *terminal_category())) return c.name();
  throw ContractError("workspace: category " + c.name() + " is not declared");
}

void print_functor(std::ostream& os, const Workspace& ws, const FunctorEntry& e) {
  if (e.form != "explicit") {
    os << "functor " << word(e.name) << " = " << e.form;
    for (const auto& a : e.args) os << ' ' << word(a);
    if (!e.handle.empty()) os << " in " << word(e.handle);
    os << '\n';
    return;
  }
  const ToposFunctor& p = e.functor;
  const FinCategory& c = *p.dom;
  const FinCategory& base = *p.cod->base();
  os << "functor " << word(e.name) << " : " << category_name(ws, c) << " -> " << word(e.handle) << '\n';
  for (ObjId x = 0; x < c.num_objects(); ++x) {
    os << "  object " << c.object_name(x) << " = ";
    if (!e.object_refs[x].empty()) {
      os << word(e.object_refs[x]) << '\n';
      continue;
    }
    os << '{';
    for (const auto& l : p.obj[x]->values[0]) os << ' ' << word(l);
    os << " }\n";
  }
  for (MorId m = 0; m < c.num_morphisms(); ++m) {
    if (c.is_identity(m)) continue;
    for (ObjId z = 0; z < base.num_objects(); ++z) {
      const auto& from = p.obj[c.src(m)]->values[z];
      if (from.empty()) continue;
      os << "  morphism " << c.morphism_name(m);
      if (base.num_objects() != 1) os << " @ " << base.object_name(z);
      os << " :";
      print_pairs(os, p.mor[m].components[z], from, p.obj[c.tgt(m)]->values[z]);
      os << '\n';
    }
  }
  os << "end\n";
}

}  // namespace

Workspace parse_workspace(std::string_view text) {
  Parser p;
  p.run(text);
  if (!p.errors.empty()) throw WorkspaceError(std::move(p.errors));
  return std::move(p.ws);
}

Workspace load_workspace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ContractError("cannot read workspace '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_workspace(buf.str());
}

std::string print_workspace(const Workspace& ws) {
  std::ostringstream os;
  os << "config seed " << ws.config.seed << '\n';
  os << "config budget " << ws.config.budget << '\n';
  os << "config bound " << ws.config.bound << '\n';
  for (auto [kind, i] : ws.order) {
    os << '\n';
    switch (kind) {
      case EntityKind::category:
        print_category(os, ws.categories[i]);
        break;
      case EntityKind::finfunctor: {
        const auto& e = ws.finfunctors[i];
        const FinFunctor& f = e.functor;
        os << "finfunctor " << word(e.name) << " : " << category_name(ws, *f.dom) << " -> "
           << category_name(ws, *f.cod) << '\n';
        for (ObjId x = 0; x < f.dom->num_objects(); ++x)
          os << "  object " << f.dom->object_name(x) << " = " << f.cod->object_name(f.obj_map[x]) << '\n';
        for (MorId m = 0; m < f.dom->num_morphisms(); ++m)
          if (!f.dom->is_identity(m))
            os << "  morphism " << f.dom->morphism_name(m) << " = " << f.cod->morphism_name(f.mor_map[m]) << '\n';
        os << "end\n";
        break;
      }
      case EntityKind::presheaf: {
        const auto& e = ws.presheaves[i];
        print_presheaf(os, e.name, category_name(ws, *e.presheaf->base), *e.presheaf);
        break;
      }
      case EntityKind::handle: {
        const auto& e = ws.handles[i];
        os << "handle " << word(e.name) << " = ";
        if (e.kind == HandleKind::finset) os << "finset";
        else os << (e.kind == HandleKind::presheaves ? "presheaves " : "sheaves ") << word(e.over);
        os << " bound " << e.bound << '\n';
        break;
      }
      case EntityKind::site: {
        const auto& e = ws.sites[i];
        if (e.form == "trivial") {
          os << "site " << word(e.name) << " = trivial " << word(e.base) << '\n';
        } else if (e.form == "canonical") {
          os << "site " << word(e.name) << " = canonical " << word(e.base) << " max " << e.max_family << '\n';
        } else {
          const FinCategory& c = *e.site->base();
          os << "site " << word(e.name) << " on " << word(e.base) << '\n';
          for (ObjId x = 0; x < c.num_objects(); ++x)
            for (const auto& fam : e.site->covers()[x]) {
              os << "  cover " << c.object_name(x) << " :";
              for (MorId f : fam) os << ' ' << c.morphism_name(f);
              os << '\n';
            }
          os << "end\n";
        }
        break;
      }
      case EntityKind::functor:
        print_functor(os, ws, ws.functors[i]);
        break;
    }
  }
  return os.str();
}

bool same_workspace(const Workspace& a, const Workspace& b) {
  if (!(a.config == b.config) || a.order != b.order) return false;
  auto names = [](const auto& x, const auto& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i].name != y[i].name) return false;
    return true;
  };
  if (!names(a.categories, b.categories) || !names(a.finfunctors, b.finfunctors) ||
      !names(a.presheaves, b.presheaves) || !names(a.handles, b.handles) || !names(a.sites, b.sites) ||
      !names(a.functors, b.functors))
    return false;
  for (std::size_t i = 0; i < a.categories.size(); ++i)
    if (!(*a.categories[i].category == *b.categories[i].category)) return false;
  for (std::size_t i = 0; i < a.finfunctors.size(); ++i) {
    const auto& f = a.finfunctors[i].functor;
    const auto& g = b.finfunctors[i].functor;
    if (!(*f.dom == *g.dom) || !(*f.cod == *g.cod) || f.obj_map != g.obj_map || f.mor_map != g.mor_map) return false;
  }
  for (std::size_t i = 0; i < a.presheaves.size(); ++i)
    if (!(*a.presheaves[i].presheaf == *b.presheaves[i].presheaf)) return false;
  for (std::size_t i = 0; i < a.handles.size(); ++i) {
    const auto& x = a.handles[i];
    const auto& y = b.handles[i];
    if (x.kind != y.kind || x.over != y.over || x.bound != y.bound) return false;
  }
  for (std::size_t i = 0; i < a.sites.size(); ++i) {
    const auto& x = a.sites[i];
    const auto& y = b.sites[i];
    if (x.base != y.base || !(*x.site->base() == *y.site->base()) || x.site->covers() != y.site->covers()) return false;
    for (ObjId o = 0; o < x.site->base()->num_objects(); ++o)
      if (x.site->topology(o) != y.site->topology(o)) return false;
  }
  for (std::size_t i = 0; i < a.functors.size(); ++i) {
    const auto& x = a.functors[i];
    const auto& y = b.functors[i];
    if (x.form != y.form || x.args != y.args || x.handle != y.handle || x.object_refs != y.object_refs) return false;
    const auto& p = x.functor;
    const auto& q = y.functor;
    if (!(*p.dom == *q.dom) || p.cod->name() != q.cod->name() || p.obj.size() != q.obj.size()) return false;
    for (std::size_t k = 0; k < p.obj.size(); ++k)
      if (!(*p.obj[k] == *q.obj[k])) return false;
    for (std::size_t k = 0; k < p.mor.size(); ++k)
      if (p.mor[k].components != q.mor[k].components) return false;
  }
  return true;
}

}  // namespace fintopos
