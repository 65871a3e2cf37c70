#include "fintopos/presheaf/presheaf.hpp"

#include <set>

namespace fintopos {

std::optional<ElemId> Presheaf::find(ObjId x, const std::string& label) const {
  for (ElemId e = 0; e < size(x); ++e)
    if (values[x][e] == label) return e;
  return std::nullopt;
}

std::size_t Presheaf::total_size() const {
  std::size_t n = 0;
  for (const auto& v : values) n += v.size();
  return n;
}

bool same_shape(const Presheaf& a, const Presheaf& b) {
  if (!same_category(*a.base, *b.base)) return false;
  if (a.values.size() != b.values.size()) return false;
  for (std::size_t x = 0; x < a.values.size(); ++x)
    if (a.values[x].size() != b.values[x].size()) return false;
  return a.actions == b.actions;
}

bool operator==(const Presheaf& a, const Presheaf& b) {
  return same_shape(a, b) && a.values == b.values;
}

ValidationReport validate_presheaf(const Presheaf& f) {
  ValidationReport report;
  if (!f.base) {
    report.add("structure", "presheaf has no base category");
    return report;
  }
  const FinCategory& c = *f.base;
  if (static_cast<int>(f.values.size()) != c.num_objects())
    report.add("structure", "value table does not cover every object");
  if (static_cast<int>(f.actions.size()) != c.num_morphisms())
    report.add("structure", "action table does not cover every morphism");
  if (!report.ok()) return report;
  for (ObjId x = 0; x < c.num_objects(); ++x) {
    std::set<std::string> seen;
    for (const auto& l : f.values[x])
      if (!seen.insert(l).second)
        report.add("label", "label '" + l + "' repeated at object '" + c.object_name(x) + "'", {x});
  }
  for (MorId m = 0; m < c.num_morphisms(); ++m) {
    if (static_cast<int>(f.actions[m].size()) != f.size(c.tgt(m))) {
      report.add("action", "action of '" + c.morphism_name(m) + "' has the wrong domain size", {m});
      continue;
    }
    for (ElemId y : f.actions[m])
      if (y < 0 || y >= f.size(c.src(m))) {
        report.add("action", "action of '" + c.morphism_name(m) + "' leaves its value set", {m});
        break;
      }
  }
  if (!report.ok()) return report;
  for (ObjId x = 0; x < c.num_objects(); ++x) {
    MorId id = c.identity(x);
    for (ElemId e = 0; e < f.size(x); ++e)
      if (f.actions[id][e] != e) {
        report.add("identity", "identity of '" + c.object_name(x) + "' acts non-trivially", {id, e});
        break;
      }
  }
  // F(g∘f) = F(f)∘F(g)
  for (MorId g = 0; g < c.num_morphisms(); ++g)
    for (MorId m : c.into(c.src(g))) {
      MorId gm = c.compose(g, m);
      for (ElemId z = 0; z < f.size(c.tgt(g)); ++z)
        if (f.actions[gm][z] != f.actions[m][f.actions[g][z]]) {
          report.add("composition", "F(g∘f) != F(f)∘F(g)", {g, m, z});
          break;
        }
    }
  return report;
}

Presheaf make_presheaf(CatPtr base, std::vector<std::vector<std::string>> values,
                       std::vector<std::vector<ElemId>> actions) {
  Presheaf f{std::move(base), std::move(values), std::move(actions)};
  auto report = validate_presheaf(f);
  if (!report.ok()) throw ValidationError(std::move(report));
  return f;
}

std::vector<std::string> numbered_labels(int n) {
  std::vector<std::string> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(std::to_string(i));
  return out;
}

namespace {

std::vector<ElemId> iota(int n) {
  std::vector<ElemId> v(n);
  for (int i = 0; i < n; ++i) v[i] = i;
  return v;
}

}  // namespace

Presheaf terminal_presheaf(CatPtr base) {
  Presheaf f{base, {}, {}};
  f.values.assign(base->num_objects(), {"*"});
  f.actions.assign(base->num_morphisms(), {0});
  return f;
}

Presheaf initial_presheaf(CatPtr base) {
  Presheaf f{base, {}, {}};
  f.values.assign(base->num_objects(), {});
  f.actions.assign(base->num_morphisms(), {});
  return f;
}

Presheaf finite_set(std::vector<std::string> labels) {
  const int n = static_cast<int>(labels.size());
  return make_presheaf(terminal_category(), {std::move(labels)}, {iota(n)});
}

Presheaf finite_set(int n) { return finite_set(numbered_labels(n)); }

bool same_components(const PresheafMorphism& a, const PresheafMorphism& b) {
  return a.components == b.components;
}

bool operator==(const PresheafMorphism& a, const PresheafMorphism& b) {
  return a.components == b.components && same_shape(*a.dom, *b.dom) && same_shape(*a.cod, *b.cod);
}

bool is_natural(const PresheafMorphism& m) {
  const FinCategory& c = *m.dom->base;
  for (MorId f = 0; f < c.num_morphisms(); ++f) {
    ObjId x = c.src(f), y = c.tgt(f);
    for (ElemId a = 0; a < m.dom->size(y); ++a)
      if (m.cod->act(f, m.at(y, a)) != m.at(x, m.dom->act(f, a))) return false;
  }
  return true;
}

ValidationReport validate_morphism(const PresheafMorphism& m) {
  ValidationReport report;
  if (!m.dom || !m.cod) {
    report.add("structure", "morphism lacks a domain or codomain");
    return report;
  }
  if (!same_category(*m.dom->base, *m.cod->base)) {
    report.add("structure", "domain and codomain live over different bases");
    return report;
  }
  const FinCategory& c = *m.dom->base;
  if (static_cast<int>(m.components.size()) != c.num_objects()) {
    report.add("structure", "component table does not cover every object");
    return report;
  }
  for (ObjId x = 0; x < c.num_objects(); ++x) {
    if (static_cast<int>(m.components[x].size()) != m.dom->size(x)) {
      report.add("component", "component at '" + c.object_name(x) + "' has the wrong size", {x});
      continue;
    }
    for (ElemId e : m.components[x])
      if (e < 0 || e >= m.cod->size(x)) {
        report.add("component", "component at '" + c.object_name(x) + "' leaves the codomain", {x});
        break;
      }
  }
  if (!report.ok()) return report;
  for (MorId f = 0; f < c.num_morphisms(); ++f) {
    ObjId x = c.src(f), y = c.tgt(f);
    for (ElemId a = 0; a < m.dom->size(y); ++a)
      if (m.cod->act(f, m.at(y, a)) != m.at(x, m.dom->act(f, a))) {
        report.add("naturality", "square for '" + c.morphism_name(f) + "' does not commute", {f, a});
        break;
      }
  }
  return report;
}

PresheafMorphism identity_morphism(const PresheafPtr& f) {
  PresheafMorphism m{f, f, {}};
  for (ObjId x = 0; x < f->base->num_objects(); ++x) m.components.push_back(iota(f->size(x)));
  return m;
}

PresheafMorphism compose(const PresheafMorphism& g, const PresheafMorphism& f) {
  if (!same_shape(*f.cod, *g.dom)) throw ContractError("compose: presheaf morphisms are not composable");
  PresheafMorphism h{f.dom, g.cod, {}};
  h.components.resize(f.components.size());
  for (std::size_t x = 0; x < f.components.size(); ++x) {
    h.components[x].reserve(f.components[x].size());
    for (ElemId e : f.components[x]) h.components[x].push_back(g.components[x][e]);
  }
  return h;
}

bool is_iso(const PresheafMorphism& m) {
  for (std::size_t x = 0; x < m.components.size(); ++x) {
    const int n = m.cod->size(static_cast<ObjId>(x));
    if (static_cast<int>(m.components[x].size()) != n) return false;
    std::vector<char> hit(n, 0);
    for (ElemId e : m.components[x]) {
      if (hit[e]) return false;
      hit[e] = 1;
    }
  }
  return true;
}

PresheafMorphism inverse(const PresheafMorphism& m) {
  if (!is_iso(m)) throw ContractError("inverse: morphism is not an isomorphism");
  PresheafMorphism inv{m.cod, m.dom, {}};
  inv.components.resize(m.components.size());
  for (std::size_t x = 0; x < m.components.size(); ++x) {
    inv.components[x].assign(m.components[x].size(), 0);
    for (std::size_t e = 0; e < m.components[x].size(); ++e)
      inv.components[x][m.components[x][e]] = static_cast<ElemId>(e);
  }
  return inv;
}

PresheafMorphism to_terminal(const PresheafPtr& f) {
  auto one = share(terminal_presheaf(f->base));
  PresheafMorphism m{f, one, {}};
  for (ObjId x = 0; x < f->base->num_objects(); ++x) m.components.emplace_back(f->size(x), 0);
  return m;
}

namespace {

// Backtracking over the variables (X, a) with forward propagation along
// naturality: fixing θ_Y(a) = b forces θ_X(F(f)a) = G(f)b for every f: X -> Y.
class MorphismSearch {
 public:
  MorphismSearch(const Presheaf& dom, const Presheaf& cod, bool injective)
      : dom_(dom), cod_(cod), c_(*dom.base), injective_(injective) {
    if (!same_category(*dom.base, *cod.base))
      throw ContractError("presheaf morphisms: domain and codomain live over different bases");
    const int n = c_.num_objects();
    offset_.assign(n + 1, 0);
    for (ObjId x = 0; x < n; ++x) offset_[x + 1] = offset_[x] + dom.size(x);
    value_.assign(offset_[n], kNone);
    used_.resize(n);
    for (ObjId x = 0; x < n; ++x) used_[x].assign(cod.size(x), 0);
    var_obj_.resize(offset_[n]);
    for (ObjId x = 0; x < n; ++x)
      for (int i = offset_[x]; i < offset_[x + 1]; ++i) var_obj_[i] = x;
  }

  template <class Visit>
  void run(Visit&& visit) {
    rec(0, visit);
  }

  std::vector<std::vector<ElemId>> snapshot() const {
    std::vector<std::vector<ElemId>> out(c_.num_objects());
    for (ObjId x = 0; x < c_.num_objects(); ++x)
      out[x].assign(value_.begin() + offset_[x], value_.begin() + offset_[x + 1]);
    return out;
  }

  bool stopped = false;

 private:
  bool assign(ObjId y, ElemId a, ElemId b) {
    stack_.clear();
    stack_.push_back({y, a, b});
    while (!stack_.empty()) {
      auto [obj, elem, val] = stack_.back();
      stack_.pop_back();
      int& slot = value_[offset_[obj] + elem];
      if (slot != kNone) {
        if (slot != val) return false;
        continue;
      }
      if (injective_ && used_[obj][val]) return false;
      slot = val;
      if (injective_) used_[obj][val] = 1;
      trail_.push_back(offset_[obj] + elem);
      for (MorId f : c_.into(obj)) {
        if (c_.is_identity(f)) continue;
        stack_.push_back({c_.src(f), dom_.act(f, elem), cod_.act(f, val)});
      }
    }
    return true;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      int var = trail_.back();
      trail_.pop_back();
      if (injective_) used_[var_obj_[var]][value_[var]] = 0;
      value_[var] = kNone;
    }
  }

  template <class Visit>
  void rec(int var, Visit& visit) {
    if (stopped) return;
    const int total = static_cast<int>(value_.size());
    while (var < total && value_[var] != kNone) ++var;
    if (var == total) {
      if (!visit(*this)) stopped = true;
      return;
    }
    const ObjId x = var_obj_[var];
    const ElemId a = var - offset_[x];
    for (ElemId b = 0; b < cod_.size(x) && !stopped; ++b) {
      std::size_t mark = trail_.size();
      if (assign(x, a, b)) rec(var + 1, visit);
      undo(mark);
    }
  }

  struct Pending {
    ObjId obj;
    ElemId elem;
    ElemId val;
  };

  const Presheaf& dom_;
  const Presheaf& cod_;
  const FinCategory& c_;
  bool injective_;
  std::vector<int> offset_;
  std::vector<int> value_;
  std::vector<ObjId> var_obj_;
  std::vector<std::vector<char>> used_;
  std::vector<int> trail_;
  std::vector<Pending> stack_;
};

}  // namespace

std::vector<PresheafMorphism> enumerate_morphisms(const PresheafPtr& dom, const PresheafPtr& cod,
                                                  std::size_t cap) {
  std::vector<PresheafMorphism> out;
  MorphismSearch search(*dom, *cod, false);
  search.run([&](const MorphismSearch& s) {
    if (out.size() >= cap)
      throw ResourceError("hom enumeration exceeded its budget of " + std::to_string(cap));
    out.push_back(PresheafMorphism{dom, cod, s.snapshot()});
    return true;
  });
  return out;
}

std::vector<PresheafMorphism> first_morphisms(const PresheafPtr& dom, const PresheafPtr& cod, std::size_t k) {
  std::vector<PresheafMorphism> out;
  if (k == 0) return out;
  MorphismSearch search(*dom, *cod, false);
  search.run([&](const MorphismSearch& s) {
    out.push_back(PresheafMorphism{dom, cod, s.snapshot()});
    return out.size() < k;
  });
  return out;
}

std::size_t count_morphisms(const Presheaf& dom, const Presheaf& cod, std::size_t cap) {
  std::size_t count = 0;
  MorphismSearch search(dom, cod, false);
  search.run([&](const MorphismSearch&) {
    if (++count > cap) throw ResourceError("hom count exceeded its budget of " + std::to_string(cap));
    return true;
  });
  return count;
}

std::optional<PresheafMorphism> find_iso(const PresheafPtr& a, const PresheafPtr& b) {
  if (!same_category(*a->base, *b->base)) return std::nullopt;
  for (ObjId x = 0; x < a->base->num_objects(); ++x)
    if (a->size(x) != b->size(x)) return std::nullopt;
  std::optional<PresheafMorphism> found;
  MorphismSearch search(*a, *b, true);
  search.run([&](const MorphismSearch& s) {
    found = PresheafMorphism{a, b, s.snapshot()};
    return false;
  });
  return found;
}

bool are_isomorphic(const Presheaf& a, const Presheaf& b) {
  // Borrow without copying; the shared pointers never outlive this call.
  PresheafPtr pa(std::shared_ptr<const Presheaf>{}, &a);
  PresheafPtr pb(std::shared_ptr<const Presheaf>{}, &b);
  return find_iso(pa, pb).has_value();
}

std::uint64_t digest(const Presheaf& f) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 1099511628211ULL;
    }
  };
  auto mix_str = [&](const std::string& s) {
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 1099511628211ULL;
    }
    mix(s.size());
  };
  mix_str(f.base->name());
  for (const auto& v : f.values) {
    mix(v.size());
    for (const auto& l : v) mix_str(l);
  }
  for (const auto& a : f.actions) {
    mix(a.size());
    for (ElemId e : a) mix(static_cast<std::uint64_t>(e));
  }
  return h;
}

}  // namespace fintopos
