#include "fintopos/presheaf/topos.hpp"

#include <algorithm>
#include <map>

#include "fintopos/presheaf/enumerate.hpp"
#include "fintopos/presheaf/yoneda.hpp"
#include "fintopos/site/sheaf.hpp"

namespace fintopos {

Budget budget_profile(std::string_view name) {
  Budget b;
  b.profile = std::string(name);
  if (name == "small") {
    b.value_bound = 2;
    b.max_objects = 20000;
    b.max_homs = 50000;
    b.max_instances = 120;
  } else if (name == "large") {
    b.value_bound = 3;
    b.max_objects = 400000;
    b.max_homs = 1000000;
    b.max_instances = 2000;
  } else if (name != "default") {
    throw ContractError("unknown budget profile '" + std::string(name) + "' (small, default, large)");
  }
  return b;
}

PresheafTopos::PresheafTopos(CatPtr base, std::shared_ptr<const Site> site, Budget budget)
    : base_(std::move(base)), site_(std::move(site)), budget_(std::move(budget)) {
  if (budget_.value_bound < 1) throw ContractError("presheaf handle: bound must be at least 1");
  if (site_ && !same_category(*site_->base(), *base_)) throw ContractError("presheaf handle: site over another base");
  if (site_)
    name_ = "Sh(" + site_->name() + ")";
  else if (base_ == terminal_category())
    name_ = "Set";
  else
    name_ = "PSh(" + base_->name() + ")";
}

bool PresheafTopos::contains(const Presheaf& f) const {
  if (!same_category(*f.base, *base_)) return false;
  return !site_ || is_sheaf(f, *site_).sheaf;
}

const std::vector<PresheafPtr>& PresheafTopos::objects() const {
  std::lock_guard<std::mutex> lock(memo_mutex_);
  if (!objects_) {
    std::vector<PresheafPtr> out;
    bool over = false;
    for_each_presheaf(base_, budget_.value_bound, [&](const Presheaf& f) {
      if (site_ && !is_sheaf(f, *site_).sheaf) return true;
      if (out.size() == budget_.max_objects) {
        over = true;
        return false;
      }
      out.push_back(share(f));
      return true;
    });
    if (over)
      throw ResourceError(name_ + ": more than " + std::to_string(budget_.max_objects) + " objects at bound " +
                          std::to_string(budget_.value_bound));
    objects_ = std::move(out);
  }
  return *objects_;
}

std::vector<PresheafMorphism> PresheafTopos::hom(const PresheafPtr& a, const PresheafPtr& b) const {
  return enumerate_morphisms(a, b, budget_.max_homs);
}

bool PresheafTopos::isomorphic(const Presheaf& a, const Presheaf& b) const { return are_isomorphic(a, b); }

PresheafCocone PresheafTopos::colimit(const PresheafDiagram& d) const {
  PresheafCocone pointwise = presheaf_colimit(d, base_);
  if (!site_) return pointwise;
  auto a = sheafify(pointwise.apex, *site_);
  PresheafCocone out{a.sheaf, {}};
  for (const auto& leg : pointwise.legs) {
    auto l = compose(a.unit, leg);
    l.dom = leg.dom;
    l.cod = a.sheaf;
    out.legs.push_back(std::move(l));
  }
  return out;
}

std::optional<PresheafMorphism> PresheafTopos::mediate(const PresheafDiagram& d, const PresheafCocone& colim,
                                                       const PresheafCocone& other) const {
  if (!is_cocone(d, other)) return std::nullopt;
  PresheafCocone pointwise = presheaf_colimit(d, base_);
  auto psi = fintopos::mediate(pointwise, other);
  if (!psi) return std::nullopt;
  if (!site_) {
    psi->dom = colim.apex;
    return psi;
  }
  // u = unit_Y⁻¹ ∘ a(ψ), the unique map with u∘unit = ψ.
  auto ap = sheafify(pointwise.apex, *site_);
  auto ay = sheafify(other.apex, *site_);
  auto a_psi = sheafify_morphism(*psi, ap, ay, *site_);
  auto u = compose(inverse(ay.unit), a_psi);
  u.dom = colim.apex;
  u.cod = other.apex;
  return u;
}

PresheafCone PresheafTopos::limit(const PresheafDiagram& d) const { return presheaf_limit(d, base_); }

PresheafPtr PresheafTopos::terminal() const { return share(terminal_presheaf(base_)); }

PresheafPtr PresheafTopos::initial() const {
  auto zero = share(initial_presheaf(base_));
  return site_ ? sheafify(zero, *site_).sheaf : zero;
}

PresheafTopos::Reflection PresheafTopos::reflect(const PresheafPtr& f) const {
  if (!site_) return {f, identity_morphism(f)};
  auto a = sheafify(f, *site_);
  return {a.sheaf, a.unit};
}

PresheafMorphism PresheafTopos::reflect_morphism(const PresheafMorphism& phi, const Reflection& rf,
                                                 const Reflection& rg) const {
  if (!site_) {
    PresheafMorphism out = phi;
    out.dom = rf.object;
    out.cod = rg.object;
    return out;
  }
  auto af = sheafify(phi.dom, *site_);
  auto ag = sheafify(phi.cod, *site_);
  auto out = sheafify_morphism(phi, af, ag, *site_);
  out.dom = rf.object;
  out.cod = rg.object;
  return out;
}

ToposPtr presheaf_category(CatPtr base, Budget budget) {
  return std::make_shared<const PresheafTopos>(std::move(base), nullptr, std::move(budget));
}

ToposPtr presheaf_category(CatPtr base, int bound) {
  Budget b;
  b.value_bound = bound;
  return presheaf_category(std::move(base), b);
}

ToposPtr finset_category(Budget budget) { return presheaf_category(terminal_category(), std::move(budget)); }

ToposPtr sheaf_category(std::shared_ptr<const Site> site, Budget budget) {
  CatPtr base = site->base();
  return std::make_shared<const PresheafTopos>(std::move(base), std::move(site), std::move(budget));
}

namespace {

struct ElementOverlap {
  int i, j;
  ObjId w;
  ElemId u, v;
};

// The joint image of the family as a subpresheaf of the codomain, with its inclusion.
PresheafMorphism image_inclusion(const std::vector<PresheafMorphism>& family, const PresheafPtr& a) {
  const FinCategory& c = *a->base;
  std::vector<std::vector<char>> hit(c.num_objects());
  for (ObjId x = 0; x < c.num_objects(); ++x) {
    hit[x].assign(a->size(x), 0);
    for (const auto& m : family)
      for (ElemId e : m.components[x]) hit[x][e] = 1;
  }
  Presheaf im{a->base, std::vector<std::vector<std::string>>(c.num_objects()),
              std::vector<std::vector<ElemId>>(c.num_morphisms())};
  std::vector<std::vector<ElemId>> pos(c.num_objects());
  std::vector<std::vector<ElemId>> incl(c.num_objects());
  for (ObjId x = 0; x < c.num_objects(); ++x) {
    pos[x].assign(a->size(x), -1);
    for (ElemId e = 0; e < a->size(x); ++e)
      if (hit[x][e]) {
        pos[x][e] = im.size(x);
        im.values[x].push_back(a->label(x, e));
        incl[x].push_back(e);
      }
  }
  for (MorId f = 0; f < c.num_morphisms(); ++f)
    for (ElemId e : incl[c.tgt(f)]) im.actions[f].push_back(pos[c.src(f)][a->act(f, e)]);
  return PresheafMorphism{share(std::move(im)), a, std::move(incl)};
}

}  // namespace

HandleStrictEpiVerdict is_strict_epi_family(const PresheafTopos& z, const std::vector<PresheafMorphism>& family,
                                            const PresheafPtr& codomain) {
  const FinCategory& c = *z.base();
  for (const auto& m : family)
    if (!same_shape(*m.cod, *codomain)) throw ContractError("strict epi: family member with another codomain");
  const int k = static_cast<int>(family.size());

  std::vector<ElementOverlap> overlaps;
  for (ObjId w = 0; w < c.num_objects(); ++w)
    for (int i = 0; i < k; ++i)
      for (int j = i; j < k; ++j)
        for (ElemId u = 0; u < family[i].dom->size(w); ++u)
          for (ElemId v = (i == j ? u + 1 : 0); v < family[j].dom->size(w); ++v)
            if (family[i].at(w, u) == family[j].at(w, v)) overlaps.push_back({i, j, w, u, v});

  HandleStrictEpiVerdict out;
  auto check_target = [&](const PresheafPtr& y) -> bool {
    ++out.targets_checked;
    std::vector<std::vector<PresheafMorphism>> homs(k);
    std::vector<std::map<std::vector<std::vector<ElemId>>, int>> index(k);
    for (int i = 0; i < k; ++i) {
      homs[i] = z.hom(family[i].dom, y);
      for (std::size_t t = 0; t < homs[i].size(); ++t) index[i].emplace(homs[i][t].components, static_cast<int>(t));
    }
    std::map<std::vector<int>, int> factorings;
    for (const auto& f : z.hom(codomain, y)) {
      std::vector<int> key;
      for (int i = 0; i < k; ++i) key.push_back(index[i].at(compose(f, family[i]).components));
      ++factorings[key];
    }
    std::vector<int> tuple(k, -1);
    bool good = true;
    auto compatible_upto = [&](int upto) {
      for (const auto& o : overlaps)
        if (o.i <= upto && o.j <= upto &&
            homs[o.i][tuple[o.i]].at(o.w, o.u) != homs[o.j][tuple[o.j]].at(o.w, o.v))
          return false;
      return true;
    };
    auto rec = [&](auto&& self, int i) -> void {
      if (!good) return;
      if (i == k) {
        auto it = factorings.find(tuple);
        int n = it == factorings.end() ? 0 : it->second;
        if (n != 1) {
          good = false;
          out.kind = n == 0 ? "no-factoring" : "non-unique";
          out.target = y;
          for (int t = 0; t < k; ++t) out.tuple.push_back(homs[t][tuple[t]]);
        }
        return;
      }
      for (int t = 0; t < static_cast<int>(homs[i].size()); ++t) {
        tuple[i] = t;
        if (compatible_upto(i)) self(self, i + 1);
      }
    };
    rec(rec, 0);
    return good;
  };

  auto incl = image_inclusion(family, codomain);
  auto cokernel_pair = z.colimit(span_of(incl, incl));
  if (!check_target(cokernel_pair.apex)) return out;
  for (const auto& y : z.objects())
    if (!check_target(y)) return out;
  out.strict_epi = true;
  return out;
}

ValidationReport validate_topos_functor(const ToposFunctor& p) {
  ValidationReport r;
  const FinCategory& c = *p.dom;
  if (static_cast<int>(p.obj.size()) != c.num_objects() || static_cast<int>(p.mor.size()) != c.num_morphisms()) {
    r.add("structure", p.name + ": object or morphism map has the wrong length");
    return r;
  }
  for (ObjId x = 0; x < c.num_objects(); ++x)
    if (!p.cod->contains(*p.obj[x])) r.add("object", p.name + ": image of " + c.object_name(x) + " not in " + p.cod->name(), {x});
  if (!r.ok()) return r;
  for (MorId f = 0; f < c.num_morphisms(); ++f) {
    const auto& m = p.mor[f];
    if (!same_shape(*m.dom, *p.obj[c.src(f)]) || !same_shape(*m.cod, *p.obj[c.tgt(f)]))
      r.add("typing", p.name + ": image of " + c.morphism_name(f) + " has the wrong endpoints", {f});
    else if (!validate_morphism(m).ok())
      r.add("naturality", p.name + ": image of " + c.morphism_name(f) + " is not natural", {f});
  }
  if (!r.ok()) return r;
  for (ObjId x = 0; x < c.num_objects(); ++x)
    if (!same_components(p.mor[c.identity(x)], identity_morphism(p.obj[x])))
      r.add("identity", p.name + ": identity of " + c.object_name(x) + " not preserved", {c.identity(x)});
  for (MorId f = 0; f < c.num_morphisms(); ++f)
    for (MorId g : c.out_of(c.tgt(f)))
      if (!same_components(compose(p.mor[g], p.mor[f]), p.mor[c.compose(g, f)]))
        r.add("composition", p.name + ": composite " + c.morphism_name(g) + "∘" + c.morphism_name(f) + " not preserved",
              {g, f});
  return r;
}

ToposFunctor yoneda_functor(const ToposPtr& presheaves) {
  const CatPtr& c = presheaves->base();
  ToposFunctor h{"h", c, presheaves, {}, {}};
  for (ObjId x = 0; x < c->num_objects(); ++x) h.obj.push_back(share(yoneda_embed(c, x)));
  for (MorId f = 0; f < c->num_morphisms(); ++f) {
    auto m = yoneda_embed_morphism(c, f);
    m.dom = h.obj[c->src(f)];
    m.cod = h.obj[c->tgt(f)];
    h.mor.push_back(std::move(m));
  }
  return h;
}

ToposFunctor yoneda_after(const FinFunctor& f, const ToposPtr& presheaves) {
  if (!same_category(*f.cod, *presheaves->base())) throw ContractError("yoneda_after: handle over another base");
  ToposFunctor h = yoneda_functor(presheaves);
  ToposFunctor out{"h∘" + f.name, f.dom, presheaves, {}, {}};
  for (ObjId x = 0; x < f.dom->num_objects(); ++x) out.obj.push_back(h.obj[f.obj_map[x]]);
  for (MorId m = 0; m < f.dom->num_morphisms(); ++m) out.mor.push_back(h.mor[f.mor_map[m]]);
  return out;
}

ToposFunctor constant_topos_functor(std::string name, CatPtr dom, ToposPtr cod, const PresheafPtr& z) {
  ToposFunctor out{std::move(name), dom, std::move(cod), {}, {}};
  out.obj.assign(dom->num_objects(), z);
  out.mor.assign(dom->num_morphisms(), identity_morphism(z));
  return out;
}

ToposFunctor set_functor(std::string name, CatPtr dom, ToposPtr finset, std::vector<std::vector<std::string>> sets,
                         std::vector<std::vector<ElemId>> maps) {
  if (finset->base() != terminal_category()) throw ContractError("set_functor: codomain is not a finite-set handle");
  if (static_cast<int>(sets.size()) != dom->num_objects() || static_cast<int>(maps.size()) != dom->num_morphisms())
    throw ContractError("set_functor: wrong number of sets or maps");
  ToposFunctor out{std::move(name), dom, std::move(finset), {}, {}};
  for (auto& s : sets) out.obj.push_back(share(finite_set(std::move(s))));
  for (MorId f = 0; f < dom->num_morphisms(); ++f)
    out.mor.push_back(PresheafMorphism{out.obj[dom->src(f)], out.obj[dom->tgt(f)], {std::move(maps[f])}});
  return out;
}

ToposFunctor corepresentable(const CatPtr& c, ObjId x, ToposPtr finset) {
  std::vector<std::vector<std::string>> sets;
  for (ObjId y = 0; y < c->num_objects(); ++y) {
    sets.emplace_back();
    for (MorId g : c->hom(x, y)) sets.back().push_back(c->morphism_name(g));
  }
  std::vector<std::vector<ElemId>> maps;
  for (MorId f = 0; f < c->num_morphisms(); ++f) {
    maps.emplace_back();
    const auto& target = c->hom(x, c->tgt(f));
    for (MorId g : c->hom(x, c->src(f)))
      maps.back().push_back(
          static_cast<ElemId>(std::find(target.begin(), target.end(), c->compose(f, g)) - target.begin()));
  }
  return set_functor("[" + c->object_name(x) + ",-]", c, std::move(finset), std::move(sets), std::move(maps));
}

FullyFaithfulVerdict is_fully_faithful(const ToposFunctor& p) {
  FullyFaithfulVerdict v{true, true, true, std::nullopt};
  const FinCategory& c = *p.dom;
  for (ObjId x = 0; x < c.num_objects(); ++x)
    for (ObjId y = 0; y < c.num_objects(); ++y) {
      auto target = p.cod->hom(p.obj[x], p.obj[y]);
      std::map<std::vector<std::vector<ElemId>>, int> seen;
      for (MorId f : c.hom(x, y)) ++seen[p.mor[f].components];
      bool faithful = seen.size() == c.hom(x, y).size();
      bool full = seen.size() == target.size();
      if (!faithful) v.faithful = false;
      if (!full) v.full = false;
      if ((!faithful || !full) && !v.witness) v.witness = std::make_pair(x, y);
    }
  v.fully_faithful = v.faithful && v.full;
  return v;
}

}  // namespace fintopos
