#include "fintopos/presheaf/diagram.hpp"

#include <map>
#include <numeric>

#include "fintopos/fincat/limits.hpp"
#include "fintopos/presheaf/yoneda.hpp"

namespace fintopos {

ValidationReport validate_diagram(const PresheafDiagram& d) {
  ValidationReport report;
  const FinCategory& s = *d.shape;
  if (static_cast<int>(d.nodes.size()) != s.num_objects() ||
      static_cast<int>(d.arrows.size()) != s.num_morphisms()) {
    report.add("structure", "diagram does not cover its shape");
    return report;
  }
  for (std::size_t i = 1; i < d.nodes.size(); ++i)
    if (!same_category(*d.nodes[i]->base, *d.nodes[0]->base))
      report.add("base", "diagram nodes live over different bases", {static_cast<int>(i)});
  for (MorId u = 0; u < s.num_morphisms(); ++u) {
    const auto& a = d.arrows[u];
    if (!same_shape(*a.dom, *d.nodes[s.src(u)]) || !same_shape(*a.cod, *d.nodes[s.tgt(u)]))
      report.add("typing", "arrow '" + s.morphism_name(u) + "' has the wrong endpoints", {u});
    else if (!is_natural(a))
      report.add("naturality", "arrow '" + s.morphism_name(u) + "' is not natural", {u});
  }
  if (!report.ok()) return report;
  for (ObjId i = 0; i < s.num_objects(); ++i)
    if (!same_components(d.arrows[s.identity(i)], identity_morphism(d.nodes[i])))
      report.add("identity", "identity arrow is not the identity", {i});
  for (MorId v = 0; v < s.num_morphisms(); ++v)
    for (MorId u : s.into(s.src(v)))
      if (!same_components(d.arrows[s.compose(v, u)], compose(d.arrows[v], d.arrows[u])))
        report.add("composition", "D(v∘u) != D(v)∘D(u)", {v, u});
  return report;
}

bool is_cocone(const PresheafDiagram& d, const PresheafCocone& c) {
  const FinCategory& s = *d.shape;
  for (MorId u = 0; u < s.num_morphisms(); ++u)
    if (!same_components(compose(c.legs[s.tgt(u)], d.arrows[u]), c.legs[s.src(u)])) return false;
  return true;
}

bool is_cone(const PresheafDiagram& d, const PresheafCone& c) {
  const FinCategory& s = *d.shape;
  for (MorId u = 0; u < s.num_morphisms(); ++u)
    if (!same_components(compose(d.arrows[u], c.legs[s.src(u)]), c.legs[s.tgt(u)])) return false;
  return true;
}

namespace {

const CatPtr& base_of(const PresheafDiagram& d) {
  if (d.base) return d.base;
  if (d.nodes.empty()) throw ContractError("diagram is empty; pass the base explicitly");
  return d.nodes[0]->base;
}

void check_bases(const PresheafDiagram& d, const CatPtr& base) {
  for (const auto& n : d.nodes)
    if (!same_category(*n->base, *base)) throw ContractError("diagram nodes live over different bases");
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  }
  // Keep the smaller index as root so roots are the smallest members.
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) parent[b] = a;
    else parent[a] = b;
  }
};

}  // namespace

PresheafCocone presheaf_colimit(const PresheafDiagram& d) { return presheaf_colimit(d, base_of(d)); }

PresheafCocone presheaf_colimit(const PresheafDiagram& d, const CatPtr& base) {
  check_bases(d, base);
  const FinCategory& s = *d.shape;
  const FinCategory& c = *base;
  const int k = s.num_objects();
  const int n = c.num_objects();

  Presheaf apex{base, std::vector<std::vector<std::string>>(n), {}};
  // member (i, e) at X ↦ class index at X
  std::vector<std::vector<std::vector<ElemId>>> class_of(k, std::vector<std::vector<ElemId>>(n));
  std::vector<std::vector<std::pair<int, ElemId>>> rep(n);

  for (ObjId x = 0; x < n; ++x) {
    std::vector<int> offset(k + 1, 0);
    for (ObjId i = 0; i < k; ++i) offset[i + 1] = offset[i] + d.nodes[i]->size(x);
    UnionFind uf(offset[k]);
    for (MorId u = 0; u < s.num_morphisms(); ++u) {
      ObjId i = s.src(u), j = s.tgt(u);
      for (ElemId e = 0; e < d.nodes[i]->size(x); ++e)
        uf.unite(offset[i] + e, offset[j] + d.arrows[u].at(x, e));
    }
    std::vector<int> cls(offset[k], kNone);
    for (ObjId i = 0; i < k; ++i) {
      class_of[i][x].resize(d.nodes[i]->size(x));
      for (ElemId e = 0; e < d.nodes[i]->size(x); ++e) {
        int root = uf.find(offset[i] + e);
        if (cls[root] == kNone) {
          cls[root] = static_cast<int>(rep[x].size());
          rep[x].emplace_back(i, e);
          apex.values[x].push_back(s.object_name(i) + "." + d.nodes[i]->label(x, e));
        }
        class_of[i][x][e] = cls[root];
      }
    }
  }
  apex.actions.resize(c.num_morphisms());
  for (MorId f = 0; f < c.num_morphisms(); ++f) {
    ObjId src = c.src(f), tgt = c.tgt(f);
    for (auto [i, e] : rep[tgt]) apex.actions[f].push_back(class_of[i][src][d.nodes[i]->act(f, e)]);
  }
  PresheafCocone out{share(std::move(apex)), {}};
  for (ObjId i = 0; i < k; ++i) out.legs.push_back(PresheafMorphism{d.nodes[i], out.apex, class_of[i]});
  return out;
}

PresheafCone presheaf_limit(const PresheafDiagram& d) { return presheaf_limit(d, base_of(d)); }

PresheafCone presheaf_limit(const PresheafDiagram& d, const CatPtr& base) {
  check_bases(d, base);
  const FinCategory& s = *d.shape;
  const FinCategory& c = *base;
  const int k = s.num_objects();
  const int n = c.num_objects();

  std::vector<std::vector<MorId>> checks(k);
  for (MorId u = 0; u < s.num_morphisms(); ++u) checks[std::max(s.src(u), s.tgt(u))].push_back(u);

  Presheaf apex{base, std::vector<std::vector<std::string>>(n), {}};
  std::vector<std::vector<std::vector<ElemId>>> tuples(n);
  std::vector<std::map<std::vector<ElemId>, ElemId>> index(n);
  for (ObjId x = 0; x < n; ++x) {
    std::vector<ElemId> t(k, kNone);
    auto rec = [&](auto&& self, int i) -> void {
      if (i == k) {
        index[x].emplace(t, static_cast<ElemId>(tuples[x].size()));
        tuples[x].push_back(t);
        std::string label = "(";
        for (int j = 0; j < k; ++j) {
          if (j) label += ",";
          label += d.nodes[j]->label(x, t[j]);
        }
        apex.values[x].push_back(label + ")");
        return;
      }
      for (ElemId e = 0; e < d.nodes[i]->size(x); ++e) {
        t[i] = e;
        bool ok = true;
        for (MorId u : checks[i])
          if (d.arrows[u].at(x, t[s.src(u)]) != t[s.tgt(u)]) {
            ok = false;
            break;
          }
        if (ok) self(self, i + 1);
      }
      t[i] = kNone;
    };
    rec(rec, 0);
  }
  apex.actions.resize(c.num_morphisms());
  for (MorId f = 0; f < c.num_morphisms(); ++f) {
    ObjId src = c.src(f), tgt = c.tgt(f);
    for (const auto& t : tuples[tgt]) {
      std::vector<ElemId> r(k);
      for (int i = 0; i < k; ++i) r[i] = d.nodes[i]->act(f, t[i]);
      apex.actions[f].push_back(index[src].at(r));
    }
  }
  PresheafCone out{share(std::move(apex)), {}};
  for (ObjId i = 0; i < k; ++i) {
    PresheafMorphism leg{out.apex, d.nodes[i], std::vector<std::vector<ElemId>>(n)};
    for (ObjId x = 0; x < n; ++x)
      for (const auto& t : tuples[x]) leg.components[x].push_back(t[i]);
    out.legs.push_back(std::move(leg));
  }
  return out;
}

std::optional<PresheafMorphism> mediate(const PresheafCocone& colimit, const PresheafCocone& other) {
  const Presheaf& apex = *colimit.apex;
  const int n = apex.base->num_objects();
  PresheafMorphism u{colimit.apex, other.apex, std::vector<std::vector<ElemId>>(n)};
  for (ObjId x = 0; x < n; ++x) {
    u.components[x].assign(apex.size(x), kNone);
    for (std::size_t i = 0; i < colimit.legs.size(); ++i)
      for (ElemId e = 0; e < colimit.legs[i].dom->size(x); ++e) {
        ElemId c = colimit.legs[i].at(x, e);
        ElemId v = other.legs[i].at(x, e);
        if (u.components[x][c] == kNone) u.components[x][c] = v;
        else if (u.components[x][c] != v) return std::nullopt;
      }
    for (ElemId c : u.components[x])
      if (c == kNone) throw ContractError("mediate: colimit cocone is not jointly surjective");
  }
  if (!is_natural(u)) return std::nullopt;
  return u;
}

std::optional<PresheafMorphism> mediate(const PresheafCone& limit, const PresheafCone& other) {
  const Presheaf& apex = *limit.apex;
  const int n = apex.base->num_objects();
  const std::size_t k = limit.legs.size();
  PresheafMorphism u{other.apex, limit.apex, std::vector<std::vector<ElemId>>(n)};
  for (ObjId x = 0; x < n; ++x) {
    std::map<std::vector<ElemId>, ElemId> index;
    for (ElemId t = 0; t < apex.size(x); ++t) {
      std::vector<ElemId> key(k);
      for (std::size_t i = 0; i < k; ++i) key[i] = limit.legs[i].at(x, t);
      if (!index.emplace(key, t).second)
        throw ContractError("mediate: limit cone is not jointly injective");
    }
    for (ElemId z = 0; z < other.apex->size(x); ++z) {
      std::vector<ElemId> key(k);
      for (std::size_t i = 0; i < k; ++i) key[i] = other.legs[i].at(x, z);
      auto it = index.find(key);
      if (it == index.end()) return std::nullopt;
      u.components[x].push_back(it->second);
    }
  }
  if (!is_natural(u)) return std::nullopt;
  return u;
}

namespace {

template <class ConeT, bool kCocone>
std::vector<ConeT> enumerate_cone_impl(const PresheafDiagram& d, const PresheafPtr& apex) {
  const FinCategory& s = *d.shape;
  const int k = s.num_objects();
  std::vector<std::vector<PresheafMorphism>> choices(k);
  for (ObjId i = 0; i < k; ++i)
    choices[i] = kCocone ? enumerate_morphisms(d.nodes[i], apex) : enumerate_morphisms(apex, d.nodes[i]);
  std::vector<std::vector<MorId>> checks(k);
  for (MorId u = 0; u < s.num_morphisms(); ++u) checks[std::max(s.src(u), s.tgt(u))].push_back(u);
  std::vector<ConeT> out;
  std::vector<int> pick(k, kNone);
  auto rec = [&](auto&& self, int i) -> void {
    if (i == k) {
      ConeT c{apex, {}};
      for (int j = 0; j < k; ++j) c.legs.push_back(choices[j][pick[j]]);
      out.push_back(std::move(c));
      return;
    }
    for (int p = 0; p < static_cast<int>(choices[i].size()); ++p) {
      pick[i] = p;
      bool ok = true;
      for (MorId u : checks[i]) {
        const auto& leg_src = choices[s.src(u)][pick[s.src(u)]];
        const auto& leg_tgt = choices[s.tgt(u)][pick[s.tgt(u)]];
        if constexpr (kCocone) ok = same_components(compose(leg_tgt, d.arrows[u]), leg_src);
        else ok = same_components(compose(d.arrows[u], leg_src), leg_tgt);
        if (!ok) break;
      }
      if (ok) self(self, i + 1);
    }
  };
  rec(rec, 0);
  return out;
}

}  // namespace

std::vector<PresheafCocone> enumerate_cocones(const PresheafDiagram& d, const PresheafPtr& apex) {
  return enumerate_cone_impl<PresheafCocone, true>(d, apex);
}

std::vector<PresheafCone> enumerate_cones(const PresheafDiagram& d, const PresheafPtr& apex) {
  return enumerate_cone_impl<PresheafCone, false>(d, apex);
}

int count_factorizations(const PresheafCocone& colimit, const PresheafCocone& other) {
  int count = 0;
  for (const auto& u : enumerate_morphisms(colimit.apex, other.apex)) {
    bool ok = true;
    for (std::size_t i = 0; i < colimit.legs.size() && ok; ++i)
      ok = same_components(compose(u, colimit.legs[i]), other.legs[i]);
    if (ok) ++count;
  }
  return count;
}

int count_factorizations(const PresheafCone& limit, const PresheafCone& other) {
  int count = 0;
  for (const auto& u : enumerate_morphisms(other.apex, limit.apex)) {
    bool ok = true;
    for (std::size_t i = 0; i < limit.legs.size() && ok; ++i)
      ok = same_components(compose(limit.legs[i], u), other.legs[i]);
    if (ok) ++count;
  }
  return count;
}

const CatPtr& span_shape() {
  static const CatPtr c = [] {
    CategoryBuilder b("span");
    b.add_object("0");
    b.add_object("1");
    b.add_object("2");
    b.add_morphism("l", "2", "0");
    b.add_morphism("r", "2", "1");
    return b.build();
  }();
  return c;
}

namespace {

PresheafDiagram with_identities(const CatPtr& shape, std::vector<PresheafPtr> nodes) {
  PresheafDiagram d{shape, std::move(nodes), {}};
  d.arrows.resize(shape->num_morphisms());
  for (ObjId i = 0; i < shape->num_objects(); ++i)
    d.arrows[shape->identity(i)] = identity_morphism(d.nodes[i]);
  return d;
}

}  // namespace

PresheafDiagram pair_of(const PresheafPtr& a, const PresheafPtr& b) {
  return with_identities(discrete_pair_shape(), {a, b});
}

PresheafDiagram parallel_of(const PresheafMorphism& u, const PresheafMorphism& v) {
  if (!same_shape(*u.dom, *v.dom) || !same_shape(*u.cod, *v.cod))
    throw ContractError("parallel_of: morphisms are not parallel");
  const CatPtr& s = parallel_pair_shape();
  auto d = with_identities(s, {u.dom, u.cod});
  d.arrows[s->morphism("u")] = u;
  d.arrows[s->morphism("v")] = v;
  return d;
}

PresheafDiagram cospan_of(const PresheafMorphism& f, const PresheafMorphism& g) {
  if (!same_shape(*f.cod, *g.cod)) throw ContractError("cospan_of: codomains differ");
  const CatPtr& s = cospan_shape();
  auto d = with_identities(s, {f.dom, g.dom, f.cod});
  d.arrows[s->morphism("l")] = f;
  d.arrows[s->morphism("r")] = g;
  return d;
}

PresheafDiagram span_of(const PresheafMorphism& f, const PresheafMorphism& g) {
  if (!same_shape(*f.dom, *g.dom)) throw ContractError("span_of: domains differ");
  const CatPtr& s = span_shape();
  auto d = with_identities(s, {f.cod, g.cod, f.dom});
  d.arrows[s->morphism("l")] = f;
  d.arrows[s->morphism("r")] = g;
  return d;
}

PresheafDiagram empty_of(const CatPtr& base) { return PresheafDiagram{empty_shape(), {}, {}, base}; }

ObjId ElementsCategory::object_of(ObjId x, ElemId e) const {
  for (ObjId i = 0; i < static_cast<ObjId>(elements.size()); ++i)
    if (elements[i] == std::make_pair(x, e)) return i;
  throw ContractError("elements category: no such element");
}

ElementsCategory elements_category(const Presheaf& f) {
  const FinCategory& c = *f.base;
  CategoryData data;
  data.name = "Γ";
  ElementsCategory out;
  std::vector<std::vector<ObjId>> obj_of(c.num_objects());
  for (ObjId x = 0; x < c.num_objects(); ++x)
    for (ElemId e = 0; e < f.size(x); ++e) {
      obj_of[x].push_back(static_cast<ObjId>(out.elements.size()));
      out.elements.emplace_back(x, e);
      data.objects.push_back(f.label(x, e) + "@" + c.object_name(x));
    }
  // arrow (f@y): (F(f)y, X) -> (y, Y)
  std::vector<std::vector<MorId>> mor_of(c.num_morphisms());
  for (MorId m = 0; m < c.num_morphisms(); ++m) {
    ObjId x = c.src(m), y = c.tgt(m);
    for (ElemId e = 0; e < f.size(y); ++e) {
      mor_of[m].push_back(static_cast<MorId>(data.morphisms.size()));
      out.base_morphism.push_back(m);
      data.morphisms.push_back({c.morphism_name(m) + "@" + f.label(y, e), obj_of[x][f.act(m, e)], obj_of[y][e]});
    }
  }
  data.identity.resize(data.objects.size());
  for (ObjId i = 0; i < static_cast<ObjId>(out.elements.size()); ++i) {
    auto [x, e] = out.elements[i];
    data.identity[i] = mor_of[c.identity(x)][e];
  }
  const std::size_t m = data.morphisms.size();
  data.compose.assign(m * m, kNone);
  // the arrow with index a is (base_morphism[a] @ element at its target)
  std::vector<ElemId> at_target(m);
  for (MorId mm = 0; mm < c.num_morphisms(); ++mm)
    for (std::size_t k = 0; k < mor_of[mm].size(); ++k) at_target[mor_of[mm][k]] = static_cast<ElemId>(k);
  for (std::size_t g = 0; g < m; ++g)
    for (std::size_t h = 0; h < m; ++h) {
      if (data.morphisms[h].tgt != data.morphisms[g].src) continue;
      MorId gf = c.compose(out.base_morphism[g], out.base_morphism[h]);
      data.compose[g * m + h] = mor_of[gf][at_target[g]];
    }
  out.gamma = make_trusted_category(std::move(data));
  out.projection = FinFunctor{"π", out.gamma, f.base, {}, out.base_morphism};
  for (auto [x, e] : out.elements) out.projection.obj_map.push_back(x);
  return out;
}

DensityData category_of_elements(const PresheafPtr& f) {
  const CatPtr& c = f->base;
  DensityData out{elements_category(*f), {}, {}};
  const FinCategory& g = *out.elements.gamma;
  std::vector<PresheafPtr> reps;
  for (ObjId x = 0; x < c->num_objects(); ++x) reps.push_back(share(yoneda_embed(c, x)));
  out.diamond.shape = out.elements.gamma;
  for (auto [x, e] : out.elements.elements) out.diamond.nodes.push_back(reps[x]);
  for (MorId a = 0; a < g.num_morphisms(); ++a) {
    PresheafMorphism hf = yoneda_embed_morphism(c, out.elements.base_morphism[a]);
    hf.dom = reps[c->src(out.elements.base_morphism[a])];
    hf.cod = reps[c->tgt(out.elements.base_morphism[a])];
    out.diamond.arrows.push_back(std::move(hf));
  }
  out.lambda.apex = f;
  for (auto [x, e] : out.elements.elements) {
    auto leg = yoneda_backward(c, x, f, e);
    leg.dom = reps[x];
    out.lambda.legs.push_back(std::move(leg));
  }
  return out;
}

IsoWitness density_check(const PresheafPtr& f) {
  DensityData data = category_of_elements(f);
  PresheafCocone colim = presheaf_colimit(data.diamond, f->base);
  IsoWitness out;
  out.comparison = mediate(colim, data.lambda);
  if (!out.comparison) return out;
  const auto& comp = *out.comparison;
  for (ObjId x = 0; x < f->base->num_objects(); ++x) {
    std::vector<int> hits(f->size(x), 0);
    for (ElemId e : comp.components[x]) ++hits[e];
    for (ElemId e = 0; e < f->size(x); ++e)
      if (hits[e] != 1) {
        out.counterexample = std::make_pair(x, e);
        return out;
      }
  }
  out.iso = is_iso(comp);
  return out;
}

}  // namespace fintopos
