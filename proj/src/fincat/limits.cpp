#include "fintopos/fincat/limits.hpp"

namespace fintopos {

const CatPtr& empty_shape() {
  static const CatPtr c = CategoryBuilder("empty").build();
  return c;
}

const CatPtr& discrete_pair_shape() {
  static const CatPtr c = [] {
    CategoryBuilder b("pair");
    b.add_object("0");
    b.add_object("1");
    return b.build();
  }();
  return c;
}

const CatPtr& parallel_pair_shape() {
  static const CatPtr c = [] {
    CategoryBuilder b("parallel");
    b.add_object("0");
    b.add_object("1");
    b.add_morphism("u", "0", "1");
    b.add_morphism("v", "0", "1");
    return b.build();
  }();
  return c;
}

const CatPtr& cospan_shape() {
  static const CatPtr c = [] {
    CategoryBuilder b("cospan");
    b.add_object("0");
    b.add_object("1");
    b.add_object("2");
    b.add_morphism("l", "0", "2");
    b.add_morphism("r", "1", "2");
    return b.build();
  }();
  return c;
}

namespace {

// Cones and cocones differ only in the direction of the legs; `into` selects it.
template <class ConeT>
std::vector<ConeT> enumerate_impl(const FinFunctor& diagram, bool legs_out_of_apex) {
  const FinCategory& idx = *diagram.dom;
  const FinCategory& c = *diagram.cod;
  const int k = idx.num_objects();
  std::vector<ConeT> out;
  for (ObjId apex = 0; apex < c.num_objects(); ++apex) {
    std::vector<MorId> legs(k, kNone);
    auto leg_choices = [&](ObjId i) -> const std::vector<MorId>& {
      return legs_out_of_apex ? c.hom(apex, diagram.obj_map[i]) : c.hom(diagram.obj_map[i], apex);
    };
    auto consistent = [&](ObjId upto) {
      for (MorId u = 0; u < idx.num_morphisms(); ++u) {
        ObjId i = idx.src(u), j = idx.tgt(u);
        if (i > upto || j > upto) continue;
        MorId du = diagram.mor_map[u];
        if (legs_out_of_apex) {
          if (c.compose(du, legs[i]) != legs[j]) return false;
        } else {
          if (c.compose(legs[j], du) != legs[i]) return false;
        }
      }
      return true;
    };
    auto rec = [&](auto&& self, ObjId i) -> void {
      if (i == k) {
        out.push_back(ConeT{diagram, apex, legs});
        return;
      }
      for (MorId leg : leg_choices(i)) {
        legs[i] = leg;
        if (consistent(i)) self(self, i + 1);
      }
      legs[i] = kNone;
    };
    rec(rec, 0);
  }
  return out;
}

}  // namespace

std::vector<Cone> enumerate_cones(const FinFunctor& diagram) {
  return enumerate_impl<Cone>(diagram, true);
}

std::vector<Cocone> enumerate_cocones(const FinFunctor& diagram) {
  return enumerate_impl<Cocone>(diagram, false);
}

int count_factorizations(const Cone& limit, const Cone& other) {
  const FinCategory& c = *limit.diagram.cod;
  int count = 0;
  for (MorId u : c.hom(other.apex, limit.apex)) {
    bool ok = true;
    for (std::size_t i = 0; i < limit.legs.size() && ok; ++i)
      ok = c.compose(limit.legs[i], u) == other.legs[i];
    if (ok) ++count;
  }
  return count;
}

int count_factorizations(const Cocone& colimit, const Cocone& other) {
  const FinCategory& c = *colimit.diagram.cod;
  int count = 0;
  for (MorId u : c.hom(colimit.apex, other.apex)) {
    bool ok = true;
    for (std::size_t i = 0; i < colimit.legs.size() && ok; ++i)
      ok = c.compose(u, colimit.legs[i]) == other.legs[i];
    if (ok) ++count;
  }
  return count;
}

std::optional<Cone> universal_cone_search(const FinFunctor& diagram) {
  auto cones = enumerate_cones(diagram);
  for (const Cone& candidate : cones) {
    bool universal = true;
    for (const Cone& other : cones)
      if (count_factorizations(candidate, other) != 1) {
        universal = false;
        break;
      }
    if (universal) return candidate;
  }
  return std::nullopt;
}

std::optional<Cocone> universal_cocone_search(const FinFunctor& diagram) {
  auto cocones = enumerate_cocones(diagram);
  for (const Cocone& candidate : cocones) {
    bool universal = true;
    for (const Cocone& other : cocones)
      if (count_factorizations(candidate, other) != 1) {
        universal = false;
        break;
      }
    if (universal) return candidate;
  }
  return std::nullopt;
}

FinFunctor cospan_diagram(CatPtr c, MorId f, MorId g) {
  if (c->tgt(f) != c->tgt(g)) throw ContractError("cospan_diagram: targets differ");
  const CatPtr& s = cospan_shape();
  FinFunctor d{"cospan", s, c, {c->src(f), c->src(g), c->tgt(f)}, {}};
  d.mor_map.assign(s->num_morphisms(), kNone);
  for (ObjId i = 0; i < 3; ++i) d.mor_map[s->identity(i)] = c->identity(d.obj_map[i]);
  d.mor_map[s->morphism("l")] = f;
  d.mor_map[s->morphism("r")] = g;
  return d;
}

FinFunctor pair_diagram(CatPtr c, ObjId a, ObjId b) {
  const CatPtr& s = discrete_pair_shape();
  FinFunctor d{"pair", s, c, {a, b}, {}};
  d.mor_map.assign(s->num_morphisms(), kNone);
  d.mor_map[s->identity(0)] = c->identity(a);
  d.mor_map[s->identity(1)] = c->identity(b);
  return d;
}

FinFunctor parallel_diagram(CatPtr c, MorId u, MorId v) {
  if (c->src(u) != c->src(v) || c->tgt(u) != c->tgt(v))
    throw ContractError("parallel_diagram: morphisms are not parallel");
  const CatPtr& s = parallel_pair_shape();
  FinFunctor d{"parallel", s, c, {c->src(u), c->tgt(u)}, {}};
  d.mor_map.assign(s->num_morphisms(), kNone);
  d.mor_map[s->identity(0)] = c->identity(c->src(u));
  d.mor_map[s->identity(1)] = c->identity(c->tgt(u));
  d.mor_map[s->morphism("u")] = u;
  d.mor_map[s->morphism("v")] = v;
  return d;
}

FinFunctor empty_diagram(CatPtr c) { return FinFunctor{"empty", empty_shape(), std::move(c), {}, {}}; }

CofilteredVerdict is_cofiltered(const FinCategory& c) {
  const int n = c.num_objects();
  if (n == 0) return {false, "empty", {}};
  // reach[w][x]: some morphism w -> x exists.
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (MorId f = 0; f < c.num_morphisms(); ++f) reach[c.src(f)][c.tgt(f)] = 1;
  for (ObjId a = 0; a < n; ++a)
    for (ObjId b = a + 1; b < n; ++b) {
      bool found = false;
      for (ObjId w = 0; w < n && !found; ++w) found = reach[w][a] && reach[w][b];
      if (!found) return {false, "span", {a, b}};
    }
  for (ObjId a = 0; a < n; ++a)
    for (ObjId b = 0; b < n; ++b) {
      const auto& hom = c.hom(a, b);
      for (std::size_t i = 0; i < hom.size(); ++i)
        for (std::size_t j = i + 1; j < hom.size(); ++j) {
          bool found = false;
          for (MorId w : c.into(a)) {
            if (c.compose(hom[i], w) == c.compose(hom[j], w)) {
              found = true;
              break;
            }
          }
          if (!found) return {false, "equalize", {hom[i], hom[j]}};
        }
    }
  return {true, {}, {}};
}

}  // namespace fintopos
