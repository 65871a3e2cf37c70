#include "fintopos/fincat/functor.hpp"

#include <algorithm>

namespace fintopos {

ValidationReport validate_functor(const FinFunctor& fun) {
  ValidationReport report;
  if (!fun.dom || !fun.cod) {
    report.add("structure", "functor '" + fun.name + "' lacks a domain or codomain");
    return report;
  }
  const FinCategory& c = *fun.dom;
  const FinCategory& d = *fun.cod;
  if (static_cast<int>(fun.obj_map.size()) != c.num_objects())
    report.add("structure", "object map does not cover the domain");
  if (static_cast<int>(fun.mor_map.size()) != c.num_morphisms())
    report.add("structure", "morphism map does not cover the domain");
  if (!report.ok()) return report;
  for (ObjId x = 0; x < c.num_objects(); ++x)
    if (fun.obj_map[x] < 0 || fun.obj_map[x] >= d.num_objects())
      report.add("unmapped", "object '" + c.object_name(x) + "' is mapped outside the codomain", {x});
  for (MorId f = 0; f < c.num_morphisms(); ++f)
    if (fun.mor_map[f] < 0 || fun.mor_map[f] >= d.num_morphisms())
      report.add("unmapped", "morphism '" + c.morphism_name(f) + "' is mapped outside the codomain", {f});
  if (!report.ok()) return report;

  for (MorId f = 0; f < c.num_morphisms(); ++f) {
    MorId ff = fun.mor_map[f];
    if (d.src(ff) != fun.obj_map[c.src(f)] || d.tgt(ff) != fun.obj_map[c.tgt(f)])
      report.add("typing", "image of '" + c.morphism_name(f) + "' has the wrong source or target", {f});
  }
  if (!report.ok()) return report;
  for (ObjId x = 0; x < c.num_objects(); ++x)
    if (fun.mor_map[c.identity(x)] != d.identity(fun.obj_map[x]))
      report.add("identity", "identity of '" + c.object_name(x) + "' is not preserved", {c.identity(x)});
  for (MorId g = 0; g < c.num_morphisms(); ++g)
    for (MorId f : c.into(c.src(g))) {
      MorId gf = c.compose(g, f);
      if (fun.mor_map[gf] != d.compose(fun.mor_map[g], fun.mor_map[f]))
        report.add("composition", "F(g∘f) != F(g)∘F(f)", {g, f});
    }
  return report;
}

FinFunctor identity_functor(CatPtr c) {
  FinFunctor f{"id", c, c, {}, {}};
  for (ObjId x = 0; x < c->num_objects(); ++x) f.obj_map.push_back(x);
  for (MorId m = 0; m < c->num_morphisms(); ++m) f.mor_map.push_back(m);
  return f;
}

FinFunctor constant_functor(CatPtr dom, CatPtr cod, ObjId z) {
  if (z < 0 || z >= cod->num_objects()) throw ContractError("constant_functor: unknown object");
  FinFunctor f{"const", dom, cod, {}, {}};
  f.obj_map.assign(dom->num_objects(), z);
  f.mor_map.assign(dom->num_morphisms(), cod->identity(z));
  return f;
}

FinFunctor compose(const FinFunctor& g, const FinFunctor& f) {
  if (!same_category(*f.cod, *g.dom)) throw ContractError("compose: functors are not composable");
  FinFunctor h{g.name + "∘" + f.name, f.dom, g.cod, {}, {}};
  for (ObjId x : f.obj_map) h.obj_map.push_back(g.obj_map[x]);
  for (MorId m : f.mor_map) h.mor_map.push_back(g.mor_map[m]);
  return h;
}

FinFunctor opposite(const FinFunctor& f, CatPtr dom_op, CatPtr cod_op) {
  return FinFunctor{f.name + "^op", std::move(dom_op), std::move(cod_op), f.obj_map, f.mor_map};
}

bool is_natural(const NatTransf& alpha) {
  const FinFunctor& f = *alpha.dom;
  const FinFunctor& g = *alpha.cod;
  const FinCategory& c = *f.dom;
  const FinCategory& d = *f.cod;
  for (MorId m = 0; m < c.num_morphisms(); ++m) {
    MorId lhs = d.try_compose(g.mor_map[m], alpha.components[c.src(m)]);
    MorId rhs = d.try_compose(alpha.components[c.tgt(m)], f.mor_map[m]);
    if (lhs == kNone || lhs != rhs) return false;
  }
  return true;
}

std::vector<NatTransf> enumerate_nat_transfs(const FinFunctor& f, const FinFunctor& g) {
  if (!same_category(*f.dom, *g.dom) || !same_category(*f.cod, *g.cod))
    throw ContractError("enumerate_nat_transfs: functors are not parallel");
  const FinCategory& c = *f.dom;
  const FinCategory& d = *f.cod;
  const int n = c.num_objects();
  auto fp = std::make_shared<const FinFunctor>(f);
  auto gp = std::make_shared<const FinFunctor>(g);

  std::vector<std::vector<MorId>> choices(n);
  for (ObjId x = 0; x < n; ++x) choices[x] = d.hom(f.obj_map[x], g.obj_map[x]);

  // A square for m: X -> Y is checked once both components are chosen.
  std::vector<std::vector<MorId>> squares(n);
  for (MorId m = 0; m < c.num_morphisms(); ++m)
    squares[std::max(c.src(m), c.tgt(m))].push_back(m);

  std::vector<NatTransf> out;
  std::vector<MorId> comp(n, kNone);
  auto rec = [&](auto&& self, ObjId x) -> void {
    if (x == n) {
      out.push_back(NatTransf{fp, gp, comp});
      return;
    }
    for (MorId a : choices[x]) {
      comp[x] = a;
      bool ok = true;
      for (MorId m : squares[x]) {
        if (d.compose(g.mor_map[m], comp[c.src(m)]) != d.compose(comp[c.tgt(m)], f.mor_map[m])) {
          ok = false;
          break;
        }
      }
      if (ok) self(self, x + 1);
    }
    comp[x] = kNone;
  };
  rec(rec, 0);
  return out;
}

FullyFaithfulVerdict is_fully_faithful(const FinFunctor& fun) {
  const FinCategory& c = *fun.dom;
  const FinCategory& d = *fun.cod;
  FullyFaithfulVerdict v{true, true, true, std::nullopt};
  for (ObjId x = 0; x < c.num_objects(); ++x)
    for (ObjId y = 0; y < c.num_objects(); ++y) {
      std::vector<MorId> image;
      for (MorId m : c.hom(x, y)) image.push_back(fun.mor_map[m]);
      std::sort(image.begin(), image.end());
      const std::size_t distinct =
          static_cast<std::size_t>(std::unique(image.begin(), image.end()) - image.begin());
      const bool injective = distinct == c.hom(x, y).size();
      const bool surjective = distinct == d.hom(fun.obj_map[x], fun.obj_map[y]).size();
      if (!injective) v.faithful = false;
      if (!surjective) v.full = false;
      if ((!injective || !surjective) && !v.witness) v.witness = std::make_pair(x, y);
    }
  v.fully_faithful = v.faithful && v.full;
  return v;
}

}  // namespace fintopos
