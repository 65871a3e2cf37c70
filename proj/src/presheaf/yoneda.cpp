#include "fintopos/presheaf/yoneda.hpp"

#include <algorithm>

namespace fintopos {

Presheaf yoneda_embed(const CatPtr& c, ObjId x) {
  if (x < 0 || x >= c->num_objects()) throw ContractError("yoneda_embed: unknown object");
  Presheaf h{c, {}, {}};
  h.values.resize(c->num_objects());
  for (ObjId y = 0; y < c->num_objects(); ++y)
    for (MorId g : c->hom(y, x)) h.values[y].push_back(c->morphism_name(g));
  h.actions.resize(c->num_morphisms());
  for (MorId f = 0; f < c->num_morphisms(); ++f) {
    // f: Y' -> Y, g ∈ hom(Y, X) ↦ g∘f ∈ hom(Y', X)
    for (MorId g : c->hom(c->tgt(f), x)) h.actions[f].push_back(yoneda_element(*c, c->compose(g, f)));
  }
  return h;
}

ElemId yoneda_element(const FinCategory& c, MorId g) {
  const auto& hom = c.hom(c.src(g), c.tgt(g));
  return static_cast<ElemId>(std::find(hom.begin(), hom.end(), g) - hom.begin());
}

PresheafMorphism yoneda_embed_morphism(const CatPtr& c, MorId f) {
  auto hx = share(yoneda_embed(c, c->src(f)));
  auto hy = share(yoneda_embed(c, c->tgt(f)));
  PresheafMorphism m{hx, hy, {}};
  m.components.resize(c->num_objects());
  for (ObjId z = 0; z < c->num_objects(); ++z)
    for (MorId g : c->hom(z, c->src(f))) m.components[z].push_back(yoneda_element(*c, c->compose(f, g)));
  return m;
}

std::optional<ObjId> representing_object(const Presheaf& f) {
  for (ObjId x = 0; x < f.base->num_objects(); ++x)
    if (same_shape(f, yoneda_embed(f.base, x))) return x;
  return std::nullopt;
}

ElemId yoneda_forward(const PresheafMorphism& theta, ObjId x) {
  const CatPtr& c = theta.dom->base;
  if (x < 0 || x >= c->num_objects() || !same_shape(*theta.dom, yoneda_embed(c, x)))
    throw ContractError("yoneda_forward: domain is not the representable at the given object");
  return theta.at(x, yoneda_element(*c, c->identity(x)));
}

ElemId yoneda_forward(const PresheafMorphism& theta) {
  auto x = representing_object(*theta.dom);
  if (!x) throw ContractError("yoneda_forward: domain is not representable");
  return yoneda_forward(theta, *x);
}

PresheafMorphism yoneda_backward(const CatPtr& c, ObjId x, const PresheafPtr& f, ElemId xi) {
  if (!same_category(*c, *f->base)) throw ContractError("yoneda_backward: presheaf lives over another base");
  if (x < 0 || x >= c->num_objects()) throw ContractError("yoneda_backward: unknown object");
  if (xi < 0 || xi >= f->size(x)) throw ContractError("yoneda_backward: element not in F(X)");
  PresheafMorphism theta{share(yoneda_embed(c, x)), f, {}};
  theta.components.resize(c->num_objects());
  for (ObjId y = 0; y < c->num_objects(); ++y)
    for (MorId g : c->hom(y, x)) theta.components[y].push_back(f->act(g, xi));
  if (!is_natural(theta)) throw Error("yoneda_backward: constructed transformation is not natural");
  return theta;
}

}  // namespace fintopos
