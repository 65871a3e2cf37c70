#include "fintopos/kan/extension.hpp"

#include "fintopos/presheaf/yoneda.hpp"

namespace fintopos {

const PresheafMorphism& ExtensionValue::leg(ObjId x, ElemId e) const {
  return cocone.legs[elements.object_of(x, e)];
}

ExtensionValue tilde_extend(const ToposFunctor& p, const PresheafPtr& h) {
  if (!(*h->base == *p.dom)) throw ContractError("tilde_extend: presheaf lives over " + h->base->name());
  ExtensionValue out;
  out.input = h;
  out.elements = elements_category(*h);
  out.diagram.shape = out.elements.gamma;
  out.diagram.base = p.cod->base();
  for (auto [x, e] : out.elements.elements) out.diagram.nodes.push_back(p.obj[x]);
  for (MorId f : out.elements.base_morphism) out.diagram.arrows.push_back(p.mor[f]);
  out.cocone = p.cod->colimit(out.diagram);
  return out;
}

CocontinuousExtension::CocontinuousExtension(ToposFunctor p) : p_(std::move(p)) {}

std::shared_ptr<const ExtensionValue> CocontinuousExtension::operator()(const PresheafPtr& h) const {
  const std::uint64_t key = digest(*h);
  {
    std::lock_guard lock(mutex_);
    auto it = memo_.find(key);
    if (it != memo_.end())
      for (const auto& v : it->second)
        if (*v->input == *h) return v;
  }
  auto value = std::make_shared<const ExtensionValue>(tilde_extend(p_, h));
  std::lock_guard lock(mutex_);
  auto& bucket = memo_[key];
  for (const auto& v : bucket)
    if (*v->input == *h) return v;
  bucket.push_back(value);
  return value;
}

PresheafMorphism CocontinuousExtension::on_morphism(const PresheafMorphism& theta) const {
  auto eh = (*this)(theta.dom);
  auto eh2 = (*this)(theta.cod);
  PresheafCocone other{eh2->object(), {}};
  for (auto [x, e] : eh->elements.elements) other.legs.push_back(eh2->leg(x, theta.at(x, e)));
  auto u = p_.cod->mediate(eh->diagram, eh->cocone, other);
  if (!u) throw ContractError("tilde_extend: the transformation is not natural");
  return *u;
}

std::size_t CocontinuousExtension::memo_size() const {
  std::lock_guard lock(mutex_);
  std::size_t n = 0;
  for (const auto& [k, bucket] : memo_) n += bucket.size();
  return n;
}

ExtensionPtr make_extension(ToposFunctor p) { return std::make_shared<const CocontinuousExtension>(std::move(p)); }

EtaVerdict eta_iso(const CocontinuousExtension& ext) {
  const ToposFunctor& p = ext.functor();
  const CatPtr& c = p.dom;
  EtaVerdict out;
  for (ObjId x = 0; x < c->num_objects(); ++x) {
    auto hx = ext(share(yoneda_embed(c, x)));
    out.components.push_back(hx->leg(x, yoneda_element(*c, c->identity(x))));
    if (!out.non_iso && !is_iso(out.components.back())) out.non_iso = x;
  }
  for (MorId f = 0; f < c->num_morphisms() && !out.non_natural; ++f) {
    auto lhs = compose(ext.on_morphism(yoneda_embed_morphism(c, f)), out.components[c->src(f)]);
    auto rhs = compose(out.components[c->tgt(f)], p.mor[f]);
    if (!same_components(lhs, rhs)) out.non_natural = f;
  }
  out.iso = !out.non_iso;
  out.natural = !out.non_natural;
  return out;
}

ToposFunctor restrict_along_yoneda(const CocontinuousExtension& ext) {
  const ToposFunctor& p = ext.functor();
  ToposFunctor out{p.name + "~h", p.dom, p.cod, {}, {}};
  for (ObjId x = 0; x < p.dom->num_objects(); ++x) out.obj.push_back(ext(share(yoneda_embed(p.dom, x)))->object());
  for (MorId f = 0; f < p.dom->num_morphisms(); ++f) {
    auto m = ext.on_morphism(yoneda_embed_morphism(p.dom, f));
    m.dom = out.obj[p.dom->src(f)];
    m.cod = out.obj[p.dom->tgt(f)];
    out.mor.push_back(std::move(m));
  }
  return out;
}

CocontinuityCheck preserves_colimit(const CocontinuousExtension& ext, const PresheafDiagram& d) {
  const ToposPtr& z = ext.codomain();
  PresheafCocone colim = presheaf_colimit(d, ext.base());
  PresheafDiagram image{d.shape, {}, {}, z->base()};
  for (const auto& n : d.nodes) image.nodes.push_back(ext(n)->object());
  for (const auto& a : d.arrows) image.arrows.push_back(ext.on_morphism(a));
  PresheafCocone target{ext(colim.apex)->object(), {}};
  for (const auto& leg : colim.legs) target.legs.push_back(ext.on_morphism(leg));
  CocontinuityCheck out;
  out.comparison = z->mediate(image, z->colimit(image), target);
  out.iso = out.comparison && is_iso(*out.comparison);
  return out;
}

ElemId HomPresheaf::index_of(ObjId x, const PresheafMorphism& a) const {
  auto it = index[x].find(a.components);
  if (it == index[x].end()) throw ContractError("h_p: morphism outside the enumerated hom-set");
  return it->second;
}

HomPresheaf right_adjoint_hp(const ToposFunctor& p, const PresheafPtr& z) {
  const FinCategory& c = *p.dom;
  HomPresheaf out;
  out.target = z;
  std::vector<std::vector<std::string>> values(c.num_objects());
  for (ObjId x = 0; x < c.num_objects(); ++x) {
    out.homs.push_back(p.cod->hom(p.obj[x], z));
    out.index.emplace_back();
    for (std::size_t k = 0; k < out.homs[x].size(); ++k) {
      out.index[x].emplace(out.homs[x][k].components, static_cast<ElemId>(k));
      values[x].push_back("h" + std::to_string(k));
    }
  }
  std::vector<std::vector<ElemId>> actions(c.num_morphisms());
  for (MorId f = 0; f < c.num_morphisms(); ++f)
    for (const auto& a : out.homs[c.tgt(f)]) actions[f].push_back(out.index_of(c.src(f), compose(a, p.mor[f])));
  out.presheaf = share(make_presheaf(p.dom, std::move(values), std::move(actions)));
  return out;
}

PresheafMorphism right_adjoint_hp_morphism(const HomPresheaf& hz, const HomPresheaf& hz2, const PresheafMorphism& zeta) {
  PresheafMorphism out{hz.presheaf, hz2.presheaf, {}};
  for (ObjId x = 0; x < static_cast<ObjId>(hz.homs.size()); ++x) {
    out.components.emplace_back();
    for (const auto& a : hz.homs[x]) out.components[x].push_back(hz2.index_of(x, compose(zeta, a)));
  }
  return out;
}

PresheafMorphism phi_forward(const ExtensionValue& eh, const HomPresheaf& hz, const PresheafMorphism& u) {
  const Presheaf& h = *eh.input;
  PresheafMorphism out{eh.input, hz.presheaf, std::vector<std::vector<ElemId>>(h.base->num_objects())};
  for (auto [x, e] : eh.elements.elements) out.components[x].push_back(hz.index_of(x, compose(u, eh.leg(x, e))));
  return out;
}

PresheafMorphism phi_backward(const CocontinuousExtension& ext, const ExtensionValue& eh, const HomPresheaf& hz,
                              const PresheafMorphism& theta) {
  PresheafCocone other{hz.target, {}};
  for (auto [x, e] : eh.elements.elements) other.legs.push_back(hz.homs[x][theta.at(x, e)]);
  auto u = ext.codomain()->mediate(eh.diagram, eh.cocone, other);
  if (!u) throw ContractError("φ⁻¹: the transformation is not natural");
  return *u;
}

AdjunctionCheck adjunction_phi(const CocontinuousExtension& ext, const PresheafPtr& h, const PresheafPtr& z) {
  auto eh = ext(h);
  auto hz = right_adjoint_hp(ext.functor(), z);
  auto left = ext.codomain()->hom(eh->object(), z);
  auto right = enumerate_morphisms(h, hz.presheaf, ext.codomain()->budget().max_homs);
  AdjunctionCheck out;
  out.left = left.size();
  out.right = right.size();
  if (out.left != out.right) {
    out.failure = "hom-set sizes differ";
    return out;
  }
  for (const auto& u : left)
    if (!same_components(phi_backward(ext, *eh, hz, phi_forward(*eh, hz, u)), u)) {
      out.failure = "φ⁻¹∘φ is not the identity";
      return out;
    }
  for (const auto& theta : right)
    if (!same_components(phi_forward(*eh, hz, phi_backward(ext, *eh, hz, theta)), theta)) {
      out.failure = "φ∘φ⁻¹ is not the identity";
      return out;
    }
  out.bijective = true;
  return out;
}

std::optional<std::size_t> phi_natural_in_h(const CocontinuousExtension& ext, const PresheafMorphism& kappa,
                                            const PresheafPtr& z) {
  auto eh = ext(kappa.cod);
  auto eh2 = ext(kappa.dom);
  auto pk = ext.on_morphism(kappa);
  auto hz = right_adjoint_hp(ext.functor(), z);
  std::size_t n = 0;
  for (const auto& u : ext.codomain()->hom(eh->object(), z)) {
    auto lhs = phi_forward(*eh2, hz, compose(u, pk));
    auto rhs = compose(phi_forward(*eh, hz, u), kappa);
    if (!same_components(lhs, rhs)) return std::nullopt;
    ++n;
  }
  return n;
}

std::optional<std::size_t> phi_natural_in_z(const CocontinuousExtension& ext, const PresheafPtr& h,
                                            const PresheafMorphism& zeta) {
  auto eh = ext(h);
  auto hz = right_adjoint_hp(ext.functor(), zeta.dom);
  auto hz2 = right_adjoint_hp(ext.functor(), zeta.cod);
  auto hzeta = right_adjoint_hp_morphism(hz, hz2, zeta);
  std::size_t n = 0;
  for (const auto& u : ext.codomain()->hom(eh->object(), zeta.dom)) {
    auto lhs = phi_forward(*eh, hz2, compose(zeta, u));
    auto rhs = compose(hzeta, phi_forward(*eh, hz, u));
    if (!same_components(lhs, rhs)) return std::nullopt;
    ++n;
  }
  return n;
}

HomComposite hom_composite(const ToposFunctor& p, const PresheafPtr& z, Variance variance, const ToposPtr& finset) {
  HomComposite out;
  out.variance = variance;
  if (variance == Variance::contra) {
    out.contra = right_adjoint_hp(p, z);
    return out;
  }
  const FinCategory& c = *p.dom;
  std::vector<std::vector<PresheafMorphism>> homs;
  std::vector<std::map<std::vector<std::vector<ElemId>>, ElemId>> index(c.num_objects());
  std::vector<std::vector<std::string>> sets(c.num_objects());
  for (ObjId x = 0; x < c.num_objects(); ++x) {
    homs.push_back(p.cod->hom(z, p.obj[x]));
    for (std::size_t k = 0; k < homs[x].size(); ++k) {
      index[x].emplace(homs[x][k].components, static_cast<ElemId>(k));
      sets[x].push_back("h" + std::to_string(k));
    }
  }
  std::vector<std::vector<ElemId>> maps(c.num_morphisms());
  for (MorId f = 0; f < c.num_morphisms(); ++f)
    for (const auto& a : homs[c.src(f)]) maps[f].push_back(index[c.tgt(f)].at(compose(p.mor[f], a).components));
  out.co = set_functor("[Z," + p.name + "(-)]", p.dom, finset, std::move(sets), std::move(maps));
  return out;
}

}  // namespace fintopos
