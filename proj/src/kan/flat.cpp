#include "fintopos/kan/flat.hpp"

#include <algorithm>
#include <cstdint>

#include "fintopos/presheaf/enumerate.hpp"
#include "fintopos/presheaf/yoneda.hpp"

namespace fintopos {

namespace {

PresheafCone image_cone(const ToposFunctor& p, const Cone& cone) {
  PresheafCone out{p.obj[cone.apex], {}};
  for (MorId leg : cone.legs) out.legs.push_back(p.mor[leg]);
  return out;
}

bool comparison_iso(const PresheafCone& limit, const PresheafCone& cone) {
  auto m = mediate(limit, cone);
  return m && is_iso(*m);
}

}  // namespace

ExactVerdict is_exact(const ToposFunctor& p) {
  const CatPtr& c = p.dom;
  const ToposPtr& z = p.cod;
  ExactVerdict out;
  auto fail = [&](std::string kind, std::vector<int> witness) {
    if (!out.failing_kind.empty()) return;
    out.failing_kind = std::move(kind);
    out.witness = std::move(witness);
  };
  if (auto t = universal_cone_search(empty_diagram(c))) {
    ++out.checked;
    if (!is_iso(to_terminal(p.obj[t->apex]))) fail("terminal", {t->apex});
  } else {
    out.finitely_complete = false;
  }
  for (ObjId a = 0; a < c->num_objects(); ++a)
    for (ObjId b = a; b < c->num_objects(); ++b) {
      auto cone = universal_cone_search(pair_diagram(c, a, b));
      if (!cone) {
        out.finitely_complete = false;
        continue;
      }
      ++out.checked;
      if (!comparison_iso(z->limit(pair_of(p.obj[a], p.obj[b])), image_cone(p, *cone))) fail("product", {a, b});
    }
  for (MorId u = 0; u < c->num_morphisms(); ++u)
    for (MorId v = u + 1; v < c->num_morphisms(); ++v) {
      if (c->src(u) != c->src(v) || c->tgt(u) != c->tgt(v)) continue;
      auto cone = universal_cone_search(parallel_diagram(c, u, v));
      if (!cone) {
        out.finitely_complete = false;
        continue;
      }
      ++out.checked;
      if (!comparison_iso(z->limit(parallel_of(p.mor[u], p.mor[v])), image_cone(p, *cone))) fail("equalizer", {u, v});
    }
  out.exact = out.failing_kind.empty();
  return out;
}

FlatSetVerdict is_flat_setvalued(const ToposFunctor& p) {
  if (p.cod->sheaf_mode() || !(*p.cod->base() == *terminal_category()))
    throw ContractError("is_flat_setvalued: " + p.name + " does not land in finite sets");
  const FinCategory& c = *p.dom;
  // p as a presheaf on C^op; its elements category is the opposite of the covariant one.
  CatPtr cop = opposite(c);
  std::vector<std::vector<std::string>> values;
  for (ObjId x = 0; x < c.num_objects(); ++x) values.push_back(p.obj[x]->values[0]);
  std::vector<std::vector<ElemId>> actions;
  for (MorId f = 0; f < c.num_morphisms(); ++f) actions.push_back(p.mor[f].components[0]);
  auto gamma = elements_category(make_presheaf(cop, std::move(values), std::move(actions)));
  FlatSetVerdict out;
  out.elements = opposite(*gamma.gamma);
  out.element_of = gamma.elements;
  out.cofiltered = is_cofiltered(*out.elements);
  out.flat = out.cofiltered.cofiltered;
  return out;
}

FlatBoundedVerdict is_flat_bounded(const CocontinuousExtension& ext, const Budget& budget) {
  const CatPtr& c = ext.base();
  const ToposPtr& z = ext.codomain();
  FlatBoundedVerdict out;
  auto room = [&] { return out.checked() < budget.max_instances; };

  // True when the comparison p̃(lim D) -> lim(p̃∘D) is an isomorphism.
  auto check = [&](const std::string& kind, const PresheafDiagram& d, std::size_t& counter) {
    PresheafCone lim = presheaf_limit(d, c);
    PresheafDiagram image{d.shape, {}, {}, z->base()};
    for (const auto& n : d.nodes) image.nodes.push_back(ext(n)->object());
    for (const auto& a : d.arrows) image.arrows.push_back(ext.on_morphism(a));
    PresheafCone cone{ext(lim.apex)->object(), {}};
    for (const auto& leg : lim.legs) cone.legs.push_back(ext.on_morphism(leg));
    auto cmp = mediate(z->limit(image), cone);
    ++counter;
    if (cmp && is_iso(*cmp)) return true;
    FlatCounterexample cx{kind, d.nodes, {}, cmp};
    if (kind == "equalizer") cx.arrows = {d.arrows[d.shape->morphism("u")], d.arrows[d.shape->morphism("v")]};
    out.counterexample = std::move(cx);
    return false;
  };
  auto product = [&](const PresheafPtr& a, const PresheafPtr& b) {
    return check("product", pair_of(a, b), out.products_checked);
  };
  auto equalizer = [&](const PresheafMorphism& u, const PresheafMorphism& v) {
    return check("equalizer", parallel_of(u, v), out.equalizers_checked);
  };

  if (!check("terminal", empty_of(c), out.terminal_checked)) return out;

  const int n = c->num_objects();
  std::vector<PresheafPtr> reps;
  for (ObjId x = 0; x < n; ++x) reps.push_back(share(yoneda_embed(c, x)));
  for (ObjId a = 0; a < n; ++a)
    for (ObjId b = a; b < n && room(); ++b)
      if (!product(reps[a], reps[b])) return out;
  for (ObjId a = 0; a < n; ++a)
    for (ObjId b = 0; b < n; ++b) {
      const auto& hom = c->hom(a, b);
      for (std::size_t i = 0; i < hom.size(); ++i)
        for (std::size_t j = i + 1; j < hom.size() && room(); ++j)
          if (!equalizer(yoneda_embed_morphism(c, hom[i]), yoneda_embed_morphism(c, hom[j]))) return out;
    }

  std::vector<PresheafPtr> objs;
  bool truncated = false;
  for_each_presheaf(c, budget.value_bound, [&](const Presheaf& f) {
    if (objs.size() >= budget.max_objects) {
      truncated = true;
      return false;
    }
    objs.push_back(share(f));
    return true;
  });
  const std::uint64_t m = objs.size();
  const std::uint64_t pairs = m * m;
  const std::uint64_t share_of_room = room() ? (budget.max_instances - out.checked()) / 2 : 0;
  const bool all_pairs = !truncated && pairs <= share_of_room;
  const std::uint64_t samples = all_pairs ? pairs : std::min<std::uint64_t>(pairs, share_of_room);
  bool homs_truncated = false;
  for (std::uint64_t k = 0; k < samples && room(); ++k) {
    // Evenly spread (a, b) over all ordered pairs.
    const std::uint64_t idx = all_pairs ? k : (k * pairs) / samples;
    const auto& a = objs[idx / m];
    const auto& b = objs[idx % m];
    if (idx / m <= idx % m && !product(a, b)) return out;
    std::vector<PresheafMorphism> hom;
    try {
      hom = enumerate_morphisms(a, b, budget.max_homs);
    } catch (const ResourceError&) {
      homs_truncated = true;
      continue;
    }
    const std::size_t h = std::min<std::size_t>(hom.size(), 4);
    if (h < hom.size()) homs_truncated = true;
    for (std::size_t i = 0; i < h; ++i)
      for (std::size_t j = i + 1; j < h && room(); ++j)
        if (!equalizer(hom[i], hom[j])) return out;
  }
  out.exhaustive = all_pairs && !homs_truncated && room();
  out.verified = true;
  return out;
}

GeometricMorphismData::GeometricMorphismData(ExtensionPtr inverse_image, SitePtr site, FlatBoundedVerdict exactness)
    : ext_(std::move(inverse_image)), site_(std::move(site)), exactness_(std::move(exactness)) {}

std::shared_ptr<const ExtensionValue> GeometricMorphismData::apply_inverse(const PresheafPtr& f) const {
  if (!is_sheaf(*f, *site_).sheaf) throw ContractError("inverse image: argument is not a sheaf on " + site_->name());
  return (*ext_)(f);
}

HomPresheaf GeometricMorphismData::direct_image(const PresheafPtr& z) const {
  auto hz = right_adjoint_hp(ext_->functor(), z);
  if (!is_sheaf(*hz.presheaf, *site_).sheaf) throw Error("direct image: h_p(Z) is not a sheaf on " + site_->name());
  return hz;
}

PresheafMorphism GeometricMorphismData::phi(const PresheafPtr& f, const PresheafPtr& z,
                                            const PresheafMorphism& u) const {
  return phi_forward(*apply_inverse(f), direct_image(z), u);
}

PresheafMorphism GeometricMorphismData::phi_inverse(const PresheafPtr& f, const PresheafPtr& z,
                                                    const PresheafMorphism& theta) const {
  return phi_backward(*ext_, *apply_inverse(f), direct_image(z), theta);
}

EllResult build_ell(const ToposFunctor& p, const SitePtr& site, const Budget& budget) {
  if (!(*site->base() == *p.dom)) throw ContractError("build_ell: site and functor have different bases");
  EllResult out;
  out.continuity = is_continuous(p, *site);
  if (!out.continuity.continuous) {
    out.refusal = "not-continuous";
    return out;
  }
  auto ext = make_extension(p);
  out.flatness = is_flat_bounded(*ext, budget);
  if (!out.flatness.verified) {
    out.refusal = "not-flat";
    return out;
  }
  out.data.emplace(ext, site, out.flatness);
  return out;
}

}  // namespace fintopos
