#include "fintopos/site/continuity.hpp"

#include "fintopos/presheaf/yoneda.hpp"

namespace fintopos {

ToposFunctor epsilon_functor(const SitePtr& s, Budget budget) {
  const CatPtr& c = s->base();
  ToposFunctor eps{"ε", c, sheaf_category(s, std::move(budget)), {}, {}};
  std::vector<SheafificationResult> a;
  for (ObjId x = 0; x < c->num_objects(); ++x) {
    a.push_back(epsilon(s, x));
    eps.obj.push_back(a.back().sheaf);
  }
  for (MorId f = 0; f < c->num_morphisms(); ++f)
    eps.mor.push_back(sheafify_morphism(yoneda_embed_morphism(c, f), a[c->src(f)], a[c->tgt(f)], *s));
  return eps;
}

ContinuityVerdict is_continuous(const ToposFunctor& p, const Site& s) {
  if (!same_category(*p.dom, *s.base())) throw ContractError("is_continuous: functor and site over different bases");
  ContinuityVerdict out;
  for (ObjId x = 0; x < p.dom->num_objects(); ++x)
    for (const Family& fam : s.covers()[x]) {
      std::vector<PresheafMorphism> image;
      for (MorId f : fam) image.push_back(p.mor[f]);
      ++out.covers_checked;
      auto v = is_strict_epi_family(*p.cod, image, p.obj[x]);
      if (!v.strict_epi) {
        out.object = x;
        out.family = fam;
        out.witness = std::move(v);
        return out;
      }
    }
  out.continuous = true;
  return out;
}

SubcanonicalVerdict is_subcanonical(const Site& s) {
  const FinCategory& c = *s.base();
  SubcanonicalVerdict out;
  out.covers_strict_epi = true;
  for (ObjId x = 0; x < c.num_objects() && out.covers_strict_epi; ++x)
    for (const Family& fam : s.covers()[x])
      if (!is_strict_epi_family(c, x, fam).strict_epi) {
        out.covers_strict_epi = false;
        out.failing_object = x;
        out.failing_family = fam;
        break;
      }
  out.representables_sheaves = true;
  for (ObjId x = 0; x < c.num_objects(); ++x)
    if (!is_sheaf(yoneda_embed(s.base(), x), s).sheaf) {
      out.representables_sheaves = false;
      break;
    }
  out.agree = out.covers_strict_epi == out.representables_sheaves;
  out.subcanonical = out.covers_strict_epi && out.representables_sheaves;
  return out;
}

}  // namespace fintopos
