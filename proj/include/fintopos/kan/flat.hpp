#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fintopos/fincat/limits.hpp"
#include "fintopos/kan/extension.hpp"
#include "fintopos/site/continuity.hpp"

namespace fintopos {

/// p: C -> Z preserves the finite limits that exist in C: the terminal
/// object, binary products and equalizers found by universal_cone_search.
struct ExactVerdict {
  bool exact = false;
  bool finitely_complete = true;  // every such limit exists in C
  std::string failing_kind;       // "terminal", "product" or "equalizer"
  std::vector<int> witness;       // objects or morphisms of C
  std::size_t checked = 0;
};

ExactVerdict is_exact(const ToposFunctor& p);

/// For p into FinSet: the covariant category of elements, objects (x, X)
/// with x ∈ pX and arrows f: (x, X) -> (p(f)x, Y), is cofiltered.
struct FlatSetVerdict {
  bool flat = false;
  CatPtr elements;
  std::vector<std::pair<ObjId, ElemId>> element_of;  // elements object -> (X, x)
  CofilteredVerdict cofiltered;
};

/// ContractError when p does not land in FinSet.
FlatSetVerdict is_flat_setvalued(const ToposFunctor& p);

/// A limit comparison p̃(lim D) -> lim(p̃∘D) that is not an isomorphism.
struct FlatCounterexample {
  std::string kind;                       // "terminal", "product" or "equalizer"
  std::vector<PresheafPtr> objects;       // the diagram nodes in PSh(C)
  std::vector<PresheafMorphism> arrows;   // the parallel pair, for equalizers
  std::optional<PresheafMorphism> comparison;
};

/// Only a counterexample is definitive; a pass is a claim up to the budget.
struct FlatBoundedVerdict {
  bool verified = false;
  std::size_t terminal_checked = 0;
  std::size_t products_checked = 0;
  std::size_t equalizers_checked = 0;
  bool exhaustive = false;  // every bounded instance was tried
  std::optional<FlatCounterexample> counterexample;

  std::string status() const { return verified ? "verified-up-to-budget" : "counterexample"; }
  std::size_t checked() const { return terminal_checked + products_checked + equalizers_checked; }
};

/// Tests the terminal object, then products and equalizers of representables,
/// then instances drawn evenly from the presheaves with values of size <=
/// budget.value_bound, up to budget.max_instances in total.
FlatBoundedVerdict is_flat_bounded(const CocontinuousExtension& ext, const Budget& budget);

/// ℓ(p) on a site: inverse image p̃ restricted to sheaves, direct image
/// Z ↦ h_p(Z), and φ between them.
class GeometricMorphismData {
 public:
  GeometricMorphismData(ExtensionPtr inverse_image, SitePtr site, FlatBoundedVerdict exactness);

  const ExtensionPtr& inverse_image() const { return ext_; }
  const SitePtr& site() const { return site_; }
  const FlatBoundedVerdict& exactness() const { return exactness_; }

  /// p̃F for a sheaf F; ContractError when F is not a sheaf.
  std::shared_ptr<const ExtensionValue> apply_inverse(const PresheafPtr& f) const;
  /// h_p(Z), checked to be a sheaf; Error otherwise.
  HomPresheaf direct_image(const PresheafPtr& z) const;
  PresheafMorphism phi(const PresheafPtr& f, const PresheafPtr& z, const PresheafMorphism& u) const;
  PresheafMorphism phi_inverse(const PresheafPtr& f, const PresheafPtr& z, const PresheafMorphism& theta) const;

 private:
  ExtensionPtr ext_;
  SitePtr site_;
  FlatBoundedVerdict exactness_;
};

struct EllResult {
  std::optional<GeometricMorphismData> data;
  std::string refusal;  // "", "not-continuous" or "not-flat"
  ContinuityVerdict continuity;
  FlatBoundedVerdict flatness;
};

/// Checks continuity on the site, then bounded flatness, and builds ℓ(p)
/// only when both hold. The codomain handle is p.cod.
EllResult build_ell(const ToposFunctor& p, const SitePtr& site, const Budget& budget);

}  // namespace fintopos
