#pragma once

#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fintopos/fincat/functor.hpp"
#include "fintopos/presheaf/diagram.hpp"

namespace fintopos {

class Site;

/// Enumeration limits shared by every bounded check.
struct Budget {
  std::string profile = "default";
  int value_bound = 3;               // objects of a handle: value sets of size <= this
  std::size_t max_objects = 100000;  // bounded object enumeration
  std::size_t max_homs = 200000;     // a single hom-set
  std::size_t max_instances = 400;   // limit/colimit test instances per check
};

/// small, default or large; ContractError otherwise.
Budget budget_profile(std::string_view name);

/// Presheaves on a finite base, or sheaves on a finite site, seen as one
/// category: bounded object enumeration, exact hom-sets, finite limits and
/// colimits. FinSet is the presheaf case over the terminal category.
class PresheafTopos {
 public:
  PresheafTopos(CatPtr base, std::shared_ptr<const Site> site, Budget budget);

  const std::string& name() const { return name_; }
  const CatPtr& base() const { return base_; }
  const std::shared_ptr<const Site>& site() const { return site_; }
  bool sheaf_mode() const { return site_ != nullptr; }
  const Budget& budget() const { return budget_; }

  /// Lives over the base and, in sheaf mode, passes is_sheaf.
  bool contains(const Presheaf& f) const;
  /// Every object with value sets of size <= budget().value_bound, memoized.
  /// ResourceError past budget().max_objects.
  const std::vector<PresheafPtr>& objects() const;

  std::vector<PresheafMorphism> hom(const PresheafPtr& a, const PresheafPtr& b) const;
  bool isomorphic(const Presheaf& a, const Presheaf& b) const;

  /// Pointwise colimit, sheafified in sheaf mode (legs composed with the unit).
  PresheafCocone colimit(const PresheafDiagram& d) const;
  /// The mediating morphism out of colimit(d); nullopt when `other` is not a cocone.
  std::optional<PresheafMorphism> mediate(const PresheafDiagram& d, const PresheafCocone& colim,
                                          const PresheafCocone& other) const;
  /// Pointwise limit; sheaves are closed under it.
  PresheafCone limit(const PresheafDiagram& d) const;

  PresheafPtr terminal() const;
  PresheafPtr initial() const;

  /// The reflection into the handle: identity for presheaves, sheafification
  /// for sheaves.
  struct Reflection {
    PresheafPtr object;
    PresheafMorphism unit;
  };
  Reflection reflect(const PresheafPtr& f) const;
  PresheafMorphism reflect_morphism(const PresheafMorphism& phi, const Reflection& rf, const Reflection& rg) const;

 private:
  CatPtr base_;
  std::shared_ptr<const Site> site_;
  Budget budget_;
  std::string name_;
  mutable std::mutex memo_mutex_;
  mutable std::optional<std::vector<PresheafPtr>> objects_;
};

using ToposPtr = std::shared_ptr<const PresheafTopos>;

ToposPtr presheaf_category(CatPtr base, Budget budget = {});
ToposPtr presheaf_category(CatPtr base, int bound);
ToposPtr finset_category(Budget budget = {});
ToposPtr sheaf_category(std::shared_ptr<const Site> site, Budget budget = {});

/// Strict epimorphic family test inside a handle. Compatible tuples
/// (y_i: A_i -> Y) are those with y_i(u) = y_j(v) whenever a_i(u) = a_j(v)
/// for elements u, v over a common object (generalized elements through
/// representables, resp. their sheafifications). Y ranges over the cokernel
/// pair of the joint image (decisive in a topos) and then the bounded object
/// enumeration.
struct HandleStrictEpiVerdict {
  bool strict_epi = false;
  std::string kind;                        // "no-factoring" or "non-unique" on failure
  PresheafPtr target;                      // the Y of the witness
  std::vector<PresheafMorphism> tuple;     // the compatible family
  std::size_t targets_checked = 0;
};

HandleStrictEpiVerdict is_strict_epi_family(const PresheafTopos& z, const std::vector<PresheafMorphism>& family,
                                            const PresheafPtr& codomain);

/// A functor from a finite category into a handle.
struct ToposFunctor {
  std::string name;
  CatPtr dom;
  ToposPtr cod;
  std::vector<PresheafPtr> obj;         // per object
  std::vector<PresheafMorphism> mor;    // per morphism
};

/// Objects in the handle, morphisms well typed, identities and composites preserved.
ValidationReport validate_topos_functor(const ToposFunctor& p);

/// h: C -> PSh(C).
ToposFunctor yoneda_functor(const ToposPtr& presheaves);
/// h_D ∘ F: C -> PSh(D) for F: C -> D.
ToposFunctor yoneda_after(const FinFunctor& f, const ToposPtr& presheaves);
/// Constant at z, every morphism sent to the identity.
ToposFunctor constant_topos_functor(std::string name, CatPtr dom, ToposPtr cod, const PresheafPtr& z);
/// A set-valued functor from per-object labelled sets and per-morphism
/// functions (maps[f][i] = image of element i of the source set).
ToposFunctor set_functor(std::string name, CatPtr dom, ToposPtr finset, std::vector<std::vector<std::string>> sets,
                         std::vector<std::vector<ElemId>> maps);
/// [X, -]: Y ↦ hom(X, Y), acting by post-composition.
ToposFunctor corepresentable(const CatPtr& c, ObjId x, ToposPtr finset);

/// Each map [X, Y] -> hom(pX, pY) bijective (hom-sets enumerated exactly).
FullyFaithfulVerdict is_fully_faithful(const ToposFunctor& p);

}  // namespace fintopos
