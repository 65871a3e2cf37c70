#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "fintopos/presheaf/diagram.hpp"
#include "fintopos/presheaf/topos.hpp"

namespace fintopos {

/// p̃H: the colimit in Z of p∘π over Γ_H, with its cocone.
struct ExtensionValue {
  PresheafPtr input;         // H
  ElementsCategory elements; // Γ_H
  PresheafDiagram diagram;   // (x, X) ↦ p(X)
  PresheafCocone cocone;     // legs p(X) -> p̃H, indexed by Γ_H objects

  const PresheafPtr& object() const { return cocone.apex; }
  /// The leg at (x, X).
  const PresheafMorphism& leg(ObjId x, ElemId e) const;
};

/// Single evaluation, no memo.
ExtensionValue tilde_extend(const ToposFunctor& p, const PresheafPtr& h);

/// p̃ as a procedure on presheaves over dom p. Results are memoized per
/// presheaf (digest, then equality); the memo is guarded by a mutex.
class CocontinuousExtension {
 public:
  explicit CocontinuousExtension(ToposFunctor p);

  const ToposFunctor& functor() const { return p_; }
  const CatPtr& base() const { return p_.dom; }
  const ToposPtr& codomain() const { return p_.cod; }

  std::shared_ptr<const ExtensionValue> operator()(const PresheafPtr& h) const;
  /// p̃θ: p̃H -> p̃H', the mediating morphism for the cocone (x, X) ↦ leg'(θ_X x, X).
  PresheafMorphism on_morphism(const PresheafMorphism& theta) const;
  std::size_t memo_size() const;

 private:
  ToposFunctor p_;
  mutable std::mutex mutex_;
  mutable std::map<std::uint64_t, std::vector<std::shared_ptr<const ExtensionValue>>> memo_;
};

using ExtensionPtr = std::shared_ptr<const CocontinuousExtension>;

ExtensionPtr make_extension(ToposFunctor p);

/// η: p => p̃∘h, η_X the leg at (id_X, X) of p̃(h_X).
struct EtaVerdict {
  std::vector<PresheafMorphism> components;  // per object of dom p
  bool iso = false;
  bool natural = false;
  std::optional<ObjId> non_iso;
  std::optional<MorId> non_natural;
};

EtaVerdict eta_iso(const CocontinuousExtension& ext);

/// p̃∘h as a functor into the same handle.
ToposFunctor restrict_along_yoneda(const CocontinuousExtension& ext);

/// colim(p̃∘D) -> p̃(colim D), computed in Z.
struct CocontinuityCheck {
  bool iso = false;
  std::optional<PresheafMorphism> comparison;  // absent when the induced cocone does not mediate
};

CocontinuityCheck preserves_colimit(const CocontinuousExtension& ext, const PresheafDiagram& d);

/// h_p(Z) = [p(-), Z]. Elements of h_p(Z)(X) index hom(pX, Z) in enumeration
/// order, labelled "h<k>"; actions are precomposition with p(f).
struct HomPresheaf {
  PresheafPtr presheaf;
  PresheafPtr target;                                // Z
  std::vector<std::vector<PresheafMorphism>> homs;   // per object X: hom(pX, Z)
  std::vector<std::map<std::vector<std::vector<ElemId>>, ElemId>> index;

  /// Element of h_p(Z)(X) for a: pX -> Z; ContractError when a is not in the hom-set.
  ElemId index_of(ObjId x, const PresheafMorphism& a) const;
};

HomPresheaf right_adjoint_hp(const ToposFunctor& p, const PresheafPtr& z);
/// h_p(ζ): h_p(Z) -> h_p(Z'), post-composition with ζ.
PresheafMorphism right_adjoint_hp_morphism(const HomPresheaf& hz, const HomPresheaf& hz2, const PresheafMorphism& zeta);

/// φ(u)_X(x) = u ∘ leg(x, X), read as an element of h_p(Z)(X).
PresheafMorphism phi_forward(const ExtensionValue& eh, const HomPresheaf& hz, const PresheafMorphism& u);
/// φ⁻¹(θ): the mediating morphism for the cocone (x, X) ↦ θ_X(x).
PresheafMorphism phi_backward(const CocontinuousExtension& ext, const ExtensionValue& eh, const HomPresheaf& hz,
                              const PresheafMorphism& theta);

/// Exhaustive check of φ between hom_Z(p̃H, Z) and Nat(H, h_p Z).
struct AdjunctionCheck {
  std::size_t left = 0;   // |hom_Z(p̃H, Z)|
  std::size_t right = 0;  // |Nat(H, h_p Z)|
  bool bijective = false; // equal sizes and both round trips hold
  std::string failure;
};

AdjunctionCheck adjunction_phi(const CocontinuousExtension& ext, const PresheafPtr& h, const PresheafPtr& z);

/// φ(u ∘ p̃κ) == φ(u) ∘ κ for κ: H' -> H and every u: p̃H -> Z. Returns the
/// number of squares checked, or nullopt on the first failure.
std::optional<std::size_t> phi_natural_in_h(const CocontinuousExtension& ext, const PresheafMorphism& kappa,
                                            const PresheafPtr& z);
/// φ(ζ ∘ u) == h_p(ζ) ∘ φ(u) for ζ: Z -> Z' and every u: p̃H -> Z.
std::optional<std::size_t> phi_natural_in_z(const CocontinuousExtension& ext, const PresheafPtr& h,
                                            const PresheafMorphism& zeta);

enum class Variance { contra, co };

/// contra: p_Z = [p(-), Z] (the same data as right_adjoint_hp).
/// co: p^Z = [Z, p(-)], a covariant functor into `finset`.
struct HomComposite {
  Variance variance = Variance::contra;
  std::optional<HomPresheaf> contra;
  std::optional<ToposFunctor> co;
};

HomComposite hom_composite(const ToposFunctor& p, const PresheafPtr& z, Variance variance, const ToposPtr& finset);

}  // namespace fintopos
