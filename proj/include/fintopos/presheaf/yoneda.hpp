#pragma once

#include <optional>

#include "fintopos/presheaf/presheaf.hpp"

namespace fintopos {

/// h_X = [-, X]; elements of h_X(Y) are the morphisms of hom(Y, X) in id
/// order, labelled by morphism name. Actions are precomposition.
Presheaf yoneda_embed(const CatPtr& c, ObjId x);

/// h_f: h_X -> h_Y, post-composition with f: X -> Y.
PresheafMorphism yoneda_embed_morphism(const CatPtr& c, MorId f);

/// Index of the morphism g in h_X(src g), for g with target X.
ElemId yoneda_element(const FinCategory& c, MorId g);

/// The object X with dom == h_X (same shape), if any.
std::optional<ObjId> representing_object(const Presheaf& f);

/// θ ↦ θ_X(id_X) for θ: h_X -> F. Throws ContractError when the domain of θ
/// is not h_X.
ElemId yoneda_forward(const PresheafMorphism& theta, ObjId x);
/// Same, detecting X from the domain.
ElemId yoneda_forward(const PresheafMorphism& theta);

/// ξ ∈ F(X) ↦ θ with θ_Y(g) = F(g)(ξ). Naturality is re-verified.
PresheafMorphism yoneda_backward(const CatPtr& c, ObjId x, const PresheafPtr& f, ElemId xi);

}  // namespace fintopos
