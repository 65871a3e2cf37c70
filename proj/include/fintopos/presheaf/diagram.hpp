#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "fintopos/fincat/functor.hpp"
#include "fintopos/presheaf/presheaf.hpp"

namespace fintopos {

/// A functor from a finite index category into presheaves on one base.
struct PresheafDiagram {
  CatPtr shape;
  std::vector<PresheafPtr> nodes;          // per shape object
  std::vector<PresheafMorphism> arrows;    // per shape morphism, identities included
  CatPtr base;                             // optional; required when there are no nodes
};

ValidationReport validate_diagram(const PresheafDiagram& d);

struct PresheafCocone {
  PresheafPtr apex;
  std::vector<PresheafMorphism> legs;  // node i -> apex
};

struct PresheafCone {
  PresheafPtr apex;
  std::vector<PresheafMorphism> legs;  // apex -> node i
};

bool is_cocone(const PresheafDiagram& d, const PresheafCocone& c);
bool is_cone(const PresheafDiagram& d, const PresheafCone& c);

/// Pointwise colimit: the disjoint union of the node values quotiented by
/// the equivalence generated by the diagram arrows (union-find). Classes are
/// ordered and labelled by their smallest member (node, element), the label
/// being "<node>.<label>". Throws ContractError on mismatched bases.
PresheafCocone presheaf_colimit(const PresheafDiagram& d, const CatPtr& base);
PresheafCocone presheaf_colimit(const PresheafDiagram& d);

/// Pointwise limit: compatible tuples, ordered lexicographically, labelled
/// "(l0,l1,...)". The empty diagram yields the terminal presheaf.
PresheafCone presheaf_limit(const PresheafDiagram& d, const CatPtr& base);
PresheafCone presheaf_limit(const PresheafDiagram& d);

/// The unique u with u∘colimit.leg_i == other.leg_i, for a jointly
/// surjective colimit cocone. nullopt when `other` is not a cocone.
std::optional<PresheafMorphism> mediate(const PresheafCocone& colimit, const PresheafCocone& other);
/// The unique u with limit.leg_i∘u == other.leg_i, for a jointly injective
/// limit cone. nullopt when `other` is not a cone.
std::optional<PresheafMorphism> mediate(const PresheafCone& limit, const PresheafCone& other);

/// Every cocone from d to `apex` / cone from `apex` to d.
std::vector<PresheafCocone> enumerate_cocones(const PresheafDiagram& d, const PresheafPtr& apex);
std::vector<PresheafCone> enumerate_cones(const PresheafDiagram& d, const PresheafPtr& apex);
/// Morphisms u out of the colimit apex (into the limit apex) that factor `other`.
int count_factorizations(const PresheafCocone& colimit, const PresheafCocone& other);
int count_factorizations(const PresheafCone& limit, const PresheafCone& other);

// Diagram builders on the shared index shapes.
PresheafDiagram pair_of(const PresheafPtr& a, const PresheafPtr& b);
PresheafDiagram parallel_of(const PresheafMorphism& u, const PresheafMorphism& v);
PresheafDiagram cospan_of(const PresheafMorphism& f, const PresheafMorphism& g);  // f: A -> X <- B :g
PresheafDiagram span_of(const PresheafMorphism& f, const PresheafMorphism& g);    // f: S -> A, g: S -> B
PresheafDiagram empty_of(const CatPtr& base);
const CatPtr& span_shape();  // 2 -> 0, 2 -> 1 via l, r

/// Category of elements Γ_F: objects (x, X) with x ∈ F(X) ordered by (X, x);
/// arrows (x, X) -> (y, Y) are the f: X -> Y with F(f)(y) = x.
struct ElementsCategory {
  CatPtr gamma;
  std::vector<std::pair<ObjId, ElemId>> elements;  // gamma object -> (X, x)
  FinFunctor projection;                           // gamma -> base
  std::vector<MorId> base_morphism;                // gamma morphism -> f

  ObjId object_of(ObjId x, ElemId e) const;
};

ElementsCategory elements_category(const Presheaf& f);

/// Γ_F with the diagram ◊: (x, X) ↦ h_X and the cocone λ: ◊ -> F,
/// λ_(x,X) = yoneda_backward(x).
struct DensityData {
  ElementsCategory elements;
  PresheafDiagram diamond;
  PresheafCocone lambda;
};

DensityData category_of_elements(const PresheafPtr& f);

struct IsoWitness {
  bool iso = false;
  std::optional<PresheafMorphism> comparison;
  std::optional<std::pair<ObjId, ElemId>> counterexample;  // point where bijectivity fails
};

/// Builds colim ◊ and the comparison colim ◊ -> F induced by λ, and checks
/// that it is a pointwise bijection.
IsoWitness density_check(const PresheafPtr& f);

}  // namespace fintopos
