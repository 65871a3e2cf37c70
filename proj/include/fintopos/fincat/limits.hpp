#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fintopos/fincat/functor.hpp"

namespace fintopos {

/// Legs apex -> D(i). Also used for cocones (legs D(i) -> apex), see Cocone.
struct Cone {
  FinFunctor diagram;
  ObjId apex = kNone;
  std::vector<MorId> legs;  // per object of the index category
};

struct Cocone {
  FinFunctor diagram;
  ObjId apex = kNone;
  std::vector<MorId> legs;
};

/// Index shapes shared by the limit helpers.
const CatPtr& empty_shape();
const CatPtr& discrete_pair_shape();   // objects 0, 1
const CatPtr& parallel_pair_shape();   // 0 =u,v=> 1
const CatPtr& cospan_shape();          // 0 -> 2 <- 1, arrows l, r

/// Every cone over the diagram, ordered by apex id then legs.
std::vector<Cone> enumerate_cones(const FinFunctor& diagram);
std::vector<Cocone> enumerate_cocones(const FinFunctor& diagram);

/// Number of u: apex(other) -> apex(limit) with limit.legs ∘ u == other.legs.
int count_factorizations(const Cone& limit, const Cone& other);
int count_factorizations(const Cocone& colimit, const Cocone& other);

/// Brute-force limit inside the finite codomain of `diagram`: the cone
/// through which every cone factors uniquely. Among limiting cones the one
/// with the smallest apex id (then lexicographically smallest legs) is
/// returned.
std::optional<Cone> universal_cone_search(const FinFunctor& diagram);
std::optional<Cocone> universal_cocone_search(const FinFunctor& diagram);

/// Diagram helpers in a finite category.
FinFunctor cospan_diagram(CatPtr c, MorId f, MorId g);  // f: A -> X <- B :g
FinFunctor pair_diagram(CatPtr c, ObjId a, ObjId b);
FinFunctor parallel_diagram(CatPtr c, MorId u, MorId v);
FinFunctor empty_diagram(CatPtr c);

struct CofilteredVerdict {
  bool cofiltered = false;
  std::string reason;        // "empty", "span", "equalize" on failure
  std::vector<int> witness;  // object pair or parallel morphism pair
};

/// Nonempty; every pair of objects has a common source; every parallel pair
/// is equalized by some incoming morphism.
CofilteredVerdict is_cofiltered(const FinCategory& c);

}  // namespace fintopos
