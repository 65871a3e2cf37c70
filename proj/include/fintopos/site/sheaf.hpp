#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fintopos/presheaf/presheaf.hpp"
#include "fintopos/site/site.hpp"

namespace fintopos {

/// The sieve as a subpresheaf of h_X; elements are morphism names.
Presheaf sieve_presheaf(const CatPtr& c, ObjId x, SieveMask s);

/// A matching family for a sieve S on X: one section per member of S, listed
/// in morphism id order, with s_(f∘g) = F(g)(s_f).
struct MatchingFamily {
  ObjId object = kNone;
  SieveMask sieve = 0;
  std::vector<ElemId> sections;
};

std::vector<MatchingFamily> matching_families(const Presheaf& f, ObjId x, SieveMask s);
/// (F(f)(e))_f for f in S.
MatchingFamily restrict_to(const Presheaf& f, ObjId x, SieveMask s, ElemId e);

struct SheafCounterexample {
  ObjId object = kNone;
  SieveMask sieve = 0;
  std::string kind;  // "no-amalgamation" or "non-unique"
  MatchingFamily family;
};

struct SheafVerdict {
  bool sheaf = false;
  std::optional<SheafCounterexample> counterexample;
};

/// Every matching family over every covering sieve has exactly one amalgamation.
SheafVerdict is_sheaf(const Presheaf& f, const Site& s);
/// Same condition on the declared covers only: every family of sections
/// compatible on all overlaps (W, g, g' with f_i∘g = f_j∘g') amalgamates
/// uniquely.
bool is_sheaf_coverform(const Presheaf& f, const Site& s);
/// At most one amalgamation everywhere.
bool is_separated(const Presheaf& f, const Site& s);

struct PlusIndex;

struct PlusResult {
  PresheafPtr plus;
  PresheafMorphism unit;  // F -> F⁺
  std::shared_ptr<const PlusIndex> index;  // member families and their classes
};

/// F⁺(X): matching families over covering sieves of X, identified when they
/// agree on some common covering sieve. Classes that contain an element of
/// F(X) come first and keep its label; the others are labelled by their
/// least representative. On the trivial topology F⁺ == F.
PlusResult plus_construction(const PresheafPtr& f, const Site& s);
/// φ⁺: F⁺ -> G⁺ between the given plus constructions.
PresheafMorphism plus_morphism(const PresheafMorphism& phi, const PlusResult& fp, const PlusResult& gp, const Site& s);

struct SheafificationResult {
  PresheafPtr sheaf;
  PresheafMorphism unit;               // F -> aF
  std::vector<PresheafPtr> stages;     // F⁺, F⁺⁺
  PlusResult first, second;
};

SheafificationResult sheafify(const PresheafPtr& f, const Site& s);
/// a(φ) with a(φ)∘unit_F = unit_G∘φ.
PresheafMorphism sheafify_morphism(const PresheafMorphism& phi, const SheafificationResult& af,
                                   const SheafificationResult& ag, const Site& s);
PresheafMorphism sheafify_morphism(const PresheafMorphism& phi, const Site& s);

/// ε X = a h_X.
SheafificationResult epsilon(const SitePtr& s, ObjId x);
/// ε f: ε X -> ε Y.
PresheafMorphism epsilon_morphism(const SitePtr& s, MorId f);

}  // namespace fintopos
