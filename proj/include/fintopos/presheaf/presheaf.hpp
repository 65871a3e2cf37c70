#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fintopos/fincat/category.hpp"

namespace fintopos {

using ElemId = int;

/// A functor base^op -> FinSet with labelled elements. Elements of F(X) are
/// the indices 0..size(X)-1; labels are unique per object.
struct Presheaf {
  CatPtr base;
  std::vector<std::vector<std::string>> values;  // per object
  // actions[f] for f: X -> Y maps an element of F(Y) to an element of F(X).
  std::vector<std::vector<ElemId>> actions;

  int size(ObjId x) const { return static_cast<int>(values[x].size()); }
  ElemId act(MorId f, ElemId y) const { return actions[f][y]; }
  const std::string& label(ObjId x, ElemId e) const { return values[x][e]; }
  std::optional<ElemId> find(ObjId x, const std::string& label) const;
  std::size_t total_size() const;
};

/// Same base and same sizes and actions; labels ignored.
bool same_shape(const Presheaf& a, const Presheaf& b);
/// same_shape plus identical labels.
bool operator==(const Presheaf& a, const Presheaf& b);

/// Identity and contravariant composition laws, label uniqueness, ranges.
ValidationReport validate_presheaf(const Presheaf& f);
/// Throws ValidationError on invalid input.
Presheaf make_presheaf(CatPtr base, std::vector<std::vector<std::string>> values,
                       std::vector<std::vector<ElemId>> actions);

/// Numeric labels "0", "1", ...
std::vector<std::string> numbered_labels(int n);

Presheaf terminal_presheaf(CatPtr base);
Presheaf initial_presheaf(CatPtr base);
/// Presheaf on the terminal category: a finite set.
Presheaf finite_set(std::vector<std::string> labels);
Presheaf finite_set(int n);

using PresheafPtr = std::shared_ptr<const Presheaf>;

/// A natural transformation between presheaves over the same base.
struct PresheafMorphism {
  PresheafPtr dom;
  PresheafPtr cod;
  std::vector<std::vector<ElemId>> components;  // per object, dom elem -> cod elem

  ElemId at(ObjId x, ElemId e) const { return components[x][e]; }
};

/// Same endpoints (by shape) and same components.
bool operator==(const PresheafMorphism& a, const PresheafMorphism& b);
bool same_components(const PresheafMorphism& a, const PresheafMorphism& b);

bool is_natural(const PresheafMorphism& m);
ValidationReport validate_morphism(const PresheafMorphism& m);

PresheafMorphism identity_morphism(const PresheafPtr& f);
/// g∘f; throws ContractError when cod f and dom g differ.
PresheafMorphism compose(const PresheafMorphism& g, const PresheafMorphism& f);
/// Pointwise bijective.
bool is_iso(const PresheafMorphism& m);
/// Pointwise inverse of an iso; throws ContractError otherwise.
PresheafMorphism inverse(const PresheafMorphism& m);
/// Unique morphism into the terminal presheaf of the same base.
PresheafMorphism to_terminal(const PresheafPtr& f);

/// All natural transformations dom -> cod, in lexicographic order of the
/// per-object component tables (objects in id order, elements in index
/// order). Throws ResourceError when more than `cap` exist.
std::vector<PresheafMorphism> enumerate_morphisms(const PresheafPtr& dom, const PresheafPtr& cod,
                                                  std::size_t cap = 1'000'000);
/// The first k of them in the same order, without enumerating the rest.
std::vector<PresheafMorphism> first_morphisms(const PresheafPtr& dom, const PresheafPtr& cod, std::size_t k);
/// Counts without materializing.
std::size_t count_morphisms(const Presheaf& dom, const Presheaf& cod,
                            std::size_t cap = 100'000'000);

/// A natural bijection, if one exists.
std::optional<PresheafMorphism> find_iso(const PresheafPtr& a, const PresheafPtr& b);
bool are_isomorphic(const Presheaf& a, const Presheaf& b);

/// Stable 64-bit digest of a presheaf (base name, sizes, actions, labels).
std::uint64_t digest(const Presheaf& f);

inline PresheafPtr share(Presheaf f) { return std::make_shared<const Presheaf>(std::move(f)); }

}  // namespace fintopos
