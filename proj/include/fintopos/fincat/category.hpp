#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "fintopos/error.hpp"

namespace fintopos {

using ObjId = int;
using MorId = int;

inline constexpr int kNone = -1;

/// Corpus-scale limits. Derived categories (categories of elements,
/// opposites of those) are exempt; only inputs are checked against these.
struct CategoryBounds {
  int max_objects = 6;
  int max_non_identity_morphisms = 24;
};

struct MorphismData {
  std::string name;
  ObjId src = kNone;
  ObjId tgt = kNone;

  bool operator==(const MorphismData&) const = default;
};

/// Raw description of a finite category. Nothing here is trusted until
/// validate_category() has passed.
struct CategoryData {
  std::string name;
  std::vector<std::string> objects;
  std::vector<MorphismData> morphisms;
  std::vector<MorId> identity;  // per object
  // Row-major, compose[g * m + f] = g∘f, kNone where tgt f != src g.
  std::vector<MorId> compose;

  bool operator==(const CategoryData&) const = default;
};

struct Violation {
  std::string kind;
  std::string message;
  std::vector<int> witness;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  void add(std::string kind, std::string message, std::vector<int> witness = {}) {
    violations.push_back({std::move(kind), std::move(message), std::move(witness)});
  }
  std::string summary() const;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

/// Scans every axiom of a category (well-typed ids, identities, total
/// composition on composable pairs, unit and associativity laws) and records
/// a witness for each violation. Malformed data is reported, never repaired.
ValidationReport validate_category(const CategoryData& data);

/// Adds bound violations (object / non-identity morphism counts) to a report.
void check_bounds(const CategoryData& data, const CategoryBounds& bounds,
                  ValidationReport& report);

/// A validated, immutable finite category with a precomputed hom index.
class FinCategory {
 public:
  /// Throws ValidationError when `data` violates an axiom.
  explicit FinCategory(CategoryData data);
  struct Trusted {};
  FinCategory(CategoryData data, Trusted);

  const CategoryData& data() const { return data_; }
  const std::string& name() const { return data_.name; }

  int num_objects() const { return static_cast<int>(data_.objects.size()); }
  int num_morphisms() const { return static_cast<int>(data_.morphisms.size()); }

  ObjId src(MorId f) const { return data_.morphisms[f].src; }
  ObjId tgt(MorId f) const { return data_.morphisms[f].tgt; }
  MorId identity(ObjId x) const { return data_.identity[x]; }
  bool is_identity(MorId f) const { return data_.identity[src(f)] == f; }

  const std::string& object_name(ObjId x) const { return data_.objects[x]; }
  const std::string& morphism_name(MorId f) const { return data_.morphisms[f].name; }

  /// g∘f; throws ContractError when the pair is not composable.
  MorId compose(MorId g, MorId f) const;
  /// g∘f or kNone.
  MorId try_compose(MorId g, MorId f) const {
    return data_.compose[static_cast<std::size_t>(g) * data_.morphisms.size() + f];
  }

  const std::vector<MorId>& hom(ObjId x, ObjId y) const {
    return homs_[static_cast<std::size_t>(x) * data_.objects.size() + y];
  }
  /// Morphisms with the given target, in id order.
  const std::vector<MorId>& into(ObjId y) const { return into_[y]; }
  /// Morphisms with the given source, in id order.
  const std::vector<MorId>& out_of(ObjId x) const { return out_of_[x]; }

  std::optional<ObjId> find_object(std::string_view name) const;
  std::optional<MorId> find_morphism(std::string_view name) const;
  ObjId object(std::string_view name) const;    // throws ContractError
  MorId morphism(std::string_view name) const;  // throws ContractError

  int non_identity_count() const { return num_morphisms() - num_objects(); }

  bool operator==(const FinCategory& other) const { return data_ == other.data_; }

 private:
  void index();

  CategoryData data_;
  std::vector<std::vector<MorId>> homs_;
  std::vector<std::vector<MorId>> into_;
  std::vector<std::vector<MorId>> out_of_;
};

using CatPtr = std::shared_ptr<const FinCategory>;

/// Pointer equality or identical data.
bool same_category(const FinCategory& a, const FinCategory& b);

CatPtr make_category(CategoryData data);
/// Skips the axiom scan. Only for categories derived by construction from a
/// validated one (categories of elements); tests validate those separately.
CatPtr make_trusted_category(CategoryData data);
/// Validates and also enforces corpus bounds.
CatPtr make_bounded_category(CategoryData data, const CategoryBounds& bounds = {});

/// Source and target swapped, composition transposed, ids kept.
/// opposite(opposite(C)) has data identical to C.
CategoryData opposite(const CategoryData& data);
CatPtr opposite(const FinCategory& c);

/// Incremental construction by name. Identities are created automatically
/// (named id_<object> unless renamed) and identity compositions are filled in;
/// every other composable pair must be supplied.
class CategoryBuilder {
 public:
  explicit CategoryBuilder(std::string name) { data_.name = std::move(name); }

  ObjId add_object(std::string name, std::string identity_name = {});
  MorId add_morphism(std::string name, std::string_view src, std::string_view tgt);
  CategoryBuilder& set_compose(std::string_view g, std::string_view f, std::string_view result);

  /// Raw data including identity entries; unspecified pairs stay kNone.
  CategoryData data() const;
  CatPtr build() const { return make_category(data()); }

 private:
  ObjId obj(std::string_view name) const;
  MorId mor(std::string_view name) const;

  CategoryData data_;
  std::vector<std::tuple<MorId, MorId, MorId>> entries_;
};

/// Finite poset on `names` where leq[i][j] says names[i] <= names[j].
/// The order must be reflexive, transitive and antisymmetric.
/// Non-identity arrows are named "<a><<b>" e.g. "a<b".
CatPtr make_poset(std::string name, const std::vector<std::string>& names,
                  const std::vector<std::vector<bool>>& leq);
/// Chain 0 <= 1 <= ... <= n-1.
CatPtr make_chain(std::string name, int n);
/// Discrete category on n objects.
CatPtr make_discrete(std::string name, int n);
/// One-object category of a finite monoid given by its multiplication table
/// table[a][b] = a*b with element 0 the unit.
CatPtr make_monoid(std::string name, const std::vector<std::string>& elements,
                   const std::vector<std::vector<int>>& table);

/// The terminal category 1, shared by every FinSet handle.
const CatPtr& terminal_category();

}  // namespace fintopos
