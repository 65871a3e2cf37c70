#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fintopos/fincat/category.hpp"

namespace fintopos {

/// A set of morphisms of a category with at most 64 morphisms, as a bitmask
/// over morphism ids.
using SieveMask = std::uint64_t;

inline bool has(SieveMask s, MorId f) { return (s >> f) & 1U; }

/// A family of morphisms with a common target.
using Family = std::vector<MorId>;

/// Morphisms g∘h for g in the family and h composable: the sieve generated.
SieveMask generated_sieve(const FinCategory& c, ObjId x, const Family& family);
SieveMask maximal_sieve(const FinCategory& c, ObjId x);
/// All morphisms target x and the set is closed under precomposition.
bool is_sieve(const FinCategory& c, ObjId x, SieveMask s);
/// f*S = {g | f∘g ∈ S}, a sieve on src f.
SieveMask pullback_sieve(const FinCategory& c, MorId f, SieveMask s);
/// Every sieve on x, ascending by mask.
std::vector<SieveMask> all_sieves(const FinCategory& c, ObjId x);
std::vector<MorId> members(SieveMask s);

/// Pairs of members that meet: f_i∘g == f_j∘g' for some W, g: W -> X_i,
/// g': W -> X_j (i <= j, trivial self-overlaps g == g' omitted).
struct Overlap {
  int i, j;
  MorId g, gp;
};
std::vector<Overlap> family_overlaps(const FinCategory& c, const Family& family);

/// A finite category with declared covering families and the Grothendieck
/// topology they generate.
class Site {
 public:
  const std::string& name() const { return name_; }
  const CatPtr& base() const { return base_; }
  /// Declared families per object.
  const std::vector<std::vector<Family>>& covers() const { return covers_; }
  /// Covering sieves on x: the maximal sieve first, the rest ascending.
  const std::vector<SieveMask>& topology(ObjId x) const { return topology_[x]; }
  bool covering(ObjId x, SieveMask s) const;
  /// Only maximal sieves cover.
  bool is_trivial() const;
  std::size_t num_covering_sieves() const;

 private:
  friend std::shared_ptr<const Site> generate_topology(std::string, CatPtr, std::vector<std::vector<Family>>);
  std::string name_;
  CatPtr base_;
  std::vector<std::vector<Family>> covers_;
  std::vector<std::vector<SieveMask>> topology_;
};

using SitePtr = std::shared_ptr<const Site>;

/// Smallest topology containing the maximal sieves and the sieves generated
/// by the declared covers, closed under pullback and transitivity (fixpoint
/// over the finite sieve lattice). Throws ContractError on a family member
/// with the wrong target or a base with more than 64 morphisms.
SitePtr generate_topology(std::string name, CatPtr base, std::vector<std::vector<Family>> covers);
/// Re-saturates the topology of an existing site seen as declared sieves.
SitePtr saturate(const Site& s);
/// Identity families only.
SitePtr trivial_site(CatPtr base);

/// Strict epimorphic family inside a finite category: for every object Y and
/// every compatible tuple (y_i: X_i -> Y), exactly one y: X -> Y with
/// y∘f_i = y_i. Compatibility quantifies over all W, g: W -> X_i, g': W -> X_j
/// with f_i∘g = f_j∘g'.
struct StrictEpiWitness {
  std::string kind;          // "no-factoring" or "non-unique"
  ObjId target = kNone;      // Y
  std::vector<MorId> tuple;  // the compatible family
};

struct StrictEpiVerdict {
  bool strict_epi = false;
  std::optional<StrictEpiWitness> witness;
};

StrictEpiVerdict is_strict_epi_family(const FinCategory& c, ObjId x, const Family& family);

struct UniversalVerdict {
  bool universal = false;
  bool complete = true;                      // every needed pullback found
  std::vector<std::pair<MorId, MorId>> gaps;  // (base change g, member f) with no pullback
  std::optional<MorId> failing_base_change;  // g whose pulled-back family fails
  std::optional<StrictEpiWitness> witness;
};

/// Strict epi after every base change g: W -> X, pullbacks found by
/// universal_cone_search. A missing pullback is a gap, reported apart from
/// a failure; a family with gaps is not claimed universal.
UniversalVerdict is_universal_strict_epi(const FinCategory& c, ObjId x, const Family& family);

struct CanonicalPretopology {
  std::vector<std::vector<Family>> covers;  // per object
  std::vector<std::pair<ObjId, Family>> gap_families;
  int max_family_size = 0;
};

/// Every family of distinct morphisms into each object, of size at most
/// max_family_size, that is a universal strict epi with no pullback gaps.
/// Throws ResourceError when an object has more than 20 incoming morphisms.
CanonicalPretopology canonical_pretopology(const CatPtr& c, int max_family_size = 4);

}  // namespace fintopos
