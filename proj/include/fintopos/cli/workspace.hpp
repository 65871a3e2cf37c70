#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fintopos/fincat/functor.hpp"
#include "fintopos/presheaf/topos.hpp"
#include "fintopos/site/site.hpp"

namespace fintopos {

// Workspace text format, one statement per line, '#' starts a comment.
//
//   config seed 0 | config budget default | config bound 3
//
//   category NAME                      poset NAME
//     object X [identity ID]             object X
//     morphism F : X -> Y                leq X Y
//     compose G F = H                  end
//   end
//
//   presheaf NAME on CATEGORY
//     values X : a b c
//     action F : a->b c->b             (element of F(tgt) -> element of F(src))
//   end
//
//   finfunctor NAME : CATEGORY -> CATEGORY
//     object X = Y
//     morphism F = G
//   end
//
//   handle NAME = finset [bound N]
//   handle NAME = presheaves CATEGORY [bound N]
//   handle NAME = sheaves SITE [bound N]
//
//   site NAME on CATEGORY
//     cover X : F G ...                (an empty family is allowed)
//   end
//   site NAME = trivial CATEGORY
//   site NAME = canonical CATEGORY [max K]
//
//   functor NAME : CATEGORY -> HANDLE
//     object X = PRESHEAF | object X = { a b }   (inline sets in finset handles)
//     morphism F [@ BASEOBJ] : a->b ...
//   end
//   functor NAME = corepresentable CATEGORY X in HANDLE
//   functor NAME = yoneda CATEGORY in HANDLE
//   functor NAME = yoneda-after FINFUNCTOR in HANDLE
//   functor NAME = constant CATEGORY PRESHEAF in HANDLE
//   functor NAME = epsilon SITE
//
// Identities never need to be written. Names and labels are whitespace free
// and avoid the characters {}:=# and the sequence "->".

struct WorkspaceConfig {
  std::uint64_t seed = 0;
  std::string budget = "default";
  int bound = 3;

  bool operator==(const WorkspaceConfig&) const = default;
};

enum class EntityKind { category, finfunctor, presheaf, handle, site, functor };
const char* kind_name(EntityKind k);

struct CategoryEntry {
  std::string name;
  bool poset = false;
  CatPtr category;
};

struct FinFunctorEntry {
  std::string name;
  FinFunctor functor;
};

struct PresheafEntry {
  std::string name;
  PresheafPtr presheaf;
};

enum class HandleKind { finset, presheaves, sheaves };

struct HandleEntry {
  std::string name;
  HandleKind kind = HandleKind::finset;
  std::string over;  // category or site name; empty for finset
  int bound = 3;
  ToposPtr topos;
};

struct SiteEntry {
  std::string name;
  std::string form = "declared";  // "declared", "trivial" or "canonical"
  std::string base;
  int max_family = 4;             // canonical only
  SitePtr site;
};

struct FunctorEntry {
  std::string name;
  // "explicit", "corepresentable", "yoneda", "yoneda-after", "constant" or "epsilon".
  std::string form = "explicit";
  std::vector<std::string> args;         // builtin arguments, as written
  std::string handle;                    // empty for epsilon
  std::vector<std::string> object_refs;  // explicit: presheaf name per object, "" for inline sets
  ToposFunctor functor;
};

/// One parse problem, located at a line of the input.
struct LocatedError {
  int line = 0;
  std::string entity;  // e.g. "presheaf P"; empty for stray lines
  std::string reason;
};

class WorkspaceError : public Error {
 public:
  explicit WorkspaceError(std::vector<LocatedError> errors);
  const std::vector<LocatedError>& errors() const { return errors_; }

 private:
  std::vector<LocatedError> errors_;
};

/// Named entities in declaration order. Lookups throw ContractError on an
/// unknown name.
class Workspace {
 public:
  WorkspaceConfig config;
  std::vector<CategoryEntry> categories;
  std::vector<FinFunctorEntry> finfunctors;
  std::vector<PresheafEntry> presheaves;
  std::vector<HandleEntry> handles;
  std::vector<SiteEntry> sites;
  std::vector<FunctorEntry> functors;
  std::vector<std::pair<EntityKind, std::size_t>> order;  // (kind, index into its list)

  const CategoryEntry& category(std::string_view name) const;
  const FinFunctorEntry& finfunctor(std::string_view name) const;
  const PresheafEntry& presheaf(std::string_view name) const;
  const HandleEntry& handle(std::string_view name) const;
  const SiteEntry& site(std::string_view name) const;
  const FunctorEntry& functor(std::string_view name) const;

  /// The handle budget: the configured profile with the given value bound.
  Budget budget(int bound) const;
};

/// Every problem is collected; entities depending on a broken one are skipped
/// without a second error. Throws WorkspaceError when anything was wrong.
Workspace parse_workspace(std::string_view text);
Workspace load_workspace(const std::string& path);

/// Canonical text: config first, then entities in declaration order.
std::string print_workspace(const Workspace& ws);

/// Same config, same names in the same order, identical category data,
/// presheaves, handles, site covers and functor tables.
bool same_workspace(const Workspace& a, const Workspace& b);

}  // namespace fintopos
