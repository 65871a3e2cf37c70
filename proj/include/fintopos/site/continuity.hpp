#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fintopos/presheaf/topos.hpp"
#include "fintopos/site/sheaf.hpp"

namespace fintopos {

/// ε: C -> Sh(S), X ↦ a h_X.
ToposFunctor epsilon_functor(const SitePtr& s, Budget budget = {});

struct ContinuityVerdict {
  bool continuous = false;
  std::optional<ObjId> object;         // failing cover: its target
  std::optional<Family> family;        // and members
  HandleStrictEpiVerdict witness;
  std::size_t covers_checked = 0;
};

/// Every declared cover is sent to a strict epimorphic family of the codomain handle.
ContinuityVerdict is_continuous(const ToposFunctor& p, const Site& s);

struct SubcanonicalVerdict {
  bool subcanonical = false;
  bool covers_strict_epi = false;        // every declared cover strict epi in the base
  bool representables_sheaves = false;   // every h_X passes is_sheaf
  bool agree = false;
  std::optional<ObjId> failing_object;
  std::optional<Family> failing_family;
};

/// Strict epimorphy of the covers is decided against the representables
/// (Y = h_Z in the presheaf handle, i.e. Y = Z in the base), and compared with
/// the sheaf condition on every representable.
SubcanonicalVerdict is_subcanonical(const Site& s);

}  // namespace fintopos
