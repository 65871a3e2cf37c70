#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fintopos/fincat/category.hpp"

namespace fintopos {

struct FinFunctor {
  std::string name;
  CatPtr dom;
  CatPtr cod;
  std::vector<ObjId> obj_map;
  std::vector<MorId> mor_map;
};

ValidationReport validate_functor(const FinFunctor& f);

FinFunctor identity_functor(CatPtr c);
FinFunctor constant_functor(CatPtr dom, CatPtr cod, ObjId z);
/// g∘f; requires cod f == dom g.
FinFunctor compose(const FinFunctor& g, const FinFunctor& f);
/// The same assignment viewed as dom^op -> cod^op.
FinFunctor opposite(const FinFunctor& f, CatPtr dom_op, CatPtr cod_op);

struct NatTransf {
  std::shared_ptr<const FinFunctor> dom;
  std::shared_ptr<const FinFunctor> cod;
  std::vector<MorId> components;  // per object of the common domain
};

/// Every naturality square cod(f)∘α_X == α_Y∘dom(f) holds.
bool is_natural(const NatTransf& alpha);

/// All natural transformations F => G, in lexicographic order of the
/// component vectors. Duplicate free by construction.
std::vector<NatTransf> enumerate_nat_transfs(const FinFunctor& f, const FinFunctor& g);

struct FullyFaithfulVerdict {
  bool fully_faithful = false;
  bool faithful = false;
  bool full = false;
  std::optional<std::pair<ObjId, ObjId>> witness;  // first failing (X, Y)
};

/// Checks that each hom map [X, Y] -> [FX, FY] is a bijection.
FullyFaithfulVerdict is_fully_faithful(const FinFunctor& f);

}  // namespace fintopos
