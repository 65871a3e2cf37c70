#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fintopos/presheaf/topos.hpp"
#include "fintopos/site/site.hpp"

namespace fintopos {

struct CorpusBounds {
  int value_bound = 3;         // presheaf values and codomain handle objects
  int random_categories = 2;   // seeded random posets, 2..4 objects
  int random_presheaves = 6;   // seeded samples per category
};

/// A named functor into a codomain handle. Controls are deliberately bad
/// inputs that some checker must reject.
struct FunctorFixture {
  std::string name;
  ToposFunctor functor;
  bool control = false;
};

struct Corpus {
  std::uint64_t seed = 0;
  CorpusBounds bounds;
  std::vector<CatPtr> categories;                 // fixtures first, then random posets
  std::size_t fixture_count = 0;                  // categories[0, fixture_count) are fixtures
  std::vector<std::vector<PresheafPtr>> samples;  // per category
  std::vector<SitePtr> sites;
  ToposPtr finset;
  ToposPtr arrow_presheaves;                      // PSh(walking arrow)
  std::vector<FunctorFixture> functors;

  const FunctorFixture& functor(const std::string& name) const;
};

/// Deterministic per (seed, bounds). ContractError when bounds are outside
/// value_bound 1..3, random_categories 0..8, random_presheaves 0..64.
Corpus corpus_generate(std::uint64_t seed, const CorpusBounds& bounds = {});

/// A random poset on n objects: i <= j drawn for i < j, then closed transitively.
CatPtr random_poset(const std::string& name, int n, std::uint64_t seed);

/// FNV-1a over a canonical description of the corpus.
std::uint64_t corpus_digest(const Corpus& corpus);

/// FNV-1a, 64 bit, chainable.
std::uint64_t fnv1a(const std::string& bytes, std::uint64_t h = 0xcbf29ce484222325ULL);

}  // namespace fintopos
