#include "doctest.h"

#include <map>
#include <set>

#include "fintopos/fincat/category.hpp"
#include "fintopos/fincat/functor.hpp"
#include "fintopos/fincat/limits.hpp"
#include "fintopos/verify/fixtures.hpp"

using namespace fintopos;
namespace fx = fintopos::fixtures;

namespace {

// Independent axiom scan straight off the raw tables.
bool naive_axioms_hold(const CategoryData& d) {
  const int m = static_cast<int>(d.morphisms.size());
  auto comp = [&](int g, int f) { return d.compose[g * m + f]; };
  for (int f = 0; f < m; ++f)
    for (int g = 0; g < m; ++g) {
      bool composable = d.morphisms[f].tgt == d.morphisms[g].src;
      int h = comp(g, f);
      if (composable != (h != kNone)) return false;
      if (composable && (d.morphisms[h].src != d.morphisms[f].src || d.morphisms[h].tgt != d.morphisms[g].tgt))
        return false;
    }
  for (int f = 0; f < m; ++f) {
    if (comp(d.identity[d.morphisms[f].tgt], f) != f) return false;
    if (comp(f, d.identity[d.morphisms[f].src]) != f) return false;
  }
  for (int f = 0; f < m; ++f)
    for (int g = 0; g < m; ++g)
      for (int h = 0; h < m; ++h) {
        if (d.morphisms[f].tgt != d.morphisms[g].src || d.morphisms[g].tgt != d.morphisms[h].src) continue;
        if (comp(h, comp(g, f)) != comp(comp(h, g), f)) return false;
      }
  return true;
}

// Every component assignment, filtered by the naturality squares.
std::size_t brute_nat_count(const FinFunctor& f, const FinFunctor& g) {
  const FinCategory& c = *f.dom;
  const FinCategory& d = *f.cod;
  std::vector<std::vector<MorId>> choices;
  for (ObjId x = 0; x < c.num_objects(); ++x) choices.push_back(d.hom(f.obj_map[x], g.obj_map[x]));
  std::vector<std::size_t> idx(choices.size(), 0);
  std::size_t count = 0;
  while (true) {
    bool empty = false;
    for (auto& ch : choices) empty = empty || ch.empty();
    if (empty) return 0;
    bool ok = true;
    for (MorId u = 0; u < c.num_morphisms() && ok; ++u) {
      MorId ax = choices[c.src(u)][idx[c.src(u)]];
      MorId ay = choices[c.tgt(u)][idx[c.tgt(u)]];
      ok = d.compose(g.mor_map[u], ax) == d.compose(ay, f.mor_map[u]);
    }
    count += ok ? 1 : 0;
    std::size_t i = 0;
    while (i < idx.size() && ++idx[i] == choices[i].size()) idx[i++] = 0;
    if (i == idx.size()) return count;
  }
}

bool naive_cofiltered(const FinCategory& c) {
  if (c.num_objects() == 0) return false;
  for (ObjId a = 0; a < c.num_objects(); ++a)
    for (ObjId b = 0; b < c.num_objects(); ++b) {
      bool span = false;
      for (MorId f = 0; f < c.num_morphisms(); ++f)
        for (MorId g = 0; g < c.num_morphisms(); ++g)
          span = span || (c.src(f) == c.src(g) && c.tgt(f) == a && c.tgt(g) == b);
      if (!span) return false;
    }
  for (MorId u = 0; u < c.num_morphisms(); ++u)
    for (MorId v = 0; v < c.num_morphisms(); ++v) {
      if (c.src(u) != c.src(v) || c.tgt(u) != c.tgt(v)) continue;
      bool eq = false;
      for (MorId w = 0; w < c.num_morphisms(); ++w)
        eq = eq || (c.tgt(w) == c.src(u) && c.compose(u, w) == c.compose(v, w));
      if (!eq) return false;
    }
  return true;
}

}  // namespace

TEST_CASE("terminal category validates") {
  auto r = validate_category(fx::one()->data());
  CHECK(r.ok());
  CHECK(fx::one()->num_morphisms() == 1);
}

TEST_CASE("unit-law violation is reported with its witness") {
  CategoryData d = fx::walking_arrow()->data();
  const int m = static_cast<int>(d.morphisms.size());
  MorId f = fx::walking_arrow()->morphism("f");
  MorId id0 = d.identity[0];
  d.compose[f * m + id0] = id0;
  auto r = validate_category(d);
  REQUIRE_FALSE(r.ok());
  bool found = false;
  for (const auto& v : r.violations)
    if (v.witness.size() >= 2 && v.witness[0] == f && v.witness[1] == id0) found = true;
  CHECK(found);
  CHECK_THROWS_AS(FinCategory{d}, ValidationError);
}

TEST_CASE("dangling ids are reported, not repaired") {
  CategoryData d = fx::walking_arrow()->data();
  d.morphisms[fx::walking_arrow()->morphism("f")].tgt = 7;
  auto r = validate_category(d);
  CHECK_FALSE(r.ok());
}

TEST_CASE("fixture categories pass both the validator and the naive scan") {
  for (const auto& c : fx::categories()) {
    CAPTURE(c->name());
    CHECK(validate_category(c->data()).ok());
    CHECK(naive_axioms_hold(c->data()));
    CHECK(c->num_objects() <= 4);
  }
}

TEST_CASE("opposite is an involution and stays valid") {
  for (const auto& c : fx::categories()) {
    CAPTURE(c->name());
    CategoryData op = opposite(c->data());
    CHECK(validate_category(op).ok());
    CHECK(opposite(op) == c->data());
  }
  auto op = opposite(*fx::walking_arrow());
  MorId f = op->morphism("f");
  CHECK(op->src(f) == 1);
  CHECK(op->tgt(f) == 0);
  CHECK(opposite(*fx::one())->num_morphisms() == 1);
}

TEST_CASE("corpus bounds are enforced") {
  CHECK_THROWS_AS(make_bounded_category(make_chain("big", 7)->data()), ValidationError);
  CHECK_NOTHROW(make_bounded_category(fx::chain4()->data()));
}

TEST_CASE("functor validation") {
  for (const auto& c : fx::categories()) {
    CHECK(validate_functor(identity_functor(c)).ok());
    CHECK(validate_functor(constant_functor(c, fx::chain3(), 1)).ok());
  }
  // f sent to id_1 while 0 -> 0: typing fails.
  FinFunctor bad = identity_functor(fx::walking_arrow());
  MorId f = fx::walking_arrow()->morphism("f");
  bad.mor_map[f] = fx::walking_arrow()->identity(1);
  auto r = validate_functor(bad);
  REQUIRE_FALSE(r.ok());
  CHECK(r.violations.front().witness.front() == f);

  FinFunctor unmapped = identity_functor(fx::walking_arrow());
  unmapped.mor_map.pop_back();
  CHECK_FALSE(validate_functor(unmapped).ok());
}

TEST_CASE("natural transformations between constant functors are the hom-set") {
  for (const auto& c : {fx::chain3(), fx::diamond(), fx::parallel_pair(), fx::z2()})
    for (ObjId x = 0; x < c->num_objects(); ++x)
      for (ObjId y = 0; y < c->num_objects(); ++y) {
        auto ts = enumerate_nat_transfs(constant_functor(fx::walking_arrow(), c, x),
                                        constant_functor(fx::walking_arrow(), c, y));
        CHECK(ts.size() == c->hom(x, y).size());
      }
  auto one = enumerate_nat_transfs(identity_functor(fx::one()), identity_functor(fx::one()));
  CHECK(one.size() == 1);
}

TEST_CASE("nat-transf enumeration agrees with brute force over all component choices") {
  for (const auto& dom : fx::categories()) {
    if (dom->num_objects() > 3) continue;
    for (const auto& cod : {fx::chain3(), fx::z2(), fx::parallel_pair(), fx::idempotent(), fx::span()}) {
      // Constant and identity-like functors give a spread of parallel pairs.
      std::vector<FinFunctor> fs;
      for (ObjId z = 0; z < cod->num_objects(); ++z) fs.push_back(constant_functor(dom, cod, z));
      if (dom == cod) fs.push_back(identity_functor(dom));
      for (const auto& f : fs)
        for (const auto& g : fs) {
          auto ts = enumerate_nat_transfs(f, g);
          CHECK(ts.size() == brute_nat_count(f, g));
          std::set<std::vector<MorId>> distinct;
          for (const auto& t : ts) {
            CHECK(is_natural(t));
            distinct.insert(t.components);
          }
          CHECK(distinct.size() == ts.size());
        }
    }
  }
}

TEST_CASE("fully faithful detection") {
  for (const auto& c : fx::categories()) CHECK(is_fully_faithful(identity_functor(c)).fully_faithful);
  auto v = is_fully_faithful(constant_functor(fx::walking_arrow(), fx::one(), 0));
  CHECK_FALSE(v.fully_faithful);
  CHECK(v.witness.has_value());
  // Constant functor on Z/2: [*,*] has two elements but the image one.
  auto w = is_fully_faithful(constant_functor(fx::z2(), fx::one(), 0));
  CHECK_FALSE(w.faithful);
  CHECK(w.full);
}

TEST_CASE("universal cone search") {
  auto c3 = fx::chain3();
  auto term = universal_cone_search(empty_diagram(c3));
  REQUIRE(term);
  CHECK(term->apex == 2);
  auto c2 = make_chain("c2", 2);
  auto prod = universal_cone_search(pair_diagram(c2, 0, 1));
  REQUIRE(prod);
  CHECK(prod->apex == 0);
  CHECK_FALSE(universal_cone_search(pair_diagram(fx::discrete2(), 0, 1)));
  auto meet = universal_cone_search(pair_diagram(fx::diamond(), 1, 2));
  REQUIRE(meet);
  CHECK(fx::diamond()->object_name(meet->apex) == "bot");
  auto join = universal_cocone_search(pair_diagram(fx::diamond(), 1, 2));
  REQUIRE(join);
  CHECK(fx::diamond()->object_name(join->apex) == "top");
  // Z/2 has no equalizer of e and s.
  auto z = fx::z2();
  CHECK_FALSE(universal_cone_search(parallel_diagram(z, z->morphism("e"), z->morphism("s"))));
}

TEST_CASE("limiting cones factor every cone exactly once") {
  for (const auto& c : fx::categories()) {
    std::vector<FinFunctor> diagrams{empty_diagram(c)};
    for (ObjId a = 0; a < c->num_objects(); ++a)
      for (ObjId b = 0; b < c->num_objects(); ++b) diagrams.push_back(pair_diagram(c, a, b));
    for (MorId u = 0; u < c->num_morphisms(); ++u)
      for (MorId v = 0; v < c->num_morphisms(); ++v)
        if (c->src(u) == c->src(v) && c->tgt(u) == c->tgt(v)) diagrams.push_back(parallel_diagram(c, u, v));
    for (const auto& d : diagrams) {
      if (auto lim = universal_cone_search(d))
        for (const auto& other : enumerate_cones(d)) CHECK(count_factorizations(*lim, other) == 1);
      if (auto colim = universal_cocone_search(d))
        for (const auto& other : enumerate_cocones(d)) CHECK(count_factorizations(*colim, other) == 1);
    }
  }
}

TEST_CASE("cofilteredness") {
  CHECK(is_cofiltered(*fx::one()).cofiltered);
  auto d = is_cofiltered(*fx::discrete2());
  CHECK_FALSE(d.cofiltered);
  CHECK(d.reason == "span");
  CHECK(d.witness == std::vector<int>{0, 1});
  CHECK(is_cofiltered(*opposite(*fx::diamond())).cofiltered);
  auto p = is_cofiltered(*fx::parallel_pair());
  CHECK_FALSE(p.cofiltered);
  CHECK(p.reason == "equalize");
  CHECK(is_cofiltered(*make_category(CategoryBuilder("none").data())).reason == "empty");
  for (const auto& c : fx::categories()) {
    CAPTURE(c->name());
    CHECK(is_cofiltered(*c).cofiltered == naive_cofiltered(*c));
    auto op = opposite(*c);
    CHECK(is_cofiltered(*op).cofiltered == naive_cofiltered(*op));
  }
}
