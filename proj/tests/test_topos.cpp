#include "doctest.h"

#include <algorithm>

#include "fintopos/presheaf/enumerate.hpp"
#include "fintopos/presheaf/topos.hpp"
#include "fintopos/presheaf/yoneda.hpp"
#include "fintopos/site/continuity.hpp"
#include "fintopos/verify/fixtures.hpp"

using namespace fintopos;
namespace fx = fintopos::fixtures;

namespace {

PresheafMorphism element_map(const PresheafPtr& a, const PresheafPtr& b, std::vector<ElemId> f) {
  return PresheafMorphism{a, b, {std::move(f)}};
}

ToposFunctor point_functor(const ToposPtr& set, const std::string& point) {
  // Opens of the discrete space containing the point go to 1, the rest to ∅.
  auto c = fx::diamond();
  std::vector<std::vector<std::string>> sets(4);
  for (ObjId x = 0; x < 4; ++x) {
    const auto& n = c->object_name(x);
    if (n == "top" || n == point) sets[x] = {"*"};
  }
  std::vector<std::vector<ElemId>> maps(c->num_morphisms());
  for (MorId f = 0; f < c->num_morphisms(); ++f) maps[f].assign(sets[c->src(f)].size(), 0);
  return set_functor("p_" + point, c, set, sets, maps);
}

}  // namespace

TEST_CASE("finite sets as presheaves on 1") {
  Budget b;
  b.value_bound = 2;
  auto set = finset_category(b);
  CHECK(set->name() == "Set");
  REQUIRE(set->objects().size() == 3);
  for (int k = 0; k < 3; ++k) CHECK(set->objects()[k]->size(0) == k);
  CHECK_THROWS_AS(presheaf_category(fx::one(), 0), ContractError);
}

TEST_CASE("budget profiles") {
  CHECK(budget_profile("small").value_bound == 2);
  CHECK(budget_profile("default").profile == "default");
  CHECK(budget_profile("large").max_instances > budget_profile("default").max_instances);
  CHECK_THROWS_AS(budget_profile("huge"), ContractError);
  Budget tiny;
  tiny.max_objects = 5;
  CHECK_THROWS_AS(presheaf_category(fx::chain3(), tiny)->objects(), ResourceError);
}

TEST_CASE("strict epimorphic families of finite sets") {
  auto set = finset_category();
  auto ab = share(finite_set({"a", "b"}));
  auto a = share(finite_set({"a"}));
  auto b = share(finite_set({"b"}));
  auto ia = element_map(a, ab, {0});
  auto ib = element_map(b, ab, {1});
  CHECK(is_strict_epi_family(*set, {ia, ib}, ab).strict_epi);
  auto alone = is_strict_epi_family(*set, {ia}, ab);
  CHECK_FALSE(alone.strict_epi);
  CHECK(alone.kind == "non-unique");
  REQUIRE(alone.target);
  CHECK(alone.tuple.size() == 1);
  CHECK(is_strict_epi_family(*set, {identity_morphism(ab)}, ab).strict_epi);
  CHECK(is_strict_epi_family(*set, {}, share(finite_set(0))).strict_epi);
  CHECK_FALSE(is_strict_epi_family(*set, {}, a).strict_epi);
}

TEST_CASE("strict epi in presheaves is joint surjectivity") {
  auto c = fx::walking_arrow();
  auto psh = presheaf_category(c, 2);
  auto all = enumerate_presheaves(c, 2, 1000);
  for (std::size_t i = 0; i < all.size(); i += 2)
    for (std::size_t j = 0; j < all.size(); j += 3) {
      auto a = share(all[i]), x = share(all[j]);
      for (const auto& m : enumerate_morphisms(a, x, 50)) {
        bool surjective = true;
        for (ObjId o = 0; o < c->num_objects(); ++o) {
          std::vector<char> hit(x->size(o), 0);
          for (ElemId e : m.components[o]) hit[e] = 1;
          for (char h : hit) surjective = surjective && h;
        }
        CHECK(is_strict_epi_family(*psh, {m}, x).strict_epi == surjective);
      }
    }
}

TEST_CASE("presheaf handle colimits and limits are universal") {
  auto c = fx::walking_arrow();
  auto psh = presheaf_category(c, 2);
  const auto& objs = psh->objects();
  for (std::size_t i = 0; i < objs.size(); i += 4)
    for (std::size_t j = 0; j < objs.size(); j += 5) {
      auto d = pair_of(objs[i], objs[j]);
      auto colim = psh->colimit(d);
      for (std::size_t k = 0; k < objs.size(); k += 3)
        for (const auto& other : enumerate_cocones(d, objs[k])) {
          auto u = psh->mediate(d, colim, other);
          REQUIRE(u);
          CHECK(count_factorizations(colim, other) == 1);
        }
    }
}

TEST_CASE("sheaves on the discrete space behave like pairs of sets") {
  auto site = fx::discrete_space_site();
  Budget b;
  b.value_bound = 2;
  auto sh = sheaf_category(site, b);
  auto c = site->base();
  ObjId a = c->object("a"), bb = c->object("b");
  const auto& objs = sh->objects();
  // F(top) ≅ F(a) × F(b) must fit the bound, so up to iso: pairs with |F a|·|F b| <= 2.
  std::vector<PresheafPtr> classes;
  for (const auto& o : objs)
    if (std::none_of(classes.begin(), classes.end(), [&](const auto& r) { return sh->isomorphic(*r, *o); }))
      classes.push_back(o);
  CHECK(classes.size() == 8);
  for (const auto& o : classes) CHECK(o->size(c->object("top")) == o->size(a) * o->size(bb));
  for (std::size_t i = 0; i < objs.size(); ++i)
    for (std::size_t j = 0; j < objs.size(); ++j) {
      auto d = pair_of(objs[i], objs[j]);
      auto prod = sh->limit(d);
      CHECK(is_sheaf(*prod.apex, *site).sheaf);
      CHECK(prod.apex->size(a) == objs[i]->size(a) * objs[j]->size(a));
      CHECK(prod.apex->size(bb) == objs[i]->size(bb) * objs[j]->size(bb));
      auto coprod = sh->colimit(d);
      CHECK(is_sheaf(*coprod.apex, *site).sheaf);
      CHECK(coprod.apex->size(a) == objs[i]->size(a) + objs[j]->size(a));
      CHECK(coprod.apex->size(bb) == objs[i]->size(bb) + objs[j]->size(bb));
      for (std::size_t k = 0; k < objs.size(); k += 2)
        for (const auto& other : enumerate_cocones(d, objs[k])) {
          auto u = sh->mediate(d, coprod, other);
          REQUIRE(u);
          CHECK(count_factorizations(coprod, other) == 1);
          for (std::size_t l = 0; l < 2; ++l) CHECK(same_components(compose(*u, coprod.legs[l]), other.legs[l]));
        }
    }
  CHECK(sh->initial()->size(c->object("bot")) == 1);
}

TEST_CASE("trivial-topology sheaves are all presheaves") {
  for (const auto& c : {fx::walking_arrow(), fx::z2(), fx::span()}) {
    Budget b;
    b.value_bound = 2;
    auto sh = sheaf_category(trivial_site(c), b);
    auto psh = presheaf_category(c, b);
    CHECK(sh->objects().size() == psh->objects().size());
  }
}

TEST_CASE("functors into handles") {
  for (const auto& c : fx::categories()) {
    auto psh = presheaf_category(c, 2);
    auto h = yoneda_functor(psh);
    CHECK(validate_topos_functor(h).ok());
    CHECK(is_fully_faithful(h).fully_faithful);
  }
  auto set = finset_category();
  for (const auto& c : fx::categories())
    for (ObjId x = 0; x < c->num_objects(); ++x) CHECK(validate_topos_functor(corepresentable(c, x, set)).ok());
  // Broken composite: p(f) for the walking arrow set to a non-map.
  auto p = corepresentable(fx::chain3(), 0, set);
  p.mor[p.dom->morphism("0<2")].components[0][0] = 5;
  CHECK_FALSE(validate_topos_functor(p).ok());
}

TEST_CASE("continuity") {
  auto set = finset_category();
  auto site = fx::discrete_space_site();
  CHECK(validate_topos_functor(point_functor(set, "a")).ok());
  CHECK(is_continuous(point_functor(set, "a"), *site).continuous);
  CHECK(is_continuous(point_functor(set, "b"), *site).continuous);
  auto one = constant_topos_functor("1", site->base(), set, share(finite_set(1)));
  auto v = is_continuous(one, *site);
  CHECK_FALSE(v.continuous);
  REQUIRE(v.object);
  CHECK(site->base()->object_name(*v.object) == "bot");
  auto top = corepresentable(site->base(), site->base()->object("top"), set);
  auto w = is_continuous(top, *site);
  CHECK_FALSE(w.continuous);
  CHECK(site->base()->object_name(*w.object) == "top");
  for (const auto& c : fx::categories())
    CHECK(is_continuous(constant_topos_functor("1", c, set, share(finite_set(1))), *trivial_site(c)).continuous);
}

TEST_CASE("epsilon is continuous and fully faithful on subcanonical sites") {
  for (const auto& site : fx::sites()) {
    CAPTURE(site->name());
    Budget b;
    b.value_bound = 2;
    auto eps = epsilon_functor(site, b);
    CHECK(validate_topos_functor(eps).ok());
    CHECK(is_continuous(eps, *site).continuous);
    auto sub = is_subcanonical(*site);
    CHECK(sub.agree);
    if (sub.subcanonical) CHECK(is_fully_faithful(eps).fully_faithful);
  }
}

TEST_CASE("subcanonical sites") {
  for (const auto& c : fx::categories()) CHECK(is_subcanonical(*trivial_site(c)).subcanonical);
  CHECK(is_subcanonical(*fx::discrete_space_site()).subcanonical);
  CHECK(is_subcanonical(*fx::sierpinski_site()).subcanonical);
  auto c = fx::diamond();
  std::vector<std::vector<Family>> covers(4);
  covers[c->object("a")].push_back({});
  auto bad = generate_topology("empty-covers-a", c, covers);
  auto v = is_subcanonical(*bad);
  CHECK_FALSE(v.subcanonical);
  CHECK_FALSE(v.representables_sheaves);
  CHECK(v.agree);
  for (const auto& cc : {fx::diamond(), fx::chain3(), fx::chain4()})
    CHECK(is_subcanonical(*fx::canonical_site(cc)).subcanonical);
}
