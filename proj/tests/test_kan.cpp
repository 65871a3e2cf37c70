#include "doctest.h"

#include "fintopos/kan/extension.hpp"
#include "fintopos/kan/flat.hpp"
#include "fintopos/presheaf/enumerate.hpp"
#include "fintopos/presheaf/yoneda.hpp"
#include "fintopos/verify/fixtures.hpp"

using namespace fintopos;
namespace fx = fintopos::fixtures;

namespace {

PresheafPtr set_of(int n) { return share(finite_set(n)); }

// The constant functor 1 -> FinSet at A.
ToposFunctor at_set(const ToposPtr& set, int a) {
  return constant_topos_functor("A", fx::one(), set, set_of(a));
}

// A functor C -> FinSet given as a presheaf on C^op.
ToposFunctor covariant(const CatPtr& c, const Presheaf& g, const ToposPtr& set) {
  std::vector<std::vector<std::string>> sets;
  for (ObjId x = 0; x < c->num_objects(); ++x) sets.push_back(g.values[x]);
  return set_functor("g", c, set, sets, g.actions);
}

std::vector<ToposFunctor> corepresentables(const CatPtr& c, const ToposPtr& set) {
  std::vector<ToposFunctor> out;
  for (ObjId x = 0; x < c->num_objects(); ++x) out.push_back(corepresentable(c, x, set));
  return out;
}

}  // namespace

TEST_CASE("extension on the terminal category is S × A") {
  auto set = finset_category();
  for (int a = 0; a <= 3; ++a) {
    auto ext = make_extension(at_set(set, a));
    for (int s = 0; s <= 3; ++s) {
      auto v = (*ext)(set_of(s));
      CHECK(v->object()->size(0) == s * a);
      CHECK(v->cocone.legs.size() == static_cast<std::size_t>(s));
    }
  }
}

TEST_CASE("extension of representables and of the initial presheaf") {
  auto set = finset_category();
  for (const auto& c : fx::categories())
    for (const auto& p : corepresentables(c, set)) {
      auto ext = make_extension(p);
      CHECK((*ext)(share(initial_presheaf(c)))->object()->size(0) == 0);
      auto eta = eta_iso(*ext);
      CHECK(eta.iso);
      CHECK(eta.natural);
      for (ObjId x = 0; x < c->num_objects(); ++x)
        CHECK((*ext)(share(yoneda_embed(c, x)))->object()->size(0) == p.obj[x]->size(0));
    }
  // Into presheaves on the walking arrow: h∘F for F the inclusion of each object.
  auto arrow = fx::walking_arrow();
  auto psh = presheaf_category(arrow, 3);
  auto ext = make_extension(yoneda_functor(psh));
  auto eta = eta_iso(*ext);
  CHECK(eta.iso);
  CHECK(eta.natural);
  // The extension of h is the identity up to iso.
  for (const auto& f : psh->objects()) CHECK(are_isomorphic(*(*ext)(f)->object(), *f));
  CHECK(ext->memo_size() >= psh->objects().size());
}

TEST_CASE("eta on a functor with a twisted action") {
  auto set = finset_category();
  auto c = fx::walking_arrow();
  std::vector<std::vector<std::string>> sets{{"x", "y"}, {"u", "v"}};
  std::vector<std::vector<ElemId>> maps(c->num_morphisms());
  for (MorId m = 0; m < c->num_morphisms(); ++m) maps[m] = c->is_identity(m) ? std::vector<ElemId>{0, 1} : std::vector<ElemId>{1, 0};
  auto p = set_functor("p", c, set, sets, maps);
  REQUIRE(validate_topos_functor(p).ok());
  auto eta = eta_iso(*make_extension(p));
  CHECK(eta.iso);
  CHECK(eta.natural);
  // The components are the legs at identities, so they see every element.
  for (const auto& comp : eta.components) CHECK(is_iso(comp));
}

TEST_CASE("extension is functorial and preserves colimits") {
  auto set = finset_category();
  auto c = fx::span();
  Rng rng(7);
  for (const auto& p : corepresentables(c, set)) {
    auto ext = make_extension(p);
    for (int trial = 0; trial < 20; ++trial) {
      auto a = share(random_presheaf(c, 2, rng));
      auto b = share(random_presheaf(c, 2, rng));
      auto k = share(random_presheaf(c, 2, rng));
      CHECK(same_components(ext->on_morphism(identity_morphism(a)), identity_morphism((*ext)(a)->object())));
      auto ab = enumerate_morphisms(a, b, 64);
      auto bk = enumerate_morphisms(b, k, 64);
      for (std::size_t i = 0; i < ab.size(); i += 3)
        for (std::size_t j = 0; j < bk.size(); j += 3)
          CHECK(same_components(ext->on_morphism(compose(bk[j], ab[i])),
                                compose(ext->on_morphism(bk[j]), ext->on_morphism(ab[i]))));
      CHECK(preserves_colimit(*ext, pair_of(a, b)).iso);
      for (std::size_t i = 0; i + 1 < ab.size() && i < 4; ++i) CHECK(preserves_colimit(*ext, parallel_of(ab[i], ab[i + 1])).iso);
    }
  }
}

TEST_CASE("right adjoint h_p") {
  auto set = finset_category();
  auto hz = right_adjoint_hp(at_set(set, 2), set_of(2));
  CHECK(hz.presheaf->size(0) == 4);
  for (const auto& c : {fx::walking_arrow(), fx::diamond(), fx::z2()})
    for (const auto& p : corepresentables(c, set)) {
      auto t = right_adjoint_hp(p, set_of(1));
      CHECK(same_shape(*t.presheaf, terminal_presheaf(c)));
      auto hz3 = right_adjoint_hp(p, set_of(3));
      for (ObjId x = 0; x < c->num_objects(); ++x) {
        int expect = 1;
        for (int i = 0; i < p.obj[x]->size(0); ++i) expect *= 3;
        CHECK(hz3.presheaf->size(x) == expect);
      }
    }
  // For p = h the right adjoint is the identity up to iso.
  for (const auto& c : {fx::walking_arrow(), fx::span(), fx::idempotent()}) {
    auto psh = presheaf_category(c, 2);
    auto h = yoneda_functor(psh);
    for (const auto& g : psh->objects()) CHECK(are_isomorphic(*right_adjoint_hp(h, g).presheaf, *g));
  }
}

TEST_CASE("hom composites") {
  auto set = finset_category();
  for (const auto& c : {fx::chain3(), fx::span(), fx::parallel_pair()})
    for (const auto& p : corepresentables(c, set)) {
      // [∅, pX] is a singleton; [1, pX] ≅ pX.
      auto zero = hom_composite(p, set_of(0), Variance::co, set);
      REQUIRE(zero.co);
      CHECK(validate_topos_functor(*zero.co).ok());
      for (const auto& o : zero.co->obj) CHECK(o->size(0) == 1);
      auto one = hom_composite(p, set_of(1), Variance::co, set);
      for (ObjId x = 0; x < c->num_objects(); ++x) CHECK(one.co->obj[x]->size(0) == p.obj[x]->size(0));
      auto contra = hom_composite(p, set_of(2), Variance::contra, set);
      REQUIRE(contra.contra);
      CHECK(*contra.contra->presheaf == *right_adjoint_hp(p, set_of(2)).presheaf);
      // p^Z at Z = 2 counts pairs of elements.
      auto two = hom_composite(p, set_of(2), Variance::co, set);
      for (ObjId x = 0; x < c->num_objects(); ++x)
        CHECK(two.co->obj[x]->size(0) == p.obj[x]->size(0) * p.obj[x]->size(0));
    }
}

TEST_CASE("adjunction on the terminal category is currying") {
  auto set = finset_category();
  auto ext = make_extension(at_set(set, 2));
  auto check = adjunction_phi(*ext, set_of(2), set_of(2));
  CHECK(check.left == 16);
  CHECK(check.right == 16);
  CHECK(check.bijective);
  auto init = adjunction_phi(*ext, set_of(0), set_of(2));
  CHECK(init.left == 1);
  CHECK(init.right == 1);
  CHECK(init.bijective);
}

TEST_CASE("adjunction is bijective and natural") {
  auto set = finset_category();
  for (const auto& c : {fx::walking_arrow(), fx::span(), fx::z2(), fx::diamond()}) {
    CAPTURE(c->name());
    auto hs = enumerate_presheaves(c, 2, 100000);
    for (const auto& p : corepresentables(c, set)) {
      auto ext = make_extension(p);
      for (std::size_t i = 0; i < hs.size(); i += std::max<std::size_t>(1, hs.size() / 12)) {
        auto h = share(hs[i]);
        for (int z = 0; z <= 2; ++z) {
          auto check = adjunction_phi(*ext, h, set_of(z));
          CHECK(check.bijective);
          // Independent count of both sides.
          auto hz = right_adjoint_hp(p, set_of(z));
          CHECK(check.left == count_morphisms(*(*ext)(h)->object(), *set_of(z)));
          CHECK(check.right == count_morphisms(*h, *hz.presheaf));
        }
        for (const auto& zeta : enumerate_morphisms(set_of(2), set_of(3))) CHECK(phi_natural_in_z(*ext, h, zeta));
        auto k = share(hs[(i * 7 + 3) % hs.size()]);
        auto kappas = enumerate_morphisms(k, h);
        for (std::size_t j = 0; j < kappas.size(); j += std::max<std::size_t>(1, kappas.size() / 6))
          CHECK(phi_natural_in_h(*ext, kappas[j], set_of(2)));
      }
    }
  }
}

TEST_CASE("adjunction at representables is the Yoneda bijection") {
  auto set = finset_category();
  auto c = fx::chain3();
  for (const auto& p : corepresentables(c, set)) {
    auto ext = make_extension(p);
    for (ObjId x = 0; x < c->num_objects(); ++x) {
      auto hx = share(yoneda_embed(c, x));
      auto hz = right_adjoint_hp(p, set_of(2));
      auto check = adjunction_phi(*ext, hx, set_of(2));
      CHECK(check.right == static_cast<std::size_t>(hz.presheaf->size(x)));
      for (const auto& theta : enumerate_morphisms(hx, hz.presheaf)) {
        auto u = phi_backward(*ext, *(*ext)(hx), hz, theta);
        // u ∘ η_X is the element of h_p(Z)(X) that θ picks at id_X.
        auto eta = eta_iso(*ext).components[x];
        CHECK(hz.index_of(x, compose(u, eta)) == yoneda_forward(theta, x));
      }
    }
  }
}

TEST_CASE("adjunction into presheaves on the walking arrow") {
  auto arrow = fx::walking_arrow();
  auto psh = presheaf_category(arrow, 2);
  auto c = fx::span();
  // F: span -> arrow sending s to 0 and l, r to 1.
  FinFunctor f{"F", c, arrow, {}, {}};
  for (ObjId x = 0; x < c->num_objects(); ++x) f.obj_map.push_back(c->object_name(x) == "s" ? 0 : 1);
  for (MorId m = 0; m < c->num_morphisms(); ++m)
    f.mor_map.push_back(c->is_identity(m) ? arrow->identity(f.obj_map[c->src(m)]) : arrow->morphism("f"));
  REQUIRE(validate_functor(f).ok());
  auto p = yoneda_after(f, psh);
  REQUIRE(validate_topos_functor(p).ok());
  auto ext = make_extension(p);
  auto eta = eta_iso(*ext);
  CHECK(eta.iso);
  CHECK(eta.natural);
  auto hs = enumerate_presheaves(c, 1, 1000);
  for (const auto& h : hs)
    for (std::size_t z = 0; z < psh->objects().size(); z += 3) {
      auto check = adjunction_phi(*ext, share(h), psh->objects()[z]);
      CHECK(check.bijective);
    }
}

TEST_CASE("exactness on the base") {
  auto set = finset_category();
  for (const auto& c : {fx::diamond(), fx::chain3(), fx::chain4(), fx::sierpinski()})
    for (const auto& p : corepresentables(c, set)) {
      auto v = is_exact(p);
      CHECK(v.finitely_complete);
      CHECK(v.exact);
      CHECK(v.checked > 0);
    }
  auto two = constant_topos_functor("2", fx::chain3(), set, set_of(2));
  auto v = is_exact(two);
  CHECK_FALSE(v.exact);
  CHECK(v.failing_kind == "terminal");
  CHECK_FALSE(is_exact(corepresentable(fx::discrete2(), 0, set)).finitely_complete);
  // Diamond: [a,-] ∪ [b,-] is not exact, the meet a ∧ b = bot is not preserved.
  auto c = fx::diamond();
  std::vector<std::vector<std::string>> sets(4);
  for (const char* n : {"a", "b", "top"}) sets[c->object(n)] = {"*"};
  std::vector<std::vector<ElemId>> maps(c->num_morphisms());
  for (MorId m = 0; m < c->num_morphisms(); ++m) maps[m].assign(sets[c->src(m)].size(), 0);
  auto join = set_functor("ab", c, set, sets, maps);
  auto w = is_exact(join);
  CHECK_FALSE(w.exact);
  CHECK(w.failing_kind == "product");
}

TEST_CASE("set-valued flatness") {
  auto set = finset_category();
  for (const auto& c : fx::categories())
    for (const auto& p : corepresentables(c, set)) CHECK(is_flat_setvalued(p).flat);
  auto empty = is_flat_setvalued(constant_topos_functor("0", fx::chain3(), set, set_of(0)));
  CHECK_FALSE(empty.flat);
  CHECK(empty.cofiltered.reason == "empty");
  auto two = is_flat_setvalued(constant_topos_functor("2", fx::chain3(), set, set_of(2)));
  CHECK_FALSE(two.flat);
  CHECK(two.cofiltered.reason == "span");
  CHECK_THROWS_AS(is_flat_setvalued(yoneda_functor(presheaf_category(fx::walking_arrow(), 2))), ContractError);
}

TEST_CASE("bounded flatness examples") {
  auto set = finset_category();
  Budget b;
  b.max_instances = 200;
  CHECK(is_flat_bounded(*make_extension(at_set(set, 1)), b).verified);
  auto two = is_flat_bounded(*make_extension(at_set(set, 2)), b);
  CHECK_FALSE(two.verified);
  REQUIRE(two.counterexample);
  CHECK(two.counterexample->kind == "terminal");
  CHECK(two.status() == "counterexample");
  auto both = set_functor("11", fx::discrete2(), set, {{"*"}, {"*"}}, {{0}, {0}});
  auto d = is_flat_bounded(*make_extension(both), b);
  CHECK_FALSE(d.verified);
  CHECK(d.counterexample->kind == "terminal");
  CHECK(d.counterexample->objects.empty());
  auto psh = presheaf_category(fx::walking_arrow(), 2);
  auto h = is_flat_bounded(*make_extension(yoneda_functor(psh)), b);
  CHECK(h.verified);
  CHECK(h.status() == "verified-up-to-budget");
  CHECK(h.products_checked > 0);
  CHECK(h.equalizers_checked > 0);
  // p(a) = 1, p(b) = 1 on the diamond preserves the terminal object but not the meet.
  auto c = fx::diamond();
  std::vector<std::vector<std::string>> sets(4);
  for (const char* n : {"a", "b", "top"}) sets[c->object(n)] = {"*"};
  std::vector<std::vector<ElemId>> maps(c->num_morphisms());
  for (MorId m = 0; m < c->num_morphisms(); ++m) maps[m].assign(sets[c->src(m)].size(), 0);
  auto join = is_flat_bounded(*make_extension(set_functor("ab", c, set, sets, maps)), b);
  CHECK_FALSE(join.verified);
  CHECK(join.counterexample->kind == "product");
}

TEST_CASE("flatness oracles agree in one direction on all small set-valued functors") {
  auto set = finset_category();
  Budget b;
  b.value_bound = 2;
  b.max_instances = 60;
  for (const auto& c : {fx::walking_arrow(), fx::discrete2(), fx::chain3(), fx::span(), fx::parallel_pair(), fx::z2()}) {
    CAPTURE(c->name());
    auto cop = opposite(*c);
    int flat = 0, total = 0;
    for_each_presheaf(cop, 2, [&](const Presheaf& g) {
      auto p = covariant(c, g, set);
      REQUIRE(validate_topos_functor(p).ok());
      auto s = is_flat_setvalued(p);
      auto bounded = is_flat_bounded(*make_extension(p), b);
      if (s.flat) CHECK(bounded.verified);
      if (!bounded.verified) CHECK_FALSE(s.flat);
      flat += s.flat ? 1 : 0;
      ++total;
      return true;
    });
    CHECK(flat > 0);
    CHECK(flat < total);
  }
}

TEST_CASE("geometric morphism data") {
  auto set = finset_category();
  auto site = fx::discrete_space_site();
  auto c = site->base();
  Budget b;
  b.max_instances = 150;
  auto good = build_ell(corepresentable(c, c->object("a"), set), site, b);
  REQUIRE(good.data);
  CHECK(good.refusal.empty());
  for (int z = 0; z <= 3; ++z) CHECK(is_sheaf(*good.data->direct_image(set_of(z)).presheaf, *site).sheaf);
  auto sheaves = sheaf_category(site, budget_profile("small"));
  for (const auto& f : sheaves->objects())
    for (int z = 0; z <= 2; ++z) {
      auto hz = good.data->direct_image(set_of(z));
      for (const auto& u : set->hom(good.data->apply_inverse(f)->object(), set_of(z))) {
        auto theta = good.data->phi(f, set_of(z), u);
        CHECK(same_components(good.data->phi_inverse(f, set_of(z), theta), u));
      }
    }
  CHECK_THROWS_AS(good.data->apply_inverse(share(initial_presheaf(c)))->object(), Error);

  auto top = build_ell(corepresentable(c, c->object("top"), set), site, b);
  CHECK_FALSE(top.data);
  CHECK(top.refusal == "not-continuous");
  REQUIRE(top.continuity.object);
  CHECK(c->object_name(*top.continuity.object) == "top");

  auto chain = fx::chain3();
  auto two = build_ell(constant_topos_functor("2", chain, set, set_of(2)), trivial_site(chain), b);
  CHECK(two.refusal == "not-flat");
  REQUIRE(two.flatness.counterexample);

  // Trivial topology: the same data as the presheaf adjunction.
  auto triv = build_ell(corepresentable(chain, 1, set), trivial_site(chain), b);
  REQUIRE(triv.data);
  auto ext = triv.data->inverse_image();
  for (const auto& h : enumerate_presheaves(chain, 1, 100))
    CHECK(adjunction_phi(*ext, share(h), set_of(2)).bijective);
}

TEST_CASE("epsilon into its own sheaf handle") {
  auto site = fx::sierpinski_site();
  Budget b = budget_profile("small");
  b.max_instances = 80;
  auto eps = epsilon_functor(site, b);
  auto ell = build_ell(eps, site, b);
  REQUIRE(ell.data);
  const auto& sheaves = eps.cod->objects();
  auto ext = ell.data->inverse_image();
  for (std::size_t i = 0; i < sheaves.size(); i += 2)
    for (std::size_t j = 0; j < sheaves.size(); j += 3) {
      const auto& f = sheaves[i];
      const auto& z = sheaves[j];
      auto check = adjunction_phi(*ext, f, z);
      CHECK(check.bijective);
      // ε̃ restricted to sheaves is the identity up to iso.
      CHECK(are_isomorphic(*ell.data->apply_inverse(f)->object(), *f));
    }
}
