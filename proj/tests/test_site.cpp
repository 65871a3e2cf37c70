#include "doctest.h"

#include <set>

#include "fintopos/presheaf/enumerate.hpp"
#include "fintopos/presheaf/yoneda.hpp"
#include "fintopos/site/sheaf.hpp"
#include "fintopos/site/site.hpp"
#include "fintopos/verify/fixtures.hpp"

using namespace fintopos;
namespace fx = fintopos::fixtures;

namespace {

// Sieves found by checking every subset of the morphisms into x.
std::vector<SieveMask> naive_sieves(const FinCategory& c, ObjId x) {
  const auto& into = c.into(x);
  std::vector<SieveMask> out;
  for (std::uint32_t sub = 0; sub < (1U << into.size()); ++sub) {
    SieveMask s = 0;
    for (std::size_t i = 0; i < into.size(); ++i)
      if ((sub >> i) & 1U) s |= SieveMask{1} << into[i];
    bool closed = true;
    for (std::size_t i = 0; i < into.size() && closed; ++i)
      if (has(s, into[i]))
        for (MorId h = 0; h < c.num_morphisms(); ++h)
          if (c.tgt(h) == c.src(into[i]) && !has(s, c.compose(into[i], h))) closed = false;
    if (closed) out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Least fixpoint by repeated whole-lattice sweeps over naive sieves.
std::vector<std::set<SieveMask>> naive_topology(const CatPtr& c, const std::vector<std::vector<Family>>& covers) {
  const int n = c->num_objects();
  std::vector<std::set<SieveMask>> j(n);
  for (ObjId x = 0; x < n; ++x) {
    j[x].insert(maximal_sieve(*c, x));
    for (const auto& fam : covers[x]) j[x].insert(generated_sieve(*c, x, fam));
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (MorId f = 0; f < c->num_morphisms(); ++f)
      for (SieveMask s : std::set<SieveMask>(j[c->tgt(f)]))
        changed |= j[c->src(f)].insert(pullback_sieve(*c, f, s)).second;
    for (ObjId x = 0; x < n; ++x)
      for (SieveMask r : naive_sieves(*c, x))
        for (SieveMask s : std::set<SieveMask>(j[x])) {
          bool ok = true;
          for (MorId f : members(s)) ok = ok && j[c->src(f)].count(pullback_sieve(*c, f, r));
          if (ok) changed |= j[x].insert(r).second;
        }
  }
  return j;
}

bool pair_model_sheaf(const Presheaf& f) {
  auto c = f.base;
  ObjId bot = c->object("bot"), a = c->object("a"), b = c->object("b"), top = c->object("top");
  if (f.size(bot) != 1) return false;
  if (f.size(top) != f.size(a) * f.size(b)) return false;
  std::set<std::pair<ElemId, ElemId>> seen;
  for (ElemId e = 0; e < f.size(top); ++e)
    seen.insert({f.act(c->morphism("a<top"), e), f.act(c->morphism("b<top"), e)});
  return static_cast<int>(seen.size()) == f.size(top);
}

}  // namespace

TEST_CASE("sieves") {
  for (const auto& c : fx::categories())
    for (ObjId x = 0; x < c->num_objects(); ++x) {
      CHECK(all_sieves(*c, x) == naive_sieves(*c, x));
      for (SieveMask s : all_sieves(*c, x)) {
        CHECK(is_sieve(*c, x, s));
        for (MorId f : c->into(x)) CHECK(is_sieve(*c, c->src(f), pullback_sieve(*c, f, s)));
      }
    }
}

TEST_CASE("trivial topology has only maximal sieves") {
  for (const auto& c : fx::categories()) {
    auto s = trivial_site(c);
    CHECK(s->is_trivial());
    for (ObjId x = 0; x < c->num_objects(); ++x) CHECK(s->topology(x) == std::vector<SieveMask>{maximal_sieve(*c, x)});
  }
}

TEST_CASE("saturation matches the naive fixpoint and is idempotent") {
  for (const auto& site : fx::sites()) {
    CAPTURE(site->name());
    auto naive = naive_topology(site->base(), site->covers());
    for (ObjId x = 0; x < site->base()->num_objects(); ++x) {
      std::set<SieveMask> got(site->topology(x).begin(), site->topology(x).end());
      CHECK(got == naive[x]);
      CHECK(site->topology(x).front() == maximal_sieve(*site->base(), x));
    }
    auto again = saturate(*site);
    for (ObjId x = 0; x < site->base()->num_objects(); ++x) CHECK(again->topology(x) == site->topology(x));
  }
  auto d = fx::discrete_space_site();
  auto c = d->base();
  SieveMask ab = generated_sieve(*c, c->object("top"), {c->morphism("a<top"), c->morphism("b<top")});
  CHECK(d->covering(c->object("top"), ab));
  CHECK_FALSE(d->covering(c->object("top"), generated_sieve(*c, c->object("top"), {c->morphism("a<top")})));
  CHECK(d->covering(c->object("bot"), 0));
}

TEST_CASE("malformed covers are rejected") {
  auto c = fx::diamond();
  std::vector<std::vector<Family>> covers(4);
  covers[c->object("a")].push_back({c->morphism("b<top")});
  CHECK_THROWS_AS(generate_topology("bad", c, covers), ContractError);
}

TEST_CASE("every presheaf is a sheaf for the trivial topology") {
  for (const auto& c : fx::categories()) {
    auto s = trivial_site(c);
    for (const auto& f : enumerate_presheaves(c, 2, 100000)) {
      CHECK(is_sheaf(f, *s).sheaf);
      CHECK(is_sheaf_coverform(f, *s));
    }
  }
}

TEST_CASE("discrete-space sheaves are pairs of sets") {
  auto s = fx::discrete_space_site();
  int sheaves = 0;
  for (const auto& f : enumerate_presheaves(s->base(), 2, 100000)) {
    bool model = pair_model_sheaf(f);
    auto v = is_sheaf(f, *s);
    CHECK(v.sheaf == model);
    CHECK(is_sheaf_coverform(f, *s) == model);
    CHECK(v.counterexample.has_value() == !model);
    sheaves += model ? 1 : 0;
  }
  CHECK(sheaves > 0);
}

TEST_CASE("sheaf and cover forms agree on every fixture site") {
  for (const auto& site : fx::sites()) {
    CAPTURE(site->name());
    for (const auto& f : enumerate_presheaves(site->base(), 2, 100000))
      CHECK(is_sheaf(f, *site).sheaf == is_sheaf_coverform(f, *site));
  }
}

TEST_CASE("plus construction on the trivial topology is the identity") {
  for (const auto& c : fx::categories()) {
    auto s = trivial_site(c);
    for (const auto& f : enumerate_presheaves(c, 2, 100000)) {
      auto fp = share(f);
      auto plus = plus_construction(fp, *s);
      CHECK(*plus.plus == f);
      CHECK(same_components(plus.unit, identity_morphism(fp)));
    }
  }
}

TEST_CASE("sheafification on the discrete space") {
  auto s = fx::discrete_space_site();
  auto c = s->base();
  ObjId bot = c->object("bot"), a = c->object("a"), b = c->object("b"), top = c->object("top");
  for (const auto& f : enumerate_presheaves(c, 2, 100000)) {
    auto fp = share(f);
    auto af = sheafify(fp, *s);
    CHECK(validate_presheaf(*af.sheaf).ok());
    CHECK(is_natural(af.unit));
    CHECK(is_separated(*af.stages[0], *s));
    CHECK(is_sheaf(*af.sheaf, *s).sheaf);
    CHECK(pair_model_sheaf(*af.sheaf));
    CHECK(is_iso(af.unit) == pair_model_sheaf(f));
    CHECK(af.sheaf->size(bot) == 1);
    if (f.size(top) == 0 && f.size(a) > 0 && f.size(b) > 0)
      CHECK(af.sheaf->size(top) == af.sheaf->size(a) * af.sheaf->size(b));
    auto again = sheafify(af.sheaf, *s);
    CHECK(is_iso(again.unit));
    CHECK(are_isomorphic(*again.sheaf, *af.sheaf));
  }
}

TEST_CASE("two points over the empty open collapse") {
  auto s = fx::discrete_space_site();
  auto c = s->base();
  Presheaf f = terminal_presheaf(c);
  f.values[c->object("bot")] = {"u", "v"};
  for (MorId m : c->into(c->object("bot")))
    if (c->is_identity(m)) f.actions[m] = {0, 1};
  for (MorId m : c->out_of(c->object("bot")))
    if (!c->is_identity(m)) f.actions[m] = {0};
  REQUIRE(validate_presheaf(f).ok());
  auto v = is_sheaf(f, *s);
  CHECK_FALSE(v.sheaf);
  auto af = sheafify(share(f), *s);
  CHECK(af.sheaf->size(c->object("bot")) == 1);
}

TEST_CASE("sheafification is universal among sheaves") {
  for (const auto& site : {fx::discrete_space_site(), fx::sierpinski_site()}) {
    auto all = enumerate_presheaves(site->base(), 2, 100000);
    std::vector<PresheafPtr> sheaves;
    for (const auto& g : all)
      if (is_sheaf(g, *site).sheaf) sheaves.push_back(share(g));
    for (std::size_t i = 0; i < all.size(); i += 37) {
      auto fp = share(all[i]);
      auto af = sheafify(fp, *site);
      for (std::size_t k = 0; k < sheaves.size(); k += 3) {
        auto from_a = enumerate_morphisms(af.sheaf, sheaves[k]);
        auto from_f = enumerate_morphisms(fp, sheaves[k]);
        CHECK(from_a.size() == from_f.size());
        std::set<std::vector<std::vector<ElemId>>> images;
        for (const auto& u : from_a) images.insert(compose(u, af.unit).components);
        CHECK(images.size() == from_f.size());
      }
    }
  }
}

TEST_CASE("sheafify acts on morphisms compatibly with the units") {
  auto s = fx::discrete_space_site();
  auto all = enumerate_presheaves(s->base(), 2, 100000);
  for (std::size_t i = 0; i < all.size(); i += 97)
    for (std::size_t j = 0; j < all.size(); j += 89) {
      auto fp = share(all[i]), gp = share(all[j]);
      auto af = sheafify(fp, *s), ag = sheafify(gp, *s);
      for (const auto& phi : enumerate_morphisms(fp, gp, 100)) {
        auto a_phi = sheafify_morphism(phi, af, ag, *s);
        CHECK(is_natural(a_phi));
        CHECK(same_components(compose(a_phi, af.unit), compose(ag.unit, phi)));
      }
    }
}

TEST_CASE("epsilon") {
  for (const auto& c : fx::categories()) {
    auto s = trivial_site(c);
    for (ObjId x = 0; x < c->num_objects(); ++x) CHECK(*epsilon(s, x).sheaf == yoneda_embed(c, x));
  }
  for (const auto& s : {fx::discrete_space_site(), fx::sierpinski_site(), fx::chain_space_site()})
    for (ObjId x = 0; x < s->base()->num_objects(); ++x) {
      auto e = epsilon(s, x);
      CHECK(is_iso(e.unit));
      CHECK(is_sheaf(yoneda_embed(s->base(), x), *s).sheaf);
    }
  auto s = fx::discrete_space_site();
  for (MorId f = 0; f < s->base()->num_morphisms(); ++f) CHECK(is_natural(epsilon_morphism(s, f)));
}

TEST_CASE("strict epimorphic families in a finite category") {
  auto d = fx::diamond();
  ObjId top = d->object("top");
  CHECK(is_strict_epi_family(*d, top, {d->identity(top)}).strict_epi);
  CHECK(is_strict_epi_family(*d, top, {d->morphism("a<top"), d->morphism("b<top")}).strict_epi);
  auto single = is_strict_epi_family(*d, top, {d->morphism("a<top")});
  CHECK_FALSE(single.strict_epi);
  REQUIRE(single.witness);
  CHECK(single.witness->kind == "no-factoring");
  CHECK(is_strict_epi_family(*d, d->object("bot"), {}).strict_epi);
  CHECK_FALSE(is_strict_epi_family(*d, d->object("a"), {}).strict_epi);
  // {u} into 1: the tuple (v) with Y = 1 cannot factor.
  auto p = fx::parallel_pair();
  CHECK_FALSE(is_strict_epi_family(*p, 1, {p->morphism("u")}).strict_epi);
  for (const auto& c : fx::categories())
    for (ObjId x = 0; x < c->num_objects(); ++x) {
      CHECK(is_strict_epi_family(*c, x, {c->identity(x)}).strict_epi);
      CHECK(is_universal_strict_epi(*c, x, {c->identity(x)}).universal);
    }
  auto u = is_universal_strict_epi(*d, top, {d->morphism("a<top"), d->morphism("b<top")});
  CHECK(u.universal);
  CHECK(u.complete);
  auto g = is_universal_strict_epi(*fx::discrete2(), 0, {});
  CHECK_FALSE(g.universal);
}

TEST_CASE("pullback gaps are reported apart from failures") {
  // The parallel pair has no pullback of u along v.
  auto p = fx::parallel_pair();
  auto v = is_universal_strict_epi(*p, 1, {p->morphism("u"), p->morphism("v"), p->identity(1)});
  CHECK_FALSE(v.complete);
  CHECK_FALSE(v.gaps.empty());
  CHECK_FALSE(v.universal);
}

TEST_CASE("canonical pretopology") {
  auto one = canonical_pretopology(fx::one());
  CHECK(one.covers[0] == std::vector<Family>{{}, {fx::one()->identity(0)}});
  auto d2 = canonical_pretopology(fx::discrete2());
  for (ObjId x = 0; x < 2; ++x) CHECK(d2.covers[x] == std::vector<Family>{{fx::discrete2()->identity(x)}});
  for (const auto& c : {fx::diamond(), fx::chain3(), fx::chain4(), fx::sierpinski()}) {
    auto site = fx::canonical_site(c);
    for (ObjId x = 0; x < c->num_objects(); ++x) CHECK(is_sheaf(yoneda_embed(c, x), *site).sheaf);
  }
  auto canon = fx::canonical_site(fx::diamond());
  auto open = fx::discrete_space_site();
  for (ObjId x = 0; x < 4; ++x) CHECK(canon->topology(x) == open->topology(x));
}
