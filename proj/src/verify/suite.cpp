#include "fintopos/verify/suite.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "fintopos/kan/extension.hpp"
#include "fintopos/kan/flat.hpp"
#include "fintopos/presheaf/enumerate.hpp"
#include "fintopos/presheaf/yoneda.hpp"
#include "fintopos/site/continuity.hpp"
#include "fintopos/site/sheaf.hpp"
#include "fintopos/verify/fixtures.hpp"

namespace fintopos {

namespace {

// Hom-sets above this size are not enumerated by the adjunction checks.
constexpr std::size_t kHomLimit = 64;

bool same_base(const CatPtr& a, const CatPtr& b) { return a == b || *a == *b; }

Json merged(Json a, const Json& b) {
  for (auto it = b.begin(); it != b.end(); ++it) a[it.key()] = it.value();
  return a;
}

/// At most k members, evenly spaced, first member always included.
std::vector<PresheafPtr> spread(const std::vector<PresheafPtr>& v, std::size_t k) {
  if (v.size() <= k) return v;
  std::vector<PresheafPtr> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(v[i * v.size() / k]);
  return out;
}

/// Initial, terminal, representables, then the corpus samples for c.
std::vector<PresheafPtr> test_presheaves(const Corpus& corpus, const CatPtr& c) {
  std::vector<PresheafPtr> out{share(initial_presheaf(c)), share(terminal_presheaf(c))};
  for (ObjId x = 0; x < c->num_objects(); ++x) out.push_back(share(yoneda_embed(c, x)));
  for (std::size_t i = 0; i < corpus.categories.size(); ++i)
    if (same_base(corpus.categories[i], c)) {
      out.insert(out.end(), corpus.samples[i].begin(), corpus.samples[i].end());
      break;
    }
  return out;
}

bool is_finset(const ToposPtr& z) { return !z->sheaf_mode() && *z->base() == *terminal_category(); }

bool hom_within(const Presheaf& a, const Presheaf& b) {
  try {
    count_morphisms(a, b, kHomLimit);
    return true;
  } catch (const ResourceError&) {
    return false;
  }
}

Json functor_witness(const std::string& check, const FunctorFixture& fx) {
  return Json{{"check", check}, {"functor", fx.name}};
}

// ---------------------------------------------------------------------------

SuiteReport suite_yoneda(const Corpus& corpus) {
  SuiteReport r;
  r.theorem = "I";
  std::size_t exhaustive = 0;
  for (std::size_t i = 0; i < corpus.categories.size(); ++i) {
    const CatPtr& c = corpus.categories[i];
    const int n = c->num_objects();
    std::vector<PresheafPtr> reps;
    for (ObjId x = 0; x < n; ++x) reps.push_back(share(yoneda_embed(c, x)));
    std::vector<PresheafMorphism> hf;
    for (MorId g = 0; g < c->num_morphisms(); ++g) hf.push_back(yoneda_embed_morphism(c, g));
    auto visit = [&](const PresheafPtr& f) {
      for (ObjId x = 0; x < n; ++x) {
        auto homs = enumerate_morphisms(reps[x], f);
        bool ok = static_cast<int>(homs.size()) == f->size(x);
        std::vector<ElemId> xi;
        for (const auto& theta : homs) {
          xi.push_back(yoneda_forward(theta, x));
          ok = ok && same_components(yoneda_backward(c, x, f, xi.back()), theta);
        }
        for (ElemId e = 0; e < f->size(x) && ok; ++e) ok = yoneda_forward(yoneda_backward(c, x, f, e), x) == e;
        r.check(ok, [&] {
          return Json{{"check", "bijection"}, {"category", c->name()}, {"object", c->object_name(x)}, {"presheaf", json_of(*f)}};
        });
        // Naturality in X: θ∘h_g corresponds to F(g)(ξ).
        for (MorId g : c->into(x)) {
          bool nat = true;
          for (std::size_t k = 0; k < homs.size() && nat; ++k)
            nat = yoneda_forward(compose(homs[k], hf[g]), c->src(g)) == f->act(g, xi[k]);
          r.check(nat, [&] {
            return Json{{"check", "natural-in-object"}, {"category", c->name()}, {"morphism", c->morphism_name(g)},
                        {"presheaf", json_of(*f)}};
          });
        }
      }
    };
    if (i < corpus.fixture_count) {
      for_each_presheaf(c, corpus.bounds.value_bound, [&](const Presheaf& f) {
        visit(share(f));
        ++exhaustive;
        return true;
      });
    } else {
      for (const auto& f : corpus.samples[i]) visit(f);
    }
    // Naturality in F along morphisms between consecutive samples.
    const auto& s = corpus.samples[i];
    for (std::size_t j = 0; j + 1 < s.size(); ++j)
      for (const auto& phi : first_morphisms(s[j], s[j + 1], 3))
        for (ObjId x = 0; x < n; ++x) {
          bool nat = true;
          for (const auto& theta : enumerate_morphisms(reps[x], s[j]))
            nat = nat && yoneda_forward(compose(phi, theta), x) == phi.at(x, yoneda_forward(theta, x));
          r.check(nat, Json{{"check", "natural-in-presheaf"}, {"category", c->name()}, {"object", c->object_name(x)}});
        }
  }
  r.notes.push_back("fixture categories enumerated exhaustively at value bound " +
                    std::to_string(corpus.bounds.value_bound) + ": " + std::to_string(exhaustive) + " presheaves");
  return r;
}

SuiteReport suite_density(const Corpus& corpus) {
  SuiteReport r;
  r.theorem = "II";
  auto visit = [&](const CatPtr& c, const PresheafPtr& f) {
    auto w = density_check(f);
    r.check(w.iso, [&] {
      Json witness{{"check", "density"}, {"category", c->name()}, {"presheaf", json_of(*f)}};
      if (w.counterexample) witness["at"] = {c->object_name(w.counterexample->first), w.counterexample->second};
      return witness;
    });
  };
  for (std::size_t i = 0; i < corpus.categories.size(); ++i) {
    const CatPtr& c = corpus.categories[i];
    if (i < corpus.fixture_count) {
      for_each_presheaf(c, corpus.bounds.value_bound, [&](const Presheaf& f) {
        visit(c, share(f));
        return true;
      });
    } else {
      for (const auto& f : corpus.samples[i]) visit(c, f);
    }
  }
  return r;
}

SuiteReport suite_equivalence(const Corpus& corpus) {
  SuiteReport r;
  r.theorem = "III";
  for (const auto& fx : corpus.functors) {
    const ToposFunctor& p = fx.functor;
    const ToposPtr& z = p.cod;
    auto ext = make_extension(p);
    auto eta = eta_iso(*ext);
    Json w = functor_witness("eta", fx);
    if (eta.non_iso) w["non_iso"] = p.dom->object_name(*eta.non_iso);
    if (eta.non_natural) w["non_natural"] = p.dom->morphism_name(*eta.non_natural);
    r.check(eta.iso && eta.natural, w);

    // The extension of p̃∘h agrees with p̃.
    auto ext_q = make_extension(restrict_along_yoneda(*ext));
    auto hs = test_presheaves(corpus, p.dom);
    for (const auto& h : hs) {
      r.check(z->isomorphic(*(*ext_q)(h)->object(), *(*ext)(h)->object()),
              merged(functor_witness("extension-of-restriction", fx), Json{{"presheaf", json_of(*h)}}));
      r.check(same_components(ext->on_morphism(identity_morphism(h)), identity_morphism((*ext)(h)->object())),
              merged(functor_witness("identity", fx), Json{{"presheaf", json_of(*h)}}));
    }
    // Functoriality and cocontinuity on consecutive test presheaves.
    for (std::size_t j = 0; j + 2 < hs.size() && j < 6; ++j) {
      const auto &a = hs[j], &b = hs[j + 1], &k = hs[j + 2];
      auto cp = preserves_colimit(*ext, pair_of(a, b));
      r.check(cp.iso, merged(functor_witness("coproduct-preserved", fx), Json{{"a", json_of(*a)}, {"b", json_of(*b)}}));
      auto ab = first_morphisms(a, b, 2);
      auto bk = first_morphisms(b, k, 1);
      if (ab.size() == 2) {
        auto ce = preserves_colimit(*ext, parallel_of(ab[0], ab[1]));
        r.check(ce.iso, merged(functor_witness("coequalizer-preserved", fx), Json{{"u", json_of(ab[0])}, {"v", json_of(ab[1])}}));
      }
      if (!ab.empty() && !bk.empty())
        r.check(same_components(ext->on_morphism(compose(bk[0], ab[0])),
                                compose(ext->on_morphism(bk[0]), ext->on_morphism(ab[0]))),
                functor_witness("composite", fx));
    }
  }
  r.notes.push_back("cocontinuous functors are presented as extensions of corpus functors");
  return r;
}

SuiteReport suite_adjunction(const Corpus& corpus) {
  SuiteReport r;
  r.theorem = "IV";
  {
    const auto& fx = corpus.functor("A2@1");
    auto ext = make_extension(fx.functor);
    auto two = share(finite_set(2));
    auto a = adjunction_phi(*ext, two, two);
    r.check(a.left == 16 && a.right == 16 && a.bijective,
            Json{{"check", "currying"}, {"left", a.left}, {"right", a.right}, {"failure", a.failure}});
  }
  std::size_t skipped = 0;
  for (const auto& fx : corpus.functors) {
    const ToposFunctor& p = fx.functor;
    auto ext = make_extension(p);
    auto hs = spread(test_presheaves(corpus, p.dom), 6);
    auto zs = spread(p.cod->objects(), 6);
    for (const auto& h : hs)
      for (const auto& z : zs) {
        auto hz = right_adjoint_hp(p, z);
        if (!hom_within(*(*ext)(h)->object(), *z) || !hom_within(*h, *hz.presheaf)) {
          ++skipped;
          continue;
        }
        auto a = adjunction_phi(*ext, h, z);
        r.check(a.bijective, merged(functor_witness("phi-bijective", fx), 
                                 Json{{"h", json_of(*h)}, {"z", json_of(*z)}, {"failure", a.failure}}));
      }
    for (std::size_t j = 0; j + 1 < zs.size() && j < 3; ++j)
      for (const auto& zeta : first_morphisms(zs[j], zs[j + 1], 2))
        for (std::size_t i = 0; i < hs.size() && i < 3; ++i) {
          if (!hom_within(*(*ext)(hs[i])->object(), *zs[j])) {
            ++skipped;
            continue;
          }
          r.check(phi_natural_in_z(*ext, hs[i], zeta).has_value(), functor_witness("phi-natural-in-z", fx));
        }
    for (std::size_t j = 0; j + 1 < hs.size() && j < 4; ++j)
      for (const auto& kappa : first_morphisms(hs[j + 1], hs[j], 2)) {
        const auto& z = zs[std::min<std::size_t>(1, zs.size() - 1)];
        if (!hom_within(*(*ext)(hs[j])->object(), *z)) {
          ++skipped;
          continue;
        }
        r.check(phi_natural_in_h(*ext, kappa, z).has_value(), functor_witness("phi-natural-in-h", fx));
      }
  }
  r.notes.push_back(std::to_string(skipped) + " instances not run: a hom-set exceeds " + std::to_string(kHomLimit));
  return r;
}

SuiteReport suite_flat_consistency(const Corpus& corpus, const Budget& budget) {
  SuiteReport r;
  r.theorem = "V";
  std::size_t verified = 0, refuted = 0;
  for (const auto& fx : corpus.functors) {
    const ToposFunctor& p = fx.functor;
    auto ext = make_extension(p);
    auto bounded = is_flat_bounded(*ext, budget);
    (bounded.verified ? verified : refuted) += 1;
    Json w = functor_witness("flatness-oracles", fx);
    w["bounded"] = bounded.status();
    if (bounded.counterexample) w["counterexample"] = bounded.counterexample->kind;
    if (is_finset(p.cod)) {
      auto s = is_flat_setvalued(p);
      w["cofiltered"] = s.flat;
      r.check(!s.flat || bounded.verified, w);
    }
    // On a finitely complete base the representable instances decide exactness of p itself.
    auto ex = is_exact(p);
    if (ex.finitely_complete) {
      w["exact_on_base"] = ex.exact;
      r.check(ex.exact == bounded.verified, w);
    }
  }
  r.notes.push_back("bounded flatness: " + std::to_string(verified) + " verified-up-to-budget, " +
                    std::to_string(refuted) + " counterexamples (max_instances " +
                    std::to_string(budget.max_instances) + ")");
  return r;
}

SuiteReport suite_sheaf_extension(const Corpus& corpus, const Budget& budget) {
  SuiteReport r;
  r.theorem = "VI";
  std::map<std::string, FlatBoundedVerdict> flat;
  std::map<std::string, std::vector<PresheafPtr>> sheaf_samples;
  std::size_t not_flat = 0;
  for (const auto& site : corpus.sites) {
    for (const auto& fx : corpus.functors) {
      const ToposFunctor& p = fx.functor;
      if (!same_base(p.dom, site->base())) continue;
      const ToposPtr& z = p.cod;
      Json base_w = functor_witness("", fx);
      base_w["site"] = site->name();
      auto with = [&](const std::string& check) {
        Json w = base_w;
        w["check"] = check;
        return w;
      };
      auto cont = is_continuous(p, *site);
      std::vector<PresheafPtr> all_z = z->objects();
      if (!cont.continuous && cont.witness.target) all_z.push_back(cont.witness.target);
      auto zs = spread(z->objects(), 8);
      std::optional<PresheafPtr> non_sheaf;
      for (const auto& zz : all_z) {
        bool sheaf = is_sheaf(*right_adjoint_hp(p, zz).presheaf, *site).sheaf;
        if (cont.continuous) r.check(sheaf, merged(with("direct-image-sheaf"), Json{{"z", json_of(*zz)}}));
        if (!sheaf && !non_sheaf) non_sheaf = zz;
      }
      if (!cont.continuous) {
        Json w = with("non-continuous-has-non-sheaf-direct-image");
        if (cont.object) w["cover_of"] = p.dom->object_name(*cont.object);
        r.check(non_sheaf.has_value(), w);
        if (non_sheaf) ++r.controls_confirmed;
        continue;
      }
      auto ext = make_extension(p);
      auto it = flat.find(fx.name);
      if (it == flat.end()) it = flat.emplace(fx.name, is_flat_bounded(*ext, budget)).first;
      if (!it->second.verified) {
        ++not_flat;
        continue;
      }
      GeometricMorphismData ell(ext, site, it->second);
      // ε*(ℓ(p)) ≅ p objectwise.
      ToposFunctor q{p.name + "~ε", p.dom, z, {}, {}};
      for (ObjId x = 0; x < p.dom->num_objects(); ++x) {
        auto ex = epsilon(site, x);
        q.obj.push_back(ell.apply_inverse(ex.sheaf)->object());
        r.check(z->isomorphic(*q.obj.back(), *p.obj[x]),
                merged(with("epsilon-pullback"), Json{{"object", p.dom->object_name(x)}}));
      }
      for (MorId f = 0; f < p.dom->num_morphisms(); ++f) {
        auto m = ext->on_morphism(epsilon_morphism(site, f));
        m.dom = q.obj[p.dom->src(f)];
        m.cod = q.obj[p.dom->tgt(f)];
        q.mor.push_back(std::move(m));
      }
      // ℓ(ε*(ℓ(p))) ≅ ℓ(p) on sampled sheaves.
      auto ext_q = make_extension(q);
      auto& samples = sheaf_samples[site->name()];
      if (samples.empty()) samples = spread(sheaf_category(site, budget_profile("small"))->objects(), 6);
      for (const auto& f : samples) {
        r.check(z->isomorphic(*(*ext_q)(f)->object(), *ell.apply_inverse(f)->object()),
                merged(with("ell-of-restriction"), Json{{"sheaf", json_of(*f)}}));
        for (std::size_t k = 0; k < zs.size() && k < 2; ++k) {
          if (!hom_within(*ell.apply_inverse(f)->object(), *zs[k])) continue;
          auto hz = ell.direct_image(zs[k]);
          bool round = true;
          for (const auto& u : z->hom(ell.apply_inverse(f)->object(), zs[k]))
            round = round && same_components(ell.phi_inverse(f, zs[k], ell.phi(f, zs[k], u)), u);
          r.check(round, with("phi-on-sheaves"));
        }
      }
    }
  }
  r.notes.push_back(std::to_string(not_flat) +
                    " continuous (site, functor) pairs have a flatness counterexample; no geometric morphism built");
  return r;
}

/// colim(D1 × D2) -> colim D1 × colim D2 over the filtered chain 0 <= 1 <= 2.
bool filtered_colimit_commutes(const Presheaf& g1, const Presheaf& g2) {
  const CatPtr& shape = fixtures::chain3();
  auto diagram = [&](const Presheaf& g) {
    PresheafDiagram d{shape, {}, {}, terminal_category()};
    for (ObjId x = 0; x < shape->num_objects(); ++x) d.nodes.push_back(share(finite_set(g.values[x])));
    for (MorId f = 0; f < shape->num_morphisms(); ++f)
      d.arrows.push_back(PresheafMorphism{d.nodes[shape->src(f)], d.nodes[shape->tgt(f)], {g.actions[f]}});
    return d;
  };
  auto d1 = diagram(g1), d2 = diagram(g2);
  PresheafDiagram prod{shape, {}, {}, terminal_category()};
  std::vector<PresheafCone> cones;
  for (ObjId x = 0; x < shape->num_objects(); ++x) {
    cones.push_back(presheaf_limit(pair_of(d1.nodes[x], d2.nodes[x])));
    prod.nodes.push_back(cones.back().apex);
  }
  for (MorId f = 0; f < shape->num_morphisms(); ++f) {
    const auto &s = cones[shape->src(f)], &t = cones[shape->tgt(f)];
    PresheafCone via{s.apex, {compose(d1.arrows[f], s.legs[0]), compose(d2.arrows[f], s.legs[1])}};
    prod.arrows.push_back(*mediate(t, via));
  }
  auto k = presheaf_colimit(prod);
  auto c1 = presheaf_colimit(d1), c2 = presheaf_colimit(d2);
  auto q = presheaf_limit(pair_of(c1.apex, c2.apex));
  PresheafCocone legs{q.apex, {}};
  for (ObjId x = 0; x < shape->num_objects(); ++x) {
    PresheafCone via{cones[x].apex, {compose(c1.legs[x], cones[x].legs[0]), compose(c2.legs[x], cones[x].legs[1])}};
    legs.legs.push_back(*mediate(q, via));
  }
  auto cmp = mediate(k, legs);
  return cmp && is_iso(*cmp);
}

SuiteReport suite_exact_flat(const Corpus& corpus, const Budget& budget) {
  SuiteReport r;
  r.theorem = "VII";
  std::size_t exact = 0;
  for (const auto& fx : corpus.functors) {
    const ToposFunctor& p = fx.functor;
    if (!is_finset(p.cod)) continue;
    auto ex = is_exact(p);
    if (!ex.finitely_complete) continue;
    auto bounded = is_flat_bounded(*make_extension(p), budget);
    if (ex.exact) {
      ++exact;
      auto s = is_flat_setvalued(p);
      Json w = functor_witness("elements-cofiltered", fx);
      w["reason"] = s.cofiltered.reason;
      r.check(s.flat, w);
      Json wb = functor_witness("bounded-flat", fx);
      if (bounded.counterexample) wb["counterexample"] = bounded.counterexample->kind;
      r.check(bounded.verified, wb);
    } else {
      Json w = functor_witness("non-exact-refuted", fx);
      w["failing_kind"] = ex.failing_kind;
      r.check(!bounded.verified && bounded.counterexample.has_value(), w);
      if (fx.control && bounded.counterexample) ++r.controls_confirmed;
    }
  }
  Rng rng(corpus.seed ^ 0x9e3779b97f4a7c15ULL);
  auto op = opposite(*fixtures::chain3());
  for (int k = 0; k < 20; ++k) {
    auto g1 = random_presheaf(op, 3, rng);
    auto g2 = random_presheaf(op, 3, rng);
    r.check(filtered_colimit_commutes(g1, g2), Json{{"check", "filtered-colimit-product"}, {"d1", json_of(g1)}, {"d2", json_of(g2)}});
  }
  r.notes.push_back(std::to_string(exact) + " exact set-valued functors on finitely complete bases");
  return r;
}

// Sheaf conditions by hand: the discrete space needs F(bot) = 1 and F(top) = F(a) × F(b);
// the Sierpinski space needs F(bot) = 1.
bool pair_model_sheaf(const Presheaf& f, const Site& s) {
  const FinCategory& c = *f.base;
  if (f.size(c.object("bot")) != 1) return false;
  if (s.name() != fixtures::discrete_space_site()->name()) return true;
  ObjId a = c.object("a"), b = c.object("b"), top = c.object("top");
  if (f.size(top) != f.size(a) * f.size(b)) return false;
  std::vector<char> hit(static_cast<std::size_t>(f.size(a) * f.size(b)), 0);
  for (ElemId t = 0; t < f.size(top); ++t) {
    auto idx = static_cast<std::size_t>(f.act(c.morphism("a<top"), t) * f.size(b) + f.act(c.morphism("b<top"), t));
    if (hit[idx]) return false;
    hit[idx] = 1;
  }
  return true;
}

bool pair_model_sizes(const Presheaf& f, const Presheaf& af, const Site& s) {
  const FinCategory& c = *f.base;
  if (af.size(c.object("bot")) != 1) return false;
  if (s.name() == fixtures::discrete_space_site()->name()) {
    ObjId a = c.object("a"), b = c.object("b");
    return af.size(a) == f.size(a) && af.size(b) == f.size(b) && af.size(c.object("top")) == f.size(a) * f.size(b);
  }
  return af.size(c.object("u")) == f.size(c.object("u")) && af.size(c.object("top")) == f.size(c.object("top"));
}

SuiteReport suite_sheaf(const Corpus& corpus) {
  SuiteReport r;
  r.theorem = "sheaf";
  for (const auto& site : {fixtures::discrete_space_site(), fixtures::sierpinski_site()}) {
    std::size_t n = 0;
    for_each_presheaf(site->base(), corpus.bounds.value_bound, [&](const Presheaf& f0) {
      auto f = share(f0);
      ++n;
      auto w = [&](const char* check) {
        return [&site, &f, check] { return Json{{"check", check}, {"site", site->name()}, {"presheaf", json_of(*f)}}; };
      };
      bool sheaf = is_sheaf(*f, *site).sheaf;
      r.check(sheaf == pair_model_sheaf(*f, *site), w("is-sheaf-vs-model"));
      r.check(is_sheaf_coverform(*f, *site) == sheaf, w("cover-form-vs-sieve-form"));
      auto a = sheafify(f, *site);
      r.check(is_sheaf(*a.sheaf, *site).sheaf, w("sheafify-is-sheaf"));
      r.check(is_iso(a.unit) == sheaf, w("unit-iso-iff-sheaf"));
      r.check(is_iso(sheafify(a.sheaf, *site).unit), w("idempotent"));
      r.check(pair_model_sizes(*f, *a.sheaf, *site), w("sheafify-vs-model"));
      return true;
    });
    r.notes.push_back(site->name() + ": " + std::to_string(n) + " presheaves at value bound " +
                      std::to_string(corpus.bounds.value_bound));
  }
  return r;
}

SuiteReport suite_lex(const Corpus& corpus) {
  SuiteReport r;
  r.theorem = "lex";
  constexpr int kInstances = 60;
  for (const auto& site : {fixtures::discrete_space_site(), fixtures::sierpinski_site()}) {
    const CatPtr& c = site->base();
    Rng rng(corpus.seed ^ fnv1a(site->name()));
    auto draw_presheaf = [&] { return share(random_presheaf(c, corpus.bounds.value_bound, rng)); };
    {
      auto one = share(terminal_presheaf(c));
      auto a = sheafify(one, *site);
      r.check(is_iso(a.unit) && is_iso(to_terminal(a.sheaf)), Json{{"check", "terminal"}, {"site", site->name()}});
    }
    // True when a(lim D) -> lim(a∘D) is an isomorphism.
    auto compare = [&](const PresheafDiagram& d) {
      auto lim = presheaf_limit(d, c);
      auto al = sheafify(lim.apex, *site);
      std::vector<SheafificationResult> an;
      PresheafDiagram image{d.shape, {}, {}, c};
      for (const auto& node : d.nodes) {
        an.push_back(sheafify(node, *site));
        image.nodes.push_back(an.back().sheaf);
      }
      for (MorId m = 0; m < d.shape->num_morphisms(); ++m) {
        const auto& arrow = d.arrows[m];
        image.arrows.push_back(
            sheafify_morphism(arrow, an[d.shape->src(m)], an[d.shape->tgt(m)], *site));
      }
      PresheafCone cone{al.sheaf, {}};
      for (std::size_t i = 0; i < lim.legs.size(); ++i) cone.legs.push_back(sheafify_morphism(lim.legs[i], al, an[i], *site));
      auto cmp = mediate(presheaf_limit(image, c), cone);
      return cmp && is_iso(*cmp);
    };
    for (int k = 0; k < kInstances; ++k) {
      auto f = draw_presheaf(), g = draw_presheaf();
      r.check(compare(pair_of(f, g)),
              Json{{"check", "product"}, {"site", site->name()}, {"a", json_of(*f)}, {"b", json_of(*g)}});
    }
    for (int k = 0; k < kInstances; ++k) {
      auto f = draw_presheaf();
      auto g = draw_presheaf();
      auto homs = first_morphisms(f, g, 8);
      for (int tries = 0; homs.empty() && tries < 8; ++tries) {
        g = draw_presheaf();
        homs = first_morphisms(f, g, 8);
      }
      if (homs.empty()) {
        g = share(terminal_presheaf(c));
        homs = first_morphisms(f, g, 1);
      }
      const auto& u = homs[draw(rng, static_cast<int>(homs.size()))];
      const auto& v = homs[draw(rng, static_cast<int>(homs.size()))];
      r.check(compare(parallel_of(u, v)),
              Json{{"check", "equalizer"}, {"site", site->name()}, {"u", json_of(u)}, {"v", json_of(v)}});
    }
  }
  return r;
}

SuiteReport suite_controls(const Corpus& corpus) {
  SuiteReport r;
  r.theorem = "controls";
  auto rejected = [&](bool caught, const std::string& what) {
    r.check(caught, Json{{"check", "control-rejected"}, {"control", what}});
    if (caught) ++r.controls_confirmed;
  };
  // A broken naturality square on the walking arrow.
  {
    auto c = fixtures::walking_arrow();
    ObjId o0 = c->object("0"), o1 = c->object("1");
    std::vector<std::vector<std::string>> values(2);
    values[o0] = {"x", "w"};
    values[o1] = {"y", "z"};
    std::vector<std::vector<ElemId>> actions(c->num_morphisms(), std::vector<ElemId>{0, 1});
    auto f = share(make_presheaf(c, values, actions));
    PresheafMorphism bad{f, f, {}};
    bad.components.resize(2);
    bad.components[o0] = {0, 1};
    bad.components[o1] = {1, 0};
    rejected(!is_natural(bad) && !validate_morphism(bad).ok(), "non-natural transformation");
  }
  // Two points over the empty open.
  {
    auto site = fixtures::discrete_space_site();
    auto c = site->base();
    std::vector<std::vector<std::string>> values(4, std::vector<std::string>{"*"});
    values[c->object("bot")] = {"x", "y"};
    std::vector<std::vector<ElemId>> actions(c->num_morphisms());
    for (MorId m = 0; m < c->num_morphisms(); ++m)
      actions[m] = c->is_identity(m) ? std::vector<ElemId>(values[c->src(m)].size()) : std::vector<ElemId>{0};
    actions[c->identity(c->object("bot"))] = {0, 1};
    auto f = make_presheaf(c, values, actions);
    auto v = is_sheaf(f, *site);
    rejected(!v.sheaf && v.counterexample && v.counterexample->kind == "non-unique", "two points over the empty open");
  }
  // A cover-collapsing functor.
  {
    auto site = fixtures::discrete_space_site();
    const auto& p = corpus.functor("[top,-]@diamond").functor;
    auto v = is_continuous(p, *site);
    rejected(!v.continuous && v.object && p.dom->object_name(*v.object) == "top", "[top,-] on the discrete space");
    const auto& one = corpus.functor("const1@diamond").functor;
    auto w = is_continuous(one, *site);
    rejected(!w.continuous && w.object && p.dom->object_name(*w.object) == "bot", "constant 1 on the discrete space");
  }
  // Non-flat functors.
  for (const auto& name : {"const2@chain3", "const0@chain3"}) {
    const auto& p = corpus.functor(name).functor;
    auto bounded = is_flat_bounded(*make_extension(p), budget_profile("small"));
    rejected(!is_flat_setvalued(p).flat && !bounded.verified && bounded.counterexample, name);
  }
  // A category violating a unit law and a functor not preserving composites.
  {
    CategoryData d = fixtures::walking_arrow()->data();
    const std::size_t m = d.morphisms.size();
    MorId f = fixtures::walking_arrow()->morphism("f");
    d.compose[static_cast<std::size_t>(f) * m + d.identity[0]] = d.identity[1];
    rejected(!validate_category(d).ok(), "unit law violated");
    auto c = fixtures::chain3();
    std::vector<std::vector<ElemId>> maps(c->num_morphisms(), std::vector<ElemId>{1, 0});
    for (ObjId x = 0; x < 3; ++x) maps[c->identity(x)] = {0, 1};
    auto p = set_functor("twist", c, corpus.finset, {{"x", "y"}, {"x", "y"}, {"x", "y"}}, maps);
    rejected(!validate_topos_functor(p).ok(), "functor breaking a composite");
  }
  return r;
}

}  // namespace

void SuiteReport::finish() { pass = failures == 0 && checks_run > 0; }

Json SuiteReport::to_json() const {
  Json j;
  j["theorem"] = theorem;
  j["inputs_digest"] = hex64(inputs_digest);
  j["checks_run"] = checks_run;
  j["verdict"] = pass ? "pass" : "fail";
  j["failures"] = failures;
  j["controls_confirmed"] = controls_confirmed;
  j["witnesses"] = Json::array();
  for (const auto& w : witnesses) j["witnesses"].push_back(w);
  j["notes"] = notes;
  return j;
}

const std::vector<std::string>& suite_ids() {
  static const std::vector<std::string> ids{"I", "II", "III", "IV", "V", "VI", "VII", "sheaf", "lex", "controls"};
  return ids;
}

SuiteReport run_theorem_suite(const std::string& theorem, const Corpus& corpus, const Budget& budget) {
  SuiteReport r;
  if (theorem == "I") r = suite_yoneda(corpus);
  else if (theorem == "II") r = suite_density(corpus);
  else if (theorem == "III") r = suite_equivalence(corpus);
  else if (theorem == "IV") r = suite_adjunction(corpus);
  else if (theorem == "V") r = suite_flat_consistency(corpus, budget);
  else if (theorem == "VI") r = suite_sheaf_extension(corpus, budget);
  else if (theorem == "VII") r = suite_exact_flat(corpus, budget);
  else if (theorem == "sheaf") r = suite_sheaf(corpus);
  else if (theorem == "lex") r = suite_lex(corpus);
  else if (theorem == "controls") r = suite_controls(corpus);
  else throw ContractError("unknown suite: " + theorem);
  r.inputs_digest = fnv1a(theorem + "|" + budget.profile + "|" + std::to_string(budget.max_instances) + "|" +
                              hex64(corpus_digest(corpus)));
  r.finish();
  return r;
}

SuiteReport negative_controls(const Corpus& corpus) { return run_theorem_suite("controls", corpus, Budget{}); }

Json suite_document(const std::vector<SuiteReport>& reports, const Corpus& corpus, const Budget& budget) {
  Json doc;
  doc["schema"] = kReportSchema;
  doc["seed"] = corpus.seed;
  doc["budget"] = budget.profile;
  doc["value_bound"] = corpus.bounds.value_bound;
  doc["corpus_digest"] = hex64(corpus_digest(corpus));
  bool pass = !reports.empty();
  doc["reports"] = Json::array();
  for (const auto& r : reports) {
    pass = pass && r.pass;
    doc["reports"].push_back(r.to_json());
  }
  doc["verdict"] = pass ? "pass" : "fail";
  return doc;
}

Json run_all_suites(const Corpus& corpus, const Budget& budget) {
  std::vector<SuiteReport> reports;
  for (const auto& id : suite_ids()) reports.push_back(run_theorem_suite(id, corpus, budget));
  return suite_document(reports, corpus, budget);
}

Json json_of(const Presheaf& f) {
  const FinCategory& c = *f.base;
  Json values = Json::object();
  for (ObjId x = 0; x < c.num_objects(); ++x) values[c.object_name(x)] = f.values[x];
  Json actions = Json::object();
  for (MorId m = 0; m < c.num_morphisms(); ++m) {
    if (c.is_identity(m)) continue;
    Json row = Json::array();
    for (ElemId e : f.actions[m]) row.push_back(f.label(c.src(m), e));
    actions[c.morphism_name(m)] = row;
  }
  return Json{{"base", c.name()}, {"values", values}, {"actions", actions}};
}

Json json_of(const PresheafMorphism& m) {
  const FinCategory& c = *m.dom->base;
  Json comps = Json::object();
  for (ObjId x = 0; x < c.num_objects(); ++x) {
    Json row = Json::array();
    for (ElemId e : m.components[x]) row.push_back(m.cod->label(x, e));
    comps[c.object_name(x)] = row;
  }
  return comps;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace fintopos
