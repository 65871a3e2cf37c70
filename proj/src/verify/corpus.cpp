#include "fintopos/verify/corpus.hpp"

#include <sstream>

#include "fintopos/presheaf/enumerate.hpp"
#include "fintopos/site/continuity.hpp"
#include "fintopos/verify/fixtures.hpp"

namespace fintopos {

namespace {

FinFunctor to_arrow(const CatPtr& c, const std::vector<ObjId>& obj) {
  const CatPtr& arrow = fixtures::walking_arrow();
  FinFunctor f{"F", c, arrow, obj, {}};
  for (MorId m = 0; m < c->num_morphisms(); ++m) {
    ObjId s = obj[c->src(m)], t = obj[c->tgt(m)];
    f.mor_map.push_back(s == t ? arrow->identity(s) : arrow->morphism("f"));
  }
  return f;
}

std::string describe(const Presheaf& f) {
  std::ostringstream os;
  os << std::hex << digest(f);
  return os.str();
}

}  // namespace

const FunctorFixture& Corpus::functor(const std::string& name) const {
  for (const auto& f : functors)
    if (f.name == name) return f;
  throw ContractError("corpus: no functor named " + name);
}

CatPtr random_poset(const std::string& name, int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i) leq[i][i] = true;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) leq[i][j] = draw(rng, 2) == 1;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (leq[i][k] && leq[k][j]) leq[i][j] = true;
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("p" + std::to_string(i));
  return make_poset(name, names, leq);
}

Corpus corpus_generate(std::uint64_t seed, const CorpusBounds& bounds) {
  if (bounds.value_bound < 1 || bounds.value_bound > 3) throw ContractError("corpus: value_bound must be 1..3");
  if (bounds.random_categories < 0 || bounds.random_categories > 8)
    throw ContractError("corpus: random_categories must be 0..8");
  if (bounds.random_presheaves < 0 || bounds.random_presheaves > 64)
    throw ContractError("corpus: random_presheaves must be 0..64");
  Corpus out;
  out.seed = seed;
  out.bounds = bounds;
  out.categories = fixtures::categories();
  out.fixture_count = out.categories.size();
  Rng rng(seed);
  for (int k = 0; k < bounds.random_categories; ++k) {
    int n = 2 + static_cast<int>(draw(rng, 3));
    out.categories.push_back(random_poset("rand" + std::to_string(k), n, rng()));
  }
  for (const auto& c : out.categories) {
    std::vector<PresheafPtr> s;
    for (int i = 0; i < bounds.random_presheaves; ++i) s.push_back(share(random_presheaf(c, bounds.value_bound, rng)));
    out.samples.push_back(std::move(s));
  }
  out.sites = fixtures::sites();

  Budget b;
  b.value_bound = bounds.value_bound;
  out.finset = finset_category(b);
  out.arrow_presheaves = presheaf_category(fixtures::walking_arrow(), b);
  auto add = [&](std::string name, ToposFunctor p, bool control = false) {
    p.name = name;
    out.functors.push_back({std::move(name), std::move(p), control});
  };
  for (const auto& c : out.categories)
    for (ObjId x = 0; x < c->num_objects(); ++x)
      add("[" + c->object_name(x) + ",-]@" + c->name(), corepresentable(c, x, out.finset));
  add("A2@1", constant_topos_functor("", fixtures::one(), out.finset, share(finite_set(2))));
  add("const1@diamond", constant_topos_functor("", fixtures::diamond(), out.finset, share(finite_set(1))));
  add("const2@chain3", constant_topos_functor("", fixtures::chain3(), out.finset, share(finite_set(2))), true);
  add("const0@chain3", constant_topos_functor("", fixtures::chain3(), out.finset, share(finite_set(0))), true);
  add("h@arrow", yoneda_functor(out.arrow_presheaves));
  add("hF@span", yoneda_after(to_arrow(fixtures::span(), {1, 1, 0}), out.arrow_presheaves));
  add("hG@chain3", yoneda_after(to_arrow(fixtures::chain3(), {0, 1, 1}), out.arrow_presheaves));
  add("h1@1", yoneda_after(to_arrow(fixtures::one(), {1}), out.arrow_presheaves));
  for (const auto& s : {fixtures::discrete_space_site(), fixtures::sierpinski_site(), fixtures::chain_space_site()})
    add("eps@" + s->name(), epsilon_functor(s, b));
  for (const auto& f : out.functors) {
    auto report = validate_topos_functor(f.functor);
    if (!report.ok()) throw ValidationError(report);
  }
  return out;
}

std::uint64_t fnv1a(const std::string& bytes, std::uint64_t h) {
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t corpus_digest(const Corpus& corpus) {
  std::ostringstream os;
  os << "seed=" << corpus.seed << ";bound=" << corpus.bounds.value_bound << ";rc=" << corpus.bounds.random_categories
     << ";rp=" << corpus.bounds.random_presheaves << '\n';
  for (std::size_t i = 0; i < corpus.categories.size(); ++i) {
    const auto& c = *corpus.categories[i];
    os << "cat " << c.name() << ' ' << c.num_objects() << ' ' << c.num_morphisms();
    for (int v : c.data().compose) os << ',' << v;
    for (const auto& s : corpus.samples[i]) os << ' ' << describe(*s);
    os << '\n';
  }
  for (const auto& s : corpus.sites) os << "site " << s->name() << ' ' << s->num_covering_sieves() << '\n';
  for (const auto& f : corpus.functors) {
    os << "functor " << f.name << ' ' << f.functor.cod->name();
    for (const auto& o : f.functor.obj) os << ' ' << describe(*o);
    os << '\n';
  }
  return fnv1a(os.str());
}

}  // namespace fintopos
