#include "fintopos/verify/fixtures.hpp"

namespace fintopos::fixtures {
namespace {

std::vector<std::vector<bool>> leq_from(int n, const std::vector<std::pair<int, int>>& pairs) {
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i) leq[i][i] = true;
  for (auto [a, b] : pairs) leq[a][b] = true;
  return leq;
}

}  // namespace

CatPtr one() { return terminal_category(); }

CatPtr walking_arrow() {
  static const CatPtr c = [] {
    CategoryBuilder b("arrow");
    b.add_object("0");
    b.add_object("1");
    b.add_morphism("f", "0", "1");
    return b.build();
  }();
  return c;
}

CatPtr chain3() {
  static const CatPtr c = make_chain("chain3", 3);
  return c;
}

CatPtr chain4() {
  static const CatPtr c = make_chain("chain4", 4);
  return c;
}

CatPtr discrete2() {
  static const CatPtr c = make_discrete("discrete2", 2);
  return c;
}

CatPtr diamond() {
  static const CatPtr c =
      make_poset("diamond", {"bot", "a", "b", "top"}, leq_from(4, {{0, 1}, {0, 2}, {0, 3}, {1, 3}, {2, 3}}));
  return c;
}

CatPtr sierpinski() {
  static const CatPtr c = make_poset("sierpinski", {"bot", "u", "top"}, leq_from(3, {{0, 1}, {0, 2}, {1, 2}}));
  return c;
}

CatPtr z2() {
  static const CatPtr c = make_monoid("z2", {"e", "s"}, {{0, 1}, {1, 0}});
  return c;
}

CatPtr parallel_pair() {
  static const CatPtr c = [] {
    CategoryBuilder b("parallel");
    b.add_object("0");
    b.add_object("1");
    b.add_morphism("u", "0", "1");
    b.add_morphism("v", "0", "1");
    return b.build();
  }();
  return c;
}

CatPtr idempotent() {
  static const CatPtr c = make_monoid("idempotent", {"1", "e"}, {{0, 1}, {1, 1}});
  return c;
}

CatPtr span() {
  static const CatPtr c = [] {
    CategoryBuilder b("span");
    b.add_object("l");
    b.add_object("r");
    b.add_object("s");
    b.add_morphism("p", "s", "l");
    b.add_morphism("q", "s", "r");
    return b.build();
  }();
  return c;
}

std::vector<CatPtr> categories() {
  return {one(),     walking_arrow(), chain3(),        chain4(),     discrete2(), diamond(),
          sierpinski(), z2(),         parallel_pair(), idempotent(), span()};
}

SitePtr discrete_space_site() {
  static const SitePtr s = [] {
    auto c = diamond();
    std::vector<std::vector<Family>> covers(c->num_objects());
    covers[c->object("bot")].push_back({});
    covers[c->object("top")].push_back({c->morphism("a<top"), c->morphism("b<top")});
    return generate_topology("discrete-space", c, covers);
  }();
  return s;
}

SitePtr sierpinski_site() {
  static const SitePtr s = [] {
    auto c = sierpinski();
    std::vector<std::vector<Family>> covers(c->num_objects());
    covers[c->object("bot")].push_back({});
    return generate_topology("sierpinski-space", c, covers);
  }();
  return s;
}

SitePtr chain_space_site() {
  static const SitePtr s = [] {
    auto c = chain4();
    std::vector<std::vector<Family>> covers(c->num_objects());
    covers[c->object("0")].push_back({});
    return generate_topology("chain-space", c, covers);
  }();
  return s;
}

SitePtr canonical_site(const CatPtr& c) {
  auto canon = canonical_pretopology(c);
  return generate_topology("canonical(" + c->name() + ")", c, canon.covers);
}

std::vector<SitePtr> sites() {
  static const std::vector<SitePtr> all = [] {
    std::vector<SitePtr> out{discrete_space_site(), sierpinski_site(), chain_space_site(),
                             canonical_site(diamond()), canonical_site(chain3())};
    for (const auto& c : categories()) out.push_back(trivial_site(c));
    return out;
  }();
  return all;
}

}  // namespace fintopos::fixtures
