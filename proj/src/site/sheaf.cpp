#include "fintopos/site/sheaf.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "fintopos/presheaf/yoneda.hpp"

namespace fintopos {

Presheaf sieve_presheaf(const CatPtr& c, ObjId x, SieveMask s) {
  Presheaf h = yoneda_embed(c, x);
  Presheaf out{c, std::vector<std::vector<std::string>>(c->num_objects()),
               std::vector<std::vector<ElemId>>(c->num_morphisms())};
  // position of g in hom(Y, X) -> position among the members of S at Y
  std::vector<std::vector<ElemId>> pos(c->num_objects());
  for (ObjId y = 0; y < c->num_objects(); ++y) {
    const auto& hom = c->hom(y, x);
    pos[y].assign(hom.size(), -1);
    for (std::size_t k = 0; k < hom.size(); ++k)
      if (has(s, hom[k])) {
        pos[y][k] = out.size(y);
        out.values[y].push_back(h.label(y, static_cast<ElemId>(k)));
      }
  }
  for (MorId f = 0; f < c->num_morphisms(); ++f) {
    ObjId a = c->src(f), b = c->tgt(f);
    const auto& hom = c->hom(b, x);
    for (std::size_t k = 0; k < hom.size(); ++k)
      if (has(s, hom[k])) out.actions[f].push_back(pos[a][h.act(f, static_cast<ElemId>(k))]);
  }
  return out;
}

namespace {

// Backtracking over the sections of a matching family. Members are visited
// in an order that lets earlier choices force later ones.
class MatchingSearch {
 public:
  MatchingSearch(const Presheaf& f, ObjId x, SieveMask s) : f_(f), mem_(members(s)) {
    const FinCategory& c = *f.base;
    const int k = static_cast<int>(mem_.size());
    std::vector<int> index(c.num_morphisms(), -1);
    for (int i = 0; i < k; ++i) index[mem_[i]] = i;
    // constraints (i, g, j): s_j = F(g)(s_i) where mem_[j] = mem_[i]∘g
    struct Con {
      int i;
      MorId g;
      int j;
    };
    std::vector<Con> cons;
    for (int i = 0; i < k; ++i)
      for (MorId g : c.into(c.src(mem_[i])))
        if (!c.is_identity(g)) cons.push_back({i, g, index[c.compose(mem_[i], g)]});
    // Greedy order: a free member generating the most others, then everything it forces.
    std::vector<int> pos(k, -1);
    forced_.assign(k, {-1, kNone});
    while (static_cast<int>(order_.size()) < k) {
      int pick = -1;
      for (const Con& cn : cons)
        if (pos[cn.i] >= 0 && pos[cn.j] < 0) {
          pick = cn.j;
          forced_[pick] = {cn.i, cn.g};
          break;
        }
      if (pick < 0) {
        int best = -1;
        for (int i = 0; i < k; ++i) {
          if (pos[i] >= 0) continue;
          int gen = static_cast<int>(c.into(c.src(mem_[i])).size());
          if (gen > best) best = gen, pick = i;
        }
      }
      pos[pick] = static_cast<int>(order_.size());
      order_.push_back(pick);
    }
    checks_.resize(k);
    for (const Con& cn : cons) checks_[std::max(pos[cn.i], pos[cn.j])].push_back({cn.i, cn.g, cn.j});
    sections_.assign(k, 0);
  }

  template <class Visit>
  void run(Visit&& visit) {
    rec(0, visit);
  }

  const std::vector<ElemId>& sections() const { return sections_; }

 private:
  struct Check {
    int i;
    MorId g;
    int j;
  };

  template <class Visit>
  bool rec(std::size_t t, Visit& visit) {
    if (t == order_.size()) return visit(sections_);
    int i = order_[t];
    if (forced_[i].first >= 0) {
      sections_[i] = f_.act(forced_[i].second, sections_[forced_[i].first]);
      return !ok(t) || rec(t + 1, visit);
    }
    for (ElemId e = 0; e < f_.size(f_.base->src(mem_[i])); ++e) {
      sections_[i] = e;
      if (ok(t) && !rec(t + 1, visit)) return false;
    }
    return true;
  }

  bool ok(std::size_t t) const {
    for (const Check& ch : checks_[t])
      if (sections_[ch.j] != f_.act(ch.g, sections_[ch.i])) return false;
    return true;
  }

  const Presheaf& f_;
  std::vector<MorId> mem_;
  std::vector<int> order_;
  std::vector<std::pair<int, MorId>> forced_;
  std::vector<std::vector<Check>> checks_;
  std::vector<ElemId> sections_;
};

}  // namespace

std::vector<MatchingFamily> matching_families(const Presheaf& f, ObjId x, SieveMask s) {
  std::vector<MatchingFamily> out;
  MatchingSearch search(f, x, s);
  search.run([&](const std::vector<ElemId>& sec) {
    out.push_back({x, s, sec});
    return true;
  });
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.sections < b.sections; });
  return out;
}

MatchingFamily restrict_to(const Presheaf& f, ObjId x, SieveMask s, ElemId e) {
  MatchingFamily m{x, s, {}};
  for (MorId g : members(s)) m.sections.push_back(f.act(g, e));
  return m;
}

namespace {

std::optional<SheafCounterexample> sheaf_failure(const Presheaf& f, ObjId x, SieveMask s, bool separation_only) {
  std::map<std::vector<ElemId>, ElemId> image;
  for (ElemId e = 0; e < f.size(x); ++e) {
    auto r = restrict_to(f, x, s, e);
    if (!image.emplace(r.sections, e).second) return SheafCounterexample{x, s, "non-unique", r};
  }
  if (separation_only) return std::nullopt;
  std::optional<SheafCounterexample> bad;
  MatchingSearch search(f, x, s);
  search.run([&](const std::vector<ElemId>& sec) {
    if (image.count(sec)) return true;
    bad = SheafCounterexample{x, s, "no-amalgamation", {x, s, sec}};
    return false;
  });
  return bad;
}

}  // namespace

SheafVerdict is_sheaf(const Presheaf& f, const Site& s) {
  if (!same_category(*f.base, *s.base())) throw ContractError("is_sheaf: presheaf lives over another base");
  for (ObjId x = 0; x < f.base->num_objects(); ++x) {
    const auto& j = s.topology(x);
    for (std::size_t k = 1; k < j.size(); ++k)  // the maximal sieve never fails
      if (auto bad = sheaf_failure(f, x, j[k], false)) return {false, bad};
  }
  return {true, std::nullopt};
}

bool is_separated(const Presheaf& f, const Site& s) {
  for (ObjId x = 0; x < f.base->num_objects(); ++x) {
    const auto& j = s.topology(x);
    for (std::size_t k = 1; k < j.size(); ++k)
      if (sheaf_failure(f, x, j[k], true)) return false;
  }
  return true;
}

bool is_sheaf_coverform(const Presheaf& f, const Site& s) {
  if (!same_category(*f.base, *s.base())) throw ContractError("is_sheaf_coverform: presheaf lives over another base");
  const FinCategory& c = *f.base;
  for (ObjId x = 0; x < c.num_objects(); ++x)
    for (const Family& fam : s.covers()[x]) {
      const auto ov = family_overlaps(c, fam);
      const int k = static_cast<int>(fam.size());
      std::vector<ElemId> sec(k, 0);
      bool good = true;
      auto compatible_upto = [&](int upto) {
        for (const Overlap& o : ov)
          if (o.i <= upto && o.j <= upto && f.act(o.g, sec[o.i]) != f.act(o.gp, sec[o.j])) return false;
        return true;
      };
      auto rec = [&](auto&& self, int i) -> void {
        if (!good) return;
        if (i == k) {
          int count = 0;
          for (ElemId e = 0; e < f.size(x); ++e) {
            bool hit = true;
            for (int t = 0; t < k && hit; ++t) hit = f.act(fam[t], e) == sec[t];
            count += hit ? 1 : 0;
          }
          good = count == 1;
          return;
        }
        for (ElemId e = 0; e < f.size(c.src(fam[i])); ++e) {
          sec[i] = e;
          if (compatible_upto(i)) self(self, i + 1);
        }
      };
      rec(rec, 0);
      if (!good) return false;
    }
  return true;
}

struct PlusIndex {
  struct Member {
    SieveMask sieve;
    std::vector<ElemId> sections;
  };
  struct AtObject {
    std::vector<Member> members;
    std::map<std::pair<SieveMask, std::vector<ElemId>>, int> lookup;
    std::vector<int> class_of;        // member -> class
    std::vector<int> representative;  // class -> member
  };
  std::vector<AtObject> at;

  int class_for(ObjId x, SieveMask s, const std::vector<ElemId>& sec) const {
    const auto& a = at[x];
    auto it = a.lookup.find({s, sec});
    if (it == a.lookup.end()) throw Error("plus construction: matching family missing from the index");
    return a.class_of[it->second];
  }
};

namespace {

int find_root(std::vector<int>& parent, int a) {
  while (parent[a] != a) a = parent[a] = parent[parent[a]];
  return a;
}

void unite(std::vector<int>& parent, int a, int b) {
  a = find_root(parent, a);
  b = find_root(parent, b);
  if (a != b) parent[std::max(a, b)] = std::min(a, b);
}

// Sections of a family on R restricted to T ⊆ R.
std::vector<ElemId> restrict_sections(SieveMask r, const std::vector<ElemId>& sec, SieveMask t) {
  std::vector<ElemId> out;
  int k = 0;
  for (MorId g : members(r)) {
    if (has(t, g)) out.push_back(sec[k]);
    ++k;
  }
  return out;
}

}  // namespace

PlusResult plus_construction(const PresheafPtr& fp, const Site& s) {
  const Presheaf& f = *fp;
  const CatPtr& base = f.base;
  const FinCategory& c = *base;
  if (!same_category(c, *s.base())) throw ContractError("plus_construction: presheaf lives over another base");
  const int n = c.num_objects();
  auto index = std::make_shared<PlusIndex>();
  index->at.resize(n);
  Presheaf plus{base, std::vector<std::vector<std::string>>(n), std::vector<std::vector<ElemId>>(c.num_morphisms())};

  for (ObjId x = 0; x < n; ++x) {
    auto& at = index->at[x];
    const auto& j = s.topology(x);
    for (SieveMask r : j)
      for (auto& m : matching_families(f, x, r)) {
        at.lookup.emplace(std::make_pair(r, m.sections), static_cast<int>(at.members.size()));
        at.members.push_back({r, std::move(m.sections)});
      }
    const int k = static_cast<int>(at.members.size());
    std::vector<int> parent(k);
    std::iota(parent.begin(), parent.end(), 0);
    for (SieveMask t : j) {
      std::map<std::vector<ElemId>, int> seen;
      for (int m = 0; m < k; ++m) {
        const auto& mem = at.members[m];
        if ((mem.sieve & t) != t) continue;
        auto [it, fresh] = seen.emplace(restrict_sections(mem.sieve, mem.sections, t), m);
        if (!fresh) unite(parent, it->second, m);
      }
    }
    // Classes meeting F(X) first, ordered by their least element of F(X).
    const SieveMask top = j.front();
    const auto top_members = members(top);
    const int id_pos = static_cast<int>(std::find(top_members.begin(), top_members.end(), c.identity(x)) -
                                        top_members.begin());
    std::vector<int> least_elem(k, -1), least_member(k, -1);
    for (int m = 0; m < k; ++m) {
      int root = find_root(parent, m);
      if (least_member[root] < 0) least_member[root] = m;
      if (at.members[m].sieve == top) {
        ElemId e = at.members[m].sections[id_pos];
        if (least_elem[root] < 0 || e < least_elem[root]) least_elem[root] = e;
      }
    }
    std::vector<int> roots;
    for (int m = 0; m < k; ++m)
      if (find_root(parent, m) == m) roots.push_back(m);
    std::stable_sort(roots.begin(), roots.end(), [&](int a, int b) {
      bool ea = least_elem[a] >= 0, eb = least_elem[b] >= 0;
      if (ea != eb) return ea;
      if (ea) return least_elem[a] < least_elem[b];
      return least_member[a] < least_member[b];
    });
    std::vector<int> class_of_root(k, -1);
    at.class_of.assign(k, -1);
    for (int r : roots) {
      class_of_root[r] = static_cast<int>(at.representative.size());
      at.representative.push_back(least_member[r]);
      std::string label;
      if (least_elem[r] >= 0) {
        label = f.label(x, least_elem[r]);
      } else {
        const auto& mem = at.members[least_member[r]];
        label = "<";
        auto ms = members(mem.sieve);
        for (std::size_t t = 0; t < ms.size(); ++t) {
          if (t) label += ";";
          label += c.morphism_name(ms[t]) + "=" + f.label(c.src(ms[t]), mem.sections[t]);
        }
        label += ">";
      }
      while (std::find(plus.values[x].begin(), plus.values[x].end(), label) != plus.values[x].end()) label += "'";
      plus.values[x].push_back(std::move(label));
    }
    for (int m = 0; m < k; ++m) at.class_of[m] = class_of_root[find_root(parent, m)];
  }

  // F⁺(g)[(R, s)] = [(g*R, s·g)] for g: Y -> X.
  for (MorId g = 0; g < c.num_morphisms(); ++g) {
    ObjId y = c.src(g), x = c.tgt(g);
    const auto& at = index->at[x];
    for (int rep : at.representative) {
      const auto& mem = at.members[rep];
      SieveMask pulled = pullback_sieve(c, g, mem.sieve);
      auto rmem = members(mem.sieve);
      std::vector<ElemId> sec;
      for (MorId h : members(pulled)) {
        MorId gh = c.compose(g, h);
        sec.push_back(mem.sections[std::find(rmem.begin(), rmem.end(), gh) - rmem.begin()]);
      }
      plus.actions[g].push_back(index->class_for(y, pulled, sec));
    }
  }

  PlusResult out{share(std::move(plus)), {}, index};
  out.unit = PresheafMorphism{fp, out.plus, std::vector<std::vector<ElemId>>(n)};
  for (ObjId x = 0; x < n; ++x) {
    SieveMask top = s.topology(x).front();
    for (ElemId e = 0; e < f.size(x); ++e)
      out.unit.components[x].push_back(index->class_for(x, top, restrict_to(f, x, top, e).sections));
  }
  return out;
}

PresheafMorphism plus_morphism(const PresheafMorphism& phi, const PlusResult& fp, const PlusResult& gp, const Site& s) {
  const FinCategory& c = *s.base();
  PresheafMorphism out{fp.plus, gp.plus, std::vector<std::vector<ElemId>>(c.num_objects())};
  for (ObjId x = 0; x < c.num_objects(); ++x) {
    const auto& at = fp.index->at[x];
    for (int rep : at.representative) {
      const auto& mem = at.members[rep];
      std::vector<ElemId> sec;
      auto ms = members(mem.sieve);
      for (std::size_t t = 0; t < ms.size(); ++t) sec.push_back(phi.at(c.src(ms[t]), mem.sections[t]));
      out.components[x].push_back(gp.index->class_for(x, mem.sieve, sec));
    }
  }
  return out;
}

SheafificationResult sheafify(const PresheafPtr& f, const Site& s) {
  SheafificationResult out;
  out.first = plus_construction(f, s);
  out.second = plus_construction(out.first.plus, s);
  out.sheaf = out.second.plus;
  out.unit = compose(out.second.unit, out.first.unit);
  out.unit.dom = f;
  out.unit.cod = out.sheaf;
  out.stages = {out.first.plus, out.second.plus};
  return out;
}

PresheafMorphism sheafify_morphism(const PresheafMorphism& phi, const SheafificationResult& af,
                                   const SheafificationResult& ag, const Site& s) {
  PresheafMorphism p1 = plus_morphism(phi, af.first, ag.first, s);
  return plus_morphism(p1, af.second, ag.second, s);
}

PresheafMorphism sheafify_morphism(const PresheafMorphism& phi, const Site& s) {
  return sheafify_morphism(phi, sheafify(phi.dom, s), sheafify(phi.cod, s), s);
}

SheafificationResult epsilon(const SitePtr& s, ObjId x) { return sheafify(share(yoneda_embed(s->base(), x)), *s); }

PresheafMorphism epsilon_morphism(const SitePtr& s, MorId f) {
  const CatPtr& c = s->base();
  return sheafify_morphism(yoneda_embed_morphism(c, f), epsilon(s, c->src(f)), epsilon(s, c->tgt(f)), *s);
}

}  // namespace fintopos
