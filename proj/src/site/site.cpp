#include "fintopos/site/site.hpp"

#include <algorithm>
#include <bit>
#include <set>

#include "fintopos/fincat/limits.hpp"

namespace fintopos {

namespace {

void require_mask_capacity(const FinCategory& c) {
  if (c.num_morphisms() > 64) throw ContractError("sites need a base with at most 64 morphisms: " + c.name());
}

SieveMask bit(MorId f) { return SieveMask{1} << f; }

}  // namespace

SieveMask generated_sieve(const FinCategory& c, ObjId x, const Family& family) {
  SieveMask s = 0;
  for (MorId f : family) {
    if (c.tgt(f) != x) throw ContractError("family member " + c.morphism_name(f) + " does not target " + c.object_name(x));
    for (MorId h : c.into(c.src(f))) s |= bit(c.compose(f, h));
  }
  return s;
}

SieveMask maximal_sieve(const FinCategory& c, ObjId x) {
  SieveMask s = 0;
  for (MorId f : c.into(x)) s |= bit(f);
  return s;
}

bool is_sieve(const FinCategory& c, ObjId x, SieveMask s) {
  if ((s & ~maximal_sieve(c, x)) != 0) return false;
  for (MorId f : members(s))
    for (MorId h : c.into(c.src(f)))
      if (!has(s, c.compose(f, h))) return false;
  return true;
}

SieveMask pullback_sieve(const FinCategory& c, MorId f, SieveMask s) {
  SieveMask out = 0;
  for (MorId g : c.into(c.src(f)))
    if (has(s, c.compose(f, g))) out |= bit(g);
  return out;
}

std::vector<MorId> members(SieveMask s) {
  std::vector<MorId> out;
  while (s != 0) {
    int f = std::countr_zero(s);
    out.push_back(f);
    s &= s - 1;
  }
  return out;
}

std::vector<SieveMask> all_sieves(const FinCategory& c, ObjId x) {
  require_mask_capacity(c);
  // Sieves are exactly the unions of principal sieves.
  std::vector<SieveMask> principal;
  for (MorId f : c.into(x)) principal.push_back(generated_sieve(c, x, {f}));
  std::set<SieveMask> seen{0};
  std::vector<SieveMask> frontier{0};
  while (!frontier.empty()) {
    std::vector<SieveMask> next;
    for (SieveMask s : frontier)
      for (SieveMask p : principal)
        if (seen.insert(s | p).second) next.push_back(s | p);
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

bool Site::covering(ObjId x, SieveMask s) const {
  return std::binary_search(topology_[x].begin() + 1, topology_[x].end(), s) || topology_[x].front() == s;
}

bool Site::is_trivial() const {
  return std::all_of(topology_.begin(), topology_.end(), [](const auto& j) { return j.size() == 1; });
}

std::size_t Site::num_covering_sieves() const {
  std::size_t n = 0;
  for (const auto& j : topology_) n += j.size();
  return n;
}

SitePtr generate_topology(std::string name, CatPtr base, std::vector<std::vector<Family>> covers) {
  const FinCategory& c = *base;
  require_mask_capacity(c);
  const int n = c.num_objects();
  if (static_cast<int>(covers.size()) != n) covers.resize(n);
  std::vector<std::vector<SieveMask>> sieves(n);
  std::vector<std::set<SieveMask>> j(n);
  for (ObjId x = 0; x < n; ++x) {
    sieves[x] = all_sieves(c, x);
    j[x].insert(maximal_sieve(c, x));
    for (const Family& fam : covers[x]) j[x].insert(generated_sieve(c, x, fam));
  }
  bool changed = true;
  while (changed) {
    changed = false;
    // Pullback stability.
    for (ObjId y = 0; y < n; ++y)
      for (SieveMask s : std::vector<SieveMask>(j[y].begin(), j[y].end()))
        for (MorId f : c.into(y))
          changed |= j[c.src(f)].insert(pullback_sieve(c, f, s)).second;
    // Transitivity: R covers x when some covering S has f*R covering for all f in S.
    for (ObjId x = 0; x < n; ++x)
      for (SieveMask r : sieves[x]) {
        if (j[x].count(r)) continue;
        for (SieveMask s : std::vector<SieveMask>(j[x].begin(), j[x].end())) {
          bool all = true;
          for (MorId f : members(s))
            if (!j[c.src(f)].count(pullback_sieve(c, f, r))) {
              all = false;
              break;
            }
          if (all) {
            j[x].insert(r);
            changed = true;
            break;
          }
        }
      }
  }
  auto site = std::make_shared<Site>();
  site->name_ = std::move(name);
  site->base_ = std::move(base);
  site->covers_ = std::move(covers);
  site->topology_.resize(n);
  for (ObjId x = 0; x < n; ++x) {
    SieveMask top = maximal_sieve(c, x);
    site->topology_[x].push_back(top);
    for (SieveMask s : j[x])
      if (s != top) site->topology_[x].push_back(s);
  }
  return site;
}

SitePtr saturate(const Site& s) {
  const FinCategory& c = *s.base();
  std::vector<std::vector<Family>> covers(c.num_objects());
  for (ObjId x = 0; x < c.num_objects(); ++x)
    for (SieveMask m : s.topology(x)) covers[x].push_back(members(m));
  return generate_topology(s.name(), s.base(), std::move(covers));
}

SitePtr trivial_site(CatPtr base) {
  std::string name = "trivial(" + base->name() + ")";
  return generate_topology(std::move(name), std::move(base), {});
}

std::vector<Overlap> family_overlaps(const FinCategory& c, const Family& family) {
  std::vector<Overlap> out;
  const int k = static_cast<int>(family.size());
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j)
      for (ObjId w = 0; w < c.num_objects(); ++w)
        for (MorId g : c.hom(w, c.src(family[i])))
          for (MorId gp : c.hom(w, c.src(family[j])))
            if (c.compose(family[i], g) == c.compose(family[j], gp) && !(i == j && g == gp))
              out.push_back({i, j, g, gp});
  return out;
}

StrictEpiVerdict is_strict_epi_family(const FinCategory& c, ObjId x, const Family& family) {
  for (MorId f : family)
    if (c.tgt(f) != x) throw ContractError("strict epi: family member does not target the object");
  const auto ov = family_overlaps(c, family);
  const int k = static_cast<int>(family.size());
  for (ObjId y = 0; y < c.num_objects(); ++y) {
    std::vector<MorId> tuple(k, kNone);
    std::optional<StrictEpiWitness> bad;
    auto compatible_upto = [&](int upto) {
      for (const Overlap& o : ov) {
        if (o.i > upto || o.j > upto) continue;
        if (c.compose(tuple[o.i], o.g) != c.compose(tuple[o.j], o.gp)) return false;
      }
      return true;
    };
    auto rec = [&](auto&& self, int i) -> void {
      if (bad) return;
      if (i == k) {
        int count = 0;
        for (MorId u : c.hom(x, y)) {
          bool ok = true;
          for (int t = 0; t < k && ok; ++t) ok = c.compose(u, family[t]) == tuple[t];
          count += ok ? 1 : 0;
        }
        if (count != 1) bad = StrictEpiWitness{count == 0 ? "no-factoring" : "non-unique", y, tuple};
        return;
      }
      for (MorId m : c.hom(c.src(family[i]), y)) {
        tuple[i] = m;
        if (compatible_upto(i)) self(self, i + 1);
      }
    };
    rec(rec, 0);
    if (bad) return {false, bad};
  }
  return {true, std::nullopt};
}

UniversalVerdict is_universal_strict_epi(const FinCategory& c, ObjId x, const Family& family) {
  UniversalVerdict out;
  auto base = std::make_shared<FinCategory>(c.data(), FinCategory::Trusted{});
  auto plain = is_strict_epi_family(c, x, family);
  if (!plain.strict_epi) {
    out.failing_base_change = c.identity(x);
    out.witness = plain.witness;
    return out;
  }
  for (MorId g : c.into(x)) {
    ObjId w = c.src(g);
    Family pulled;
    for (MorId f : family) {
      auto cone = universal_cone_search(cospan_diagram(base, f, g));
      if (!cone) {
        out.complete = false;
        out.gaps.emplace_back(g, f);
        continue;
      }
      pulled.push_back(cone->legs[1]);
    }
    if (!out.complete) continue;
    auto v = is_strict_epi_family(c, w, pulled);
    if (!v.strict_epi && !out.failing_base_change) {
      out.failing_base_change = g;
      out.witness = v.witness;
    }
  }
  out.universal = out.complete && !out.failing_base_change;
  return out;
}

CanonicalPretopology canonical_pretopology(const CatPtr& c, int max_family_size) {
  CanonicalPretopology out;
  out.max_family_size = max_family_size;
  out.covers.resize(c->num_objects());
  for (ObjId x = 0; x < c->num_objects(); ++x) {
    const auto& into = c->into(x);
    const int m = static_cast<int>(into.size());
    if (m > 20) throw ResourceError("canonical_pretopology: too many morphisms into " + c->object_name(x));
    // Subsets by size, then lexicographically by member ids.
    std::vector<Family> candidates;
    for (std::uint32_t mask = 0; mask < (1U << m); ++mask) {
      if (std::popcount(mask) > max_family_size) continue;
      Family fam;
      for (int i = 0; i < m; ++i)
        if ((mask >> i) & 1U) fam.push_back(into[i]);
      candidates.push_back(std::move(fam));
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Family& a, const Family& b) { return a.size() < b.size() || (a.size() == b.size() && a < b); });
    for (const Family& fam : candidates) {
      auto v = is_universal_strict_epi(*c, x, fam);
      if (v.universal) {
        out.covers[x].push_back(fam);
      } else if (!v.complete && !v.failing_base_change) {
        out.gap_families.emplace_back(x, fam);
      }
    }
  }
  return out;
}

}  // namespace fintopos
