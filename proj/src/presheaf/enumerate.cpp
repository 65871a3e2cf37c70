#include "fintopos/presheaf/enumerate.hpp"

#include <algorithm>
#include <numeric>

#include "fintopos/error.hpp"

namespace fintopos {
namespace {

struct Triple {
  MorId g, f, h;  // g∘f = h
};

// Backtracking over the action tables of the non-identity morphisms, with
// sizes fixed. Morphisms are ordered so that composites of already chosen
// morphisms come as early as possible: their action is then forced.
class ActionSearch {
 public:
  ActionSearch(const CatPtr& c, std::vector<int> sizes) : c_(c), sizes_(std::move(sizes)) {
    const int m = c->num_morphisms();
    pos_.assign(m, -2);
    for (MorId f = 0; f < m; ++f)
      if (c->is_identity(f)) pos_[f] = -1;
    forced_.assign(m, {kNone, kNone});
    while (static_cast<int>(order_.size()) < c->non_identity_count()) {
      MorId pick = kNone;
      for (MorId h = 0; h < m && pick == kNone; ++h) {
        if (pos_[h] != -2) continue;
        for (MorId f = 0; f < m && pick == kNone; ++f)
          for (MorId g = 0; g < m; ++g) {
            if (pos_[f] < 0 || pos_[g] < 0 || c->tgt(f) != c->src(g)) continue;
            if (c->compose(g, f) == h) {
              pick = h;
              forced_[h] = {g, f};
              break;
            }
          }
      }
      if (pick == kNone)
        for (MorId h = 0; h < m; ++h)
          if (pos_[h] == -2) {
            pick = h;
            break;
          }
      pos_[pick] = static_cast<int>(order_.size());
      order_.push_back(pick);
    }
    checks_.resize(order_.size());
    for (MorId f = 0; f < m; ++f)
      for (MorId g = 0; g < m; ++g) {
        if (c->tgt(f) != c->src(g) || c->is_identity(f) || c->is_identity(g)) continue;
        MorId h = c->compose(g, f);
        int k = std::max({pos_[f], pos_[g], pos_[h]});
        checks_[k].push_back({g, f, h});
      }
    actions_.resize(m);
    for (MorId f = 0; f < m; ++f)
      if (c->is_identity(f)) {
        actions_[f].resize(sizes_[c->src(f)]);
        std::iota(actions_[f].begin(), actions_[f].end(), 0);
      }
  }

  // Visits complete action tables; `rng` (optional) shuffles option order.
  // Returns false when stopped by the visitor.
  bool run(const std::function<bool(const std::vector<std::vector<ElemId>>&)>& visit, Rng* rng) {
    visit_ = &visit;
    rng_ = rng;
    return step(0);
  }

 private:
  bool step(std::size_t k) {
    if (k == order_.size()) return (*visit_)(actions_);
    MorId h = order_[k];
    int s = sizes_[c_->src(h)], t = sizes_[c_->tgt(h)];
    auto& act = actions_[h];
    act.assign(t, 0);
    if (forced_[h].first != kNone) {
      auto [g, f] = forced_[h];
      for (int y = 0; y < t; ++y) act[y] = actions_[f][actions_[g][y]];
      if (consistent(k) && !step(k + 1)) return false;
      return true;
    }
    if (t > 0 && s == 0) return true;
    std::uint64_t total = 1;
    for (int i = 0; i < t; ++i) total *= static_cast<std::uint64_t>(s);
    std::vector<std::uint64_t> codes(total);
    std::iota(codes.begin(), codes.end(), std::uint64_t{0});
    if (rng_) std::shuffle(codes.begin(), codes.end(), *rng_);
    for (std::uint64_t code : codes) {
      // Most significant digit first, so codes run in lexicographic order.
      std::uint64_t rest = code;
      for (int y = t - 1; y >= 0; --y) {
        act[y] = static_cast<ElemId>(rest % static_cast<std::uint64_t>(s));
        rest /= static_cast<std::uint64_t>(s);
      }
      if (consistent(k) && !step(k + 1)) return false;
    }
    return true;
  }

  bool consistent(std::size_t k) const {
    for (const Triple& tr : checks_[k]) {
      const auto& ag = actions_[tr.g];
      const auto& af = actions_[tr.f];
      const auto& ah = actions_[tr.h];
      for (std::size_t y = 0; y < ag.size(); ++y)
        if (af[ag[y]] != ah[y]) return false;
    }
    return true;
  }

  CatPtr c_;
  std::vector<int> sizes_;
  std::vector<int> pos_;
  std::vector<MorId> order_;
  std::vector<std::pair<MorId, MorId>> forced_;
  std::vector<std::vector<Triple>> checks_;
  std::vector<std::vector<ElemId>> actions_;
  const std::function<bool(const std::vector<std::vector<ElemId>>&)>* visit_ = nullptr;
  Rng* rng_ = nullptr;
};

Presheaf assemble(const CatPtr& c, const std::vector<int>& sizes, const std::vector<std::vector<ElemId>>& actions) {
  Presheaf p{c, {}, actions};
  p.values.reserve(sizes.size());
  for (int s : sizes) p.values.push_back(numbered_labels(s));
  return p;
}

}  // namespace

void for_each_presheaf(const CatPtr& c, int bound, const std::function<bool(const Presheaf&)>& visit) {
  if (bound < 0) throw ContractError("for_each_presheaf: negative bound");
  const int n = c->num_objects();
  std::vector<int> sizes(n, 0);
  while (true) {
    ActionSearch search(c, sizes);
    bool go = search.run([&](const std::vector<std::vector<ElemId>>& a) { return visit(assemble(c, sizes, a)); },
                         nullptr);
    if (!go) return;
    int i = n - 1;
    while (i >= 0 && sizes[i] == bound) sizes[i--] = 0;
    if (i < 0) return;
    ++sizes[i];
  }
}

std::vector<Presheaf> enumerate_presheaves(const CatPtr& c, int bound, std::size_t cap) {
  std::vector<Presheaf> out;
  bool over = false;
  for_each_presheaf(c, bound, [&](const Presheaf& p) {
    if (out.size() == cap) {
      over = true;
      return false;
    }
    out.push_back(p);
    return true;
  });
  if (over)
    throw ResourceError("enumerate_presheaves: more than " + std::to_string(cap) + " presheaves on " + c->name() +
                        " with values <= " + std::to_string(bound));
  return out;
}

std::size_t count_presheaves(const CatPtr& c, int bound) {
  std::size_t n = 0;
  for_each_presheaf(c, bound, [&](const Presheaf&) {
    ++n;
    return true;
  });
  return n;
}

Presheaf random_presheaf(const CatPtr& c, int max_size, Rng& rng) {
  const int n = c->num_objects();
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<int> sizes(n);
    for (int& s : sizes) s = draw(rng, max_size + 1);
    if (max_size > 0 && std::all_of(sizes.begin(), sizes.end(), [](int s) { return s == 0; }))
      sizes[draw(rng, n)] = 1 + draw(rng, max_size);
    std::optional<Presheaf> found;
    ActionSearch search(c, sizes);
    search.run(
        [&](const std::vector<std::vector<ElemId>>& a) {
          found = assemble(c, sizes, a);
          return false;
        },
        &rng);
    if (found) return *found;
  }
  return terminal_presheaf(c);
}

}  // namespace fintopos
