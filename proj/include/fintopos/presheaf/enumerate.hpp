#pragma once

#include <cstddef>
#include <functional>
#include <random>
#include <vector>

#include "fintopos/presheaf/presheaf.hpp"

namespace fintopos {

using Rng = std::mt19937_64;

/// Uniform-ish draw in [0, n); portable across standard libraries, unlike
/// std::uniform_int_distribution.
inline int draw(Rng& rng, int n) { return n <= 0 ? 0 : static_cast<int>(rng() % static_cast<std::uint64_t>(n)); }

/// Visits every presheaf on `c` with all value sets of size <= bound, in a
/// deterministic order (size vectors lexicographically, then action tables).
/// Elements are labelled "0", "1", ... Returning false from `visit` stops.
void for_each_presheaf(const CatPtr& c, int bound, const std::function<bool(const Presheaf&)>& visit);

/// All of them; ResourceError when more than `cap` exist.
std::vector<Presheaf> enumerate_presheaves(const CatPtr& c, int bound, std::size_t cap);

std::size_t count_presheaves(const CatPtr& c, int bound);

/// A pseudo-random presheaf with value sets of size <= max_size and at
/// least one nonempty value set when max_size > 0.
Presheaf random_presheaf(const CatPtr& c, int max_size, Rng& rng);

}  // namespace fintopos
