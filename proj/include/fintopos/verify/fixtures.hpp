#pragma once

#include <string>
#include <vector>

#include "fintopos/fincat/category.hpp"
#include "fintopos/site/site.hpp"

namespace fintopos::fixtures {

// Named fixture categories. Every one has at most four objects.
CatPtr one();               // terminal category
CatPtr walking_arrow();     // 0 -f-> 1
CatPtr chain3();            // 0 <= 1 <= 2
CatPtr chain4();
CatPtr discrete2();         // objects a, b
CatPtr diamond();           // opens of the discrete 2-point space: bot <= a, b <= top
CatPtr sierpinski();        // opens of the Sierpinski space: bot <= u <= top
CatPtr z2();                // the group Z/2 on one object
CatPtr parallel_pair();     // 0 =u,v=> 1
CatPtr idempotent();        // monoid {1, e} with e*e = e
CatPtr span();              // l <-p- s -q-> r

/// All of the above, in a fixed order.
std::vector<CatPtr> categories();

// Open-cover sites. The empty open is covered by the empty family.
SitePtr discrete_space_site();  // on diamond(): top covered by {a, b}
SitePtr sierpinski_site();      // on sierpinski()
SitePtr chain_space_site();     // on chain4(): opens of a 3-point space with nested opens
/// Canonical pretopology of a meet-semilattice fixture.
SitePtr canonical_site(const CatPtr& c);

/// Named sites used by the suites: the open-cover sites, the canonical
/// sites of diamond and chain3, and trivial sites on every category.
std::vector<SitePtr> sites();

}  // namespace fintopos::fixtures
