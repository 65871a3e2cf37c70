// Acceptance run: one pass/fail line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "fintopos/cli/cli.hpp"
#include "fintopos/verify/corpus.hpp"
#include "fintopos/verify/suite.hpp"

using namespace fintopos;

namespace {

using Clock = std::chrono::steady_clock;

struct Line {
  bool ok = false;
  std::string detail;
};

int failures = 0;

void criterion(int n, const char* title, double limit_s, const std::function<Line()>& body) {
  auto t0 = Clock::now();
  Line r;
  try {
    r = body();
  } catch (const std::exception& e) {
    r = {false, std::string("exception: ") + e.what()};
  }
  double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  bool in_time = limit_s <= 0 || secs < limit_s;
  bool ok = r.ok && in_time;
  if (!ok) ++failures;
  char timing[64];
  if (limit_s > 0) std::snprintf(timing, sizeof timing, "%.1fs < %.0fs", secs, limit_s);
  else std::snprintf(timing, sizeof timing, "%.1fs", secs);
  std::printf("[PRIMARY] criterion %d: %s: %s (%s) %s\n", n, title, ok ? "PASS" : "FAIL", timing, r.detail.c_str());
  std::fflush(stdout);
}

std::string summary(const SuiteReport& r) {
  std::ostringstream os;
  os << r.theorem << ' ' << (r.pass ? "pass" : "fail") << " checks=" << r.checks_run << " failures=" << r.failures;
  if (r.controls_confirmed) os << " controls=" << r.controls_confirmed;
  return os.str();
}

}  // namespace

int main() {
  const Budget budget = budget_profile("default");
  const Corpus corpus = corpus_generate(0);
  auto suite = [&](const char* id) { return run_theorem_suite(id, corpus, budget); };

  criterion(1, "Yoneda bijection and naturality over all fixture presheaves, values <= 3", 60, [&] {
    auto r = suite("I");
    return Line{r.pass, summary(r)};
  });
  criterion(2, "density: every fixture presheaf is the colimit of its elements", 60, [&] {
    auto r = suite("II");
    return Line{r.pass, summary(r)};
  });
  criterion(3, "unit iso into FinSet and PSh(arrow), adjunction bijective and natural, currying", 180, [&] {
    auto three = suite("III");
    auto four = suite("IV");
    return Line{three.pass && four.pass, summary(three) + "; " + summary(four)};
  });
  criterion(4, "sheaf machinery on the discrete and Sierpinski sites, presheaves <= 3", 180, [&] {
    auto r = suite("sheaf");
    return Line{r.pass, summary(r)};
  });
  criterion(5, "sheafification preserves terminal, products, equalizers (>= 50 per site)", 0, [&] {
    auto r = suite("lex");
    return Line{r.pass && r.checks_run >= 2 * 50, summary(r)};
  });
  criterion(6, "geometric morphism from continuous flat functors, non-continuous control", 300, [&] {
    auto r = suite("VI");
    return Line{r.pass && r.controls_confirmed > 0, summary(r)};
  });
  criterion(7, "exact functors have cofiltered elements and verify up to budget; non-exact control", 300, [&] {
    auto r = suite("VII");
    return Line{r.pass && r.controls_confirmed > 0, summary(r)};
  });
  criterion(8, "two runs of `suite all --seed 0` give byte-identical JSON", 0, [&] {
    std::string dumps[2];
    int codes[2];
    for (int i = 0; i < 2; ++i) {
      std::ostringstream out, err;
      codes[i] = run_cli({"suite", "all", "--seed", "0", "--report", "json"}, out, err);
      dumps[i] = out.str();
    }
    bool same = !dumps[0].empty() && dumps[0] == dumps[1];
    std::ostringstream os;
    os << "bytes=" << dumps[0].size() << " identical=" << (same ? "yes" : "no") << " exit=" << codes[0] << ','
       << codes[1];
    return Line{same, os.str()};
  });

  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
