#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fintopos/verify/suite.hpp"

#include "fintopos/cli/cli.hpp"
#include "fintopos/cli/workspace.hpp"
#include "fintopos/verify/fixtures.hpp"

using namespace fintopos;
namespace fx = fintopos::fixtures;

#ifndef FINTOPOS_SOURCE_DIR
#error "FINTOPOS_SOURCE_DIR must point at the source tree"
#endif

namespace {

const std::string kFixtures = std::string(FINTOPOS_SOURCE_DIR) + "/fixtures/fixtures.ws";

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<LocatedError> errors_of(const std::string& text) {
  try {
    parse_workspace(text);
  } catch (const WorkspaceError& e) {
    return e.errors();
  }
  return {};
}

const char* kSmall = R"(config seed 5
category c
  object x
  object y
  morphism f : x -> y
end
presheaf P on c
  values x : a b
  values y : t
  action f : t->b
end
handle S = finset
functor k = corepresentable c x in S
)";

}  // namespace

TEST_CASE("fixture workspace reproduces the fixture categories and sites") {
  Workspace ws = load_workspace(kFixtures);
  for (const auto& c : fx::categories()) {
    CAPTURE(c->name());
    CHECK(ws.category(c->name()).category->data() == c->data());
  }
  auto sites = fx::sites();
  for (std::size_t i = 0; i < 5; ++i) {
    CAPTURE(sites[i]->name());
    const Site& mine = *ws.site(sites[i]->name()).site;
    CHECK(*mine.base() == *sites[i]->base());
    for (ObjId x = 0; x < mine.base()->num_objects(); ++x) CHECK(mine.topology(x) == sites[i]->topology(x));
  }
  CHECK(ws.config.seed == 0);
  CHECK(ws.handle("ShDiscrete").topos->sheaf_mode());
  CHECK(ws.functor("eps").functor.dom == ws.site("discrete-space").site->base());
}

TEST_CASE("print then parse is the identity") {
  for (const std::string& text : {std::string(kSmall), [] {
         std::ifstream in(kFixtures);
         std::stringstream b;
         b << in.rdbuf();
         return b.str();
       }()}) {
    Workspace a = parse_workspace(text);
    std::string printed = print_workspace(a);
    Workspace b = parse_workspace(printed);
    CHECK(same_workspace(a, b));
    CHECK(print_workspace(b) == printed);
  }
}

TEST_CASE("same_workspace notices differences") {
  Workspace a = parse_workspace(kSmall);
  std::string other = kSmall;
  other.replace(other.find("t->b"), 4, "t->a");
  CHECK_FALSE(same_workspace(a, parse_workspace(other)));
  std::string seed = kSmall;
  seed.replace(seed.find("seed 5"), 6, "seed 6");
  CHECK_FALSE(same_workspace(a, parse_workspace(seed)));
}

TEST_CASE("explicit set functors round trip through print") {
  const char* text = R"(category 1
  object * identity id
end
poset v
  object 0
  object 1
  leq 0 1
end
handle S = finset bound 2
presheaf two on 1
  values * : p q
end
functor g : v -> S
  object 0 = { a b }
  object 1 = two
  morphism 0<1 : a->p b->p
end
)";
  Workspace ws = parse_workspace(text);
  const auto& g = ws.functor("g");
  CHECK(g.object_refs == std::vector<std::string>{"", "two"});
  CHECK(g.functor.mor[2].components[0] == std::vector<ElemId>{0, 0});
  CHECK(same_workspace(ws, parse_workspace(print_workspace(ws))));
}

TEST_CASE("an undefined category is one located error") {
  auto errs = errors_of(std::string(kSmall) + "presheaf Q on nowhere\n  values x : a\nend\nfunctor c2 = constant c Q in S\n");
  REQUIRE(errs.size() == 1);
  CHECK(errs[0].line == 14);
  CHECK(errs[0].entity == "presheaf Q");
  CHECK(errs[0].reason.find("undefined category 'nowhere'") != std::string::npos);
}

TEST_CASE("duplicates, dangling references and bounds are located") {
  auto dup = errors_of(std::string(kSmall) + "category c\n  object z\nend\n");
  REQUIRE(dup.size() == 1);
  CHECK(dup[0].line == 14);
  CHECK(dup[0].reason.find("duplicate category 'c'") != std::string::npos);

  auto dangling = errors_of(std::string(kSmall) + "functor k2 = corepresentable c w in S\n");
  REQUIRE(dangling.size() == 1);
  CHECK(dangling[0].reason.find("no object 'w'") != std::string::npos);

  auto bound = errors_of("handle S = finset bound 4\n");
  REQUIRE(bound.size() == 1);
  CHECK(bound[0].line == 1);

  std::string big = "category big\n";
  for (int i = 0; i < 7; ++i) big += "  object o" + std::to_string(i) + "\n";
  big += "end\n";
  auto too_big = errors_of(big);
  REQUIRE(too_big.size() == 1);
  CHECK(too_big[0].entity == "category big");
}

TEST_CASE("malformed bodies are reported at the offending line") {
  auto errs = errors_of("category c\n  object x\n  morphism f : x -> q\nend\n");
  REQUIRE(errs.size() == 1);
  CHECK(errs[0].line == 3);

  errs = errors_of(std::string(kSmall) + "presheaf R on c\n  values x : a\n  values y : t\n  action f : t->z\nend\n");
  REQUIRE(errs.size() == 1);
  CHECK(errs[0].line == 17);

  errs = errors_of(std::string(kSmall) + "presheaf R on c\n  values x : a\n  values y : t\nend\n");
  REQUIRE(errs.size() == 1);
  CHECK(errs[0].reason.find("no action") != std::string::npos);

  errs = errors_of("category c\n  object x\n");
  REQUIRE(errs.size() == 1);
  CHECK(errs[0].reason == "block has no 'end'");

  errs = errors_of("frobnicate\nend\ncategory c\nend\nconfig bound 2\n");
  REQUIRE(errs.size() == 3);
  CHECK(errs[0].line == 1);
  CHECK(errs[1].line == 2);
  CHECK(errs[2].reason == "config must precede every entity");
}

TEST_CASE("non-functorial data is rejected") {
  // p must be sent to a function that respects composition: q∘p differs here.
  const char* text = R"(category c
  object x
  object y
  object z
  morphism f : x -> y
  morphism g : y -> z
  morphism h : x -> z
  compose g f = h
end
presheaf P on c
  values x : a b
  values y : a
  values z : a
  action f : a->a
  action g : a->a
  action h : a->b
end
)";
  auto errs = errors_of(text);
  REQUIRE(errs.size() == 1);
  CHECK(errs[0].entity == "presheaf P");
}

TEST_CASE("cli exit codes") {
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"validate"}).code == kExitUsage);  // no --input
  CHECK(cli({"validate", "--input", "/nonexistent.ws"}).code == kExitUsage);
  CHECK(cli({"suite", "VIII"}).code == kExitUsage);
  CHECK(cli({"suite", "lex", "--budget", "huge"}).code == kExitUsage);
  CHECK(cli({"--help"}).code == kExitOk);

  auto ok = cli({"validate", "--input", kFixtures});
  CHECK(ok.code == kExitOk);
  CHECK(ok.out.find("workspace ok") != std::string::npos);

  CHECK(cli({"continuous", "--input", kFixtures, "--functor", "corep-top", "--site", "discrete-space"}).code ==
        kExitFailed);
  CHECK(cli({"continuous", "--input", kFixtures, "--functor", "corep-a", "--site", "discrete-space"}).code ==
        kExitOk);
  CHECK(cli({"flat", "--input", kFixtures, "--functor", "const2"}).code == kExitFailed);
  CHECK(cli({"flat", "--input", kFixtures, "--functor", "corep-a", "--budget", "small"}).code == kExitOk);
  CHECK(cli({"sheafify", "--input", kFixtures, "--presheaf", "doubled", "--site", "nope"}).code == kExitUsage);
}

TEST_CASE("cli reports") {
  auto r = cli({"sheafify", "--input", kFixtures, "--presheaf", "doubled", "--site", "discrete-space", "--report",
                "json"});
  REQUIRE(r.code == kExitOk);
  auto j = Json::parse(r.out);
  CHECK(j["input_is_sheaf"] == false);
  CHECK(j["output_is_sheaf"] == true);
  CHECK(j["sheaf"]["values"]["top"].size() == 1);

  r = cli({"sheafify", "--input", kFixtures, "--presheaf", "product-sheaf", "--site", "discrete-space", "--report",
           "json"});
  CHECK(Json::parse(r.out)["unit_iso"] == true);

  r = cli({"extend", "--input", kFixtures, "--functor", "hF", "--report", "json"});
  CHECK(r.code == kExitOk);
  CHECK(Json::parse(r.out)["eta_iso"] == true);

  r = cli({"adjoint", "--input", kFixtures, "--functor", "corep-a", "--object", "pair", "--presheaf", "one",
           "--report", "json"});
  CHECK(r.code == kExitOk);
  j = Json::parse(r.out);
  CHECK(j["left"] == j["right"]);

  r = cli({"epsilon", "--input", kFixtures, "--site", "sierpinski-space", "--report", "json"});
  CHECK(r.code == kExitOk);
  CHECK(Json::parse(r.out)["subcanonical"] == true);

  r = cli({"canonical-topology", "--category", "diamond", "--report", "json"});
  CHECK(r.code == kExitOk);
  CHECK(Json::parse(r.out)["covers"]["top"].size() == 10);
}

TEST_CASE("suite reports are written to --out deterministically") {
  auto dir = std::filesystem::temp_directory_path() / "fintopos_cli_test";
  std::filesystem::remove_all(dir);
  auto read = [&](const std::string& sub) {
    std::ifstream in(dir / sub / "suite-lex.json");
    std::stringstream b;
    b << in.rdbuf();
    return b.str();
  };
  for (const char* sub : {"a", "b"})
    CHECK(cli({"suite", "lex", "--seed", "3", "--budget", "small", "--report", "both", "--out",
               (dir / sub).string()})
              .code == kExitOk);
  CHECK(std::filesystem::exists(dir / "a" / "suite-lex.txt"));
  CHECK(!read("a").empty());
  CHECK(read("a") == read("b"));
  auto j = Json::parse(read("a"));
  CHECK(j["seed"] == 3);
  CHECK(j["reports"][0]["theorem"] == "lex");
  std::filesystem::remove_all(dir);
}
