#pragma once

#include <cstdint>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "json.hpp"

#include "fintopos/presheaf/topos.hpp"
#include "fintopos/verify/corpus.hpp"

namespace fintopos {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "fintopos.suite/1";

/// Verdict of one suite. A pass carries no witnesses and at least one check;
/// a fail carries at least one witness (the first kMaxWitnesses are kept).
struct SuiteReport {
  static constexpr std::size_t kMaxWitnesses = 16;

  std::string theorem;
  std::uint64_t inputs_digest = 0;
  std::size_t checks_run = 0;
  std::size_t failures = 0;
  std::size_t controls_confirmed = 0;  // deliberately bad inputs that were rejected
  bool pass = false;
  std::vector<Json> witnesses;
  std::vector<std::string> notes;

  /// Records one check; on failure the witness payload is kept. The witness
  /// may be a Json value or a callable producing one (evaluated on failure only).
  template <class W>
  void check(bool ok, W&& witness) {
    ++checks_run;
    if (ok) return;
    ++failures;
    if (witnesses.size() >= kMaxWitnesses) return;
    if constexpr (std::is_invocable_v<W>) {
      witnesses.push_back(witness());
    } else {
      witnesses.push_back(Json(std::forward<W>(witness)));
    }
  }
  void finish();
  Json to_json() const;
};

/// I..VII, "sheaf" (sheaf machinery on the discrete and Sierpinski sites),
/// "lex" (left exactness of sheafification) and "controls".
const std::vector<std::string>& suite_ids();

/// ContractError on an unknown id.
SuiteReport run_theorem_suite(const std::string& theorem, const Corpus& corpus, const Budget& budget);
SuiteReport negative_controls(const Corpus& corpus);

/// Every suite in suite_ids() order, wrapped with the schema, seed and budget.
Json run_all_suites(const Corpus& corpus, const Budget& budget);
Json suite_document(const std::vector<SuiteReport>& reports, const Corpus& corpus, const Budget& budget);

Json json_of(const Presheaf& f);
Json json_of(const PresheafMorphism& m);
std::string hex64(std::uint64_t v);

}  // namespace fintopos
