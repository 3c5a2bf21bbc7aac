#pragma once

// Self-checking suites over Z/p^kZ behind `gqr verify`.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gqr/io.hpp"
#include "gqr/isomorphism.hpp"
#include "gqr/modular.hpp"

namespace gqr {

struct CheckResult {
  std::string name;
  std::uint64_t cases = 0;
  bool passed = true;
  std::string detail;  ///< first failure, or a short summary
};

struct VerificationLedger {
  std::string suite;
  Int p = 0;
  int k = 0;
  std::vector<CheckResult> checks;
  bool passed() const;
};

/// Every admissible parameter tuple of the closed-form isomorphism families
/// over Z/p^kZ (units enumerated exhaustively).
std::vector<LemmaFamily> admissible_families(const PrimePower& pp);

/// Ring pairs that the non-isomorphism results predict to be distinct, with
/// the name of the result. u is the nonresidue used in the statements.
struct PredictedDistinct {
  std::string reason;
  RingParams left;
  RingParams right;
};
std::vector<PredictedDistinct> predicted_distinct_pairs(const PrimePower& pp, Int u);

VerificationLedger run_lemma_suite(const PrimePower& pp, const SearchLimits& limits = {});
VerificationLedger run_invariant_suite(const PrimePower& pp, Int max_n = 27,
                                       const SearchLimits& limits = {});
VerificationLedger run_m2_suite(const PrimePower& pp, const SearchLimits& limits = {});

namespace io {
Json to_json(const VerificationLedger& ledger);
}

}  // namespace gqr
