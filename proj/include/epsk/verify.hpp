#ifndef EPSK_VERIFY_HPP
#define EPSK_VERIFY_HPP

#include <string>
#include <vector>

namespace epsk {

// Self-check suite: re-derives module invariants numerically (conjugate
// identities, subgradient inclusions, prox optimality, solver certificates)
// and reports any deviation. "full" adds the slower solver/experiment checks.

enum class VerifyLevel { Fast, Full };

struct CheckResult {
  std::string name;
  bool passed = false;
  double deviation = 0.0;  // worst observed violation, 0 when exact
  std::string detail;      // populated on failure
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool all_passed() const;
  std::string to_text() const;
  std::string to_json() const;
};

VerifyReport verify_suite(VerifyLevel level);

}  // namespace epsk

#endif  // EPSK_VERIFY_HPP
