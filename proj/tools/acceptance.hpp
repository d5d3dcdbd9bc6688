#ifndef GISO_TOOLS_ACCEPTANCE_HPP
#define GISO_TOOLS_ACCEPTANCE_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace giso::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0;
  double budget_seconds = 0;  // 0: no time budget
  std::string detail;
};

// Runs the listed criteria (all of 1..10 when empty). Each result line is
// written to `out` as soon as the criterion finishes.
std::vector<CriterionResult> run(const std::vector<int>& which, std::ostream& out);

std::string format(const CriterionResult& r);

}  // namespace giso::acceptance

#endif
