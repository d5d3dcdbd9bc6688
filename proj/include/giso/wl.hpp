#ifndef GISO_WL_HPP
#define GISO_WL_HPP

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "giso/relstruct.hpp"

namespace giso {

struct CoherenceWitness {
  Tuple first, second;   // same color j
  std::vector<int> kvec; // color vector whose counts differ
  int count_first = 0, count_second = 0;
};

struct CoherenceReport {
  bool is_coherent = false;
  std::optional<CoherenceWitness> witness;
  // (k-vector, j) -> count; nonzero entries only, filled when there are at
  // most 64 colors.
  std::map<std::pair<std::vector<int>, int>, int> intersection_numbers;
  bool table_present = false;

  // gamma(kvec, j), zero when absent from the table. Requires the table.
  int gamma(const std::vector<int>& kvec, int j) const;
};

CoherenceReport check_coherent(const Configuration& c);
// gamma(kvec, j) computed directly from one tuple of color j.
int intersection_number(const Configuration& c, const std::vector<int>& kvec, int j);

struct WLResult {
  Configuration config;
  int rounds = 0;
  std::vector<int> history;  // class count after each round
};

Configuration wl(const Configuration& c);
WLResult wl_rounds(const Configuration& c);

// F3(F2(F1(s))).
Configuration canonical_refinement(const RelStructure& s);

}  // namespace giso

#endif
