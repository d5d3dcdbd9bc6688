// Prints one PASS/FAIL line per acceptance criterion. Arguments restrict the
// run to the listed criterion numbers.
#include <cstdlib>
#include <iostream>
#include <string>

#include "acceptance.hpp"

int main(int argc, char** argv) {
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) {
    int id = std::atoi(argv[i]);
    if (id < 1 || id > 10) {
      std::cerr << "usage: giso_acceptance [criterion 1..10]...\n";
      return 1;
    }
    which.push_back(id);
  }
  auto results = giso::acceptance::run(which, std::cout);
  int failed = 0;
  for (const auto& r : results) failed += !r.pass;
  std::cout << (failed ? "FAILED " : "ALL PASS ") << results.size() - failed << "/"
            << results.size() << "\n";
  return failed ? 3 : 0;
}
